mod common;

use common::{c, random_hermitian};
use nalgebra::DMatrix;
use proptest::prelude::*;
use wigx::channels::fock_displacement_norm;
use wigx::state_zoo::bs_state_fock;
use wigx::{CMatrix, FockOperator, WigxError};

fn plus_state() -> FockOperator {
    let s = 0.5f64.sqrt();
    let v = nalgebra::DVector::from_vec(vec![c(s, 0.0), c(s, 0.0)]);
    FockOperator::from_pure(&v)
}

#[test]
fn construction_checks_shape_and_hermiticity() {
    let bad_shape = FockOperator::new(2, CMatrix::zeros(2, 2));
    assert!(matches!(bad_shape, Err(WigxError::DimensionMismatch { .. })));

    let mut m = CMatrix::zeros(2, 2);
    m[(0, 1)] = c(1.0, 0.0);
    assert!(matches!(FockOperator::new(1, m), Err(WigxError::NonHermitian { .. })));

    // Roundoff-level asymmetry is repaired silently.
    let mut m = CMatrix::identity(2, 2);
    m[(0, 1)] = c(0.3, 1e-13);
    m[(1, 0)] = c(0.3, 0.0);
    let op = FockOperator::new(1, m).unwrap();
    assert_eq!(op.entry(0, 1), op.entry(1, 0).conj());
}

#[test]
fn dephase_examples() {
    let d = plus_state().dephase();
    assert!(d.max_abs_diff(&FockOperator::from_real_diagonal(&[0.5, 0.5])) < 1e-15);

    let s11 = bs_state_fock(1, 1);
    assert_eq!(s11.dephase(), s11);

    let displaced = fock_displacement_norm(&bs_state_fock(1, 0), c(1.0, 0.0)).unwrap();
    let dd = displaced.dephase();
    assert!((dd.trace() - 1.0).abs() < 1e-12);
    for k in 0..dd.side() {
        for l in 0..dd.side() {
            if k != l {
                assert_eq!(dd.entry(k, l), c(0.0, 0.0));
            } else {
                assert_eq!(dd.entry(k, k), displaced.entry(k, k));
            }
        }
    }
}

#[test]
fn phase_invariance_and_support_examples() {
    let s20 = bs_state_fock(2, 0);
    assert!(s20.is_phase_invariant(1e-12));
    assert_eq!(s20.support_degree(1e-12), 2);

    let vac = FockOperator::fock_projector(0, 5);
    assert_eq!(vac.dim(), 5);
    assert!(vac.is_phase_invariant(1e-12));
    assert_eq!(vac.support_degree(1e-12), 0);

    let displaced = fock_displacement_norm(&bs_state_fock(1, 0), c(1.0, 0.0)).unwrap();
    assert!(!displaced.is_phase_invariant(1e-12));
    assert_eq!(displaced.support_degree(1e-12), 1);
}

#[test]
fn binary_operations_pad_to_the_larger_dimension() {
    let a = FockOperator::fock_projector(0, 1);
    let b = FockOperator::fock_projector(3, 3);
    let s = a.add(&b);
    assert_eq!(s.dim(), 3);
    assert_eq!(s.diagonal(), vec![1.0, 0.0, 0.0, 1.0]);
    assert_eq!(a.hs_inner(&b), c(0.0, 0.0));
    assert_eq!(a.sub(&a).max_abs(), 0.0);
}

#[test]
fn psd_examples() {
    assert!(bs_state_fock(1, 1).is_psd(1e-12));
    let neg = FockOperator::from_real_diagonal(&[1.5, -0.5]);
    assert!(!neg.is_psd(1e-12));
    assert!((neg.min_eigenvalue() + 0.5).abs() < 1e-14);
}

#[test]
fn trace_distance_between_fock_states_is_one() {
    let a = FockOperator::fock_projector(0, 2);
    let b = FockOperator::fock_projector(2, 2);
    assert!((a.trace_distance(&b) - 1.0).abs() < 1e-14);
    assert!(a.trace_distance(&a) < 1e-15);
}

#[test]
fn spectrum_reconstructs_the_matrix() {
    let a = random_hermitian(5, 11);
    let spec = a.eigendecompose();
    assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    let diff = (spec.reconstruct() - a.entries()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
    assert!(diff < 1e-12);
}

proptest! {
    #![proptest_config(common::pt_config(64))]

    #[test]
    fn dephase_is_idempotent_and_trace_preserving(dim in 0usize..8, seed in any::<u64>()) {
        let a = random_hermitian(dim, seed);
        let d = a.dephase();
        prop_assert_eq!(d.dephase(), d.clone());
        prop_assert!((d.trace() - a.trace()).abs() < 1e-12);
    }

    #[test]
    fn hs_norm_is_nonnegative(dim in 0usize..8, seed in any::<u64>()) {
        let a = random_hermitian(dim, seed);
        let n = a.hs_inner(&a);
        prop_assert!(n.re >= 0.0);
        prop_assert!(n.im.abs() < 1e-12);
        prop_assert!(FockOperator::zeros(dim).hs_inner(&FockOperator::zeros(dim)).norm() == 0.0);
    }

    #[test]
    fn padding_keeps_support_degree(dim in 0usize..6, extra in 0usize..5, seed in any::<u64>()) {
        let a = random_hermitian(dim, seed);
        let padded = a.padded(dim + extra);
        prop_assert_eq!(padded.support_degree(1e-12), a.support_degree(1e-12));
        prop_assert!(a.support_degree(1e-12) <= a.dim());
    }

    #[test]
    fn operations_return_hermitian_operators(dim in 0usize..6, seed in any::<u64>()) {
        let a = random_hermitian(dim, seed);
        let b = random_hermitian(dim + 1, seed ^ 0xabc);
        for op in [a.add(&b), a.sub(&b), a.scale(-2.5), a.adjoint(), a.dephase()] {
            let m = op.entries();
            let asym = (m - m.adjoint()).iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
            prop_assert!(asym == 0.0);
        }
    }
}

#[test]
fn from_matrix_rejects_empty() {
    assert!(FockOperator::from_matrix(DMatrix::zeros(0, 0)).is_err());
}
