mod common;

use std::f64::consts::PI;

use common::{c, factorial, laguerre_sum, random_diagonal, random_hermitian};
use proptest::prelude::*;
use rayon::prelude::*;
use wigx::channels::fock_displacement_norm;
use wigx::phase_space::{wigner_transition, MonomialMatrix};
use wigx::polynomials::RealPolynomial;
use wigx::positivity::{
    certify_wigner, classify, halfline_local_minima, is_in_a_sigma, CertifyConfig, Method, PositivityCertificate,
    Verdict,
};
use wigx::state_zoo::{bs_state_fock, bs_state_pure, motzkin_quasistate, random_pure_state, random_quasistate, PureStateVector};
use wigx::{FockOperator, C64};

fn grid_only() -> CertifyConfig {
    CertifyConfig { phase_tol: -1.0, ..CertifyConfig::default() }
}

/// Polynomial part `W e^{2|alpha|^2}` of `|m><n|` from the closed Laguerre form.
fn transition_polynomial(m: usize, n: usize, z: C64) -> C64 {
    if m > n {
        return transition_polynomial(n, m, z).conj();
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let pref = 2.0 / PI * sign * (factorial(m) / factorial(n)).sqrt() * laguerre_sum(m, n - m, 4.0 * z.norm_sqr());
    (z * 2.0).powu((n - m) as u32) * pref
}

/// Polynomial part by direct summation over Fock transitions, independent of the monomial machinery.
fn direct_polynomial(a: &FockOperator, z: C64) -> f64 {
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..a.side() {
        for l in 0..a.side() {
            acc += a.entry(k, l) * transition_polynomial(k, l, z);
        }
    }
    acc.re
}

fn assert_sound(a: &FockOperator, cert: &PositivityCertificate) {
    if cert.verdict == Verdict::Negative {
        let w = cert.witness.as_ref().expect("negative verdict carries a witness");
        let z = C64::new(w.alpha[0], w.alpha[1]);
        let direct = direct_polynomial(a, z);
        assert!(direct < -cert.tolerances.tol / 2.0, "witness value {direct} at {z}");
    }
}

#[test]
fn polynomial_oracle_matches_transition_wigner() {
    for i in 0..20 {
        let z = C64::from_polar(0.12 * i as f64, 0.77 * i as f64);
        for m in 0..5 {
            for n in 0..5 {
                let want = wigner_transition(m, n, z) * (2.0 * z.norm_sqr()).exp();
                assert!((transition_polynomial(m, n, z) - want).norm() < 1e-10 * want.norm().max(1.0));
            }
        }
    }
}

#[test]
fn beam_splitter_states_are_exactly_positive() {
    for m in 0..=6 {
        for n in 0..=(6 - m) {
            let cert = certify_wigner(&bs_state_fock(m, n), &CertifyConfig::default());
            assert_eq!(cert.verdict, Verdict::PositiveExact, "sigma({m},{n})");
            assert_eq!(cert.method, Method::Radial);
        }
    }
}

#[test]
fn one_photon_state_is_negative_at_the_origin() {
    let a = FockOperator::fock_projector(1, 1);
    let cert = certify_wigner(&a, &CertifyConfig::default());
    assert_eq!(cert.verdict, Verdict::Negative);
    let w = cert.witness.clone().unwrap();
    assert!(w.alpha[0].abs() < 1e-12 && w.alpha[1].abs() < 1e-12);
    assert!((w.wigner_value + 2.0 / PI).abs() < 1e-12);
    assert_sound(&a, &cert);

    let grid = certify_wigner(&a, &grid_only());
    assert_eq!(grid.verdict, Verdict::Negative);
    assert_eq!(grid.method, Method::GridRefine);
    assert_sound(&a, &grid);
}

#[test]
fn motzkin_is_numerically_positive() {
    let cert = certify_wigner(&motzkin_quasistate(), &CertifyConfig::default());
    assert_eq!(cert.verdict, Verdict::PositiveNumeric);
    assert!(cert.min_found >= -1e-9);
    assert!(cert.grid_radius.is_some());
}

#[test]
fn a_sigma_membership_examples() {
    assert!(is_in_a_sigma(&FockOperator::fock_projector(0, 0)));
    assert!(!is_in_a_sigma(&bs_state_fock(1, 1)));
    for seed in 0..10 {
        let dim = seed as usize % 5;
        let s = bs_state_pure(&random_pure_state(dim, seed), &PureStateVector::fock(0));
        assert!(is_in_a_sigma(&s));
    }
}

#[test]
fn classification_examples() {
    let cfg = CertifyConfig::default();
    let r = classify(&bs_state_fock(2, 1), &cfg);
    assert!(r.is_state && r.phase_invariant && !r.in_a_sigma);
    assert!(r.wigner.is_positive());
    assert_eq!(r.support_degree, 3);

    let r = classify(&motzkin_quasistate(), &cfg);
    assert!(!r.is_state && !r.phase_invariant);
    assert_eq!(r.wigner, Verdict::PositiveNumeric);
    assert_eq!(r.support_degree, 5);
    assert!(r.min_eigenvalue < 0.0);

    let negatives = (0..20u64)
        .filter(|&s| {
            let r = classify(&random_quasistate(4, s, 10.0), &cfg);
            !r.is_state && r.wigner == Verdict::Negative
        })
        .count();
    assert!(negatives >= 15, "{negatives}/20");
}

#[test]
fn displaced_binomial_state_stays_positive() {
    let d = fock_displacement_norm(&bs_state_fock(1, 0), c(0.6, -0.3)).unwrap();
    let cert = certify_wigner(&d, &CertifyConfig::default());
    assert_eq!(cert.verdict, Verdict::PositiveNumeric);
}

#[test]
fn halfline_minima_examples() {
    // (t - 1)^2 (t - 3)^2 + 0.5 has minima at 1 and 3 and a maximum at 2.
    let p = RealPolynomial::from_roots(&[1.0, 1.0, 3.0, 3.0], 1.0).add(&RealPolynomial::constant(0.5));
    let mins = halfline_local_minima(&p);
    let rs: Vec<f64> = mins.iter().map(|m| m.0).collect();
    assert_eq!(rs.len(), 2, "{rs:?}");
    assert!((rs[0] - 1.0).abs() < 1e-9 && (rs[1] - 3.0).abs() < 1e-9, "{mins:?}");
    assert!(mins.iter().all(|m| (m.1 - 0.5).abs() < 1e-12));

    // Increasing at 0: the origin is a minimum.
    let mins = halfline_local_minima(&RealPolynomial::new(vec![2.0, 1.0]));
    assert_eq!(mins, vec![(0.0, 2.0)]);

    let mins = halfline_local_minima(&RealPolynomial::new(vec![1.0, 0.0, -1.0]));
    assert!(mins.iter().any(|m| m.1 == f64::NEG_INFINITY));
}

#[test]
fn radial_and_grid_routes_agree() {
    let cfg = CertifyConfig::default();
    let grid = grid_only();
    let mismatches: Vec<u64> = (0..500u64)
        .into_par_iter()
        .filter(|&seed| {
            let dim = 1 + seed as usize % 8;
            let a = random_diagonal(dim, seed, seed % 3 == 0);
            let radial = certify_wigner(&a, &cfg);
            let numeric = certify_wigner(&a, &grid);
            assert_eq!(radial.method, Method::Radial);
            assert_eq!(numeric.method, Method::GridRefine);
            assert_sound(&a, &numeric);
            radial.verdict.is_positive() != numeric.verdict.is_positive()
        })
        .collect();
    assert!(mismatches.is_empty(), "{mismatches:?}");
}

proptest! {
    #![proptest_config(common::pt_config(48))]

    #[test]
    fn negative_verdicts_are_sound(dim in 0usize..=5, seed in any::<u64>()) {
        let a = random_hermitian(dim, seed);
        let cert = certify_wigner(&a, &CertifyConfig::default());
        assert_sound(&a, &cert);
    }

    #[test]
    fn dephasing_keeps_positivity(dim in 0usize..=4, seed in any::<u64>(), beta in (-1.0f64..1.0, -1.0f64..1.0)) {
        let base = bs_state_pure(&random_pure_state(dim, seed), &PureStateVector::fock(0));
        let a = fock_displacement_norm(&base, c(beta.0, beta.1)).unwrap();
        let cfg = CertifyConfig::default();
        if certify_wigner(&a, &cfg).verdict.is_positive() {
            prop_assert!(certify_wigner(&a.dephase(), &cfg).verdict.is_positive());
        }
    }

    #[test]
    fn psd_monomial_matrix_implies_positive(dim in 0usize..=4, seed in any::<u64>()) {
        // q q^dagger is PSD, so its operator is in A_sigma.
        let q = random_pure_state(dim, seed);
        let p = MonomialMatrix::new(q.amplitudes() * q.amplitudes().adjoint()).unwrap();
        let a = wigx::phase_space::operator_from_monomial(&p);
        prop_assert!(is_in_a_sigma(&a));
        prop_assert!(certify_wigner(&a, &CertifyConfig::default()).verdict.is_positive());
    }
}
