#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use wigx::{FockOperator, C64};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Seeded Hermitian operator with unit trace on `H^dim`.
pub fn random_hermitian(dim: usize, seed: u64) -> FockOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = dim + 1;
    let g = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re, im)
    });
    let h = (&g + g.adjoint()).map(|z| z * 0.5);
    let mut op = FockOperator::from_matrix(h).unwrap();
    let tr = op.trace();
    if tr.abs() > 0.1 {
        op = op.scale(1.0 / tr);
    }
    op
}

/// Seeded phase-invariant (diagonal) operator with unit trace.
pub fn random_diagonal(dim: usize, seed: u64, allow_negative: bool) -> FockOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let diag: Vec<f64> = (0..=dim)
        .map(|_| {
            let x: f64 = StandardNormal.sample(&mut rng);
            if allow_negative { x } else { x.abs() + 0.05 }
        })
        .collect();
    let op = FockOperator::from_real_diagonal(&diag);
    let tr = op.trace();
    if tr.abs() > 0.1 { op.scale(1.0 / tr) } else { op }
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn binom(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Generalized Laguerre polynomial from its explicit finite sum.
pub fn laguerre_sum(m: usize, a: usize, x: f64) -> f64 {
    (0..=m)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * binom(m + a, m - j) * x.powi(j as i32) / factorial(j)
        })
        .sum()
}

/// `<alpha|A|alpha> / pi` from coherent amplitudes built here.
pub fn husimi_direct(a: &FockOperator, alpha: C64) -> f64 {
    let n = a.side();
    let env = (-alpha.norm_sqr() / 2.0).exp();
    let v: Vec<C64> = (0..n).map(|k| alpha.powi(k as i32) * env / factorial(k).sqrt()).collect();
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..n {
        for l in 0..n {
            acc += v[k].conj() * a.entry(k, l) * v[l];
        }
    }
    acc.re / std::f64::consts::PI
}

/// Proptest settings for integration tests, which have no source root to persist failures in.
pub fn pt_config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config { cases, failure_persistence: None, ..Default::default() }
}
