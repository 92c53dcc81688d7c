//! Named operators: Fock states, beam-splitter and binomial states, extreme radial
//! quasi-states, the Motzkin quasi-state and seeded random (quasi-)states.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channels::beam_splitter_trace;
use crate::error::{Result, WigxError};
use crate::fock_core::{CMatrix, FockOperator, C64};
use crate::phase_space::{operator_from_monomial, MonomialMatrix};
use crate::polynomials::{elementary_symmetric_all, ExtremeRadialSpec};
use crate::special::{binomial, factorial};

/// Normalized amplitude vector `c_k = <k|psi>`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureStateVector {
    amplitudes: DVector<C64>,
}

impl PureStateVector {
    /// Accepts amplitudes whose norm is one within `1e-12`.
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if amplitudes.is_empty() || (norm - 1.0).abs() > 1e-12 {
            return Err(WigxError::InvalidInput(format!("state vector norm is {norm}, expected 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if amplitudes.is_empty() || !(norm > 0.0) {
            return Err(WigxError::InvalidInput("state vector is zero".into()));
        }
        Ok(Self { amplitudes: amplitudes / C64::new(norm, 0.0) })
    }

    pub fn fock(n: usize) -> Self {
        let mut v = DVector::zeros(n + 1);
        v[n] = C64::new(1.0, 0.0);
        Self { amplitudes: v }
    }

    /// Highest Fock index carried by the vector.
    pub fn dim(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn to_operator(&self) -> FockOperator {
        FockOperator::from_pure(&self.amplitudes)
    }
}

/// Beam-splitter state `sigma(m, n)` from the closed-form Fock-diagonal sum.
pub fn bs_state_fock(m: usize, n: usize) -> FockOperator {
    let total = m + n;
    let outer = binomial(total, m) / 2f64.powi(total as i32);
    let diag: Vec<f64> = (0..=total)
        .map(|z| {
            let lo = z.saturating_sub(n);
            let hi = z.min(m);
            let k: f64 = (lo..=hi)
                .map(|j| {
                    let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                    s * binomial(m, j) * binomial(n, z - j)
                })
                .sum();
            outer * k * k / binomial(total, z)
        })
        .collect();
    FockOperator::from_real_diagonal(&diag)
}

/// Binomial state `sigma(n, 0)`.
pub fn binomial_state(n: usize) -> FockOperator {
    bs_state_fock(n, 0)
}

/// Beam-splitter state `sigma(psi, phi)` of two pure inputs.
pub fn bs_state_pure(psi: &PureStateVector, phi: &PureStateVector) -> FockOperator {
    beam_splitter_trace(psi.amplitudes(), phi.amplitudes(), 0.5).expect("balanced splitter is valid")
}

/// Extreme phase-invariant quasi-state whose Wigner function is
/// `(2/pi) c prod_i (u - mu_i) e^{-u}` with `u = 2 |alpha|^2`.
///
/// Built as `(-1)^m sum_j (-1)^j j! e_{m-j}(mu) sigma(j, 0)` and normalized to unit trace.
pub fn extreme_radial_quasistate(spec: &ExtremeRadialSpec, ambient: usize) -> Result<FockOperator> {
    if let Some(l) = spec.lambdas.iter().find(|l| !(**l > 0.0) || !l.is_finite()) {
        return Err(WigxError::InvalidSpec(format!("lambda must be positive and finite, got {l}")));
    }
    let m = spec.degree();
    if m > ambient {
        return Err(WigxError::InvalidSpec(format!("degree {m} exceeds ambient dimension {ambient}")));
    }
    let e = elementary_symmetric_all(&spec.mu());
    let mut acc = FockOperator::zeros(ambient);
    for j in 0..=m {
        let sign = if (m - j) % 2 == 0 { 1.0 } else { -1.0 };
        acc = acc.add(&binomial_state(j).scale(sign * factorial(j) * e[m - j]));
    }
    acc.padded(ambient).normalized()
}

/// Integer monomial matrix of the Motzkin polynomial `x^4 y^2 + x^2 y^4 - 3 x^2 y^2 + 1`
/// written in `alpha` with `x = alpha + alpha*`, `y = -i (alpha - alpha*)`.
pub fn motzkin_monomial_raw() -> MonomialMatrix {
    let mut rows = vec![vec![0.0; 6]; 6];
    rows[0][0] = 1.0;
    rows[0][4] = 3.0;
    rows[4][0] = 3.0;
    rows[1][5] = -4.0;
    rows[5][1] = -4.0;
    rows[2][2] = -6.0;
    rows[3][3] = 8.0;
    MonomialMatrix::from_real(&rows).expect("symmetric by construction")
}

/// The Motzkin polynomial in Cartesian coordinates.
pub fn motzkin_polynomial(x: f64, y: f64) -> f64 {
    x.powi(4) * y * y + x * x * y.powi(4) - 3.0 * x * x * y * y + 1.0
}

/// Motzkin monomial matrix scaled so the Wigner function integrates to one.
pub fn motzkin_monomial() -> MonomialMatrix {
    let raw = motzkin_monomial_raw();
    raw.scale(1.0 / raw.normalization())
}

/// Wigner-positive quasi-state with a negative eigenvalue built from the Motzkin polynomial.
pub fn motzkin_quasistate() -> FockOperator {
    operator_from_monomial(&motzkin_monomial())
}

fn gaussian_matrix(side: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let mut m = CMatrix::zeros(side, side);
    for r in 0..side {
        for c in 0..side {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            m[(r, c)] = C64::new(re, im);
        }
    }
    m
}

/// Random density matrix `G G^dagger / Tr` on `H^dim`, deterministic in `seed`.
pub fn random_state(dim: usize, seed: u64) -> FockOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(dim + 1, &mut rng);
    FockOperator::from_hermitian_parts(&g * g.adjoint()).normalized().expect("Gram matrix has positive trace")
}

/// Random unit-trace Hermitian operator: a random state plus a traceless Hermitian kick of
/// operator norm `negativity_scale`, which drives eigenvalues negative as it grows.
pub fn random_quasistate(dim: usize, seed: u64, negativity_scale: f64) -> FockOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_matrix(dim + 1, &mut rng);
    let rho = FockOperator::from_hermitian_parts(&g * g.adjoint()).normalized().expect("positive trace");
    let h = gaussian_matrix(dim + 1, &mut rng);
    let mut herm = FockOperator::from_hermitian_parts(h);
    let shift = herm.trace() / (dim + 1) as f64;
    herm = herm.sub(&FockOperator::from_real_diagonal(&vec![shift; dim + 1]));
    let norm = herm.spectral_norm();
    let kicked = if norm > 0.0 { rho.add(&herm.scale(negativity_scale / norm)) } else { rho };
    kicked.normalized().expect("trace stays one")
}

/// Random pure state on `H^dim`.
pub fn random_pure_state(dim: usize, seed: u64) -> PureStateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = DVector::from_fn(dim + 1, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re, im)
    });
    PureStateVector::normalized(v).expect("Gaussian vector is nonzero")
}
