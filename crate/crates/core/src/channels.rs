//! Linear maps on Fock-bounded operators.
//!
//! The pure-loss channel, the noiseless linear amplifier and the Vertigo map share one
//! operator-sum shape, `s^{n/2} (sum_k c^k/k! a^k . a^dag^k) s^{n/2}`, evaluated exactly
//! because the series stops at the Fock support.

use nalgebra::{DMatrix, DVector};

use crate::error::{Result, WigxError};
use crate::fock_core::{CMatrix, FockOperator, C64, VANISHING_TRACE};
use crate::phase_space::{monomial_matrix, operator_from_monomial, MonomialMatrix};
use crate::special::{factorial, sqrt_factorial_ratio};

/// `s^{(i+j)/2 - shift} sum_k c^k/k! sqrt((i+k)!(j+k)!/(i! j!)) m_{i+k, j+k}`.
///
/// `shift` lets callers pull a common power of `s` out of every entry before it overflows.
fn kraus_series(m: &CMatrix, s: f64, c: f64, shift: f64) -> CMatrix {
    let n = m.nrows();
    CMatrix::from_fn(n, n, |i, j| {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..n - i.max(j) {
            let w = sqrt_factorial_ratio(i + k, i) * sqrt_factorial_ratio(j + k, j) / factorial(k);
            acc += m[(i + k, j + k)] * (c.powi(k as i32) * w);
        }
        acc * s.powf(0.5 * (i + j) as f64 - shift)
    })
}

/// Generalized pure-loss map on a raw matrix; `eta >= 0`.
pub(crate) fn plc_matrix(m: &CMatrix, eta: f64) -> CMatrix {
    kraus_series(m, eta, 1.0 - eta, 0.0)
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond { Ok(()) } else { Err(WigxError::InvalidInput(msg.to_string())) }
}

/// Pure-loss map `E_eta`. A channel for `eta` in `[0, 1]`, a linear map for any `eta >= 0`.
pub fn plc(a: &FockOperator, eta: f64) -> Result<FockOperator> {
    require(eta >= 0.0 && eta.is_finite(), "pure-loss parameter must be finite and nonnegative")?;
    Ok(FockOperator::from_hermitian_parts(plc_matrix(a.entries(), eta)))
}

/// Noiseless linear amplifier `sqrt(g)^n rho sqrt(g)^n`.
pub fn nla(a: &FockOperator, g: f64) -> Result<FockOperator> {
    require(g > 0.0 && g.is_finite(), "amplifier gain must be positive")?;
    let m = a.entries();
    Ok(FockOperator::from_hermitian_parts(CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        m[(i, j)] * g.powf(0.5 * (i + j) as f64)
    })))
}

/// Vertigo map `V_t`, unnormalized. Its trace is `Tr[(2t - 1)^n A]`.
pub fn vertigo(a: &FockOperator, t: f64) -> Result<FockOperator> {
    require(t > 0.0 && t.is_finite(), "Vertigo parameter must be positive")?;
    Ok(FockOperator::from_hermitian_parts(kraus_series(a.entries(), t, t - 1.0, 0.0)))
}

/// `V_t[A] / t^dim`, free of overflow for large `t`.
fn vertigo_scaled(a: &FockOperator, t: f64) -> CMatrix {
    let m = a.entries();
    let n = m.nrows();
    let top = a.dim() as f64;
    let ratio = (t - 1.0) / t;
    CMatrix::from_fn(n, n, |i, j| {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..n - i.max(j) {
            let w = sqrt_factorial_ratio(i + k, i) * sqrt_factorial_ratio(j + k, j) / factorial(k);
            let p = t.powf(0.5 * (i + j) as f64 + k as f64 - top);
            acc += m[(i + k, j + k)] * (ratio.powi(k as i32) * w * p);
        }
        acc
    })
}

/// Trace-normalized Vertigo map.
///
/// For `t << 1` the map amplifies the low Fock levels by roughly `t^-(dim - k)`, so rounding
/// in the input is magnified by the same factor whichever path is used.
pub fn vertigo_norm(a: &FockOperator, t: f64) -> Result<FockOperator> {
    require(t > 0.0 && t.is_finite(), "Vertigo parameter must be positive")?;
    let scaled = FockOperator::from_hermitian_parts(vertigo_scaled(a, t));
    let tr = scaled.trace();
    let true_trace = tr * t.powf(a.dim() as f64);
    if tr == 0.0 || (true_trace.is_finite() && true_trace.abs() <= VANISHING_TRACE) {
        return Err(WigxError::VanishingTrace { trace: true_trace });
    }
    Ok(scaled.scale(1.0 / tr))
}

/// `Tr[(2t - 1)^n A]`, the closed-form trace of `V_t[A]`.
pub fn vertigo_trace(a: &FockOperator, t: f64) -> f64 {
    a.diagonal().iter().enumerate().map(|(k, d)| d * (2.0 * t - 1.0).powi(k as i32)).sum()
}

/// Vertigo map through the monomial matrix: `P_kl -> sqrt(t)^{k+l} P_kl`.
///
/// The rescaling is applied relative to the top degree so that large `t` never overflows;
/// the common factor is restored at the end.
pub fn vertigo_via_monomial(a: &FockOperator, t: f64) -> Result<FockOperator> {
    require(t > 0.0 && t.is_finite(), "Vertigo parameter must be positive")?;
    let out = vertigo_monomial_scaled(a, t);
    Ok(out.scale(t.powf(a.dim() as f64)))
}

/// Normalized Vertigo map computed along the monomial path.
pub fn vertigo_norm_via_monomial(a: &FockOperator, t: f64) -> Result<FockOperator> {
    require(t > 0.0 && t.is_finite(), "Vertigo parameter must be positive")?;
    vertigo_monomial_scaled(a, t).normalized()
}

fn vertigo_monomial_scaled(a: &FockOperator, t: f64) -> FockOperator {
    let p = monomial_matrix(a);
    let top = a.dim() as f64;
    let m = p.entries();
    let scaled = CMatrix::from_fn(m.nrows(), m.ncols(), |k, l| m[(k, l)] * t.powf(0.5 * (k + l) as f64 - top));
    operator_from_monomial(&MonomialMatrix::from_parts(scaled))
}

fn annihilation(side: usize) -> CMatrix {
    CMatrix::from_fn(side, side, |r, c| if c == r + 1 { C64::new((c as f64).sqrt(), 0.0) } else { C64::new(0.0, 0.0) })
}

/// `exp(z a)` on `H^n`, a finite sum because `a` is nilpotent there.
fn nilpotent_exp(z: C64, side: usize) -> CMatrix {
    let a = annihilation(side);
    let mut term = CMatrix::identity(side, side);
    let mut acc = term.clone();
    for p in 1..side {
        term = &term * &a * (z / p as f64);
        acc += &term;
    }
    acc
}

/// `exp(-g* a) rho exp(-g a^dag)`: shifts the polynomial part of the Husimi function by `g`.
pub fn husimi_displacement(a: &FockOperator, g: C64) -> FockOperator {
    let k = nilpotent_exp(-g.conj(), a.side());
    FockOperator::from_hermitian_parts(&k * a.entries() * k.adjoint())
}

/// Fock-bounded displacement: the Wigner polynomial part moves to `P(alpha - beta)` while the
/// Gaussian envelope stays centred. In operator form this is
/// `exp(-2 beta* a) rho exp(-2 beta a^dag)`.
pub fn fock_displacement(a: &FockOperator, beta: C64) -> FockOperator {
    husimi_displacement(a, beta * 2.0)
}

/// Trace-normalized [`fock_displacement`].
pub fn fock_displacement_norm(a: &FockOperator, beta: C64) -> Result<FockOperator> {
    fock_displacement(a, beta).normalized()
}

/// Phase rotation `e^{i theta n} A e^{-i theta n}`.
pub fn rotation(a: &FockOperator, theta: f64) -> FockOperator {
    let m = a.entries();
    FockOperator::from_hermitian_parts(CMatrix::from_fn(m.nrows(), m.ncols(), |k, l| {
        m[(k, l)] * C64::from_polar(1.0, theta * (k as f64 - l as f64))
    }))
}

/// Result of a padded Gaussian unitary.
#[derive(Clone, Debug)]
pub struct GaussianOutput {
    pub operator: FockOperator,
    /// Weight on the two highest retained Fock levels before renormalization.
    pub tail_norm: f64,
}

/// Default bound on the truncation tail of Gaussian unitaries.
pub const DEFAULT_TAIL_BOUND: f64 = 1e-8;

fn apply_padded_unitary(a: &FockOperator, generator: CMatrix, bound: f64) -> Result<GaussianOutput> {
    let side = generator.nrows();
    let u = generator.exp();
    let padded = a.padded(side - 1);
    let out = FockOperator::from_hermitian_parts(&u * padded.entries() * u.adjoint());
    let tr = out.trace();
    let top = out.diagonal().iter().rev().take(2).sum::<f64>().abs();
    let tail_norm = if tr != 0.0 { top / tr.abs() } else { top };
    if tail_norm > bound {
        return Err(WigxError::TruncationWarning { tail: tail_norm, bound });
    }
    Ok(GaussianOutput { operator: out.normalized()?, tail_norm })
}

/// Default padding for a displacement by `alpha`.
pub fn default_displace_pad(alpha: C64) -> usize {
    20usize.max(6 * alpha.norm_sqr().ceil() as usize)
}

/// Default padding for a squeeze by `xi`.
pub fn default_squeeze_pad(xi: C64) -> usize {
    20usize.max(6 * xi.norm().sinh().powi(2).ceil() as usize)
}

/// Displacement `D(alpha) = exp(alpha a^dag - alpha* a)` on `H^{n + pad}`.
pub fn gaussian_displace(a: &FockOperator, alpha: C64, pad: Option<usize>, bound: f64) -> Result<GaussianOutput> {
    let side = a.side() + pad.unwrap_or_else(|| default_displace_pad(alpha));
    let an = annihilation(side);
    let gen = an.adjoint() * alpha - &an * alpha.conj();
    apply_padded_unitary(a, gen, bound)
}

/// Squeeze `S(xi) = exp((xi* a^2 - xi a^dag^2) / 2)` on `H^{n + pad}`.
pub fn gaussian_squeeze(a: &FockOperator, xi: C64, pad: Option<usize>, bound: f64) -> Result<GaussianOutput> {
    let side = a.side() + pad.unwrap_or_else(|| default_squeeze_pad(xi));
    let an = annihilation(side);
    let a2 = &an * &an;
    let gen = (&a2 * xi.conj() - a2.adjoint() * xi) * C64::new(0.5, 0.0);
    apply_padded_unitary(a, gen, bound)
}

/// Single-mode output of a beam splitter with transmittance `eta` acting on `|psi_a> (x) |psi_b>`.
///
/// The generator `theta (a^dag b - a b^dag)`, `eta = cos^2 theta`, conserves the total photon
/// number, so every block is exponentiated exactly and no truncation enters.
pub fn beam_splitter_trace(psi_a: &DVector<C64>, psi_b: &DVector<C64>, eta: f64) -> Result<FockOperator> {
    require(eta > 0.0 && eta < 1.0, "beam-splitter transmittance must lie in (0, 1)")?;
    let theta = eta.sqrt().acos();
    let (da, db) = (psi_a.len(), psi_b.len());
    let side = da + db - 1;
    // amp[(i, j)]: amplitude of |i>|j> after the beam splitter.
    let mut amp = CMatrix::zeros(side, side);
    for total in 0..side {
        let dim = total + 1;
        let input = DVector::from_fn(dim, |i, _| {
            let j = total - i;
            if i < da && j < db { psi_a[i] * psi_b[j] } else { C64::new(0.0, 0.0) }
        });
        if input.iter().all(|z| z.norm() == 0.0) {
            continue;
        }
        let mut gen = DMatrix::<f64>::zeros(dim, dim);
        for i in 0..dim {
            let j = total - i;
            if j >= 1 {
                gen[(i + 1, i)] += theta * (((i + 1) * j) as f64).sqrt();
            }
            if i >= 1 {
                gen[(i - 1, i)] -= theta * ((i * (j + 1)) as f64).sqrt();
            }
        }
        let u = gen.exp().map(|x| C64::new(x, 0.0));
        let out = u * input;
        for i in 0..dim {
            amp[(i, total - i)] = out[i];
        }
    }
    Ok(FockOperator::from_hermitian_parts(&amp * amp.adjoint()))
}
