//! Wigner and Husimi functions of Fock-bounded operators.
//!
//! Every Fock-bounded operator has `W(alpha) = P(alpha, alpha*) exp(-2|alpha|^2)` where the
//! polyanalytic part `P = sum_kl P_kl alpha*^k alpha^l` is stored as a [`MonomialMatrix`].
//! With this convention `int W d^2 alpha = Tr A` and `Tr[A B^dagger] = pi int W_A W_B^* d^2 alpha`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::channels::plc_matrix;
use crate::error::{Result, WigxError};
use crate::fock_core::{CMatrix, FockOperator, C64};
use crate::polynomials::{laguerre, RealPolynomial};
use crate::special::{binomial, ln_factorial, sqrt_factorial_ratio};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Wigner function of the transition operator `|m><n|` at `alpha`.
pub fn wigner_transition(m: usize, n: usize, alpha: C64) -> C64 {
    if m > n {
        return wigner_transition(n, m, alpha).conj();
    }
    let r2 = alpha.norm_sqr();
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let lag = laguerre(m as i64, (n - m) as f64, 4.0 * r2).expect("order is nonnegative");
    let pref = 2.0 / PI * sign * sqrt_factorial_ratio(m, n) * lag * (-2.0 * r2).exp();
    (alpha * 2.0).powu((n - m) as u32) * pref
}

/// Wigner function by direct summation over Fock transitions.
pub fn wigner(a: &FockOperator, alpha: C64) -> Result<f64> {
    let mut acc = ZERO;
    let mut scale = 0.0;
    for k in 0..a.side() {
        for l in 0..a.side() {
            let akl = a.entry(k, l);
            if akl == ZERO {
                continue;
            }
            let w = wigner_transition(k, l, alpha);
            acc += akl * w;
            scale += akl.norm() * w.norm();
        }
    }
    if acc.im.abs() > 1e-8 * scale.max(f64::MIN_POSITIVE) {
        return Err(WigxError::ImaginaryResidue(acc.im));
    }
    Ok(acc.re)
}

/// Husimi function `<alpha|A|alpha> / pi`, exact for Fock-bounded operators.
pub fn husimi(a: &FockOperator, alpha: C64) -> f64 {
    let env = (-0.5 * alpha.norm_sqr()).exp();
    let mut amp = Vec::with_capacity(a.side());
    let mut pow = C64::new(1.0, 0.0);
    for k in 0..a.side() {
        amp.push(pow * env / sqrt_factorial_ratio(k, 0));
        pow *= alpha;
    }
    let mut acc = ZERO;
    for k in 0..a.side() {
        for l in 0..a.side() {
            acc += amp[k].conj() * a.entry(k, l) * amp[l];
        }
    }
    acc.re / PI
}

/// Coefficients `P_kl` of `alpha*^k alpha^l` in the polynomial part of a Wigner function.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialMatrix {
    dim: usize,
    p: CMatrix,
}

fn monomial_weight(k: usize) -> f64 {
    // sqrt(2^k / k!)
    (0.5 * (k as f64 * std::f64::consts::LN_2 - ln_factorial(k))).exp()
}

impl MonomialMatrix {
    /// Accepts a square matrix that is Hermitian up to `1e-10` relative; the residue is removed.
    pub fn new(p: CMatrix) -> Result<Self> {
        if p.nrows() == 0 || p.nrows() != p.ncols() {
            return Err(WigxError::DimensionMismatch { expected: p.nrows().max(1), found: p.ncols() });
        }
        let scale = p.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        let resid = (&p - p.adjoint()).iter().fold(0.0f64, |a, z| a.max(z.norm()));
        if resid > 1e-10 * scale {
            return Err(WigxError::NonHermitian { residual: resid / scale });
        }
        Ok(Self::from_parts(p))
    }

    pub(crate) fn from_parts(p: CMatrix) -> Self {
        let p = (&p + p.adjoint()).map(|z| z * 0.5);
        Self { dim: p.nrows() - 1, p }
    }

    /// Real-valued convenience constructor.
    pub fn from_real(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        Self::new(CMatrix::from_fn(n, n, |r, c| C64::new(rows[r][c], 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &CMatrix {
        &self.p
    }

    pub fn entry(&self, k: usize, l: usize) -> C64 {
        if k <= self.dim && l <= self.dim { self.p[(k, l)] } else { ZERO }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dim: self.dim, p: self.p.map(|z| z * s) }
    }

    /// `P(alpha, alpha*)`, the real polynomial part of the Wigner function.
    pub fn eval(&self, alpha: C64) -> f64 {
        let pows = powers(alpha, self.dim);
        let mut acc = 0.0;
        for k in 0..=self.dim {
            let mut row = ZERO;
            for l in 0..=self.dim {
                row += self.p[(k, l)] * pows[l];
            }
            acc += (pows[k].conj() * row).re;
        }
        acc
    }

    /// Wigner function `P(alpha) exp(-2 |alpha|^2)`.
    pub fn wigner(&self, alpha: C64) -> f64 {
        self.eval(alpha) * (-2.0 * alpha.norm_sqr()).exp()
    }

    /// `int P e^{-2|alpha|^2} d^2 alpha`, exact termwise (off-diagonal monomials integrate to zero).
    pub fn normalization(&self) -> f64 {
        (0..=self.dim).map(|k| self.p[(k, k)].re * PI * (ln_factorial(k) - (k as f64 + 1.0) * std::f64::consts::LN_2).exp()).sum()
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        let ev = SymmetricEigen::new(self.p.clone()).eigenvalues;
        let norm = ev.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        ev.iter().all(|&x| x >= -tol * norm.max(1.0))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.p.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Restriction to the ray `alpha = r e^{i theta}` as a polynomial in `r`.
    pub fn ray_polynomial(&self, theta: f64) -> RealPolynomial {
        let mut c = vec![0.0; 2 * self.dim + 1];
        for k in 0..=self.dim {
            for l in 0..=self.dim {
                let phase = C64::from_polar(1.0, (l as f64 - k as f64) * theta);
                c[k + l] += (self.p[(k, l)] * phase).re;
            }
        }
        RealPolynomial::new(c)
    }

    /// Monomial matrix of `delta -> P(z + delta)`.
    pub fn shifted(&self, z: C64) -> Self {
        let n = self.dim;
        let zp = powers(z, n);
        let zc: Vec<C64> = zp.iter().map(|w| w.conj()).collect();
        let mut out = CMatrix::zeros(n + 1, n + 1);
        for a in 0..=n {
            for b in 0..=n {
                let mut acc = ZERO;
                for k in a..=n {
                    for l in b..=n {
                        acc += self.p[(k, l)] * (binomial(k, a) * binomial(l, b)) * zc[k - a] * zp[l - b];
                    }
                }
                out[(a, b)] = acc;
            }
        }
        Self::from_parts(out)
    }

    /// Value, gradient and Hessian `[xx, xy, yy]` of the polynomial part in `(x, y)`, `alpha = x + iy`.
    pub fn derivatives(&self, alpha: C64) -> (f64, [f64; 2], [f64; 3]) {
        let n = self.dim;
        let ap = powers(alpha, n);
        let ac: Vec<C64> = ap.iter().map(|w| w.conj()).collect();
        let (mut f, mut g, mut h, mut m) = (ZERO, ZERO, ZERO, ZERO);
        for k in 0..=n {
            for l in 0..=n {
                let pkl = self.p[(k, l)];
                f += pkl * ac[k] * ap[l];
                if l >= 1 {
                    g += pkl * (l as f64) * ac[k] * ap[l - 1];
                }
                if l >= 2 {
                    h += pkl * (l * (l - 1)) as f64 * ac[k] * ap[l - 2];
                }
                if k >= 1 && l >= 1 {
                    m += pkl * (k * l) as f64 * ac[k - 1] * ap[l - 1];
                }
            }
        }
        let grad = [2.0 * g.re, -2.0 * g.im];
        let hxx = 2.0 * h.re + 2.0 * m.re;
        let hyy = 2.0 * m.re - 2.0 * h.re;
        let hxy = -2.0 * h.im;
        (f.re, grad, [hxx, hxy, hyy])
    }
}

fn powers(z: C64, n: usize) -> Vec<C64> {
    let mut v = Vec::with_capacity(n + 1);
    let mut p = C64::new(1.0, 0.0);
    for _ in 0..=n {
        v.push(p);
        p *= z;
    }
    v
}

/// Monomial matrix of `A`: `P_kl = (2/pi) sqrt(2^{k+l} / (k! l!)) <k|E_2[A]|l>`.
pub fn monomial_matrix(a: &FockOperator) -> MonomialMatrix {
    let e2 = plc_matrix(a.entries(), 2.0);
    let n = a.side();
    let f: Vec<f64> = (0..n).map(monomial_weight).collect();
    MonomialMatrix::from_parts(CMatrix::from_fn(n, n, |k, l| e2[(k, l)] * (2.0 / PI * f[k] * f[l])))
}

/// Inverse of [`monomial_matrix`]: `A = (pi/2) E_{1/2}[sum_kl P_kl sqrt(k! l! / 2^{k+l}) |k><l|]`.
pub fn operator_from_monomial(p: &MonomialMatrix) -> FockOperator {
    let n = p.dim + 1;
    let f: Vec<f64> = (0..n).map(monomial_weight).collect();
    let m = CMatrix::from_fn(n, n, |k, l| p.p[(k, l)] / (f[k] * f[l]));
    let half = plc_matrix(&m, 0.5);
    FockOperator::from_hermitian_parts(half.map(|z| z * (PI / 2.0)))
}

/// Matrix convolution realizing the pointwise product of two polyanalytic polynomials.
pub fn monomial_convolve(a: &MonomialMatrix, b: &MonomialMatrix) -> MonomialMatrix {
    let n = a.dim + b.dim + 1;
    let mut out = CMatrix::zeros(n, n);
    for k1 in 0..=a.dim {
        for l1 in 0..=a.dim {
            let x = a.p[(k1, l1)];
            if x == ZERO {
                continue;
            }
            for k2 in 0..=b.dim {
                for l2 in 0..=b.dim {
                    out[(k1 + k2, l1 + l2)] += x * b.p[(k2, l2)];
                }
            }
        }
    }
    MonomialMatrix::from_parts(out)
}

/// Radial polynomial `P(t)`, `t = |alpha|^2`, of a phase-invariant operator.
pub fn radial_polynomial(a: &FockOperator) -> Result<RealPolynomial> {
    if !a.is_phase_invariant(1e-10 * a.max_abs().max(1.0)) {
        return Err(WigxError::NotPhaseInvariant);
    }
    let p = monomial_matrix(a);
    Ok(RealPolynomial::new((0..=p.dim).map(|k| p.p[(k, k)].re).collect()))
}

/// Gauss-Laguerre nodes and weights for `int_0^inf f(u) e^{-u} du` (Golub-Welsch).
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let jac = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0 * i as f64 + 1.0
        } else if i.abs_diff(j) == 1 {
            i.max(j) as f64
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Gauss-Laguerre node count for radial integrals.
pub const RADIAL_NODES: usize = 64;
/// Uniform angular samples for full-plane integrals.
pub const ANGULAR_NODES: usize = 128;

fn plane_integral(f: impl Fn(C64) -> f64, envelope: f64) -> f64 {
    // int g(alpha) e^{-envelope |alpha|^2} d^2 alpha with u = envelope * |alpha|^2.
    let (nodes, weights) = gauss_laguerre(RADIAL_NODES);
    let dtheta = 2.0 * PI / ANGULAR_NODES as f64;
    let mut total = 0.0;
    for (u, w) in nodes.iter().zip(&weights) {
        let r = (u / envelope).sqrt();
        let ring: f64 = (0..ANGULAR_NODES).map(|j| f(C64::from_polar(r, j as f64 * dtheta))).sum();
        total += w * ring * dtheta;
    }
    total / (2.0 * envelope)
}

/// `int W_A d^2 alpha` by quadrature.
pub fn wigner_integral(a: &FockOperator) -> f64 {
    let p = monomial_matrix(a);
    plane_integral(|z| p.eval(z), 2.0)
}

/// `pi int W_A W_B^* d^2 alpha` by quadrature; equals `Tr[A B^dagger]`.
pub fn overlap_integral(a: &FockOperator, b: &FockOperator) -> f64 {
    let pa = monomial_matrix(a);
    let pb = monomial_matrix(b);
    PI * plane_integral(|z| pa.eval(z) * pb.eval(z), 4.0)
}

/// Coherent amplitudes `<k|alpha>` for `k = 0..=n`.
pub fn coherent_amplitudes(alpha: C64, n: usize) -> DVector<Complex64> {
    let env = (-0.5 * alpha.norm_sqr()).exp();
    let pows = powers(alpha, n);
    DVector::from_iterator(n + 1, (0..=n).map(|k| pows[k] * env / sqrt_factorial_ratio(k, 0)))
}
