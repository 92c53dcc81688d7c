//! Real univariate polynomials on the half-line `[0, inf)`.
//!
//! Besides the usual arithmetic this module carries the root machinery the positivity and
//! extremality code relies on: companion-matrix candidates polished by Newton steps, with a
//! Sturm-sequence count as an independent check, and the constructive split of a nonnegative
//! polynomial into extreme ones.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WigxError};
use crate::special::factorial;

/// Default relative tolerance for root multiplicity and sign decisions.
pub const ROOT_TOL: f64 = 1e-10;

/// Relative size below which a trailing coefficient is dropped.
const TRIM_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
}

impl RealPolynomial {
    /// Coefficients in ascending degree. Negligible leading terms are trimmed.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        let scale = coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.abs() <= TRIM_TOL * scale) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `c * t^k`.
    pub fn monomial(c: f64, k: usize) -> Self {
        let mut v = vec![0.0; k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `lead * prod (t - r)`.
    pub fn from_roots(roots: &[f64], lead: f64) -> Self {
        let mut p = Self::constant(lead);
        for &r in roots {
            p = p.mul(&Self::new(vec![-r, 1.0]));
        }
        p
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |a, c| a.max(c.abs()))
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(0.0);
        }
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect())
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Coefficient of `t^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    /// `p(s t)` as a polynomial in `t`.
    pub fn rescale_argument(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().enumerate().map(|(i, c)| c * s.powi(i as i32)).collect())
    }

    /// Euclidean division `self = q * d + r`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dn = d.degree();
        if self.degree() < dn {
            return (Self::constant(0.0), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0.0; self.degree() - dn + 1];
        for i in (0..quot.len()).rev() {
            let q = rem[i + dn] / d.leading();
            quot[i] = q;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= q * dc;
            }
        }
        rem.truncate(dn.max(1));
        (Self::new(quot), Self::new(rem))
    }

    /// `int_0^inf p(t) e^{-2t} dt`, summed termwise from `int t^m e^{-2t} = m! / 2^{m+1}`.
    pub fn gamma_integral(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| c * factorial(m) / 2f64.powi(m as i32 + 1))
            .sum()
    }
}

/// Generalized Laguerre polynomial `L_m^{(a)}(x)` by the three-term recurrence.
pub fn laguerre(m: i64, a: f64, x: f64) -> Result<f64> {
    if m < 0 {
        return Err(WigxError::InvalidOrder(m));
    }
    let (mut prev, mut cur) = (1.0, 1.0 + a - x);
    if m == 0 {
        return Ok(prev);
    }
    for k in 1..m {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// All elementary symmetric polynomials `e_0 .. e_len` of `mu`.
pub fn elementary_symmetric_all(mu: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; mu.len() + 1];
    e[0] = 1.0;
    for (i, &x) in mu.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e
}

/// `e_j(mu)`, the sum over all `j`-subsets of products.
pub fn elementary_symmetric(mu: &[f64], j: usize) -> Result<f64> {
    if j > mu.len() {
        return Err(WigxError::IndexOutOfRange { index: j, max: mu.len() });
    }
    Ok(elementary_symmetric_all(mu)[j])
}

/// Eigenvalues of a companion matrix. The Schur iteration is capped; if it does not converge
/// the roots come from Aberth's simultaneous iteration on the polynomial instead.
fn companion_roots(comp: DMatrix<f64>, p: &RealPolynomial) -> Vec<Complex64> {
    let n = comp.nrows();
    if let Some(schur) = nalgebra::Schur::try_new(comp, f64::EPSILON, 200 * n.max(1)) {
        return schur.complex_eigenvalues().iter().copied().collect();
    }
    aberth_roots(p)
}

fn aberth_roots(p: &RealPolynomial) -> Vec<Complex64> {
    let n = p.degree();
    let dp = p.derivative();
    let lead = p.leading().abs();
    let bound = 1.0 + p.coeffs[..n].iter().fold(0.0f64, |a, c| a.max(c.abs() / lead));
    // Initial guesses on a circle, rotated off the real axis.
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(0.5 * bound, (2.0 * k as f64 + 0.5) * std::f64::consts::PI / n as f64)).collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let ratio = p.eval_complex(z[i]) / dp.eval_complex(z[i]);
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if moved <= 1e-15 {
            break;
        }
    }
    z
}

/// Roots of `p` over the complex plane, from the companion matrix and polished by Newton steps
/// that are only kept when they reduce `|p|`.
pub fn complex_roots(p: &RealPolynomial) -> Vec<Complex64> {
    let n = p.degree();
    if n == 0 {
        return Vec::new();
    }
    let lead = p.leading();
    let comp = DMatrix::from_fn(n, n, |r, c| {
        if r == 0 {
            -p.coeffs[n - 1 - c] / lead
        } else if r == c + 1 {
            1.0
        } else {
            0.0
        }
    });
    let dp = p.derivative();
    companion_roots(comp, p)
        .into_iter()
        .map(|z0| {
            let mut z = z0;
            let mut fz = p.eval_complex(z).norm();
            for _ in 0..50 {
                let d = dp.eval_complex(z);
                if d.norm() == 0.0 {
                    break;
                }
                let cand = z - p.eval_complex(z) / d;
                let fc = p.eval_complex(cand).norm();
                if fc < fz {
                    z = cand;
                    fz = fc;
                } else {
                    break;
                }
            }
            z
        })
        .collect()
}

fn newton_real(p: &RealPolynomial, mut t: f64) -> f64 {
    let dp = p.derivative();
    let mut ft = p.eval(t).abs();
    for _ in 0..100 {
        let d = dp.eval(t);
        if d == 0.0 {
            break;
        }
        let cand = t - p.eval(t) / d;
        let fc = p.eval(cand).abs();
        if fc < ft || (fc == ft && cand == t) {
            let done = (cand - t).abs() <= 1e-16 * t.abs().max(1.0);
            t = cand;
            ft = fc;
            if done || ft == 0.0 {
                break;
            }
        } else {
            break;
        }
    }
    t
}

/// Multiplicity test: `|p^(i)(r)| <= tol * maxcoeff * max(1, r)^deg` for every `i < j`.
fn vanishes_to_order(p: &RealPolynomial, r: f64, j: usize, tol: f64) -> bool {
    let bound = tol * p.max_coeff() * r.abs().max(1.0).powi(p.degree() as i32);
    let mut q = p.clone();
    for _ in 0..j {
        if q.eval(r).abs() > bound {
            return false;
        }
        q = q.derivative();
    }
    true
}

/// Number of distinct roots in `(0, inf)` of a polynomial with `p(0) != 0`, by Sturm's theorem.
pub fn sturm_count_positive(p: &RealPolynomial) -> usize {
    let norm = |q: RealPolynomial| {
        let m = q.max_coeff();
        if m > 0.0 { q.scale(1.0 / m) } else { q }
    };
    let mut seq = vec![norm(p.clone()), norm(p.derivative())];
    loop {
        let n = seq.len();
        if seq[n - 1].degree() == 0 {
            break;
        }
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        // A remainder at roundoff level marks the end of the chain (common factor reached).
        if r.max_coeff() <= 1e-9 {
            break;
        }
        seq.push(norm(r.scale(-1.0)));
    }
    let variations = |vals: Vec<f64>| {
        let signs: Vec<f64> = vals.into_iter().filter(|v| *v != 0.0).collect();
        signs.windows(2).filter(|w| w[0].signum() != w[1].signum()).count()
    };
    let at_zero = variations(seq.iter().map(|q| q.coeff(0)).collect());
    let at_inf = variations(seq.iter().map(|q| q.leading()).collect());
    at_zero.saturating_sub(at_inf)
}

/// Roots in `[0, inf)` with multiplicities, ascending.
pub fn real_roots_nonneg(p: &RealPolynomial, tol: f64) -> Result<Vec<(f64, usize)>> {
    if p.is_zero() {
        return Err(WigxError::InvalidOrder(-1));
    }
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    let q = p.scale(1.0 / p.max_coeff());
    // Exact zeros at the origin: i! * c_i is the i-th derivative there.
    let mut k0 = 0;
    while k0 < q.degree() && (factorial(k0) * q.coeff(k0)).abs() <= tol {
        k0 += 1;
    }
    let mut out = Vec::new();
    if k0 > 0 {
        out.push((0.0, k0));
    }
    let r = RealPolynomial::new(q.coeffs[k0..].to_vec());
    if r.degree() == 0 {
        return Ok(out);
    }
    let r = r.scale(1.0 / r.max_coeff());

    let comp = DMatrix::from_fn(r.degree(), r.degree(), |i, j| {
        if i == 0 {
            -r.coeffs[r.degree() - 1 - j] / r.leading()
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut cands: Vec<Complex64> = companion_roots(comp, &r)
        .into_iter()
        .filter(|z| z.re > 0.0 && z.im.abs() <= 1e-3 * z.norm().max(1.0))
        .collect();
    cands.sort_by(|a, b| a.re.total_cmp(&b.re));

    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for z in cands {
        match clusters.last_mut() {
            Some(c) if (z.re - c[c.len() - 1]).abs() <= 1e-3 * z.re.max(1.0) => c.push(z.re),
            _ => clusters.push(vec![z.re]),
        }
    }

    let mut found: Vec<(f64, usize)> = Vec::new();
    while let Some(cluster) = clusters.pop() {
        let s = cluster.len();
        let center = cluster.iter().sum::<f64>() / s as f64;
        let mut accepted = None;
        for j in (1..=s).rev() {
            let root = newton_real(&r.nth_derivative(j - 1), center);
            if root > 0.0 && vanishes_to_order(&r, root, j, tol) {
                accepted = Some((root, j));
                break;
            }
        }
        if let Some((root, j)) = accepted {
            if let Some(f) = found.iter_mut().find(|f| (f.0 - root).abs() <= 1e-9 * root.max(1.0)) {
                f.1 = f.1.max(j);
            } else {
                found.push((root, j));
            }
            if j < s {
                let rest: Vec<f64> = cluster
                    .iter()
                    .copied()
                    .filter(|x| (x - root).abs() > 1e-6 * root.max(1.0))
                    .collect();
                if !rest.is_empty() && rest.len() < s {
                    clusters.push(rest);
                }
            }
        }
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Sturm counts distinct real roots of the coefficients as stored. Rounding may split a root
    // of multiplicity m into anywhere between m mod 2 and m real roots, so only counts outside
    // that window signal a real disagreement.
    let sturm = sturm_count_positive(&r);
    let lo: usize = found.iter().map(|f| f.1 % 2).sum();
    let hi: usize = found.iter().map(|f| f.1).sum();
    if sturm < lo || sturm > hi {
        return Err(WigxError::ConditioningFailure(format!(
            "Sturm count {} disagrees with {} clustered roots",
            sturm,
            found.len()
        )));
    }
    out.extend(found);
    Ok(out)
}

/// Outcome of a half-line nonnegativity test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonnegVerdict {
    pub nonneg: bool,
    /// Minimizing `t` among the inspected points, always set when `nonneg` is false.
    pub witness: Option<f64>,
    pub min_value: f64,
    /// Coefficient scale the tolerance is relative to.
    pub scale: f64,
}

/// Decides `p(t) >= -tol * scale` on `[0, inf)` by checking the origin, the leading sign and
/// every real critical point.
pub fn is_nonneg_on_halfline(p: &RealPolynomial, tol: f64) -> NonnegVerdict {
    let scale = p.max_coeff();
    if p.is_zero() {
        return NonnegVerdict { nonneg: true, witness: None, min_value: 0.0, scale };
    }
    let thr = -tol * scale;
    let mut best = (0.0, p.eval(0.0));
    if p.degree() >= 1 {
        let dp = p.derivative();
        if dp.degree() >= 1 {
            for z in complex_roots(&dp) {
                if z.re <= 0.0 {
                    continue;
                }
                for t in [z.re, newton_real(&dp, z.re)] {
                    if t > 0.0 {
                        let v = p.eval(t);
                        if v < best.1 {
                            best = (t, v);
                        }
                    }
                }
            }
        }
    }
    if p.leading() < 0.0 && p.degree() >= 1 {
        // Beyond the Cauchy bound the sign is the leading sign.
        let bound = 1.0 + p.coeffs.iter().take(p.degree()).fold(0.0f64, |a, c| a.max((c / p.leading()).abs()));
        let mut t = 2.0 * bound;
        while p.eval(t) >= thr {
            t *= 2.0;
        }
        let v = p.eval(t);
        if v < best.1 {
            best = (t, v);
        }
    }
    let nonneg = best.1 >= thr;
    NonnegVerdict { nonneg, witness: if nonneg { None } else { Some(best.0) }, min_value: best.1, scale }
}

/// `c * t^k * prod (t - lambda_i)^2` with every `lambda_i > 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremeRadialSpec {
    pub k: usize,
    pub lambdas: Vec<f64>,
    pub c: f64,
}

impl ExtremeRadialSpec {
    /// Unit-leading spec with the lambdas sorted ascending.
    pub fn new(k: usize, mut lambdas: Vec<f64>) -> Self {
        lambdas.sort_by(f64::total_cmp);
        Self { k, lambdas, c: 1.0 }
    }

    /// Degree `k + 2 l` of the polynomial.
    pub fn degree(&self) -> usize {
        self.k + 2 * self.lambdas.len()
    }

    /// Root vector `(0^k, l1, l1, l2, l2, ...)` in canonical order.
    pub fn mu(&self) -> Vec<f64> {
        let mut lam = self.lambdas.clone();
        lam.sort_by(f64::total_cmp);
        let mut mu = vec![0.0; self.k];
        for l in lam {
            mu.push(l);
            mu.push(l);
        }
        mu
    }

    pub fn polynomial(&self) -> RealPolynomial {
        RealPolynomial::from_roots(&self.mu(), self.c)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(l) = self.lambdas.iter().find(|l| !(**l > 0.0) || !l.is_finite()) {
            return Err(WigxError::InvalidSpec(format!("lambda must be positive and finite, got {l}")));
        }
        if !(self.c > 0.0) {
            return Err(WigxError::InvalidSpec(format!("c must be positive, got {}", self.c)));
        }
        Ok(())
    }
}

/// Recognizes `p = c t^k prod (t - lambda_i)^2`; `None` when any root is negative, complex or
/// a positive root of odd multiplicity.
pub fn is_extreme_radial(p: &RealPolynomial, tol: f64) -> Option<ExtremeRadialSpec> {
    if p.is_zero() || p.leading() <= 0.0 {
        return None;
    }
    if p.degree() == 0 {
        return Some(ExtremeRadialSpec { k: 0, lambdas: Vec::new(), c: p.leading() });
    }
    let roots = real_roots_nonneg(p, tol).ok()?;
    let mut k = 0;
    let mut lambdas = Vec::new();
    for (r, m) in roots {
        if r == 0.0 {
            k = m;
        } else if m % 2 == 0 {
            lambdas.extend(std::iter::repeat(r).take(m / 2));
        } else {
            return None;
        }
    }
    let spec = ExtremeRadialSpec { k, lambdas, c: p.leading() };
    if spec.degree() != p.degree() {
        return None;
    }
    let resid = spec.polynomial().sub(p).max_coeff();
    (resid <= 1e-8 * p.max_coeff()).then_some(spec)
}

#[derive(Clone, Debug)]
enum Factor {
    Negative(f64),
    Pair(f64, f64),
}

#[derive(Clone, Debug)]
struct Term {
    coef: f64,
    k: usize,
    lambdas: Vec<f64>,
}

fn expand(term: Term, factors: &[Factor], out: &mut Vec<Term>) {
    let Some((first, rest)) = factors.split_first() else {
        out.push(term);
        return;
    };
    match *first {
        Factor::Negative(mu) => {
            // (t - mu) = ((1 - p) + p t) / p with p = 1 / (1 - mu).
            let p = 1.0 / (1.0 - mu);
            expand(Term { coef: term.coef * (1.0 - p) / p, ..term.clone() }, rest, out);
            expand(Term { coef: term.coef, k: term.k + 1, ..term }, rest, out);
        }
        Factor::Pair(a, b) => {
            // (t - a)^2 + b^2 = ((1 - p) + p (t - a)^2) / p with p = 1 / (1 + b^2).
            let p = 1.0 / (1.0 + b * b);
            expand(Term { coef: term.coef * (1.0 - p) / p, ..term.clone() }, rest, out);
            if a > 1e-12 {
                let mut lambdas = term.lambdas.clone();
                lambdas.push(a);
                expand(Term { coef: term.coef, k: term.k, lambdas }, rest, out);
            } else if a < -1e-12 {
                let mut more = vec![Factor::Negative(a), Factor::Negative(a)];
                more.extend_from_slice(rest);
                expand(term, &more, out);
            } else {
                expand(Term { coef: term.coef, k: term.k + 2, ..term }, rest, out);
            }
        }
    }
}

/// Splits a nonnegative polynomial into a convex mixture of extreme ones.
///
/// The input is normalized internally so that `int_0^inf p e^{-2t} dt = 1`; the returned
/// specs are normalized the same way and the weights sum to one. Negative roots are
/// stripped before complex pairs, which are taken in ascending `|Im z|`.
pub fn decompose_to_extremes(p: &RealPolynomial) -> Result<Vec<(f64, ExtremeRadialSpec)>> {
    let verdict = is_nonneg_on_halfline(p, ROOT_TOL);
    if !verdict.nonneg {
        return Err(WigxError::NotNonnegative { at: verdict.witness.unwrap_or(0.0), value: verdict.min_value });
    }
    let integral = p.gamma_integral();
    if !(integral > 0.0) {
        return Err(WigxError::NotNonnegative { at: 0.0, value: integral });
    }
    let p = p.scale(1.0 / integral);

    let roots = real_roots_nonneg(&p, ROOT_TOL)?;
    let mut k = 0;
    let mut lambdas = Vec::new();
    for &(r, m) in &roots {
        if r == 0.0 {
            k = m;
        } else if m % 2 == 0 {
            lambdas.extend(std::iter::repeat(r).take(m / 2));
        } else {
            return Err(WigxError::NotNonnegative { at: r, value: 0.0 });
        }
    }
    let base = ExtremeRadialSpec { k, lambdas: lambdas.clone(), c: 1.0 }.polynomial();
    let (rest, _) = p.div_rem(&base);

    let mut negatives = Vec::new();
    let mut pairs = Vec::new();
    for z in complex_roots(&rest) {
        if z.im.abs() <= 1e-7 * z.norm().max(1.0) {
            if z.re >= 0.0 {
                return Err(WigxError::ConditioningFailure(format!("unresolved nonnegative root {}", z.re)));
            }
            negatives.push(z.re);
        } else if z.im > 0.0 {
            pairs.push((z.re, z.im));
        }
    }
    negatives.sort_by(f64::total_cmp);
    pairs.sort_by(|a, b| a.1.abs().total_cmp(&b.1.abs()));
    let factors: Vec<Factor> = negatives
        .into_iter()
        .map(Factor::Negative)
        .chain(pairs.into_iter().map(|(a, b)| Factor::Pair(a, b)))
        .collect();

    let mut terms = Vec::new();
    expand(Term { coef: rest.leading(), k, lambdas }, &factors, &mut terms);

    let mut out: Vec<(f64, ExtremeRadialSpec)> = Vec::new();
    for t in terms {
        let mut spec = ExtremeRadialSpec::new(t.k, t.lambdas);
        let norm = spec.polynomial().gamma_integral();
        spec.c = 1.0 / norm;
        let w = t.coef * norm;
        if let Some(slot) = out.iter_mut().find(|(_, s)| {
            s.k == spec.k
                && s.lambdas.len() == spec.lambdas.len()
                && s.lambdas.iter().zip(&spec.lambdas).all(|(a, b)| (a - b).abs() <= 1e-12 * a.max(1.0))
        }) {
            slot.0 += w;
        } else {
            out.push((w, spec));
        }
    }
    Ok(out)
}
