//! Certification of Wigner positivity.
//!
//! All sign decisions are made on the polynomial part `P(alpha) = W(alpha) e^{2|alpha|^2}`:
//! the Gaussian never changes sign, and damping would hide far-field negativity.
//! Phase-invariant operators reduce to a univariate polynomial that is decided exactly.
//! Everything else is a semi-decision: each ray from the origin is minimized exactly as a
//! univariate polynomial, a polar grid adds samples, and the best candidates are refined
//! by damped Newton steps in the plane.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fock_core::{FockOperator, C64};
use crate::phase_space::{monomial_matrix, radial_polynomial, wigner, MonomialMatrix};
use crate::polynomials::{complex_roots, is_nonneg_on_halfline, RealPolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    PositiveExact,
    PositiveNumeric,
    Negative,
    Inconclusive,
}

impl Verdict {
    pub fn is_positive(self) -> bool {
        matches!(self, Verdict::PositiveExact | Verdict::PositiveNumeric)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Radial,
    GridRefine,
}

/// A phase-space point with the polynomial part and the Wigner function evaluated there.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub alpha: [f64; 2],
    pub polynomial_value: f64,
    pub wigner_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyConfig {
    pub radii: usize,
    pub angles: usize,
    /// Absolute tolerance on the polynomial part.
    pub tol: f64,
    /// Newton stops once the gradient norm falls below this (relative to the coefficient scale).
    pub grad_tol: f64,
    pub max_newton: usize,
    /// Threshold on `||A - dephase(A)||` for taking the radial route.
    pub phase_tol: f64,
    /// Upper cap on the automatic grid radius.
    pub radius_cap: f64,
    /// Cap on the angular local minima handed to Newton refinement. The default refines all of
    /// them: a zero circle produces many near-zero minima that would crowd out an isolated one.
    pub refine_count: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self {
            radii: 400,
            angles: 256,
            tol: 1e-9,
            grad_tol: 1e-12,
            max_newton: 60,
            phase_tol: 1e-10,
            radius_cap: 50.0,
            refine_count: 256,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityCertificate {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Smallest value of the polynomial part that was found.
    pub min_found: f64,
    pub method: Method,
    pub tolerances: CertifyConfig,
    /// Grid radius actually used by the numeric route.
    pub grid_radius: Option<f64>,
}

/// A local minimizer of the polynomial part after refinement.
#[derive(Clone, Debug, PartialEq)]
pub struct RefinedPoint {
    pub alpha: C64,
    pub value: f64,
    pub converged: bool,
}

/// Raw output of the numeric search.
#[derive(Clone, Debug)]
pub struct MinimaScan {
    pub min_value: f64,
    pub argmin: C64,
    /// Exact minimizer on every grid ray.
    pub ray_minima: Vec<RefinedPoint>,
    /// Newton-refined candidates.
    pub refined: Vec<RefinedPoint>,
    pub radius: f64,
}

fn witness_at(a: &FockOperator, p: &MonomialMatrix, alpha: C64) -> Witness {
    let wv = wigner(a, alpha).unwrap_or_else(|_| p.wigner(alpha));
    Witness { alpha: [alpha.re, alpha.im], polynomial_value: p.eval(alpha), wigner_value: wv }
}

/// Local minima `(r, value)` of a univariate polynomial on `[0, inf)`, including `r = 0` when
/// the polynomial does not decrease there. A negative leading coefficient yields a single
/// `(inf, -inf)` entry.
pub fn halfline_local_minima(f: &RealPolynomial) -> Vec<(f64, f64)> {
    if f.degree() == 0 {
        return vec![(0.0, f.eval(0.0))];
    }
    if f.leading() < 0.0 {
        return vec![(f64::INFINITY, f64::NEG_INFINITY)];
    }
    let df = f.derivative();
    let mut out = Vec::new();
    if df.eval(0.0) >= 0.0 {
        out.push((0.0, f.eval(0.0)));
    }
    if df.degree() >= 1 {
        let ddf = df.derivative();
        for z in complex_roots(&df) {
            if z.re <= 0.0 || z.im.abs() > 1e-6 * z.norm().max(1.0) {
                continue;
            }
            let mut r = z.re;
            for _ in 0..20 {
                let d2 = ddf.eval(r);
                if d2 == 0.0 {
                    break;
                }
                let step = df.eval(r) / d2;
                let cand = r - step;
                if !(cand > 0.0) || f.eval(cand) > f.eval(r) {
                    break;
                }
                r = cand;
                if step.abs() <= 1e-16 * r.max(1.0) {
                    break;
                }
            }
            // Keep minima only; a maximum or inflection has a lower neighbour.
            let h = 1e-4 * r.max(1e-3);
            let v = f.eval(r);
            if f.eval(r + h) >= v && (r - h <= 0.0 || f.eval(r - h) >= v) {
                out.push((r, v));
            }
        }
    }
    if out.is_empty() {
        out.push((0.0, f.eval(0.0)));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Minimum of a univariate polynomial on `[0, inf)` as `(r, value)`; `value = -inf` when
/// the polynomial is unbounded below.
fn halfline_min(f: &RealPolynomial) -> (f64, f64) {
    halfline_local_minima(f).into_iter().fold((0.0, f64::INFINITY), |best, m| if m.1 < best.1 { m } else { best })
}

/// Damped Newton on the real bivariate polynomial starting at `alpha`.
pub fn newton_refine(p: &MonomialMatrix, alpha: C64, grad_tol: f64, max_iter: usize) -> RefinedPoint {
    let scale = p.entries().iter().fold(0.0f64, |a, z| a.max(z.norm())).max(1.0);
    let (mut x, mut y) = (alpha.re, alpha.im);
    let (mut f, mut g, mut h) = p.derivatives(C64::new(x, y));
    let mut converged = false;
    let mut mu = 0.0f64;
    for _ in 0..max_iter {
        let gn = (g[0] * g[0] + g[1] * g[1]).sqrt();
        if gn <= grad_tol * scale * (x * x + y * y).sqrt().max(1.0).powi(2 * p.dim() as i32) {
            converged = true;
            break;
        }
        let mut accepted = false;
        for _ in 0..40 {
            let (a, b, c) = (h[0] + mu, h[1], h[2] + mu);
            let det = a * c - b * b;
            if a > 0.0 && det > 0.0 {
                let dx = -(c * g[0] - b * g[1]) / det;
                let dy = -(a * g[1] - b * g[0]) / det;
                let (nx, ny) = (x + dx, y + dy);
                let (nf, ng, nh) = p.derivatives(C64::new(nx, ny));
                if nf <= f {
                    let stalled = nx == x && ny == y;
                    x = nx;
                    y = ny;
                    f = nf;
                    g = ng;
                    h = nh;
                    mu *= 0.25;
                    accepted = !stalled;
                    break;
                }
            }
            mu = if mu == 0.0 { 1e-12 * scale.max(h[0].abs().max(h[2].abs())) } else { mu * 8.0 };
        }
        if !accepted {
            let gn = (g[0] * g[0] + g[1] * g[1]).sqrt();
            converged = gn <= 1e-7 * scale * (x * x + y * y).sqrt().max(1.0).powi(2 * p.dim() as i32);
            break;
        }
    }
    RefinedPoint { alpha: C64::new(x, y), value: f, converged }
}

/// Exact per-ray minimization plus grid sampling and Newton refinement of the polynomial part.
pub fn scan_minima(p: &MonomialMatrix, cfg: &CertifyConfig) -> MinimaScan {
    let angles: Vec<f64> = (0..cfg.angles).map(|j| 2.0 * PI * j as f64 / cfg.angles as f64).collect();
    let rays: Vec<(RealPolynomial, (f64, f64))> = angles
        .par_iter()
        .map(|&th| {
            let f = p.ray_polynomial(th);
            let m = halfline_min(&f);
            (f, m)
        })
        .collect();

    // Grid radius from Cauchy bounds of the ray restrictions.
    let mut radius: f64 = 1.0;
    for (f, _) in &rays {
        if f.degree() >= 1 && f.leading().abs() > 1e-8 * f.max_coeff() {
            let b = f.coeffs()[..f.degree()].iter().fold(0.0f64, |a, c| a.max((c / f.leading()).abs()));
            radius = radius.max(1.0 + b);
        }
    }
    let radius = radius.min(cfg.radius_cap);

    let mut best = (f64::INFINITY, C64::new(0.0, 0.0));
    let mut ray_minima = Vec::with_capacity(rays.len());
    for (j, (f, (r, v))) in rays.iter().enumerate() {
        let th = angles[j];
        let point = if r.is_finite() {
            C64::from_polar(*r, th)
        } else {
            // Unbounded below along this ray: step out until clearly negative.
            let mut rr = radius.max(1.0);
            while f.eval(rr) >= -1.0 && rr < 1e12 {
                rr *= 2.0;
            }
            C64::from_polar(rr, th)
        };
        let value = if r.is_finite() { *v } else { p.eval(point) };
        ray_minima.push(RefinedPoint { alpha: point, value, converged: r.is_finite() });
        if value < best.0 {
            best = (value, point);
        }
        for i in 0..cfg.radii {
            let rr = radius * (i as f64 + 0.5) / cfg.radii as f64;
            let val = f.eval(rr);
            if val < best.0 {
                best = (val, C64::from_polar(rr, th));
            }
        }
    }

    // Local minima of the ray profile in angle, best first.
    let n = ray_minima.len();
    let mut seeds: Vec<usize> = (0..n)
        .filter(|&j| {
            let v = ray_minima[j].value;
            v <= ray_minima[(j + n - 1) % n].value && v <= ray_minima[(j + 1) % n].value && ray_minima[j].converged
        })
        .collect();
    seeds.sort_by(|&a, &b| ray_minima[a].value.total_cmp(&ray_minima[b].value).then(a.cmp(&b)));
    seeds.truncate(cfg.refine_count);
    let refined: Vec<RefinedPoint> = seeds
        .par_iter()
        .map(|&j| newton_refine(p, ray_minima[j].alpha, cfg.grad_tol, cfg.max_newton))
        .collect();
    for r in &refined {
        if r.value < best.0 {
            best = (r.value, r.alpha);
        }
    }
    MinimaScan { min_value: best.0, argmin: best.1, ray_minima, refined, radius }
}

/// Certifies (or refutes) `W_A >= 0`.
pub fn certify_wigner(a: &FockOperator, cfg: &CertifyConfig) -> PositivityCertificate {
    let p = monomial_matrix(a);
    if a.is_phase_invariant(cfg.phase_tol) {
        if let Ok(radial) = radial_polynomial(a) {
            let scale = radial.max_coeff().max(f64::MIN_POSITIVE);
            let v = is_nonneg_on_halfline(&radial, cfg.tol / scale);
            let (verdict, witness) = if v.nonneg {
                (Verdict::PositiveExact, None)
            } else {
                let alpha = C64::new(v.witness.unwrap_or(0.0).sqrt(), 0.0);
                (Verdict::Negative, Some(witness_at(a, &p, alpha)))
            };
            return PositivityCertificate {
                verdict,
                witness,
                min_found: v.min_value,
                method: Method::Radial,
                tolerances: cfg.clone(),
                grid_radius: None,
            };
        }
    }
    let scan = scan_minima(&p, cfg);
    let (verdict, witness) = if scan.min_value < -cfg.tol {
        (Verdict::Negative, Some(witness_at(a, &p, scan.argmin)))
    } else if scan.refined.iter().any(|r| !r.converged && r.value <= 10.0 * cfg.tol) {
        (Verdict::Inconclusive, None)
    } else {
        (Verdict::PositiveNumeric, None)
    };
    PositivityCertificate {
        verdict,
        witness,
        min_found: scan.min_value,
        method: Method::GridRefine,
        tolerances: cfg.clone(),
        grid_radius: Some(scan.radius),
    }
}

/// Membership in the class whose monomial matrix is PSD (sums of squared moduli).
pub fn is_in_a_sigma(a: &FockOperator) -> bool {
    monomial_matrix(a).is_psd(1e-10)
}

/// Tolerances used by [`classify`].
pub const CLASSIFY_PSD_TOL: f64 = 1e-10;
pub const CLASSIFY_TRACE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub is_state: bool,
    pub wigner: Verdict,
    pub wigner_min: f64,
    pub phase_invariant: bool,
    pub support_degree: usize,
    pub in_a_sigma: bool,
    pub trace: f64,
    pub min_eigenvalue: f64,
}

/// Composite record of the structural checks.
pub fn classify(a: &FockOperator, cfg: &CertifyConfig) -> Classification {
    let cert = certify_wigner(a, cfg);
    Classification {
        is_state: a.is_psd(CLASSIFY_PSD_TOL) && (a.trace() - 1.0).abs() <= CLASSIFY_TRACE_TOL,
        wigner: cert.verdict,
        wigner_min: cert.min_found,
        phase_invariant: a.is_phase_invariant(cfg.phase_tol),
        support_degree: a.support_degree(1e-12 * a.max_abs().max(1.0)),
        in_a_sigma: is_in_a_sigma(a),
        trace: a.trace(),
        min_eigenvalue: a.min_eigenvalue(),
    }
}
