//! Extreme Wigner-positive states.
//!
//! Vertigo trajectories and the entry point `t0` into the state cone, recognition of extreme
//! phase-invariant quasi-states, a facial-reduction extremality certifier, the generation
//! pipeline for extreme states and the maximal Fock fidelities.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{gaussian_displace, gaussian_squeeze, fock_displacement_norm, rotation, vertigo_norm, DEFAULT_TAIL_BOUND};
use crate::error::{Result, WigxError};
use crate::fock_core::{CMatrix, FockOperator, C64};
use crate::phase_space::{monomial_matrix, radial_polynomial, MonomialMatrix};
use crate::polynomials::{is_extreme_radial, real_roots_nonneg, ExtremeRadialSpec, ROOT_TOL};
use crate::positivity::{certify_wigner, halfline_local_minima, newton_refine, scan_minima, CertifyConfig};
use crate::special::binomial;
use crate::state_zoo::{bs_state_fock, extreme_radial_quasistate};

/// Zero candidates closer than this are merged before their order is measured.
pub const ZERO_CLUSTER_RADIUS: f64 = 2e-3;

/// Smallest Vertigo parameter probed when scanning below `t = 1`.
pub const T_SCAN_FLOOR: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct T0Search {
    pub t0: f64,
    /// Set when the PSD region below `t = 1` turned out not to be an interval.
    pub multi_crossing: bool,
}

fn top_index(a: &FockOperator) -> usize {
    a.support_degree(1e-12 * a.max_abs().max(1.0))
}

fn psd_at(a: &FockOperator, t: f64, tol: f64) -> bool {
    vertigo_norm(a, t).map(|v| v.is_psd(tol)).unwrap_or(false)
}

fn bisect(a: &FockOperator, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    // Invariant: PSD fails at `lo` and holds at `hi`.
    while hi - lo > 1e-8 * hi {
        let mid = 0.5 * (lo + hi);
        if psd_at(a, mid, tol) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Entry point of the Vertigo trajectory into the PSD cone, with the multi-crossing flag.
pub fn find_t0_detailed(a: &FockOperator, t_max: f64, tol: f64) -> Result<T0Search> {
    let n = top_index(a);
    if a.entry(n, n).re.abs() <= 1e-12 * a.max_abs().max(1.0) {
        return Err(WigxError::HypothesisViolated(format!("<{n}|A|{n}> vanishes")));
    }
    if !psd_at(a, t_max, tol) {
        return Err(WigxError::NotFound(format!("trajectory is not PSD at t_max = {t_max}")));
    }
    if !psd_at(a, 1.0, tol) {
        let (mut lo, mut hi) = (1.0, 2.0f64.min(t_max));
        while !psd_at(a, hi, tol) {
            lo = hi;
            hi = (hi * 2.0).min(t_max);
        }
        return Ok(T0Search { t0: bisect(a, lo, hi, tol), multi_crossing: false });
    }
    let (mut hi, mut lo) = (1.0, 0.5);
    loop {
        if lo < T_SCAN_FLOOR {
            return Ok(T0Search { t0: hi, multi_crossing: false });
        }
        if !psd_at(a, lo, tol) {
            break;
        }
        hi = lo;
        lo *= 0.5;
    }
    let mut t0 = bisect(a, lo, hi, tol);
    // Look for re-entries between t0 and 1 on a log grid; keep the highest failure.
    let samples = 256;
    let mut multi = false;
    let mut last_fail = None;
    for i in 0..=samples {
        let t = t0 * (1.0 / t0).powf(i as f64 / samples as f64);
        if !psd_at(a, t, tol) {
            last_fail = Some(i);
        }
    }
    if let Some(i) = last_fail {
        multi = true;
        let f = t0 * (1.0 / t0).powf(i as f64 / samples as f64);
        let p = t0 * (1.0 / t0).powf((i + 1) as f64 / samples as f64);
        t0 = bisect(a, f, p, tol);
    }
    Ok(T0Search { t0, multi_crossing: multi })
}

/// Smallest `t0 <= t_max` beyond which the normalized trajectory stays PSD within `tol`.
pub fn find_t0(a: &FockOperator, t_max: f64, tol: f64) -> Result<f64> {
    find_t0_detailed(a, t_max, tol).map(|s| s.t0)
}

/// Normalized Vertigo trajectory with per-point diagnostics.
#[derive(Clone, Debug)]
pub struct TrajectoryRecord {
    pub t_values: Vec<f64>,
    pub operators: Vec<FockOperator>,
    pub min_eigenvalues: Vec<f64>,
    /// Minimum of the polynomial part `W e^{2|alpha|^2}`; zero on the Wigner-positive boundary.
    pub wigner_min: Vec<f64>,
    pub is_state: Vec<bool>,
    pub is_wps: Vec<bool>,
    pub entered_d_at: Option<f64>,
}

/// PSD tolerance used for trajectory diagnostics.
pub const TRAJECTORY_PSD_TOL: f64 = 1e-10;

pub fn vertigo_trajectory(a: &FockOperator, t_grid: &[f64], cfg: &CertifyConfig) -> Result<TrajectoryRecord> {
    if t_grid.is_empty() {
        return Err(WigxError::InvalidInput("empty t grid".into()));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(WigxError::InvalidInput("t grid must be strictly increasing".into()));
    }
    let points: Vec<Result<(FockOperator, f64, f64, bool, bool)>> = t_grid
        .par_iter()
        .map(|&t| {
            let op = vertigo_norm(a, t)?;
            let cert = certify_wigner(&op, cfg);
            let min_eig = op.min_eigenvalue();
            let is_state = op.is_psd(TRAJECTORY_PSD_TOL);
            Ok((op, min_eig, cert.min_found, is_state, cert.verdict.is_positive()))
        })
        .collect();
    let mut rec = TrajectoryRecord {
        t_values: t_grid.to_vec(),
        operators: Vec::new(),
        min_eigenvalues: Vec::new(),
        wigner_min: Vec::new(),
        is_state: Vec::new(),
        is_wps: Vec::new(),
        entered_d_at: None,
    };
    for p in points {
        let (op, me, wm, st, wp) = p?;
        rec.operators.push(op);
        rec.min_eigenvalues.push(me);
        rec.wigner_min.push(wm);
        rec.is_state.push(st);
        rec.is_wps.push(wp);
    }
    let t_end = *t_grid.last().unwrap();
    rec.entered_d_at = find_t0(a, t_end.max(1.0), TRAJECTORY_PSD_TOL).ok();
    Ok(rec)
}

/// Radial polynomial in the variable `u = 2 |alpha|^2` with the `2/pi` prefactor removed,
/// so that `W = (2/pi) Q(u) e^{-u}`.
pub fn radial_polynomial_u(a: &FockOperator) -> Result<crate::polynomials::RealPolynomial> {
    Ok(radial_polynomial(a)?.rescale_argument(0.5).scale(PI / 2.0))
}

/// Recognizes an extreme phase-invariant quasi-state, returning its spec in the variable
/// `u = 2 |alpha|^2` with `c` the leading coefficient of `Q(u)`.
pub fn recognize_extreme_radial(a: &FockOperator, tol: f64) -> Result<Option<ExtremeRadialSpec>> {
    let q = radial_polynomial_u(a)?;
    Ok(is_extreme_radial(&q, tol))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ExtremalityVerdict {
    CertifiedExtreme,
    NotExtreme,
    Inconclusive,
}

/// What went into the linear system of the certifier.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSummary {
    /// Highest Fock level of the working space.
    pub working_dim: usize,
    /// Rank of the state; the direction lives on its range.
    pub rank: usize,
    pub kernel_dim: usize,
    /// Wigner zeros used, with the vanishing order imposed at each.
    pub zero_points: Vec<[f64; 2]>,
    pub zero_orders: Vec<usize>,
    pub rows: usize,
    pub unknowns: usize,
    pub nullity: usize,
    pub zero_route: String,
}

#[derive(Clone, Debug)]
pub struct ExtremalityReport {
    pub verdict: ExtremalityVerdict,
    /// Feasible direction `H` (traceless, unit Frobenius norm) when not extreme.
    pub perturbation: Option<FockOperator>,
    pub epsilon: Option<f64>,
    pub constraints_used: ConstraintSummary,
}

#[derive(Clone, Debug)]
pub struct ExtremalityConfig {
    pub certify: CertifyConfig,
    /// Eigenvalues below `rank_tol * lambda_max` count as kernel.
    pub rank_tol: f64,
    /// Polynomial-part values below this count as zeros.
    pub zero_tol: f64,
    /// Taylor coefficients below `order_tol * scale` count as vanishing when measuring the order of a zero.
    pub order_tol: f64,
    /// Relative singular-value threshold for the null space.
    pub null_tol: f64,
    pub eps_grid: Vec<f64>,
    /// Positivity tolerance on the polynomial part of the endpoints `rho +- eps H`.
    pub endpoint_tol: f64,
}

impl Default for ExtremalityConfig {
    fn default() -> Self {
        Self {
            certify: CertifyConfig { radii: 120, angles: 256, ..CertifyConfig::default() },
            rank_tol: 1e-9,
            zero_tol: 1e-9,
            order_tol: 1e-6,
            null_tol: 1e-7,
            eps_grid: vec![1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
            endpoint_tol: 1e-12,
        }
    }
}

/// Taylor coefficient of `delta*^a delta^b` in `P(z + delta)`.
fn shifted_coefficient(m: &CMatrix, z: C64, a: usize, b: usize) -> C64 {
    let n = m.nrows() - 1;
    let mut acc = C64::new(0.0, 0.0);
    let zc = z.conj();
    for k in a..=n {
        let fk = binomial(k, a) * 1.0;
        let zk = zc.powu((k - a) as u32);
        for l in b..=n {
            acc += m[(k, l)] * zk * z.powu((l - b) as u32) * (fk * binomial(l, b));
        }
    }
    acc
}

fn vanishing_order(p: &MonomialMatrix, z: C64, tol: f64) -> usize {
    let m = p.entries();
    let n = p.dim();
    for s in 0..=2 * n {
        let big = (0..=s.min(n)).filter(|&a| s - a <= n).any(|a| shifted_coefficient(m, z, a, s - a).norm() > tol);
        if big {
            return s.max(2);
        }
    }
    2 * n + 1
}

/// Moves `z` onto a zero of order at least `order` by Gauss-Newton on the Taylor coefficients
/// of total degree `order - 1`, which vanish linearly there even when `P` itself is very flat.
fn polish_zero(m: &CMatrix, mut z: C64, order: usize) -> C64 {
    let n = m.nrows() - 1;
    let s = order - 1;
    for _ in 0..60 {
        let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for a in 0..=s.min(n) {
            let b = s - a;
            if b > n {
                continue;
            }
            let r = shifted_coefficient(m, z, a, b);
            let ja = if a < n { shifted_coefficient(m, z, a + 1, b) * (a + 1) as f64 } else { C64::new(0.0, 0.0) };
            let jb = if b < n { shifted_coefficient(m, z, a, b + 1) * (b + 1) as f64 } else { C64::new(0.0, 0.0) };
            // r + ja conj(delta) + jb delta = 0 with delta = x + i y.
            let cx = ja + jb;
            let cy = (jb - ja) * C64::new(0.0, 1.0);
            for (ux, uy, rr) in [(cx.re, cy.re, r.re), (cx.im, cy.im, r.im)] {
                a11 += ux * ux;
                a12 += ux * uy;
                a22 += uy * uy;
                b1 -= ux * rr;
                b2 -= uy * rr;
            }
        }
        let reg = 1e-14 * (a11 + a22).max(f64::MIN_POSITIVE);
        let det = (a11 + reg) * (a22 + reg) - a12 * a12;
        if !(det > 0.0) {
            break;
        }
        let dx = ((a22 + reg) * b1 - a12 * b2) / det;
        let dy = ((a11 + reg) * b2 - a12 * b1) / det;
        z += C64::new(dx, dy);
        if dx.hypot(dy) <= 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

/// Greedy clustering that keeps the point of smallest `|value|` in each `radius` ball.
fn cluster_by_value(mut points: Vec<(C64, f64)>, radius: f64) -> Vec<C64> {
    points.sort_by(|a, b| a.1.abs().total_cmp(&b.1.abs()));
    let mut out: Vec<C64> = Vec::new();
    for (z, _) in points {
        if !out.iter().any(|q| (q - z).norm() <= radius) {
            out.push(z);
        }
    }
    out
}

fn dedupe(points: &mut Vec<C64>, tol: f64) {
    let mut out: Vec<C64> = Vec::new();
    for p in points.drain(..) {
        if !out.iter().any(|q| (q - p).norm() <= tol) {
            out.push(p);
        }
    }
    *points = out;
}

/// Facial-reduction extremality test for a Wigner-positive state.
///
/// A direction `H` keeping `rho +- eps H` inside the Wigner-positive states must live on the
/// range of `rho` and its polynomial part must vanish to the same order as that of `rho` at
/// every zero. If only `H = 0` survives these linear constraints the state is extreme;
/// otherwise a surviving direction is validated by certifying both endpoints.
pub fn extremality_certificate(a: &FockOperator, cfg: &ExtremalityConfig) -> ExtremalityReport {
    let n = top_index(a);
    let rho = a.truncated(n);
    let spec = rho.eigendecompose();
    let lam_max = spec.eigenvalues.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let range: Vec<usize> = (0..rho.side()).filter(|&i| spec.eigenvalues[i] > cfg.rank_tol * lam_max.max(1e-300)).collect();
    let r = range.len();
    let v = CMatrix::from_fn(rho.side(), r, |row, c| spec.eigenvectors[(row, range[c])]);

    let p = monomial_matrix(&rho);
    let pscale = p.entries().iter().fold(0.0f64, |acc, z| acc.max(z.norm())).max(1e-300);

    // Zero set of the polynomial part.
    let mut zeros: Vec<C64> = Vec::new();
    let mut zero_route = "grid_refine".to_string();
    let mut radial_done = false;
    if rho.is_phase_invariant(cfg.certify.phase_tol) {
        if let Ok(poly) = radial_polynomial(&rho) {
            if let Ok(roots) = real_roots_nonneg(&poly, ROOT_TOL) {
                zero_route = "radial".into();
                radial_done = true;
                let samples = 4 * n + 4;
                for (t, _) in roots {
                    if t == 0.0 {
                        zeros.push(C64::new(0.0, 0.0));
                    } else {
                        for j in 0..samples {
                            zeros.push(C64::from_polar(t.sqrt(), 2.0 * PI * (j as f64 + 0.25) / samples as f64));
                        }
                    }
                }
            }
        }
    }
    if !radial_done {
        let scan = scan_minima(&p, &cfg.certify);
        let mut candidates: Vec<(C64, f64)> = Vec::new();
        for pt in scan.ray_minima.iter().chain(scan.refined.iter()) {
            if pt.value.abs() <= cfg.zero_tol && pt.alpha.norm().is_finite() {
                candidates.push((pt.alpha, pt.value));
            }
        }
        // A ray can meet several zeros; its global minimum only reports one of them, so every
        // near-zero local minimum along every ray is refined as well.
        let angles = cfg.certify.angles;
        let extra: Vec<(C64, f64)> = (0..angles)
            .into_par_iter()
            .flat_map_iter(|j| {
                let th = 2.0 * PI * j as f64 / angles as f64;
                let f = p.ray_polynomial(th);
                halfline_local_minima(&f)
                    .into_iter()
                    .filter(|(r, v)| r.is_finite() && *v > cfg.zero_tol && *v <= 1e-3 * pscale)
                    .map(move |(r, _)| C64::from_polar(r, th))
                    .collect::<Vec<_>>()
            })
            .map(|seed| newton_refine(&p, seed, cfg.certify.grad_tol, cfg.certify.max_newton))
            .filter(|pt| pt.value.abs() <= cfg.zero_tol)
            .map(|pt| (pt.alpha, pt.value))
            .collect();
        candidates.extend(extra);
        // Near a zero of order four or more, |P| stays below the zero threshold over a whole
        // neighbourhood, so candidates are clustered and each representative is pulled onto
        // the zero before its order is measured.
        let order_thr = cfg.order_tol * pscale;
        for z in cluster_by_value(candidates, ZERO_CLUSTER_RADIUS) {
            let mut z = z;
            let mut o = vanishing_order(&p, z, order_thr);
            while o >= 3 && o <= 2 * n {
                let moved = polish_zero(p.entries(), z, o);
                if p.eval(moved).abs() > cfg.zero_tol {
                    break;
                }
                z = moved;
                let o2 = vanishing_order(&p, z, order_thr);
                if o2 <= o {
                    break;
                }
                o = o2;
            }
            zeros.push(z);
        }
        dedupe(&mut zeros, 1e-6);
    }
    let orders: Vec<usize> = zeros.iter().map(|&z| vanishing_order(&p, z, cfg.order_tol * pscale)).collect();

    // Basis of Hermitian directions on the range of rho.
    let mut basis: Vec<CMatrix> = Vec::with_capacity(r * r);
    for i in 0..r {
        for j in i..r {
            let mut x = CMatrix::zeros(r, r);
            if i == j {
                x[(i, i)] = C64::new(1.0, 0.0);
                basis.push(x);
            } else {
                x[(i, j)] = C64::new(1.0, 0.0);
                x[(j, i)] = C64::new(1.0, 0.0);
                basis.push(x.clone());
                x[(i, j)] = C64::new(0.0, 1.0);
                x[(j, i)] = C64::new(0.0, -1.0);
                basis.push(x);
            }
        }
    }
    let dirs: Vec<FockOperator> = basis.iter().map(|x| FockOperator::from_hermitian_parts(&v * x * v.adjoint())).collect();
    let monos: Vec<MonomialMatrix> = dirs.iter().map(monomial_matrix).collect();

    let mut rows: Vec<Vec<f64>> = vec![dirs.iter().map(|h| h.trace()).collect()];
    for (z, &o) in zeros.iter().zip(&orders) {
        for s in 0..o {
            for a_ in 0..=s.min(n) {
                let b_ = s - a_;
                if b_ > n || a_ > b_ {
                    continue;
                }
                let vals: Vec<C64> = monos.iter().map(|m| shifted_coefficient(m.entries(), *z, a_, b_)).collect();
                rows.push(vals.iter().map(|c| c.re).collect());
                if a_ != b_ {
                    rows.push(vals.iter().map(|c| c.im).collect());
                }
            }
        }
    }
    let unknowns = dirs.len();
    let mut gram = DMatrix::<f64>::zeros(unknowns, unknowns);
    let mut used_rows = 0;
    for row in &rows {
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= 1e-14 {
            continue;
        }
        used_rows += 1;
        for i in 0..unknowns {
            for j in 0..unknowns {
                gram[(i, j)] += row[i] * row[j] / (norm * norm);
            }
        }
    }
    let eig = SymmetricEigen::new(gram);
    let gmax = eig.eigenvalues.iter().fold(0.0f64, |acc, x| acc.max(x.abs())).max(1e-300);
    let null: Vec<usize> = (0..unknowns).filter(|&i| eig.eigenvalues[i] <= cfg.null_tol * cfg.null_tol * gmax).collect();

    let mut summary = ConstraintSummary {
        working_dim: n,
        rank: r,
        kernel_dim: rho.side() - r,
        zero_points: zeros.iter().map(|z| [z.re, z.im]).collect(),
        zero_orders: orders,
        rows: used_rows,
        unknowns,
        nullity: null.len(),
        zero_route,
    };
    if null.is_empty() {
        return ExtremalityReport { verdict: ExtremalityVerdict::CertifiedExtreme, perturbation: None, epsilon: None, constraints_used: summary };
    }

    // Candidate directions: each null vector and their sum.
    let mut candidates: Vec<Vec<f64>> = null.iter().map(|&i| eig.eigenvectors.column(i).iter().copied().collect()).collect();
    if candidates.len() > 1 {
        let sum: Vec<f64> = (0..unknowns).map(|k| candidates.iter().map(|c| c[k]).sum()).collect();
        candidates.push(sum);
    }
    for coeffs in candidates {
        let mut h = FockOperator::zeros(n);
        for (c, d) in coeffs.iter().zip(&dirs) {
            h = h.add(&d.scale(*c));
        }
        let norm = h.frobenius_norm();
        if norm <= 1e-12 {
            continue;
        }
        let h = h.scale(1.0 / norm);
        for &eps in &cfg.eps_grid {
            let plus = rho.add(&h.scale(eps));
            let minus = rho.sub(&h.scale(eps));
            // A direction that misses the vanishing order at a zero dips only to about
            // -eps^(order) there, so endpoints are held to a tolerance near rounding level.
            let strict = CertifyConfig { tol: cfg.endpoint_tol, ..cfg.certify.clone() };
            let ok = [&plus, &minus].iter().all(|x| x.is_psd(1e-12) && certify_wigner(x, &strict).verdict.is_positive());
            if ok {
                summary.nullity = null.len();
                return ExtremalityReport {
                    verdict: ExtremalityVerdict::NotExtreme,
                    perturbation: Some(h),
                    epsilon: Some(eps),
                    constraints_used: summary,
                };
            }
        }
    }
    ExtremalityReport { verdict: ExtremalityVerdict::Inconclusive, perturbation: None, epsilon: None, constraints_used: summary }
}

/// How the Vertigo parameter of the generation pipeline is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum TChoice {
    /// `1.05 * max(t0, 1)` from [`find_t0`].
    Auto,
    Fixed(f64),
}

/// Optional last step of the pipeline: an exact rotation followed by padded Gaussian unitaries.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianStep {
    pub theta: f64,
    pub alpha: C64,
    pub xi: C64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProvenanceStep {
    pub step: String,
    pub params: serde_json::Value,
}

#[derive(Clone, Debug)]
pub struct GeneratedState {
    pub operator: FockOperator,
    pub t_used: f64,
    pub log: Vec<ProvenanceStep>,
}

/// Tolerance handed to [`find_t0`] by the automatic choice of `t`.
pub const GENERATE_T0_TOL: f64 = 1e-12;
/// Largest Vertigo parameter the automatic choice will consider.
pub const GENERATE_T_MAX: f64 = 1e8;

/// Extreme radial quasi-state, pushed into the state cone by the Vertigo map, then moved along
/// a Fock-bounded displacement orbit and optionally by a Gaussian unitary.
pub fn generate_extreme_wps(spec: &ExtremeRadialSpec, t: TChoice, beta: C64, gaussian: Option<GaussianStep>) -> Result<GeneratedState> {
    let m = spec.degree();
    let mut log = Vec::new();
    let a = extreme_radial_quasistate(spec, m)?;
    log.push(ProvenanceStep {
        step: "extreme_radial_quasistate".into(),
        params: serde_json::json!({ "k": spec.k, "lambdas": spec.lambdas, "ambient": m }),
    });
    let t_used = match t {
        TChoice::Fixed(v) => v,
        TChoice::Auto => {
            let t0 = find_t0(&a, GENERATE_T_MAX, GENERATE_T0_TOL)?;
            log.push(ProvenanceStep { step: "find_t0".into(), params: serde_json::json!({ "t0": t0, "tol": GENERATE_T0_TOL }) });
            1.05 * t0.max(1.0)
        }
    };
    let mut op = vertigo_norm(&a, t_used)?;
    log.push(ProvenanceStep { step: "vertigo_norm".into(), params: serde_json::json!({ "t": t_used }) });
    if beta != C64::new(0.0, 0.0) {
        op = fock_displacement_norm(&op, beta)?;
        log.push(ProvenanceStep { step: "fock_displacement_norm".into(), params: serde_json::json!({ "beta": [beta.re, beta.im] }) });
    }
    if let Some(g) = gaussian {
        if g.theta != 0.0 {
            op = rotation(&op, g.theta);
            log.push(ProvenanceStep { step: "rotation".into(), params: serde_json::json!({ "theta": g.theta }) });
        }
        if g.alpha != C64::new(0.0, 0.0) {
            let out = gaussian_displace(&op, g.alpha, None, DEFAULT_TAIL_BOUND)?;
            op = out.operator;
            log.push(ProvenanceStep {
                step: "gaussian_displace".into(),
                params: serde_json::json!({ "alpha": [g.alpha.re, g.alpha.im], "tail_norm": out.tail_norm }),
            });
        }
        if g.xi != C64::new(0.0, 0.0) {
            let out = gaussian_squeeze(&op, g.xi, None, DEFAULT_TAIL_BOUND)?;
            op = out.operator;
            log.push(ProvenanceStep {
                step: "gaussian_squeeze".into(),
                params: serde_json::json!({ "xi": [g.xi.re, g.xi.im], "tail_norm": out.tail_norm }),
            });
        }
    }
    Ok(GeneratedState { operator: op, t_used, log })
}

/// Largest overlap `<n|rho|n>` over Wigner-positive states, `2^-n C(n, floor(n/2))`, with the
/// beam-splitter state that attains it.
pub fn max_fock_fidelity(n: usize) -> (f64, FockOperator) {
    let value = binomial(n, n / 2) / 2f64.powi(n as i32);
    (value, bs_state_fock(n - n / 2, n / 2))
}
