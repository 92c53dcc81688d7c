//! Serialization formats and figure-data reproduction shared by the command-line tool.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, WigxError};
use crate::extremes::{vertigo_trajectory, TrajectoryRecord};
use crate::fock_core::{CMatrix, FockOperator, C64};
use crate::polynomials::ExtremeRadialSpec;
use crate::positivity::CertifyConfig;
use crate::state_zoo::{bs_state_fock, extreme_radial_quasistate};

pub const SCHEMA_VERSION: &str = "wigx-operator/1";

/// On-disk JSON form of a [`FockOperator`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorDocument {
    pub schema_version: String,
    pub dim: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl OperatorDocument {
    pub fn from_operator(a: &FockOperator, metadata: BTreeMap<String, serde_json::Value>) -> Self {
        let e = a.entries();
        let matrix = (0..a.side()).map(|i| (0..a.side()).map(|j| [e[(i, j)].re, e[(i, j)].im]).collect()).collect();
        Self { schema_version: SCHEMA_VERSION.to_string(), dim: a.dim(), matrix, metadata }
    }

    pub fn to_operator(&self) -> Result<FockOperator> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(WigxError::Parse(format!("unsupported schema_version {:?}", self.schema_version)));
        }
        let side = self.dim + 1;
        if self.matrix.len() != side || self.matrix.iter().any(|r| r.len() != side) {
            return Err(WigxError::DimensionMismatch { expected: side, found: self.matrix.len() });
        }
        let m = CMatrix::from_fn(side, side, |i, j| C64::new(self.matrix[i][j][0], self.matrix[i][j][1]));
        FockOperator::new(self.dim, m)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| WigxError::Parse(e.to_string()))
    }
}

pub fn write_operator(path: &Path, a: &FockOperator, metadata: BTreeMap<String, serde_json::Value>) -> Result<()> {
    fs::write(path, OperatorDocument::from_operator(a, metadata).to_json()?)?;
    Ok(())
}

pub fn read_operator(path: &Path) -> Result<FockOperator> {
    OperatorDocument::from_json(&fs::read_to_string(path)?)?.to_operator()
}

/// Parses `k:K;lambdas:L1,L2,...` (the lambda list may be empty).
pub fn parse_spec(s: &str) -> Result<ExtremeRadialSpec> {
    let mut k = None;
    let mut lambdas = Vec::new();
    for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, val) = part.split_once(':').ok_or_else(|| WigxError::Parse(format!("expected key:value in {part:?}")))?;
        match key.trim() {
            "k" => k = Some(val.trim().parse::<usize>().map_err(|e| WigxError::Parse(format!("k: {e}")))?),
            "lambdas" => {
                for v in val.split(',').map(str::trim).filter(|v| !v.is_empty()) {
                    lambdas.push(v.parse::<f64>().map_err(|e| WigxError::Parse(format!("lambda {v:?}: {e}")))?);
                }
            }
            other => return Err(WigxError::Parse(format!("unknown spec key {other:?}"))),
        }
    }
    let spec = ExtremeRadialSpec::new(k.ok_or_else(|| WigxError::Parse("missing k".into()))?, lambdas);
    spec.validate()?;
    Ok(spec)
}

/// Parses `RE,IM` (or a single real number).
pub fn parse_complex(s: &str) -> Result<C64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |x: &str| x.parse::<f64>().map_err(|e| WigxError::Parse(format!("{x:?}: {e}")));
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(WigxError::Parse(format!("expected RE,IM, got {s:?}"))),
    }
}

pub fn linear_grid(a: f64, b: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![a];
    }
    (0..steps).map(|i| a + (b - a) * i as f64 / (steps - 1) as f64).collect()
}

pub fn log_grid(a: f64, b: f64, steps: usize) -> Vec<f64> {
    linear_grid(a.ln(), b.ln(), steps).into_iter().map(f64::exp).collect()
}

/// Diagonal populations followed by real and imaginary parts of the upper off-diagonals.
pub fn default_coordinates(a: &FockOperator) -> Vec<f64> {
    let mut out = a.diagonal();
    let e = a.entries();
    for i in 0..a.side() {
        for j in i + 1..a.side() {
            out.push(e[(i, j)].re);
            out.push(e[(i, j)].im);
        }
    }
    out
}

fn num(x: f64) -> String {
    format!("{x:.11e}")
}

/// Renders a trajectory as CSV with columns `t,coord1..coordK,min_eig,wigner_min,is_state,is_wps`.
pub fn trajectory_csv(record: &TrajectoryRecord, coords: &dyn Fn(&FockOperator) -> Vec<f64>) -> Result<String> {
    if record.t_values.is_empty() {
        return Err(WigxError::InvalidInput("empty trajectory".into()));
    }
    let rows: Vec<Vec<f64>> = record.operators.iter().map(|op| coords(op)).collect();
    let width = rows[0].len();
    let mut out = String::from("t");
    for i in 1..=width {
        write!(out, ",coord{i}").unwrap();
    }
    out.push_str(",min_eig,wigner_min,is_state,is_wps\n");
    for (i, row) in rows.iter().enumerate() {
        out.push_str(&num(record.t_values[i]));
        for c in row {
            out.push(',');
            out.push_str(&num(*c));
        }
        writeln!(
            out,
            ",{},{},{},{}",
            num(record.min_eigenvalues[i]),
            num(record.wigner_min[i]),
            record.is_state[i],
            record.is_wps[i]
        )
        .unwrap();
    }
    Ok(out)
}

/// Bloch-slice state `r |psi(theta)><psi(theta)| + (1 - r) I/2` on span{|0>, |1>}.
pub fn bloch_slice_state(r: f64, theta: f64) -> FockOperator {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let m = CMatrix::from_fn(2, 2, |i, j| {
        let psi = [c, s];
        C64::new(r * psi[i] * psi[j] + if i == j { (1.0 - r) / 2.0 } else { 0.0 }, 0.0)
    });
    FockOperator::from_hermitian_parts(m)
}

/// Inverse of [`bloch_slice_state`]: `(r, theta)` of the real part of a qubit operator.
pub fn bloch_slice_coordinates(a: &FockOperator) -> Vec<f64> {
    let z = a.entry(0, 0).re - a.entry(1, 1).re;
    let x = 2.0 * a.entry(0, 1).re;
    vec![(x * x + z * z).sqrt(), x.atan2(z)]
}

/// Starting points of the Bloch-slice trajectories, as `(r, theta)`.
pub fn fig5_starts() -> Vec<(f64, f64)> {
    let mut v = Vec::new();
    for &r in &[0.25, 0.5, 0.75, 1.0] {
        for j in 1..=6 {
            v.push((r, PI * j as f64 / 6.0));
        }
    }
    v
}

pub const FIG5_T_RANGE: (f64, f64, usize) = (0.55, 100.0, 120);
pub const FIG7_T_RANGE: (f64, f64, usize) = (1e-2, 1e2, 121);

fn write_csv(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::write(dir.join(name), contents)?;
    Ok(())
}

/// Writes the Bloch-slice trajectory datasets; returns the file names written.
pub fn reproduce_fig5(dir: &Path, cfg: &CertifyConfig) -> Result<Vec<String>> {
    fs::create_dir_all(dir)?;
    let (a, b, k) = FIG5_T_RANGE;
    let grid = log_grid(a, b, k);
    let mut index = String::from("file,r,theta\n");
    let mut names = Vec::new();
    for (i, (r, theta)) in fig5_starts().into_iter().enumerate() {
        let rec = vertigo_trajectory(&bloch_slice_state(r, theta), &grid, cfg)?;
        let name = format!("trajectory_{i:02}.csv");
        write_csv(dir, &name, &trajectory_csv(&rec, &bloch_slice_coordinates)?)?;
        writeln!(index, "{name},{},{}", num(r), num(theta)).unwrap();
        names.push(name);
    }
    write_csv(dir, "index.csv", &index)?;
    names.push("index.csv".into());
    Ok(names)
}

/// `(p1, p2)` populations of a diagonal operator on span{|0>, |1>, |2>}.
pub fn populations_12(a: &FockOperator) -> Vec<f64> {
    vec![a.entry(1, 1).re, a.entry(2, 2).re]
}

/// Points `(lambda, p1, p2)` on the curved part of the boundary of the phase-invariant
/// Wigner-positive quasi-states over {|0>, |1>, |2>}, traced by the extreme quasi-states with
/// a double root at `lambda`.
pub fn fig7_boundary(samples: usize) -> Result<Vec<[f64; 3]>> {
    log_grid(1e-3, 1e3, samples)
        .into_iter()
        .map(|l| {
            let op = extreme_radial_quasistate(&ExtremeRadialSpec::new(0, vec![l]), 2)?;
            Ok([l, op.entry(1, 1).re, op.entry(2, 2).re])
        })
        .collect()
}

/// Writes the population-plane datasets; returns the file names written.
pub fn reproduce_fig7(dir: &Path, cfg: &CertifyConfig) -> Result<Vec<String>> {
    fs::create_dir_all(dir)?;
    let (a, b, k) = FIG7_T_RANGE;
    let grid = log_grid(a, b, k);
    let mut names = Vec::new();
    let mut emit = |name: &str, start: &FockOperator| -> Result<()> {
        let rec = vertigo_trajectory(&start.padded(2), &grid, cfg)?;
        write_csv(dir, name, &trajectory_csv(&rec, &populations_12)?)?;
        names.push(name.to_string());
        Ok(())
    };
    emit("sigma11_trajectory.csv", &bs_state_fock(1, 1))?;
    emit("fixed_sigma00.csv", &bs_state_fock(0, 0))?;
    emit("fixed_sigma10.csv", &bs_state_fock(1, 0))?;
    emit("fixed_sigma20.csv", &bs_state_fock(2, 0))?;
    let mut boundary = String::from("lambda,p1,p2\n");
    for [l, p1, p2] in fig7_boundary(200)? {
        writeln!(boundary, "{},{},{}", num(l), num(p1), num(p2)).unwrap();
    }
    write_csv(dir, "boundary.csv", &boundary)?;
    names.push("boundary.csv".into());
    Ok(names)
}

/// Reads a CSV produced by [`trajectory_csv`] back into columns keyed by header name.
pub fn read_csv_columns(text: &str) -> Result<BTreeMap<String, Vec<String>>> {
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().ok_or_else(|| WigxError::Parse("empty csv".into()))?.split(',').map(String::from).collect();
    let mut cols: BTreeMap<String, Vec<String>> = header.iter().map(|h| (h.clone(), Vec::new())).collect();
    for line in lines.filter(|l| !l.is_empty()) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(WigxError::Parse(format!("row has {} fields, header has {}", fields.len(), header.len())));
        }
        for (h, f) in header.iter().zip(fields) {
            cols.get_mut(h).unwrap().push(f.to_string());
        }
    }
    Ok(cols)
}
