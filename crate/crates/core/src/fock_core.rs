//! Fock-truncated operator algebra.
//!
//! A [`FockOperator`] is a Hermitian matrix on `span{|0>, ..., |n>}`. States and quasi-states
//! share this type; which of the two an operator is gets decided by the checks in this
//! module and in [`crate::positivity`].

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Result, WigxError};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Relative anti-Hermitian residual that is silently repaired on construction.
pub const HERMITIAN_REPAIR_TOL: f64 = 1e-9;

/// Traces below this magnitude are treated as vanishing by the normalized maps.
pub const VANISHING_TRACE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    dim: usize,
    entries: CMatrix,
    trace_cached: f64,
}

/// Eigen-decomposition with eigenvalues in ascending order and eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl Spectrum {
    /// Rebuilds `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> CMatrix {
        let lam = DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&x| C64::new(x, 0.0)),
        );
        &self.eigenvectors * DMatrix::from_diagonal(&lam) * self.eigenvectors.adjoint()
    }
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).map(|z| z * 0.5)
}

fn real_trace(m: &CMatrix) -> f64 {
    (0..m.nrows()).map(|i| m[(i, i)].re).sum()
}

impl FockOperator {
    /// Builds an operator on `H^dim` from a `(dim+1) x (dim+1)` matrix.
    ///
    /// Roundoff-level anti-Hermitian parts are removed by symmetrization; anything larger is
    /// rejected.
    pub fn new(dim: usize, entries: CMatrix) -> Result<Self> {
        if entries.nrows() != dim + 1 || entries.ncols() != dim + 1 {
            return Err(WigxError::DimensionMismatch {
                expected: dim + 1,
                found: if entries.nrows() != dim + 1 { entries.nrows() } else { entries.ncols() },
            });
        }
        let scale = max_abs(&entries);
        let residual = if scale > 0.0 {
            max_abs(&(&entries - entries.adjoint())) / scale
        } else {
            0.0
        };
        if residual > HERMITIAN_REPAIR_TOL {
            return Err(WigxError::NonHermitian { residual });
        }
        Ok(Self::from_hermitian_parts(entries))
    }

    /// Same as [`FockOperator::new`] with the dimension read off the matrix.
    pub fn from_matrix(entries: CMatrix) -> Result<Self> {
        if entries.nrows() == 0 || entries.nrows() != entries.ncols() {
            return Err(WigxError::DimensionMismatch {
                expected: entries.nrows().max(1),
                found: entries.ncols(),
            });
        }
        Self::new(entries.nrows() - 1, entries)
    }

    /// Internal constructor for maps that preserve Hermiticity analytically.
    pub(crate) fn from_hermitian_parts(entries: CMatrix) -> Self {
        let entries = hermitize(&entries);
        let dim = entries.nrows() - 1;
        let trace_cached = real_trace(&entries);
        Self { dim, entries, trace_cached }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_hermitian_parts(CMatrix::zeros(dim + 1, dim + 1))
    }

    /// `|n><n|` embedded in `H^dim` (with `dim >= n`).
    pub fn fock_projector(n: usize, dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim.max(n) + 1, dim.max(n) + 1);
        m[(n, n)] = C64::new(1.0, 0.0);
        Self::from_hermitian_parts(m)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        assert!(!diag.is_empty(), "diagonal must have at least one entry");
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&x| C64::new(x, 0.0)));
        Self::from_hermitian_parts(DMatrix::from_diagonal(&d))
    }

    /// `|psi><psi|` for an amplitude vector (not renormalized).
    pub fn from_pure(amplitudes: &DVector<C64>) -> Self {
        Self::from_hermitian_parts(amplitudes * amplitudes.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> usize {
        self.dim + 1
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// Matrix element `<k|A|l>`, zero outside the stored block.
    pub fn entry(&self, k: usize, l: usize) -> C64 {
        if k <= self.dim && l <= self.dim {
            self.entries[(k, l)]
        } else {
            C64::new(0.0, 0.0)
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..=self.dim).map(|k| self.entries[(k, k)].re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.trace_cached
    }

    /// Embeds into `H^dim` by zero padding. Requests below the current dimension are ignored.
    pub fn padded(&self, dim: usize) -> Self {
        if dim <= self.dim {
            return self.clone();
        }
        let mut m = CMatrix::zeros(dim + 1, dim + 1);
        m.view_mut((0, 0), (self.side(), self.side())).copy_from(&self.entries);
        Self { dim, entries: m, trace_cached: self.trace_cached }
    }

    /// Keeps the block on `H^dim`, discarding higher Fock levels.
    pub fn truncated(&self, dim: usize) -> Self {
        if dim >= self.dim {
            return self.clone();
        }
        Self::from_hermitian_parts(self.entries.view((0, 0), (dim + 1, dim + 1)).into_owned())
    }

    fn pair(&self, other: &Self) -> (CMatrix, CMatrix) {
        let d = self.dim.max(other.dim);
        (self.padded(d).entries, other.padded(d).entries)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.pair(other);
        Self::from_hermitian_parts(a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b) = self.pair(other);
        Self::from_hermitian_parts(a - b)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_hermitian_parts(self.entries.map(|z| z * c))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_hermitian_parts(self.entries.adjoint())
    }

    /// Hilbert-Schmidt inner product `Tr[A B^dagger]`.
    pub fn hs_inner(&self, other: &Self) -> C64 {
        let (a, b) = self.pair(other);
        a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
    }

    /// Divides by the trace.
    pub fn normalized(&self) -> Result<Self> {
        let tr = self.trace();
        if tr.abs() <= VANISHING_TRACE {
            return Err(WigxError::VanishingTrace { trace: tr });
        }
        Ok(self.scale(1.0 / tr))
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.entries)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eigendecompose(&self) -> Spectrum {
        let eig = SymmetricEigen::new(self.entries.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let eigenvectors = CMatrix::from_fn(self.side(), self.side(), |r, c| eig.eigenvectors[(r, order[c])]);
        Spectrum { eigenvalues, eigenvectors }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigendecompose().eigenvalues
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Operator norm, i.e. the largest eigenvalue magnitude.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues().iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    /// Minimum eigenvalue at least `-tol * max(1, ||A||)`.
    pub fn is_psd(&self, tol: f64) -> bool {
        let ev = self.eigenvalues();
        let norm = ev.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        ev[0] >= -tol * norm.max(1.0)
    }

    /// Completely dephasing channel: keep the diagonal only.
    pub fn dephase(&self) -> Self {
        let m = CMatrix::from_fn(self.side(), self.side(), |r, c| {
            if r == c { self.entries[(r, c)] } else { C64::new(0.0, 0.0) }
        });
        Self { dim: self.dim, entries: m, trace_cached: self.trace_cached }
    }

    pub fn is_phase_invariant(&self, tol: f64) -> bool {
        self.sub(&self.dephase()).frobenius_norm() <= tol
    }

    /// Smallest `m` such that every row and column beyond `m` is below `tol` in magnitude.
    pub fn support_degree(&self, tol: f64) -> usize {
        (0..=self.dim)
            .rev()
            .find(|&m| (0..=self.dim).any(|j| self.entries[(m, j)].norm() > tol))
            .unwrap_or(0)
    }

    /// `1/2 * ||A - B||_1`, the trace distance.
    pub fn trace_distance(&self, other: &Self) -> f64 {
        0.5 * self.sub(other).eigenvalues().iter().map(|x| x.abs()).sum::<f64>()
    }

    /// Largest entrywise deviation after padding both operands to a common dimension.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }
}
