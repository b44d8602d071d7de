//! Incremental Cholesky factorization of the regularized kernel matrix,
//! triangular solves, and an independent dense direct solver.
//!
//! The incremental factor grows one row per greedy iteration; the leading
//! principal submatrix of `L` is always the factor of the corresponding
//! leading principal submatrix of `A + lambda I`. The dense path
//! ([`solve_regularized`], [`DenseCholesky`]) re-factorizes from scratch and
//! is used as the oracle the incremental path is checked against.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::kernels::KernelSpec;

/// Relative pivot threshold: appending a row fails when the new squared
/// diagonal falls at or below `PIVOT_REL * phi(0)`. On the squared power
/// scale this sits two orders below the usual greedy stopping tolerance of
/// 1e-16, so the factorization gives out only after the selection has.
pub const PIVOT_REL: f64 = 1e-14;

/// Growable dense Cholesky factor of `A + lambda I`, stored packed
/// row-major (row `k` holds `k + 1` entries).
#[derive(Debug, Clone)]
pub struct IncrementalCholesky {
    data: Vec<f64>,
    n: usize,
    lambda: f64,
    pivot_threshold: f64,
}

impl IncrementalCholesky {
    pub fn new(lambda: f64, pivot_threshold: f64) -> Self {
        Self { data: Vec::new(), n: 0, lambda, pivot_threshold }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Entry `L[i][j]` for `j <= i`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        debug_assert!(j <= i && i < self.n);
        self.data[i * (i + 1) / 2 + j]
    }

    /// Grow the factor by one point. `new_row` holds the regularized-kernel
    /// values between the new point and the existing ones; `new_diag` is
    /// `K(x, x) + lambda`. Returns the new diagonal entry of `L`.
    ///
    /// Fails with [`Error::NotPositiveDefinite`] when the pivot
    /// `new_diag - ||l||^2` drops to the threshold, which signals an
    /// exhausted basis.
    pub fn append(&mut self, new_row: &[f64], new_diag: f64) -> Result<f64> {
        if new_row.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: new_row.len() });
        }
        let l = self.forward_sub(new_row);
        let pivot = new_diag - l.iter().map(|v| v * v).sum::<f64>();
        if pivot <= self.pivot_threshold {
            return Err(Error::NotPositiveDefinite);
        }
        let diag = pivot.sqrt();
        self.data.extend_from_slice(&l);
        self.data.push(diag);
        self.n += 1;
        Ok(diag)
    }

    /// Solve `L y = b`.
    pub fn solve_lower(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: b.len() });
        }
        tri_solve(&self.data, self.n, b, false)
    }

    /// Solve `L^T y = b`.
    pub fn solve_transposed(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: b.len() });
        }
        tri_solve(&self.data, self.n, b, true)
    }

    fn forward_sub(&self, b: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let row = &self.data[i * (i + 1) / 2..];
            let s: f64 = (0..i).map(|j| row[j] * y[j]).sum();
            y[i] = (b[i] - s) / row[i];
        }
        y
    }
}

/// Solve `L y = b` (or `L^T y = b` when `transposed`) against a packed
/// row-major lower-triangular factor of size `n`.
pub fn tri_solve(l: &[f64], n: usize, b: &[f64], transposed: bool) -> Result<Vec<f64>> {
    debug_assert!(l.len() >= n * (n + 1) / 2);
    debug_assert_eq!(b.len(), n);
    for i in 0..n {
        if l[i * (i + 1) / 2 + i] == 0.0 {
            return Err(Error::SingularFactor);
        }
    }
    let mut y = vec![0.0; n];
    if !transposed {
        for i in 0..n {
            let row = &l[i * (i + 1) / 2..];
            let s: f64 = (0..i).map(|j| row[j] * y[j]).sum();
            y[i] = (b[i] - s) / row[i];
        }
    } else {
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|j| l[j * (j + 1) / 2 + i] * y[j]).sum();
            y[i] = (b[i] - s) / l[i * (i + 1) / 2 + i];
        }
    }
    Ok(y)
}

/// From-scratch dense Cholesky of a symmetric positive definite matrix.
/// This is the oracle route; it shares no code with the incremental factor.
pub struct DenseCholesky {
    inner: Cholesky<f64, Dyn>,
    n: usize,
}

impl DenseCholesky {
    pub fn factor(a: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        let inner = Cholesky::new(a).ok_or(Error::NotPositiveDefinite)?;
        Ok(Self { inner, n })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: b.len() });
        }
        let x = self.inner.solve(&DVector::from_column_slice(b));
        Ok(x.as_slice().to_vec())
    }

    /// The lower-triangular factor, for cross-checks against the
    /// incremental path.
    pub fn lower(&self) -> DMatrix<f64> {
        self.inner.l()
    }
}

/// Direct dense solve of `(A + lambda I) alpha = b` on the given points.
/// Fresh factorization, no incremental state.
pub fn solve_regularized(spec: &KernelSpec, pts: &PointSet, b: &[f64]) -> Result<Vec<f64>> {
    if pts.dim() != spec.dim {
        return Err(Error::DimensionMismatch { expected: spec.dim, got: pts.dim() });
    }
    if b.len() != pts.len() {
        return Err(Error::DimensionMismatch { expected: pts.len(), got: b.len() });
    }
    let a = spec.matrix(pts.coords(), true)?;
    DenseCholesky::factor(a)?.solve(b)
}
