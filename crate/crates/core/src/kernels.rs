//! Kernel families, pointwise evaluation, kernel rows/matrices, and the
//! regularized kernel `K_lambda(x, y) = K(x, y) + lambda * delta(x, y)`.
//!
//! All families are translation invariant, `K(x, y) = phi(||x - y||_2)`,
//! and scaled so that `phi(0) = 1`:
//!
//! * Gaussian:  `phi(r) = exp(-(eps * r)^2)`
//! * IMQ:       `phi(r) = (1 + (eps * r)^2)^(-1/2)`
//! * Wendland:  `phi_{d,k}(eps * r)`, the compactly supported piecewise
//!   polynomials of smoothness `C^{2k}` with `l = floor(d/2) + k + 1`:
//!
//!   ```text
//!   k=0: (1-r)^l
//!   k=1: (1-r)^(l+1) ((l+1) r + 1)
//!   k=2: (1-r)^(l+2) ((l^2+4l+3) r^2 + (3l+6) r + 3) / 3
//!   k=3: (1-r)^(l+3) ((l^3+9l^2+23l+15) r^3 + (6l^2+36l+45) r^2 + (15l+45) r + 15) / 15
//!   ```
//!
//!   The constant divisors fix `phi(0) = 1`; no SPH-style volume
//!   normalization is applied. Support is `eps * r < 1`, and the functions
//!   return exactly `0.0` outside it.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kernel family. The Wendland variant carries the smoothness index
/// `k in {0, 1, 2, 3}` (smoothness `C^{2k}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelFamily {
    Gaussian,
    Imq,
    Wendland { k: u8 },
}

impl KernelFamily {
    pub fn name(&self) -> &'static str {
        match self {
            KernelFamily::Gaussian => "gaussian",
            KernelFamily::Imq => "imq",
            KernelFamily::Wendland { .. } => "wendland",
        }
    }
}

/// A kernel with shape parameter, input dimension, and regularization
/// strength. Immutable after construction; all evaluations are pure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub family: KernelFamily,
    /// Shape parameter `eps > 0`.
    pub shape: f64,
    /// Input space dimension `d >= 1`.
    pub dim: usize,
    /// Regularization strength `lambda >= 0`.
    pub lambda: f64,
}

impl KernelSpec {
    pub fn new(family: KernelFamily, shape: f64, dim: usize, lambda: f64) -> Result<Self> {
        if !(shape > 0.0) || !shape.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "shape parameter must be positive and finite, got {shape}"
            )));
        }
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lambda must be non-negative and finite, got {lambda}"
            )));
        }
        if let KernelFamily::Wendland { k } = family {
            if k > 3 {
                return Err(Error::InvalidParameter(format!(
                    "Wendland smoothness index must be in 0..=3, got {k}"
                )));
            }
        }
        Ok(Self { family, shape, dim, lambda })
    }

    /// `phi(0) = K(x, x)`, the diagonal value of the unregularized kernel.
    pub fn phi0(&self) -> f64 {
        self.phi_r2(0.0)
    }

    /// Evaluate `K(x, y)`.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.eval_trusted(x, y))
    }

    /// Evaluate `K_lambda(x, y) = K(x, y) + lambda` if `x == y`
    /// coordinate-wise, else `K(x, y)`.
    pub fn eval_lambda(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let mut v = self.eval_trusted(x, y);
        if x == y {
            v += self.lambda;
        }
        Ok(v)
    }

    /// Kernel row `[K(x, x_1), ..., K(x, x_n)]` against a flat row-major
    /// coordinate block. Uses `K`, never `K_lambda`; callers add `lambda` on
    /// coordinate-matching entries explicitly.
    pub fn row(&self, x: &[f64], pts: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        if pts.len() % self.dim != 0 {
            return Err(Error::DimensionMismatch { expected: self.dim, got: pts.len() });
        }
        Ok(pts.chunks_exact(self.dim).map(|p| self.eval_trusted(x, p)).collect())
    }

    /// Kernel matrix `A` (or `A + lambda I` when `regularized`) on pairwise
    /// distinct points given as a flat row-major coordinate block.
    pub fn matrix(&self, pts: &[f64], regularized: bool) -> Result<DMatrix<f64>> {
        if pts.len() % self.dim != 0 {
            return Err(Error::DimensionMismatch { expected: self.dim, got: pts.len() });
        }
        let n = pts.len() / self.dim;
        for i in 0..n {
            for j in (i + 1)..n {
                if point(pts, self.dim, i) == point(pts, self.dim, j) {
                    return Err(Error::DuplicatePoints { first: i, second: j });
                }
            }
        }
        let mut a = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = self.eval_trusted(point(pts, self.dim, i), point(pts, self.dim, j));
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        if regularized {
            for i in 0..n {
                a[(i, i)] += self.lambda;
            }
        }
        Ok(a)
    }

    pub(crate) fn eval_trusted(&self, x: &[f64], y: &[f64]) -> f64 {
        let r2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
        self.phi_r2(r2)
    }

    fn phi_r2(&self, r2: f64) -> f64 {
        let e2 = self.shape * self.shape;
        match self.family {
            KernelFamily::Gaussian => (-e2 * r2).exp(),
            KernelFamily::Imq => 1.0 / (1.0 + e2 * r2).sqrt(),
            KernelFamily::Wendland { k } => wendland(self.wendland_ell(), k, (e2 * r2).sqrt()),
        }
    }

    fn wendland_ell(&self) -> i32 {
        let k = match self.family {
            KernelFamily::Wendland { k } => k as i32,
            _ => 0,
        };
        (self.dim / 2) as i32 + k + 1
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn point(pts: &[f64], dim: usize, i: usize) -> &[f64] {
    &pts[i * dim..(i + 1) * dim]
}

fn wendland(ell: i32, k: u8, r: f64) -> f64 {
    if r >= 1.0 {
        return 0.0;
    }
    let l = ell as f64;
    let omr = 1.0 - r;
    match k {
        0 => omr.powi(ell),
        1 => omr.powi(ell + 1) * ((l + 1.0) * r + 1.0),
        2 => {
            omr.powi(ell + 2) * (((l * l + 4.0 * l + 3.0) * r + (3.0 * l + 6.0)) * r + 3.0) / 3.0
        }
        3 => {
            let c3 = l * l * l + 9.0 * l * l + 23.0 * l + 15.0;
            let c2 = 6.0 * l * l + 36.0 * l + 45.0;
            let c1 = 15.0 * l + 45.0;
            omr.powi(ell + 3) * (((c3 * r + c2) * r + c1) * r + 15.0) / 15.0
        }
        _ => unreachable!("smoothness index validated at construction"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn gaussian(shape: f64, dim: usize, lambda: f64) -> KernelSpec {
        KernelSpec::new(KernelFamily::Gaussian, shape, dim, lambda).unwrap()
    }

    fn all_families() -> Vec<KernelFamily> {
        vec![
            KernelFamily::Gaussian,
            KernelFamily::Imq,
            KernelFamily::Wendland { k: 0 },
            KernelFamily::Wendland { k: 1 },
            KernelFamily::Wendland { k: 2 },
            KernelFamily::Wendland { k: 3 },
        ]
    }

    #[test]
    fn gaussian_diagonal_is_one() {
        let spec = gaussian(4.0, 1, 0.0);
        assert_eq!(spec.eval(&[0.3], &[0.3]).unwrap(), 1.0);
    }

    #[test]
    fn gaussian_direct_formula() {
        let spec = gaussian(1.0, 1, 0.0);
        assert_relative_eq!(
            spec.eval(&[0.0], &[1.0]).unwrap(),
            (-1.0f64).exp(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn wendland_compact_support_is_exact_zero() {
        for k in 0..=3u8 {
            let spec = KernelSpec::new(KernelFamily::Wendland { k }, 1.0, 2, 0.0).unwrap();
            assert_eq!(spec.eval(&[0.0, 0.0], &[2.0, 0.0]).unwrap(), 0.0);
            // boundary of the support is already outside
            assert_eq!(spec.eval(&[0.0, 0.0], &[1.0, 0.0]).unwrap(), 0.0);
        }
    }

    #[test]
    fn wendland_diagonal_is_one() {
        for k in 0..=3u8 {
            for dim in 1..=3usize {
                let spec = KernelSpec::new(KernelFamily::Wendland { k }, 1.5, dim, 0.0).unwrap();
                let x = vec![0.25; dim];
                assert_relative_eq!(spec.eval(&x, &x).unwrap(), 1.0, max_relative = 1e-15);
                assert_relative_eq!(spec.phi0(), 1.0, max_relative = 1e-15);
            }
        }
    }

    #[test]
    fn lambda_diagonal_shift() {
        let spec = gaussian(1.0, 1, 0.1);
        assert_relative_eq!(
            spec.eval_lambda(&[0.5], &[0.5]).unwrap(),
            1.1,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            spec.eval_lambda(&[0.0], &[1.0]).unwrap(),
            (-1.0f64).exp(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn zero_lambda_degenerates_to_plain_kernel() {
        let spec = gaussian(2.0, 2, 0.0);
        let pts = [[0.1, 0.2], [0.1, 0.2], [0.9, -0.4]];
        for x in &pts {
            for y in &pts {
                assert_eq!(
                    spec.eval_lambda(x, y).unwrap(),
                    spec.eval(x, y).unwrap()
                );
            }
        }
    }

    #[test]
    fn row_basics() {
        let spec = gaussian(1.0, 1, 0.0);
        assert!(spec.row(&[0.0], &[]).unwrap().is_empty());
        let r = spec.row(&[0.0], &[0.0, 1.0]).unwrap();
        assert_eq!(r[0], 1.0);
        assert_relative_eq!(r[1], (-1.0f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn wendland_row_outside_support_is_zero() {
        let spec = KernelSpec::new(KernelFamily::Wendland { k: 2 }, 1.0, 1, 0.0).unwrap();
        let r = spec.row(&[10.0], &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(r, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn matrix_small_cases() {
        let spec = gaussian(1.0, 1, 0.1);
        let a = spec.matrix(&[0.5], true).unwrap();
        assert_relative_eq!(a[(0, 0)], 1.1, max_relative = 1e-15);

        let spec0 = gaussian(1.0, 1, 0.0);
        let a = spec0.matrix(&[0.0, 1.0], false).unwrap();
        let e1 = (-1.0f64).exp();
        assert_eq!(a[(0, 0)], 1.0);
        assert_eq!(a[(1, 1)], 1.0);
        assert_relative_eq!(a[(0, 1)], e1, max_relative = 1e-15);
        assert_relative_eq!(a[(1, 0)], e1, max_relative = 1e-15);
    }

    #[test]
    fn matrix_rejects_duplicates() {
        let spec = gaussian(1.0, 2, 0.0);
        let err = spec.matrix(&[0.0, 0.0, 1.0, 1.0, 0.0, 0.0], false).unwrap_err();
        match err {
            Error::DuplicatePoints { first, second } => {
                assert_eq!((first, second), (0, 2));
            }
            other => panic!("expected DuplicatePoints, got {other:?}"),
        }
    }

    // Oracle: matrix minus lambda*I must match the brute-force pairwise grid.
    #[test]
    fn matrix_matches_pairwise_eval_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for family in all_families() {
            let spec = KernelSpec::new(family, 1.3, 2, 0.05).unwrap();
            let pts: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let a = spec.matrix(&pts, true).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let expect = spec
                        .eval(point(&pts, 2, i), point(&pts, 2, j))
                        .unwrap()
                        + if i == j { 0.05 } else { 0.0 };
                    assert_relative_eq!(a[(i, j)], expect, max_relative = 1e-14);
                }
            }
        }
    }

    // Statistical positive-definiteness check: smallest eigenvalue of
    // A + lambda*I stays >= lambda - 1e-10 on random distinct points.
    #[test]
    fn regularized_matrix_is_positive_definite() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for family in all_families() {
            for &lambda in &[0.0, 1e-3] {
                let spec = KernelSpec::new(family, 1.0, 2, lambda).unwrap();
                let n = rng.gen_range(2..=20);
                let pts: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let a = spec.matrix(&pts, true).unwrap();
                let eig = a.symmetric_eigenvalues();
                let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
                assert!(
                    min >= lambda - 1e-10,
                    "{family:?} lambda={lambda}: min eigenvalue {min}"
                );
            }
        }
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(KernelSpec::new(KernelFamily::Gaussian, 0.0, 1, 0.0).is_err());
        assert!(KernelSpec::new(KernelFamily::Gaussian, -1.0, 1, 0.0).is_err());
        assert!(KernelSpec::new(KernelFamily::Gaussian, 1.0, 0, 0.0).is_err());
        assert!(KernelSpec::new(KernelFamily::Gaussian, 1.0, 1, -0.5).is_err());
        assert!(KernelSpec::new(KernelFamily::Wendland { k: 4 }, 1.0, 1, 0.0).is_err());
        assert!(KernelSpec::new(KernelFamily::Gaussian, 1.0, 1, f64::NAN).is_err());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let spec = gaussian(1.0, 2, 0.0);
        assert!(spec.eval(&[0.0], &[0.0, 1.0]).is_err());
        assert!(spec.eval(&[0.0, 0.0], &[0.0]).is_err());
        assert!(spec.row(&[0.0, 0.0], &[1.0, 2.0, 3.0]).is_err());
    }

    proptest! {
        #[test]
        fn symmetry_holds_everywhere(
            xs in prop::collection::vec(-5.0f64..5.0, 2),
            ys in prop::collection::vec(-5.0f64..5.0, 2),
            fam in 0usize..6,
        ) {
            let spec = KernelSpec::new(all_families()[fam], 0.8, 2, 0.0).unwrap();
            prop_assert_eq!(
                spec.eval(&xs, &ys).unwrap(),
                spec.eval(&ys, &xs).unwrap()
            );
        }

        #[test]
        fn lambda_shift_only_on_diagonal(
            xs in prop::collection::vec(-5.0f64..5.0, 2),
            ys in prop::collection::vec(-5.0f64..5.0, 2),
        ) {
            let spec = gaussian(1.0, 2, 0.25);
            let base = spec.eval(&xs, &ys).unwrap();
            let reg = spec.eval_lambda(&xs, &ys).unwrap();
            let expected = if xs == ys { 0.25 } else { 0.0 };
            prop_assert_eq!(reg - base, expected);
        }
    }
}
