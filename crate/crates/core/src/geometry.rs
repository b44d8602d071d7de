//! Candidate discretizations of the domain, fill distance, and separation
//! distance.
//!
//! The domain is always represented by a finite candidate set; the fill
//! distance is computed over candidates as the discrete stand-in for the
//! continuous supremum. Nearest-neighbor queries are linear scans, which is
//! plenty at the target scale (N up to ~10^5).

use crate::error::{Error, Result};

/// Flat row-major storage for a list of points in `R^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    /// Wraps a flat row-major coordinate block. Does not deduplicate.
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        if coords.len() % dim != 0 {
            return Err(Error::DimensionMismatch { expected: dim, got: coords.len() });
        }
        Ok(Self { dim, coords })
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, coords: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn push(&mut self, p: &[f64]) {
        debug_assert_eq!(p.len(), self.dim);
        self.coords.extend_from_slice(p);
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    /// First pair of coordinate-wise identical points, if any, as
    /// (earlier index, later index). Sort-based, O(N log N).
    pub fn find_duplicate(&self) -> Option<(usize, usize)> {
        let n = self.len();
        if n < 2 {
            return None;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            let pa = self.point(a);
            let pb = self.point(b);
            for (x, y) in pa.iter().zip(pb) {
                match x.total_cmp(y) {
                    std::cmp::Ordering::Equal => continue,
                    other => return other,
                }
            }
            a.cmp(&b)
        });
        for w in order.windows(2) {
            if self.point(w[0]) == self.point(w[1]) {
                let (i, j) = (w[0].min(w[1]), w[0].max(w[1]));
                return Some((i, j));
            }
        }
        None
    }
}

/// Euclidean distance between two coordinate slices of equal length.
#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// A finite discretization of the domain with optional target samples.
///
/// Points are pairwise distinct (checked at construction); `values`, when
/// present, holds one sample per point.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub points: PointSet,
    pub values: Option<Vec<f64>>,
}

impl CandidateSet {
    pub fn new(points: PointSet, values: Option<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCandidateSet);
        }
        if let Some((i, j)) = points.find_duplicate() {
            return Err(Error::DuplicatePoints { first: i, second: j });
        }
        if let Some(v) = &values {
            if v.len() != points.len() {
                return Err(Error::InvalidParameter(format!(
                    "{} values for {} points",
                    v.len(),
                    points.len()
                )));
            }
        }
        Ok(Self { points, values })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }
}

/// `m` equispaced points on `[a, b]`, both endpoints included.
pub fn grid_interval(a: f64, b: f64, m: usize) -> Result<CandidateSet> {
    if !(a < b) {
        return Err(Error::InvalidParameter(format!("need a < b, got [{a}, {b}]")));
    }
    if m < 2 {
        return Err(Error::InvalidParameter(format!("need m >= 2 grid points, got {m}")));
    }
    let step = b - a;
    let denom = (m - 1) as f64;
    let coords: Vec<f64> = (0..m).map(|i| a + step * (i as f64) / denom).collect();
    CandidateSet::new(PointSet::new(1, coords)?, None)
}

/// The `m x m` tensor grid on `[-1, 1]^2` restricted to the closed unit
/// ball. Errors if no grid node lands inside (e.g. `m = 2`: only corners).
pub fn grid_unit_ball(m: usize) -> Result<CandidateSet> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("need m >= 2 grid points, got {m}")));
    }
    let denom = (m - 1) as f64;
    let coord = |i: usize| -1.0 + 2.0 * (i as f64) / denom;
    let mut coords = Vec::new();
    for i in 0..m {
        let x = coord(i);
        for j in 0..m {
            let y = coord(j);
            if x * x + y * y <= 1.0 {
                coords.push(x);
                coords.push(y);
            }
        }
    }
    if coords.is_empty() {
        return Err(Error::EmptyCandidateSet);
    }
    CandidateSet::new(PointSet::new(2, coords)?, None)
}

/// Fill distance of `x_sel` with respect to the candidate set: the largest
/// distance from any candidate to its nearest selected point.
pub fn fill_distance(x_sel: &PointSet, omega: &CandidateSet) -> Result<f64> {
    if x_sel.is_empty() {
        return Err(Error::InvalidParameter("fill distance needs at least one point".into()));
    }
    if x_sel.dim() != omega.dim() {
        return Err(Error::DimensionMismatch { expected: omega.dim(), got: x_sel.dim() });
    }
    let mut h = 0.0f64;
    for c in omega.points.iter() {
        let d = x_sel.iter().map(|p| dist(c, p)).fold(f64::INFINITY, f64::min);
        h = h.max(d);
    }
    Ok(h)
}

/// Half the minimal pairwise distance of the point set. Needs n >= 2.
pub fn separation_distance(x: &PointSet) -> Result<f64> {
    let n = x.len();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "separation distance needs at least two points".into(),
        ));
    }
    let mut min = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            min = min.min(dist(x.point(i), x.point(j)));
        }
    }
    Ok(0.5 * min)
}
