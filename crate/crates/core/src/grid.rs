//! Uniform periodic grids on `[-L, L]^N` and functions sampled on them.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::par;

/// Largest number of samples a grid may hold (2^24 doubles, 128 MiB).
pub const MAX_POINTS: usize = 1 << 24;

/// A uniform periodic box `[-L, L]^N` with `n` points per axis.
///
/// Sample `i` along an axis sits at `x_i = -L + i h` with `h = 2L / n`;
/// the point `x = L` is identified with `x = -L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    half_width: f64,
    points_per_axis: usize,
}

impl Grid {
    pub fn new(dim: usize, half_width: f64, points_per_axis: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(domain(format!(
                "grid dimension must be 1, 2 or 3, got {dim}"
            )));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(domain(format!(
                "half width must be positive, got {half_width}"
            )));
        }
        if points_per_axis < 8 || !points_per_axis.is_multiple_of(2) {
            return Err(domain(format!(
                "points per axis must be even and >= 8, got {points_per_axis}"
            )));
        }
        let total = (points_per_axis as u128).pow(dim as u32);
        if total > MAX_POINTS as u128 {
            return Err(domain(format!(
                "grid with {total} points exceeds the budget of {MAX_POINTS}"
            )));
        }
        Ok(Self {
            dim,
            half_width,
            points_per_axis,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points_per_axis as f64
    }

    /// Quadrature weight `h^N` of one cell.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Volume `(2L)^N` of the box.
    pub fn volume(&self) -> f64 {
        (2.0 * self.half_width).powi(self.dim as i32)
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    /// Coordinates of the sample with row-major flat index `flat`.
    /// Unused trailing axes are zero.
    pub fn point(&self, flat: usize) -> [f64; 3] {
        let n = self.points_per_axis;
        let mut x = [0.0; 3];
        let mut rest = flat;
        for axis in (0..self.dim).rev() {
            x[axis] = self.coordinate(rest % n);
            rest /= n;
        }
        x
    }

    /// Largest time for which the periodic heat flow is a faithful stand-in
    /// for the free-space one: `(L/4)^2`.
    pub fn t_max(&self) -> f64 {
        (self.half_width / 4.0).powi(2)
    }
}

/// Real samples of a function on a [`Grid`], in row-major axis order.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { grid, values })
    }

    /// Builds from values already known to be finite and of the right length.
    pub(crate) fn from_parts(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Self { grid, values }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::from_parts(grid, vec![0.0; grid.len()])
    }

    pub fn constant(grid: Grid, c: f64) -> Result<Self> {
        Self::new(grid, vec![c; grid.len()])
    }

    /// Samples `f` at every grid point.
    pub fn from_fn<F>(grid: Grid, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Sync + Send,
    {
        let dim = grid.dim();
        let values = par::collect_indexed(grid.len(), |i| f(&grid.point(i)[..dim]));
        Self::new(grid, values)
    }

    /// Indicator of the half-open box `[lo, hi)^N`.
    pub fn indicator(grid: Grid, lo: f64, hi: f64) -> Self {
        let h = grid.spacing();
        // Snap to the lattice so a box of integer cell count integrates exactly.
        let eps = 1e-9 * h;
        Self::from_fn(grid, |x| {
            if x.iter().all(|&xi| xi >= lo - eps && xi < hi - eps) {
                1.0
            } else {
                0.0
            }
        })
        .expect("indicator values are finite")
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn sup_norm(&self) -> f64 {
        par::max_by(&self.values, f64::abs)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        par::sum_by(&self.values, |v| v) / self.values.len() as f64
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::from_parts(self.grid, par::map(&self.values, |v| c * v))
    }

    pub fn abs(&self) -> Self {
        Self::from_parts(self.grid, par::map(&self.values, f64::abs))
    }

    /// Pointwise `f`; errors if `f` produces a non-finite value.
    pub fn map<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Sync + Send,
    {
        Self::new(self.grid, par::map(&self.values, f))
    }

    pub fn zip_with<F>(&self, other: &Self, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Sync + Send,
    {
        self.check_same_grid(other)?;
        let values =
            par::collect_indexed(self.values.len(), |i| f(self.values[i], other.values[i]));
        Self::new(self.grid, values)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub(crate) fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(4, 1.0, 8).is_err());
        assert!(Grid::new(1, 0.0, 8).is_err());
        assert!(Grid::new(1, 1.0, 9).is_err());
        assert!(Grid::new(1, 1.0, 6).is_err());
        assert!(Grid::new(3, 1.0, 1024).is_err());
    }

    #[test]
    fn point_is_row_major() {
        let g = Grid::new(2, 4.0, 8).unwrap();
        assert_eq!(g.point(0), [-4.0, -4.0, 0.0]);
        assert_eq!(g.point(1), [-4.0, -3.0, 0.0]);
        assert_eq!(g.point(8), [-3.0, -4.0, 0.0]);
    }

    #[test]
    fn rejects_non_finite_samples() {
        let g = Grid::new(1, 1.0, 8).unwrap();
        let mut v = vec![0.0; 8];
        v[3] = f64::NAN;
        match GridFunction::new(g, v) {
            Err(Error::NonFinite { index, .. }) => assert_eq!(index, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unit_indicator_has_exact_cell_count() {
        let g = Grid::new(1, 4.0, 1024).unwrap();
        let u = GridFunction::indicator(g, 0.0, 1.0);
        let count = u.values().iter().filter(|&&v| v == 1.0).count();
        assert_eq!(count, 128);
    }
}
