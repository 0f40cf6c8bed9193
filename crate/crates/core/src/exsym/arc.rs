use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::weyl::{grid_angle, BoundaryFunction};
use crate::{Error, Result};

pub const DEFAULT_T_POINTS: usize = 65;

/// Largest adjacent-sample jump accepted as continuous at grid resolution.
pub const DEFAULT_ARC_MODULUS: f64 = 0.5;

/// Samples of the classical part `c(η, t)` on `S*H × [−1, 1]`, where `t` is
/// the compactified normal covariable. Stored slice by slice in `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalArc {
    grid: usize,
    t_points: usize,
    values: Vec<Complex64>,
}

impl ClassicalArc {
    pub fn new(grid: usize, t_points: usize, values: Vec<Complex64>) -> Result<Self> {
        BoundaryFunction::constant(grid, Complex64::default())?;
        if t_points < 3 || t_points % 2 == 0 {
            return Err(Error::InvalidGrid(format!("arc needs an odd number >= 3 of t points, got {t_points}")));
        }
        if values.len() != grid * t_points {
            return Err(Error::DimensionMismatch(format!(
                "arc of {grid} x {t_points} samples given {} values",
                values.len()
            )));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { grid, t_points, values })
    }

    /// Samples `f(θ, t)` on the uniform grids.
    pub fn from_fn(grid: usize, t_points: usize, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid * t_points);
        for k in 0..t_points {
            let t = Self::t_value(k, t_points);
            values.extend((0..grid).map(|j| f(grid_angle(j, grid), t)));
        }
        Self::new(grid, t_points, values)
    }

    pub fn constant(grid: usize, t_points: usize, c: Complex64) -> Result<Self> {
        Self::from_fn(grid, t_points, |_, _| c)
    }

    /// Linear interpolation in `t` between a lower and an upper boundary function.
    pub fn interpolate(lower: &BoundaryFunction, upper: &BoundaryFunction, t_points: usize) -> Result<Self> {
        let g = lower.grid_size();
        if upper.grid_size() != g {
            return Err(Error::InvalidGrid("boundary grids differ".into()));
        }
        let mut values = Vec::with_capacity(g * t_points);
        for k in 0..t_points {
            let s = (Self::t_value(k, t_points) + 1.0) / 2.0;
            values.extend(lower.samples().iter().zip(upper.samples()).map(|(a, b)| a * (1.0 - s) + b * s));
        }
        Self::new(g, t_points, values)
    }

    pub fn t_value(k: usize, t_points: usize) -> f64 {
        // symmetric construction so that t_k = −t_{T−1−k} exactly
        let h = (t_points - 1) as f64 / 2.0;
        (k as f64 - h) / h
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn t_points(&self) -> usize {
        self.t_points
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, j: usize, k: usize) -> Complex64 {
        self.values[k * self.grid + j]
    }

    /// Index of the `t = 0` slice.
    pub fn mid(&self) -> usize {
        self.t_points / 2
    }

    pub fn slice_values(&self, k: usize) -> &[Complex64] {
        &self.values[k * self.grid..(k + 1) * self.grid]
    }

    pub fn slice(&self, k: usize) -> BoundaryFunction {
        BoundaryFunction::new(self.slice_values(k).to_vec()).expect("arc slices are valid boundary functions")
    }

    pub fn upper_slice(&self) -> BoundaryFunction {
        self.slice(self.t_points - 1)
    }

    pub fn lower_slice(&self) -> BoundaryFunction {
        self.slice(0)
    }

    fn from_slices(&self, slices: impl Iterator<Item = BoundaryFunction>) -> Self {
        let mut values = Vec::with_capacity(self.values.len());
        for s in slices {
            values.extend_from_slice(s.samples());
        }
        Self { grid: self.grid, t_points: self.t_points, values }
    }

    /// `(η, t) ↦ c(η, −t)`.
    pub fn reflect_t(&self) -> Self {
        self.from_slices((0..self.t_points).rev().map(|k| self.slice(k)))
    }

    /// `(η, t) ↦ c(−η, t)`: the fiber antipode, exact on the grid.
    pub fn antipode(&self) -> Self {
        self.from_slices((0..self.t_points).map(|k| self.slice(k).antipode()))
    }

    /// `(η, t) ↦ c(e^{iφ} η, t)` by trigonometric interpolation.
    pub fn rotate(&self, phi: f64) -> Self {
        self.from_slices((0..self.t_points).map(|k| self.slice(k).rotate(phi)))
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid || self.t_points != other.t_points {
            return Err(Error::DimensionMismatch("arcs on different grids".into()));
        }
        Ok(())
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.check_shape(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect();
        Ok(Self { grid: self.grid, t_points: self.t_points, values })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a / b)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { grid: self.grid, t_points: self.t_points, values: self.values.iter().map(|z| f(*z)).collect() }
    }

    /// Copy with slice `k` replaced.
    pub fn with_slice(&self, k: usize, slice: &BoundaryFunction) -> Result<Self> {
        if slice.grid_size() != self.grid {
            return Err(Error::InvalidGrid("slice grid differs from arc grid".into()));
        }
        let mut values = self.values.clone();
        values[k * self.grid..(k + 1) * self.grid].copy_from_slice(slice.samples());
        Ok(Self { values, ..self.clone() })
    }

    /// Minimum modulus over the slices with index in `range`.
    pub fn min_modulus_over(&self, range: std::ops::RangeInclusive<usize>) -> f64 {
        range.flat_map(|k| self.slice_values(k).iter()).map(|z| z.norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn min_modulus(&self) -> f64 {
        self.min_modulus_over(0..=self.t_points - 1)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.check_shape(other).is_err() {
            return f64::INFINITY;
        }
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Largest difference between neighbouring samples in either direction.
    pub fn max_jump(&self) -> f64 {
        let mut m: f64 = 0.0;
        for k in 0..self.t_points {
            for j in 0..self.grid {
                let z = self.value(j, k);
                m = m.max((z - self.value((j + 1) % self.grid, k)).norm());
                if k + 1 < self.t_points {
                    m = m.max((z - self.value(j, k + 1)).norm());
                }
            }
        }
        m
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassicalArcJson {
    pub grid: usize,
    pub t_points: usize,
    pub values: Vec<[f64; 2]>,
}

impl From<&ClassicalArc> for ClassicalArcJson {
    fn from(a: &ClassicalArc) -> Self {
        Self { grid: a.grid, t_points: a.t_points, values: a.values.iter().map(|z| [z.re, z.im]).collect() }
    }
}

impl TryFrom<ClassicalArcJson> for ClassicalArc {
    type Error = Error;

    fn try_from(j: ClassicalArcJson) -> Result<Self> {
        ClassicalArc::new(j.grid, j.t_points, j.values.iter().map(|p| Complex64::new(p[0], p[1])).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_grid_is_symmetric() {
        for k in 0..DEFAULT_T_POINTS {
            assert_eq!(ClassicalArc::t_value(k, 65), -ClassicalArc::t_value(64 - k, 65));
        }
        assert_eq!(ClassicalArc::t_value(32, 65), 0.0);
        assert_eq!(ClassicalArc::t_value(0, 65), -1.0);
        assert_eq!(ClassicalArc::t_value(64, 65), 1.0);
    }

    #[test]
    fn reflection_and_antipode_are_involutions() {
        let a = ClassicalArc::from_fn(32, 9, |th, t| Complex64::new(th.cos() + t, t * t - th.sin())).unwrap();
        assert_eq!(a.reflect_t().reflect_t(), a);
        assert_eq!(a.antipode().antipode(), a);
        assert_eq!(a.reflect_t().value(3, 0), a.value(3, 8));
    }

    #[test]
    fn interpolation_hits_the_ends() {
        let lo = BoundaryFunction::constant(16, Complex64::from(1.0)).unwrap();
        let hi = BoundaryFunction::trig(16, &[(1, Complex64::from(2.0))]).unwrap();
        let a = ClassicalArc::interpolate(&lo, &hi, 5).unwrap();
        assert_eq!(a.lower_slice(), lo);
        assert!(a.upper_slice().max_abs_diff(&hi) < 1e-15);
    }

    #[test]
    fn shape_checks() {
        assert!(ClassicalArc::constant(16, 4, Complex64::from(1.0)).is_err());
        assert!(ClassicalArc::new(16, 3, vec![Complex64::from(1.0); 47]).is_err());
    }
}
