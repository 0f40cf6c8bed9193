use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::poly::PolySymbol;
use crate::{Error, Result};

pub const DEFAULT_GRID: usize = 256;

/// Below this modulus a sampled top-degree part counts as vanishing.
pub const DEGENERATE_TOL: f64 = 1e-12;

/// Samples of a function on the equatorial circle `S*H` at `θ_j = 2πj / G`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryFunction {
    samples: Vec<Complex64>,
}

fn check_grid(g: usize) -> Result<()> {
    if g < 16 || !g.is_power_of_two() {
        return Err(Error::InvalidGrid(format!("grid size {g} must be a power of two >= 16")));
    }
    Ok(())
}

pub fn grid_angle(j: usize, g: usize) -> f64 {
    2.0 * PI * j as f64 / g as f64
}

impl BoundaryFunction {
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        check_grid(samples.len())?;
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { samples })
    }

    pub fn from_fn(g: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        check_grid(g)?;
        Self::new((0..g).map(|j| f(grid_angle(j, g))).collect())
    }

    pub fn constant(g: usize, c: Complex64) -> Result<Self> {
        Self::from_fn(g, |_| c)
    }

    /// Finite Fourier series `sum_m coeffs[m] e^{imθ}` given as `(m, c_m)` pairs.
    pub fn trig(g: usize, coeffs: &[(i64, Complex64)]) -> Result<Self> {
        Self::from_fn(g, |t| coeffs.iter().map(|(m, c)| c * Complex64::from_polar(1.0, *m as f64 * t)).sum())
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn grid_size(&self) -> usize {
        self.samples.len()
    }

    pub fn min_modulus(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.samples.iter().zip(&other.samples).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { samples: self.samples.iter().map(|z| f(*z)).collect() }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.grid_size() != other.grid_size() {
            return Err(Error::InvalidGrid(format!(
                "grid sizes {} and {} differ",
                self.grid_size(),
                other.grid_size()
            )));
        }
        Ok(Self { samples: self.samples.iter().zip(&other.samples).map(|(a, b)| f(*a, *b)).collect() })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a / b)
    }

    pub fn recip(&self) -> Self {
        self.map(|z| Complex64::from(1.0) / z)
    }

    /// Discrete Fourier coefficients `f̂(m) = G^{-1} sum_j f_j e^{−imθ_j}`,
    /// indexed by `m mod G`.
    pub fn fourier(&self) -> Vec<Complex64> {
        let g = self.grid_size();
        let mut buf = self.samples.clone();
        FftPlanner::new().plan_fft_forward(g).process(&mut buf);
        let inv = 1.0 / g as f64;
        buf.iter_mut().for_each(|z| *z *= inv);
        buf
    }

    /// `f̂(m)` for a signed mode; zero beyond the Nyquist range.
    pub fn coefficient(fourier: &[Complex64], m: i64) -> Complex64 {
        let g = fourier.len() as i64;
        if m.abs() >= g / 2 {
            return Complex64::default();
        }
        fourier[m.rem_euclid(g) as usize]
    }

    /// Trigonometric interpolation shift: samples of `θ ↦ f(θ + φ)`.
    pub fn rotate(&self, phi: f64) -> Self {
        let g = self.grid_size();
        let mut coef = self.fourier();
        for (idx, c) in coef.iter_mut().enumerate() {
            let m = if idx < g / 2 {
                idx as f64
            } else if idx == g / 2 {
                0.0
            } else {
                idx as f64 - g as f64
            };
            if idx == g / 2 {
                // Nyquist mode: keep the real cosine interpolant
                *c *= Complex64::from((g as f64 / 2.0 * phi).cos());
            } else {
                *c *= Complex64::from_polar(1.0, m * phi);
            }
        }
        FftPlanner::new().plan_fft_inverse(g).process(&mut coef);
        Self { samples: coef }
    }

    /// `θ ↦ f(θ + π)`, exact on the sample grid.
    pub fn antipode(&self) -> Self {
        let g = self.grid_size();
        Self { samples: (0..g).map(|j| self.samples[(j + g / 2) % g]).collect() }
    }

    /// `θ ↦ f(−θ)`, exact on the sample grid.
    pub fn reflect(&self) -> Self {
        let g = self.grid_size();
        Self { samples: (0..g).map(|j| self.samples[(g - j) % g]).collect() }
    }
}

/// Top-degree homogeneous part of `a` sampled on the unit circle `w = e^{iθ}`.
pub fn boundary_symbol(a: &PolySymbol, grid_size: usize) -> Result<BoundaryFunction> {
    if a.n() != 1 {
        return Err(Error::UnsupportedDimension(a.n()));
    }
    let top = a.top_part();
    let f = BoundaryFunction::from_fn(grid_size, |t| top.eval(&[Complex64::from_polar(1.0, t)]))?;
    let min_modulus = f.min_modulus();
    if min_modulus < DEGENERATE_TOL {
        return Err(Error::DegenerateBoundary { min_modulus });
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{sharp, Sign};

    #[test]
    fn grid_validation() {
        assert!(BoundaryFunction::constant(8, Complex64::from(1.0)).is_err());
        assert!(BoundaryFunction::constant(48, Complex64::from(1.0)).is_err());
        assert!(BoundaryFunction::constant(16, Complex64::from(1.0)).is_ok());
    }

    #[test]
    fn boundary_of_w_and_norm_sq() {
        let f = boundary_symbol(&PolySymbol::w(1, 0), 64).unwrap();
        for (j, z) in f.samples().iter().enumerate() {
            assert!((z - Complex64::from_polar(1.0, grid_angle(j, 64))).norm() < 1e-15);
        }
        let g = boundary_symbol(&PolySymbol::norm_sq(1), 64).unwrap();
        assert!(g.samples().iter().all(|z| (z - Complex64::from(1.0)).norm() < 1e-15));
    }

    #[test]
    fn boundary_is_multiplicative() {
        let w = PolySymbol::w(1, 0);
        let wb = PolySymbol::wbar(1, 0);
        let prod = sharp(&w, &wb, Sign::Plus).unwrap();
        let lhs = boundary_symbol(&prod, 256).unwrap();
        let rhs = boundary_symbol(&w, 256).unwrap().mul(&boundary_symbol(&wb, 256).unwrap()).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-10);
        assert!(lhs.samples().iter().all(|z| (z - Complex64::from(1.0)).norm() < 1e-14));
    }

    #[test]
    fn degenerate_top_part_signalled() {
        // top part x = (w + wbar)/2 vanishes at θ = π/2
        let e = boundary_symbol(&PolySymbol::x(1, 0), 256);
        assert!(matches!(e, Err(Error::DegenerateBoundary { .. })));
    }

    #[test]
    fn rotation_matches_exact_shift() {
        let f = BoundaryFunction::trig(64, &[(2, Complex64::new(1.0, 0.5)), (-3, Complex64::from(0.25))]).unwrap();
        let phi = 0.37;
        let exact = BoundaryFunction::from_fn(64, |t| {
            Complex64::new(1.0, 0.5) * Complex64::from_polar(1.0, 2.0 * (t + phi))
                + Complex64::from(0.25) * Complex64::from_polar(1.0, -3.0 * (t + phi))
        })
        .unwrap();
        assert!(f.rotate(phi).max_abs_diff(&exact) < 1e-13);
        assert!(f.rotate(PI).max_abs_diff(&f.antipode()) < 1e-13);
    }

    #[test]
    fn fourier_coefficients_of_trig() {
        let f = BoundaryFunction::trig(32, &[(1, Complex64::from(2.0)), (-2, Complex64::new(0.0, 1.0))]).unwrap();
        let c = f.fourier();
        assert!((BoundaryFunction::coefficient(&c, 1) - Complex64::from(2.0)).norm() < 1e-14);
        assert!((BoundaryFunction::coefficient(&c, -2) - Complex64::new(0.0, 1.0)).norm() < 1e-14);
        assert!(BoundaryFunction::coefficient(&c, 0).norm() < 1e-14);
    }
}
