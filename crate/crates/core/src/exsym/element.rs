use nalgebra::SVD;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fock::{FockOperator, FockOperatorJson, FockTruncation};
use crate::weyl::{metaplectic_rotation, BoundaryFunction};
use crate::{max_abs, CMatrix, Error, Result};

/// Which hemisphere algebra an element lives in.
///
/// Upper elements are represented through `Op(f)`, lower ones through
/// `Op(f ∘ R) = Op(f)ᵀ` with `R(x, p) = (x, −p)`, so that matrix products
/// realize `#+` and `#−` respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hemisphere {
    Upper,
    Lower,
}

/// Number-basis lift of a boundary function: `L(f)_{jk} = f̂(k − j)` on the
/// upper hemisphere and its transpose on the lower one.
pub fn lift(hemisphere: Hemisphere, f: &BoundaryFunction, max_degree: usize) -> CMatrix {
    let d = max_degree + 1;
    let coef = f.fourier();
    CMatrix::from_fn(d, d, |j, k| {
        let m = match hemisphere {
            Hemisphere::Upper => k as i64 - j as i64,
            Hemisphere::Lower => j as i64 - k as i64,
        };
        BoundaryFunction::coefficient(&coef, m)
    })
}

pub fn min_singular_value(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    SVD::new(m.clone(), false, false).singular_values.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Element of the Weyl algebra `W` (fiber dimension one): boundary value
/// `σ_0` plus a compact correction, stored at a working truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylElement {
    hemisphere: Hemisphere,
    boundary: BoundaryFunction,
    finite: FockOperator,
}

impl WeylElement {
    pub fn new(hemisphere: Hemisphere, boundary: BoundaryFunction, finite: FockOperator) -> Result<Self> {
        if finite.truncation().n() != 1 {
            return Err(Error::UnsupportedDimension(finite.truncation().n()));
        }
        Ok(Self { hemisphere, boundary, finite })
    }

    /// Element whose represented operator at the working truncation is `op`.
    pub fn from_operator(hemisphere: Hemisphere, boundary: BoundaryFunction, op: &FockOperator) -> Result<Self> {
        if op.truncation().n() != 1 {
            return Err(Error::UnsupportedDimension(op.truncation().n()));
        }
        let l = lift(hemisphere, &boundary, op.truncation().max_degree());
        let finite = FockOperator::new(op.truncation().clone(), op.matrix() - l)?;
        Ok(Self { hemisphere, boundary, finite })
    }

    pub fn constant(hemisphere: Hemisphere, value: Complex64, working_degree: usize, grid: usize) -> Result<Self> {
        let trunc = FockTruncation::new(1, working_degree)?;
        Ok(Self { hemisphere, boundary: BoundaryFunction::constant(grid, value)?, finite: FockOperator::zeros(&trunc) })
    }

    pub fn hemisphere(&self) -> Hemisphere {
        self.hemisphere
    }

    pub fn boundary(&self) -> &BoundaryFunction {
        &self.boundary
    }

    pub fn finite(&self) -> &FockOperator {
        &self.finite
    }

    pub fn working_degree(&self) -> usize {
        self.finite.truncation().max_degree()
    }

    /// Represented operator compressed to `V^N`. Beyond the working
    /// truncation the compact part is padded with zeros.
    pub fn operator(&self, max_degree: usize) -> Result<FockOperator> {
        let l = lift(self.hemisphere, &self.boundary, max_degree);
        let f = self.finite.resize(max_degree)?;
        FockOperator::new(f.truncation().clone(), l + f.matrix())
    }

    pub fn working_operator(&self) -> FockOperator {
        self.operator(self.working_degree()).expect("working truncation is valid")
    }

    pub fn min_singular(&self, max_degree: usize) -> Result<f64> {
        Ok(min_singular_value(self.operator(max_degree)?.matrix()))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.hemisphere != other.hemisphere {
            return Err(Error::DimensionMismatch("elements of different hemisphere algebras".into()));
        }
        if self.working_degree() != other.working_degree() || self.boundary.grid_size() != other.boundary.grid_size() {
            return Err(Error::DimensionMismatch("elements with different working truncation or grid".into()));
        }
        Ok(())
    }

    /// Product in the hemisphere algebra.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let op = self.working_operator().mul(&other.working_operator())?;
        Self::from_operator(self.hemisphere, self.boundary.mul(&other.boundary)?, &op)
    }

    pub fn inverse(&self) -> Result<Self> {
        let component = match self.hemisphere {
            Hemisphere::Upper => "upper",
            Hemisphere::Lower => "lower",
        };
        let bmin = self.boundary.min_modulus();
        if bmin == 0.0 {
            return Err(Error::NotInvertible { component: format!("{component} boundary"), value: bmin });
        }
        let op = self.working_operator();
        let smin = min_singular_value(op.matrix());
        let inv = op.matrix().clone().try_inverse().filter(|_| smin > 1e-14).ok_or_else(|| Error::NotInvertible {
            component: format!("{component} hemisphere operator"),
            value: smin,
        })?;
        let op_inv = FockOperator::new(op.truncation().clone(), inv)?;
        Self::from_operator(self.hemisphere, self.boundary.recip(), &op_inv)
    }

    /// The same function on `H*` read in the other (or same) hemisphere algebra.
    pub fn reread(&self, target: Hemisphere) -> Self {
        if target == self.hemisphere {
            return self.clone();
        }
        let finite = crate::fock::transpose_dagger(&self.finite);
        Self { hemisphere: target, boundary: self.boundary.clone(), finite }
    }

    /// Pullback by the fiber rotation `w ↦ e^{iφ} w`, realized by metaplectic conjugation.
    pub fn rotate(&self, phi: f64) -> Self {
        let u = metaplectic_rotation(phi, self.finite.truncation());
        let (l, r) = match self.hemisphere {
            Hemisphere::Upper => (u.matrix().clone(), u.matrix().adjoint()),
            Hemisphere::Lower => (u.matrix().adjoint(), u.matrix().clone()),
        };
        let op = self.working_operator();
        let rotated = FockOperator::new(op.truncation().clone(), &l * op.matrix() * &r).expect("finite entries");
        Self::from_operator(self.hemisphere, self.boundary.rotate(phi), &rotated).expect("n = 1")
    }

    /// Pullback by `−id`: conjugation by `diag((−1)^k)` and the antipodal boundary shift.
    pub fn negate_fiber(&self) -> Self {
        let d = self.finite.dim();
        let m = CMatrix::from_fn(d, d, |j, k| {
            let s = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
            self.finite.matrix()[(j, k)] * s
        });
        Self {
            hemisphere: self.hemisphere,
            boundary: self.boundary.antipode(),
            finite: FockOperator::new(self.finite.truncation().clone(), m).expect("finite entries"),
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        if self.hemisphere != other.hemisphere || self.working_degree() != other.working_degree() {
            return f64::INFINITY;
        }
        let ops = max_abs(&(self.working_operator().matrix() - other.working_operator().matrix()));
        ops.max(self.boundary.max_abs_diff(&other.boundary))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeylElementJson {
    pub hemisphere: Hemisphere,
    pub boundary: Vec<[f64; 2]>,
    pub finite: Option<FockOperatorJson>,
}

impl WeylElementJson {
    pub fn from_element(e: &WeylElement) -> Self {
        Self {
            hemisphere: e.hemisphere,
            boundary: e.boundary.samples().iter().map(|z| [z.re, z.im]).collect(),
            finite: Some(FockOperatorJson::from(&e.finite)),
        }
    }

    pub fn into_element(self, working_degree: usize) -> Result<WeylElement> {
        let boundary = BoundaryFunction::new(self.boundary.iter().map(|p| Complex64::new(p[0], p[1])).collect())?;
        let finite = match self.finite {
            Some(f) => FockOperator::try_from(f)?,
            None => FockOperator::zeros(&FockTruncation::new(1, working_degree)?),
        };
        WeylElement::new(self.hemisphere, boundary, finite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{weyl_quantize, PolySymbol};

    fn shift_boundary(k: i64) -> BoundaryFunction {
        BoundaryFunction::trig(64, &[(k, Complex64::from(1.0))]).unwrap()
    }

    #[test]
    fn lift_of_phase_is_backward_shift() {
        let l = lift(Hemisphere::Upper, &shift_boundary(1), 5);
        for j in 0..5 {
            assert!((l[(j, j + 1)] - Complex64::from(1.0)).norm() < 1e-14);
        }
        assert!((l.clone() - l.transpose()).iter().any(|z| z.norm() > 0.5));
        // Op(w) = √2 a lowers degree; the lift of w/|w| points the same way
        let t = FockTruncation::new(1, 5).unwrap();
        let op = weyl_quantize(&PolySymbol::w(1, 0), &t).unwrap();
        assert!(op.matrix()[(0, 1)].norm() > 0.0 && op.matrix()[(1, 0)].norm() == 0.0);
    }

    #[test]
    fn boundary_recoverable_from_far_diagonals() {
        let f = BoundaryFunction::trig(64, &[(0, Complex64::from(2.0)), (2, Complex64::new(0.0, 0.5))]).unwrap();
        let t = FockTruncation::new(1, 40).unwrap();
        let mut finite = CMatrix::zeros(41, 41);
        finite[(0, 0)] = Complex64::from(3.0);
        finite[(1, 2)] = Complex64::from(-1.0);
        let e = WeylElement::new(Hemisphere::Upper, f.clone(), FockOperator::new(t, finite).unwrap()).unwrap();
        let op = e.working_operator();
        // far from the corner the entries are the Fourier coefficients
        assert!((op.matrix()[(30, 30)] - Complex64::from(2.0)).norm() < 1e-6);
        assert!((op.matrix()[(30, 32)] - Complex64::new(0.0, 0.5)).norm() < 1e-6);
    }

    #[test]
    fn compose_and_inverse_of_constants() {
        let two = WeylElement::constant(Hemisphere::Upper, Complex64::from(2.0), 16, 64).unwrap();
        let inv = two.inverse().unwrap();
        let half = WeylElement::constant(Hemisphere::Upper, Complex64::from(0.5), 16, 64).unwrap();
        assert!(inv.distance(&half) < 1e-14);
        let one = two.compose(&inv).unwrap();
        assert!(one.distance(&WeylElement::constant(Hemisphere::Upper, Complex64::from(1.0), 16, 64).unwrap()) < 1e-14);
    }

    #[test]
    fn rotation_by_pi_matches_negation() {
        let f = BoundaryFunction::trig(64, &[(0, Complex64::from(3.0)), (1, Complex64::from(1.0)), (-2, Complex64::new(0.2, 0.1))]).unwrap();
        let t = FockTruncation::new(1, 24).unwrap();
        let op = FockOperator::new(t, lift(Hemisphere::Lower, &f, 24) + CMatrix::from_fn(25, 25, |j, k| Complex64::new(0.01 * j as f64, -0.02 * k as f64))).unwrap();
        for hem in [Hemisphere::Upper, Hemisphere::Lower] {
            let e = WeylElement::from_operator(hem, f.clone(), &op).unwrap();
            assert!(e.rotate(std::f64::consts::PI).distance(&e.negate_fiber()) < 1e-12);
        }
    }

    #[test]
    fn reread_is_transpose_and_involutive() {
        let f = BoundaryFunction::trig(64, &[(0, Complex64::from(3.0)), (1, Complex64::from(1.0))]).unwrap();
        let e = WeylElement::constant(Hemisphere::Upper, Complex64::from(1.0), 12, 64).unwrap();
        let e = WeylElement::new(Hemisphere::Upper, f, e.finite().clone()).unwrap();
        let low = e.reread(Hemisphere::Lower);
        assert!(max_abs(&(low.working_operator().matrix() - e.working_operator().matrix().transpose())) < 1e-15);
        assert_eq!(low.reread(Hemisphere::Upper), e);
    }
}
