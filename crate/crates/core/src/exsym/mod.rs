//! Extended symbols `σ = (σ₊, σ₋, c)`: an upper and a lower Weyl element glued
//! to a scalar classical arc along the two corners `t = ±1`.
//!
//! Only fiber dimension one is implemented. Weyl elements are stored as the
//! number-basis lift of their boundary function plus a compact correction at
//! a fixed working truncation.

mod arc;
mod element;
mod pipeline;

pub use arc::{ClassicalArc, ClassicalArcJson, DEFAULT_ARC_MODULUS, DEFAULT_T_POINTS};
pub use element::{lift, min_singular_value, Hemisphere, WeylElement, WeylElementJson};
pub use pipeline::{
    dagger, hermite_reduction, homotopy_dagger_to_op, op_involution, path_point, symmetrize_tilde, HermiteReduction,
    HomotopyPath, PathSample,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Working truncation of Weyl elements built by the constructors here.
pub const DEFAULT_WORKING_DEGREE: usize = 64;

/// Default threshold for invertibility certificates.
pub const DEFAULT_DELTA: f64 = 1e-4;

/// Default order for certificates; the stability partner is `N + STABILITY_STEP`.
pub const DEFAULT_CERT_ORDER: usize = 32;

pub const STABILITY_STEP: usize = 4;

/// Corner matching tolerance.
pub const CORNER_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedSymbol {
    upper: WeylElement,
    lower: WeylElement,
    classical: ClassicalArc,
}

impl ExtendedSymbol {
    /// Checks hemisphere tags, shapes and the two corner conditions.
    pub fn new(upper: WeylElement, lower: WeylElement, classical: ClassicalArc) -> Result<Self> {
        let s = Self::from_parts(upper, lower, classical)?;
        let report = validate(&s);
        if report.upper_corner > CORNER_TOL {
            return Err(Error::CornerMismatch(format!(
                "upper boundary differs from the t = +1 slice by {:e}",
                report.upper_corner
            )));
        }
        if report.lower_corner > CORNER_TOL {
            return Err(Error::CornerMismatch(format!(
                "lower boundary differs from the t = -1 slice by {:e}",
                report.lower_corner
            )));
        }
        Ok(s)
    }

    /// Shape checks only; corners are left to [`validate`].
    pub fn from_parts(upper: WeylElement, lower: WeylElement, classical: ClassicalArc) -> Result<Self> {
        if upper.hemisphere() != Hemisphere::Upper || lower.hemisphere() != Hemisphere::Lower {
            return Err(Error::DimensionMismatch("hemisphere components in the wrong slots".into()));
        }
        if upper.working_degree() != lower.working_degree() {
            return Err(Error::DimensionMismatch("hemispheres at different working truncations".into()));
        }
        let g = classical.grid();
        if upper.boundary().grid_size() != g || lower.boundary().grid_size() != g {
            return Err(Error::InvalidGrid("boundary and arc grids differ".into()));
        }
        Ok(Self { upper, lower, classical })
    }

    /// The unit of the algebra, or any constant multiple of it.
    pub fn constant(value: Complex64, working_degree: usize, grid: usize, t_points: usize) -> Result<Self> {
        Self::new(
            WeylElement::constant(Hemisphere::Upper, value, working_degree, grid)?,
            WeylElement::constant(Hemisphere::Lower, value, working_degree, grid)?,
            ClassicalArc::constant(grid, t_points, value)?,
        )
    }

    pub fn unit(working_degree: usize, grid: usize, t_points: usize) -> Result<Self> {
        Self::constant(Complex64::from(1.0), working_degree, grid, t_points)
    }

    pub fn upper(&self) -> &WeylElement {
        &self.upper
    }

    pub fn lower(&self) -> &WeylElement {
        &self.lower
    }

    pub fn classical(&self) -> &ClassicalArc {
        &self.classical
    }

    pub fn working_degree(&self) -> usize {
        self.upper.working_degree()
    }

    /// Largest componentwise difference.
    pub fn distance(&self, other: &Self) -> f64 {
        self.upper
            .distance(&other.upper)
            .max(self.lower.distance(&other.lower))
            .max(self.classical.max_abs_diff(&other.classical))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidationReport {
    pub upper_corner: f64,
    pub lower_corner: f64,
    pub max_arc_jump: f64,
    pub arc_modulus: f64,
    pub ok: bool,
}

/// Corner residuals and arc continuity; never fails.
pub fn validate(sigma: &ExtendedSymbol) -> ValidationReport {
    let upper_corner = sigma.upper.boundary().max_abs_diff(&sigma.classical.upper_slice());
    let lower_corner = sigma.lower.boundary().max_abs_diff(&sigma.classical.lower_slice());
    let max_arc_jump = sigma.classical.max_jump();
    let ok = upper_corner <= CORNER_TOL && lower_corner <= CORNER_TOL && max_arc_jump <= DEFAULT_ARC_MODULUS;
    ValidationReport { upper_corner, lower_corner, max_arc_jump, arc_modulus: DEFAULT_ARC_MODULUS, ok }
}

/// Hemispheres multiply in their own algebras, the arc pointwise.
pub fn compose(a: &ExtendedSymbol, b: &ExtendedSymbol) -> Result<ExtendedSymbol> {
    ExtendedSymbol::from_parts(a.upper.compose(&b.upper)?, a.lower.compose(&b.lower)?, a.classical.mul(&b.classical)?)
}

pub fn inverse(sigma: &ExtendedSymbol) -> Result<ExtendedSymbol> {
    let m = sigma.classical.min_modulus();
    if m == 0.0 {
        return Err(Error::NotInvertible { component: "classical arc".into(), value: m });
    }
    let one = sigma.classical.map(|_| Complex64::from(1.0));
    ExtendedSymbol::from_parts(sigma.upper.inverse()?, sigma.lower.inverse()?, one.div(&sigma.classical)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InvertibilityCertificate {
    pub invertible: bool,
    pub delta: f64,
    pub orders: [usize; 2],
    pub classical_min_modulus: f64,
    pub upper_min_singular: [f64; 2],
    pub lower_min_singular: [f64; 2],
}

impl InvertibilityCertificate {
    /// Smallest of all certified quantities.
    pub fn margin(&self) -> f64 {
        self.upper_min_singular
            .iter()
            .chain(&self.lower_min_singular)
            .copied()
            .fold(self.classical_min_modulus, f64::min)
    }
}

/// Invertibility test at orders `N` and `N + 4`; the verdict must agree.
pub fn is_invertible(sigma: &ExtendedSymbol, delta: f64, order: usize) -> Result<InvertibilityCertificate> {
    if !(delta > 0.0) {
        return Err(Error::Config(format!("delta must be positive, got {delta}")));
    }
    let orders = [order, order + STABILITY_STEP];
    let classical_min_modulus = sigma.classical.min_modulus();
    let upper = [sigma.upper.min_singular(orders[0])?, sigma.upper.min_singular(orders[1])?];
    let lower = [sigma.lower.min_singular(orders[0])?, sigma.lower.min_singular(orders[1])?];
    let verdict = |i: usize| classical_min_modulus > delta && upper[i] > delta && lower[i] > delta;
    if verdict(0) != verdict(1) {
        return Err(Error::UnstableCertificate { low: orders[0], high: orders[1] });
    }
    Ok(InvertibilityCertificate {
        invertible: verdict(0),
        delta,
        orders,
        classical_min_modulus,
        upper_min_singular: upper,
        lower_min_singular: lower,
    })
}

/// Wire format: both hemisphere elements and the arc samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtendedSymbolJson {
    pub upper: WeylElementJson,
    pub lower: WeylElementJson,
    pub classical: ClassicalArcJson,
    #[serde(default)]
    pub working_degree: Option<usize>,
}

impl From<&ExtendedSymbol> for ExtendedSymbolJson {
    fn from(s: &ExtendedSymbol) -> Self {
        Self {
            upper: WeylElementJson::from_element(&s.upper),
            lower: WeylElementJson::from_element(&s.lower),
            classical: ClassicalArcJson::from(&s.classical),
            working_degree: Some(s.working_degree()),
        }
    }
}

impl TryFrom<ExtendedSymbolJson> for ExtendedSymbol {
    type Error = Error;

    fn try_from(j: ExtendedSymbolJson) -> Result<Self> {
        let wd = j.working_degree.unwrap_or(DEFAULT_WORKING_DEGREE);
        ExtendedSymbol::new(j.upper.into_element(wd)?, j.lower.into_element(wd)?, ClassicalArc::try_from(j.classical)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{FockOperator, FockTruncation};
    use crate::weyl::BoundaryFunction;
    use crate::CMatrix;

    fn unit() -> ExtendedSymbol {
        ExtendedSymbol::unit(16, 32, 9).unwrap()
    }

    fn sample(seed: f64) -> ExtendedSymbol {
        let f = BoundaryFunction::trig(32, &[(0, Complex64::from(3.0)), (1, Complex64::new(0.5, seed))]).unwrap();
        let g = BoundaryFunction::trig(32, &[(0, Complex64::from(2.0)), (-1, Complex64::new(seed, 0.3))]).unwrap();
        let t = FockTruncation::new(1, 16).unwrap();
        let k = CMatrix::from_fn(17, 17, |i, j| if i < 3 && j < 3 { Complex64::new(0.1 * seed, 0.05 * (i + j) as f64) } else { Complex64::default() });
        let up = WeylElement::new(Hemisphere::Upper, g.clone(), FockOperator::new(t.clone(), k.clone()).unwrap()).unwrap();
        let lo = WeylElement::new(Hemisphere::Lower, f.clone(), FockOperator::new(t, k.transpose()).unwrap()).unwrap();
        ExtendedSymbol::new(up, lo, ClassicalArc::interpolate(&f, &g, 9).unwrap()).unwrap()
    }

    #[test]
    fn unit_is_valid_and_invertible() {
        let r = validate(&unit());
        assert_eq!((r.upper_corner, r.lower_corner, r.max_arc_jump), (0.0, 0.0, 0.0));
        let c = is_invertible(&unit(), DEFAULT_DELTA, 8).unwrap();
        assert!(c.invertible);
        assert!((c.margin() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn perturbed_corner_is_reported() {
        let u = unit();
        let bumped = u.classical().upper_slice().map(|z| z + 0.1);
        let arc = u.classical().with_slice(8, &bumped).unwrap();
        let s = ExtendedSymbol::from_parts(u.upper().clone(), u.lower().clone(), arc.clone()).unwrap();
        let r = validate(&s);
        assert!((r.upper_corner - 0.1).abs() < 1e-15 && r.lower_corner == 0.0 && !r.ok);
        assert!(matches!(
            ExtendedSymbol::new(u.upper().clone(), u.lower().clone(), arc),
            Err(Error::CornerMismatch(_))
        ));
    }

    #[test]
    fn vanishing_arc_is_not_invertible() {
        let u = unit();
        let arc = u.classical().zip_with(u.classical(), |a, _| a).unwrap();
        let mut vals = arc.values().to_vec();
        vals[4 * 32 + 5] = Complex64::default();
        let arc = ClassicalArc::new(32, 9, vals).unwrap();
        let s = ExtendedSymbol::new(u.upper().clone(), u.lower().clone(), arc).unwrap();
        assert!(!is_invertible(&s, DEFAULT_DELTA, 8).unwrap().invertible);
    }

    #[test]
    fn compose_unit_and_inverse() {
        let s = sample(0.2);
        assert!(compose(&s, &unit()).unwrap().distance(&s) < 1e-12);
        let two = ExtendedSymbol::constant(Complex64::from(2.0), 16, 32, 9).unwrap();
        let half = ExtendedSymbol::constant(Complex64::from(0.5), 16, 32, 9).unwrap();
        assert!(inverse(&two).unwrap().distance(&half) < 1e-15);
        let one = compose(&s, &inverse(&s).unwrap()).unwrap();
        assert!(one.distance(&unit()) < 1e-8);
        let r = validate(&one);
        assert!(r.upper_corner < CORNER_TOL && r.lower_corner < CORNER_TOL);
    }

    #[test]
    fn compose_is_associative_and_pointwise_on_arc() {
        let (a, b, c) = (sample(0.1), sample(-0.3), sample(0.7));
        let l = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        let r = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        assert!(l.distance(&r) < 1e-8);
        let ab = compose(&a, &b).unwrap();
        assert_eq!(ab.classical(), &a.classical().mul(b.classical()).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let s = sample(0.4);
        let text = serde_json::to_string(&ExtendedSymbolJson::from(&s)).unwrap();
        let back = ExtendedSymbol::try_from(serde_json::from_str::<ExtendedSymbolJson>(&text).unwrap()).unwrap();
        assert!(back.distance(&s) < 1e-15);
    }
}
