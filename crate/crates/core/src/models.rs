//! Example symbols: the order-normalized sublaplacian family, the Szegő
//! projector, classical elliptic symbols, Toeplitz symbols, seeded
//! op-symmetric and Fredholm samples, and the systems-case obstruction demo.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exsym::{
    ClassicalArc, ExtendedSymbol, Hemisphere, WeylElement, CORNER_TOL, DEFAULT_T_POINTS, DEFAULT_WORKING_DEGREE,
};
use crate::fock::{vacuum_projector, FockOperator, FockTruncation};
use crate::index::factored_symbol;
use crate::weyl::{weyl_quantize, BoundaryFunction, PolySymbol, DEFAULT_GRID};
use crate::{CMatrix, Error, Result};

/// Distance from an odd integer below which `c` is rejected.
pub const ODD_INTEGER_TOL: f64 = 1e-6;

/// Grids shared by the model constructors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ModelGrid {
    pub working_degree: usize,
    pub grid: usize,
    pub t_points: usize,
}

impl Default for ModelGrid {
    fn default() -> Self {
        Self { working_degree: DEFAULT_WORKING_DEGREE, grid: DEFAULT_GRID, t_points: DEFAULT_T_POINTS }
    }
}

pub fn check_sublaplacian_parameter(c: f64) -> Result<()> {
    if !c.is_finite() {
        return Err(Error::NonInvertibleParameter(format!("c = {c} is not finite")));
    }
    let nearest_odd = 2.0 * ((c - 1.0) / 2.0).round() + 1.0;
    if (c - nearest_odd).abs() < ODD_INTEGER_TOL {
        return Err(Error::NonInvertibleParameter(format!("c = {c} is within {ODD_INTEGER_TOL:e} of the odd integer {nearest_odd}")));
    }
    Ok(())
}

/// Number-basis diagonal of `Op(|w|² + s) Op(|w|² + 1)⁻¹`.
fn normalized_oscillator(s: f64, trunc: &FockTruncation) -> Result<FockOperator> {
    let num = weyl_quantize(&PolySymbol::norm_sq(1).add(&PolySymbol::constant(1, Complex64::from(s))), trunc)?;
    let den = weyl_quantize(&PolySymbol::norm_sq(1).add(&PolySymbol::one(1)), trunc)?;
    let d = trunc.dim();
    FockOperator::new(trunc.clone(), CMatrix::from_fn(d, d, |j, k| if j == k { num.matrix()[(j, j)] / den.matrix()[(j, j)] } else { Complex64::default() }))
}

/// Order-zero normalization of `Δ_H + icT`: `(2k + 1 ∓ c)/(2k + 2)` on the
/// two hemispheres, boundary and classical part identically 1.
pub fn sublaplacian_symbol(c: f64) -> Result<ExtendedSymbol> {
    sublaplacian_symbol_on(c, ModelGrid::default())
}

pub fn sublaplacian_symbol_on(c: f64, g: ModelGrid) -> Result<ExtendedSymbol> {
    check_sublaplacian_parameter(c)?;
    sublaplacian_unchecked(c, g)
}

/// Same construction without the parameter check, for exhibiting the non-invertible locus.
pub fn sublaplacian_unchecked(c: f64, g: ModelGrid) -> Result<ExtendedSymbol> {
    let trunc = FockTruncation::new(1, g.working_degree)?;
    let one = BoundaryFunction::constant(g.grid, Complex64::from(1.0))?;
    // |w|² is reflection invariant, so the lower operator needs no transpose
    let upper = WeylElement::from_operator(Hemisphere::Upper, one.clone(), &normalized_oscillator(-c, &trunc)?)?;
    let lower = WeylElement::from_operator(Hemisphere::Lower, one, &normalized_oscillator(c, &trunc)?)?;
    ExtendedSymbol::new(upper, lower, ClassicalArc::constant(g.grid, g.t_points, Complex64::from(1.0))?)
}

/// Vacuum projector with vanishing boundary value.
pub fn szego_symbol(trunc: &FockTruncation) -> Result<WeylElement> {
    WeylElement::new(Hemisphere::Upper, BoundaryFunction::constant(DEFAULT_GRID, Complex64::default())?, vacuum_projector(trunc))
}

/// `c(t) = σ₋ (σ₊/σ₋)^{(t+1)/2}` along the principal logarithm.
pub fn elliptic_arc(plus: Complex64, minus: Complex64, grid: usize, t_points: usize) -> Result<ClassicalArc> {
    let ratio = (plus / minus).ln();
    ClassicalArc::from_fn(grid, t_points, |_, t| {
        if t == 1.0 {
            plus
        } else {
            minus * (ratio * ((t + 1.0) / 2.0)).exp()
        }
    })
}

/// Classical symbol inside the extended calculus: constant hemispheres `σ±`.
pub fn classical_elliptic(plus: Complex64, minus: Complex64, arc: ClassicalArc, working_degree: usize) -> Result<ExtendedSymbol> {
    if plus.norm() == 0.0 || minus.norm() == 0.0 {
        return Err(Error::NonInvertibleParameter("hemisphere values must be nonzero".into()));
    }
    let g = arc.grid();
    let hi = arc.upper_slice().samples().iter().map(|z| (z - plus).norm()).fold(0.0, f64::max);
    let lo = arc.lower_slice().samples().iter().map(|z| (z - minus).norm()).fold(0.0, f64::max);
    if hi > CORNER_TOL || lo > CORNER_TOL {
        return Err(Error::CornerMismatch(format!("arc endpoints differ from the hemisphere values by {:e}", hi.max(lo))));
    }
    ExtendedSymbol::new(
        WeylElement::constant(Hemisphere::Upper, plus, working_degree, g)?,
        WeylElement::constant(Hemisphere::Lower, minus, working_degree, g)?,
        arc,
    )
}

/// Toeplitz symbol `e^{ikθ}`.
pub fn toeplitz_phase(degree: i64, grid: usize) -> Result<BoundaryFunction> {
    BoundaryFunction::trig(grid, &[(degree, Complex64::from(1.0))])
}

fn random_block(rng: &mut ChaCha8Rng, d: usize, size: usize, scale: f64) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| {
        if i < size && j < size {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale
        } else {
            Complex64::default()
        }
    })
}

/// Seeded boundary function `3 + Σ_{|m|≤2, m≠0} a_m e^{imθ}` with `Σ|a_m| ≤ 1`:
/// bounded below by 2, winding zero.
fn random_unit_winding_free(rng: &mut ChaCha8Rng, grid: usize) -> Result<BoundaryFunction> {
    let mut coeffs = vec![(0i64, Complex64::from(3.0))];
    for m in [-2i64, -1, 1, 2] {
        coeffs.push((m, Complex64::from_polar(rng.gen_range(0.0..0.25), rng.gen_range(0.0..2.0 * PI))));
    }
    BoundaryFunction::trig(grid, &coeffs)
}

/// Seeded op-symmetric extended symbol: `σ₊` is `σ₋` re-read, the arc is even in `t`.
pub fn op_symmetric_model(seed: u64, g: ModelGrid) -> Result<ExtendedSymbol> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_unit_winding_free(&mut rng, g.grid)?;
    let trunc = FockTruncation::new(1, g.working_degree)?;
    let k = random_block(&mut rng, trunc.dim(), 4, 0.05);
    let lower = WeylElement::new(Hemisphere::Lower, f.clone(), FockOperator::new(trunc, k)?)?;
    let amp = rng.gen_range(0.1..0.4);
    let mode = rng.gen_range(1..=3) as f64;
    let samples = f.samples().to_vec();
    let arc = ClassicalArc::from_fn(g.grid, g.t_points, |th, t| {
        let j = (th / (2.0 * PI) * g.grid as f64).round() as usize % g.grid;
        samples[j] * Complex64::new(1.0, amp * (1.0 - t * t) * (mode * th).cos())
    })?;
    ExtendedSymbol::new(lower.reread(Hemisphere::Upper), lower, arc)
}

/// Seeded invertible extended symbol without symmetry: independent
/// winding-free hemispheres joined by a straight arc.
pub fn random_invertible_model(seed: u64, g: ModelGrid) -> Result<ExtendedSymbol> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x5eed));
    let f = random_unit_winding_free(&mut rng, g.grid)?;
    let h = random_unit_winding_free(&mut rng, g.grid)?;
    let trunc = FockTruncation::new(1, g.working_degree)?;
    let upper = WeylElement::new(Hemisphere::Upper, h.clone(), FockOperator::new(trunc.clone(), random_block(&mut rng, trunc.dim(), 4, 0.05))?)?;
    let lower = WeylElement::new(Hemisphere::Lower, f.clone(), FockOperator::new(trunc.clone(), random_block(&mut rng, trunc.dim(), 4, 0.05))?)?;
    // both ends lie in the disk of radius 1 about 3, so the segment stays there
    ExtendedSymbol::new(upper, lower, ClassicalArc::interpolate(&f, &h, g.t_points)?)
}

/// Seeded Fredholm Weyl element with boundary winding in `[−3, 3]`, roots at
/// modulus `[0.2, 0.4]` inside and `[2.5, 5]` outside, plus a compact block.
/// Returns the element and the winding of its boundary.
pub fn fredholm_element(seed: u64, working_degree: usize) -> Result<(WeylElement, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0xf4ed));
    let root = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| Complex64::from_polar(rng.gen_range(lo..hi), rng.gen_range(0.0..2.0 * PI));
    let n_in = rng.gen_range(0..=3usize);
    let n_out = rng.gen_range(0..=2usize);
    let shift = rng.gen_range(0..=3i64);
    let inside: Vec<_> = (0..n_in).map(|_| root(&mut rng, 0.2, 0.4)).collect();
    let outside: Vec<_> = (0..n_out).map(|_| root(&mut rng, 2.5, 5.0)).collect();
    let f = factored_symbol(DEFAULT_GRID, &inside, &outside, shift)?;
    let trunc = FockTruncation::new(1, working_degree)?;
    let k = random_block(&mut rng, trunc.dim(), 3, 0.1);
    let e = WeylElement::new(Hemisphere::Upper, f, FockOperator::new(trunc, k)?)?;
    Ok((e, n_in as i64 - shift))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Remark3Case {
    /// `t = 0` slice with values in symmetric matrices.
    Symmetric,
    /// `t = 0` slice with values in rotation matrices.
    Rotation,
    /// `1 × 1` reduction.
    Scalar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Remark3Report {
    pub case: Remark3Case,
    pub seed: u64,
    pub size: usize,
    /// `max_η ‖c(η, 0) − c(η, 0)ᵀ‖_F`: the mismatch of the two definitions of `σ̃` at `t = 0`.
    pub obstruction: f64,
    /// `max |σ̃^op − σ̃|` over the arc samples.
    pub op_symmetry_residual: f64,
    pub symmetrization_succeeded: bool,
    pub failing_invariant: Option<String>,
}

/// Matrix-valued arc samples, `values[k][j]` an `m × m` matrix.
struct SystemArc {
    t_points: usize,
    values: Vec<Vec<CMatrix>>,
}

impl SystemArc {
    /// `c^op(η, t) = c(η, −t)ᵀ`: for systems, re-reading across the hemispheres transposes.
    fn op(&self) -> Self {
        let values = (0..self.t_points).map(|k| self.values[self.t_points - 1 - k].iter().map(|m| m.transpose()).collect()).collect();
        Self { t_points: self.t_points, values }
    }

    /// Keep `t ≤ 0`, fill `t > 0` from the op image.
    fn tilde(&self) -> Self {
        let op = self.op();
        let mid = self.t_points / 2;
        let values = (0..self.t_points).map(|k| if k <= mid { self.values[k].clone() } else { op.values[k].clone() }).collect();
        Self { t_points: self.t_points, values }
    }

    fn max_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .flatten()
            .zip(other.values.iter().flatten())
            .map(|(a, b)| (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }
}

/// Systems-case gluing check: builds a matrix symbol arc, symmetrizes it and
/// reports whether the glued arc is op-symmetric.
pub fn remark3_demo(case: Remark3Case, seed: u64) -> Remark3Report {
    let grid = 64;
    let t_points = 17;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = rng.gen_range(1.5..2.5);
    let b = rng.gen_range(0.2..0.5);
    let angle = rng.gen_range(PI / 6.0..PI / 3.0);
    let size = if case == Remark3Case::Scalar { 1 } else { 2 };
    let slice = |th: f64, t: f64| -> CMatrix {
        // t-dependence that is not itself symmetric, so only t = 0 matters for gluing
        let s = t * 0.2;
        match case {
            Remark3Case::Scalar => CMatrix::from_element(1, 1, Complex64::new(a + b * th.cos(), s)),
            Remark3Case::Symmetric => {
                let off = Complex64::new(b * th.sin(), 0.1);
                CMatrix::from_row_slice(2, 2, &[Complex64::from(a), off + s, off - s, Complex64::new(a, b * th.cos())])
            }
            Remark3Case::Rotation => {
                let phi = angle + 0.1 * th.cos();
                let (sn, cs) = phi.sin_cos();
                CMatrix::from_row_slice(2, 2, &[Complex64::from(cs), Complex64::from(-sn + s), Complex64::from(sn), Complex64::from(cs)])
            }
        }
    };
    let values = (0..t_points)
        .map(|k| {
            let t = ClassicalArc::t_value(k, t_points);
            (0..grid).map(|j| slice(2.0 * PI * j as f64 / grid as f64, t)).collect()
        })
        .collect();
    let arc = SystemArc { t_points, values };
    let mid = t_points / 2;
    let obstruction = arc.values[mid].iter().map(|m| (m - m.transpose()).norm()).fold(0.0, f64::max);
    let tilde = arc.tilde();
    let op_symmetry_residual = tilde.op().max_diff(&tilde);
    let symmetrization_succeeded = op_symmetry_residual <= 1e-10;
    Remark3Report {
        case,
        seed,
        size,
        obstruction,
        op_symmetry_residual,
        symmetrization_succeeded,
        failing_invariant: (!symmetrization_succeeded).then(|| {
            "op-symmetry of the glued symbol: the t = 0 slice is not a symmetric matrix, so the lower half and its transposed re-reading disagree".to_string()
        }),
    }
}

/// Model selection for the command line and JSON inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum ModelSpec {
    Sublaplacian { c: f64 },
    Szego,
    #[serde(rename_all = "camelCase")]
    ClassicalElliptic { sigma_plus: [f64; 2], sigma_minus: [f64; 2] },
    Toeplitz { degree: i64 },
    OpSymmetric { seed: u64 },
    Remark3System { case: Remark3Case, seed: u64 },
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::Sublaplacian { c } => check_sublaplacian_parameter(*c),
            ModelSpec::ClassicalElliptic { sigma_plus, sigma_minus } => {
                if sigma_plus.iter().chain(sigma_minus).any(|v| !v.is_finite()) {
                    return Err(Error::Config("elliptic values must be finite".into()));
                }
                if Complex64::new(sigma_plus[0], sigma_plus[1]).norm() == 0.0 || Complex64::new(sigma_minus[0], sigma_minus[1]).norm() == 0.0 {
                    return Err(Error::NonInvertibleParameter("hemisphere values must be nonzero".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// The extended symbol of the model, where it has one.
    pub fn extended_symbol(&self, g: ModelGrid) -> Result<Option<ExtendedSymbol>> {
        self.validate()?;
        Ok(match self {
            ModelSpec::Sublaplacian { c } => Some(sublaplacian_symbol_on(*c, g)?),
            ModelSpec::ClassicalElliptic { sigma_plus, sigma_minus } => {
                let p = Complex64::new(sigma_plus[0], sigma_plus[1]);
                let m = Complex64::new(sigma_minus[0], sigma_minus[1]);
                Some(classical_elliptic(p, m, elliptic_arc(p, m, g.grid, g.t_points)?, g.working_degree)?)
            }
            ModelSpec::OpSymmetric { seed } => Some(op_symmetric_model(*seed, g)?),
            _ => None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exsym::{hermite_reduction, is_invertible, op_involution, validate, DEFAULT_DELTA};
    use crate::max_abs;

    fn small() -> ModelGrid {
        ModelGrid { working_degree: 24, grid: 64, t_points: 17 }
    }

    #[test]
    fn sublaplacian_spectrum_and_parameters() {
        let s = sublaplacian_symbol_on(0.5, small()).unwrap();
        let up = s.upper().working_operator();
        let lo = s.lower().working_operator();
        for k in 0..=24usize {
            let kf = k as f64;
            assert!((up.matrix()[(k, k)].re - (2.0 * kf + 0.5) / (2.0 * kf + 2.0)).abs() < 1e-14);
            assert!((lo.matrix()[(k, k)].re - (2.0 * kf + 1.5) / (2.0 * kf + 2.0)).abs() < 1e-14);
        }
        for c in [1.0, -1.0, 3.0, 1.0 + 1e-7] {
            assert!(matches!(sublaplacian_symbol_on(c, small()), Err(Error::NonInvertibleParameter(_))));
        }
        assert!(sublaplacian_symbol_on(2.0, small()).is_ok());
        let r = validate(&s);
        assert!(r.ok && r.upper_corner < 1e-8);
    }

    #[test]
    fn sublaplacian_invertibility_locus() {
        assert!(is_invertible(&sublaplacian_symbol_on(0.5, small()).unwrap(), DEFAULT_DELTA, 16).unwrap().invertible);
        assert!(!is_invertible(&sublaplacian_unchecked(1.0, small()).unwrap(), DEFAULT_DELTA, 16).unwrap().invertible);
        let s0 = sublaplacian_symbol_on(0.0, small()).unwrap();
        assert!(op_involution(&s0).distance(&s0) < 1e-14);
    }

    #[test]
    fn sublaplacian_tau_plus_is_positive_diagonal() {
        let s = sublaplacian_symbol_on(0.5, small()).unwrap();
        let h = hermite_reduction(&s, DEFAULT_DELTA, 16).unwrap();
        let tau = h.tau_plus().working_operator();
        for k in 0..=24usize {
            let kf = k as f64;
            let expect = (2.0 * kf + 0.5) / (2.0 * kf + 1.5);
            assert!((tau.matrix()[(k, k)] - Complex64::from(expect)).norm() < 1e-12);
        }
        let off = tau.matrix() - CMatrix::from_diagonal(&tau.matrix().diagonal());
        assert!(max_abs(&off) < 1e-14);
    }

    #[test]
    fn szego_projector() {
        let t = FockTruncation::new(1, 10).unwrap();
        let s = szego_symbol(&t).unwrap();
        assert!(s.compose(&s).unwrap().distance(&s) < 1e-15);
        let scaled = |c: f64| WeylElement::new(Hemisphere::Upper, s.boundary().clone(), s.finite().scale(Complex64::from(c))).unwrap();
        assert!(scaled(2.0).compose(&scaled(3.0)).unwrap().distance(&scaled(6.0)) == 0.0);
        assert_eq!(s.boundary().min_modulus(), 0.0);
        assert!(s.boundary().samples().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn classical_elliptic_cases() {
        let g = small();
        let one = Complex64::from(1.0);
        let unit = classical_elliptic(one, one, ClassicalArc::constant(g.grid, g.t_points, one).unwrap(), g.working_degree).unwrap();
        assert!(unit.distance(&ExtendedSymbol::unit(g.working_degree, g.grid, g.t_points).unwrap()) == 0.0);
        let m1 = Complex64::from(-1.0);
        let arc = elliptic_arc(m1, one, g.grid, g.t_points).unwrap();
        let s = classical_elliptic(m1, one, arc, g.working_degree).unwrap();
        let h = hermite_reduction(&s, DEFAULT_DELTA, 16).unwrap();
        let tau = h.tau_plus().working_operator();
        assert!(max_abs(&(tau.matrix() + CMatrix::identity(25, 25))) < 1e-14);
        let bad = ClassicalArc::constant(g.grid, g.t_points, one).unwrap();
        assert!(matches!(classical_elliptic(m1, one, bad, 24), Err(Error::CornerMismatch(_))));
    }

    #[test]
    fn seeded_models_are_valid_and_distinct() {
        let a = op_symmetric_model(1, small()).unwrap();
        let b = op_symmetric_model(2, small()).unwrap();
        assert!(a.distance(&b) > 1e-3);
        assert!(op_involution(&a).distance(&a) < 1e-14);
        assert!(validate(&a).ok);
        let r = random_invertible_model(3, small()).unwrap();
        assert!(validate(&r).ok);
        assert!(is_invertible(&r, DEFAULT_DELTA, 16).unwrap().invertible);
        assert_eq!(op_symmetric_model(1, small()).unwrap(), a);
    }

    #[test]
    fn remark3_cases() {
        let sym = remark3_demo(Remark3Case::Symmetric, 0);
        assert!(sym.symmetrization_succeeded && sym.obstruction == 0.0 && sym.failing_invariant.is_none());
        let rot = remark3_demo(Remark3Case::Rotation, 0);
        assert!(!rot.symmetrization_succeeded && rot.obstruction > 0.1 && rot.failing_invariant.is_some());
        let sc = remark3_demo(Remark3Case::Scalar, 0);
        assert!(sc.symmetrization_succeeded && sc.obstruction == 0.0);
        assert_eq!(remark3_demo(Remark3Case::Rotation, 5), remark3_demo(Remark3Case::Rotation, 5));
    }

    #[test]
    fn model_spec_json() {
        let m: ModelSpec = serde_json::from_str(r#"{"kind":"sublaplacian","c":0.5}"#).unwrap();
        assert_eq!(m, ModelSpec::Sublaplacian { c: 0.5 });
        let e: ModelSpec = serde_json::from_str(r#"{"kind":"classicalElliptic","sigmaPlus":[-1,0],"sigmaMinus":[1,0]}"#).unwrap();
        assert!(e.validate().is_ok());
        assert!(ModelSpec::Sublaplacian { c: 1.0 }.validate().is_err());
    }
}
