use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{compose, inverse, is_invertible, ClassicalArc, ExtendedSymbol, Hemisphere, InvertibilityCertificate, WeylElement};
use crate::index::winding_number;
use crate::{max_abs, CMatrix, Error, Result};

/// `σ†(ξ) = σ(−ξ)`: hemispheres swap and the fiber is negated
/// (conjugation by `diag((−1)^k)` after re-reading), the arc maps
/// `(η, t) ↦ (−η, −t)`.
pub fn dagger(sigma: &ExtendedSymbol) -> ExtendedSymbol {
    ExtendedSymbol::from_parts(
        sigma.lower().reread(Hemisphere::Upper).negate_fiber(),
        sigma.upper().reread(Hemisphere::Lower).negate_fiber(),
        sigma.classical().reflect_t().antipode(),
    )
    .expect("shapes preserved")
}

/// `σ^op = σ ∘ (id_H ⊕ −id_N)`: hemispheres swap with the fiber variable kept.
pub fn op_involution(sigma: &ExtendedSymbol) -> ExtendedSymbol {
    ExtendedSymbol::from_parts(
        sigma.lower().reread(Hemisphere::Upper),
        sigma.upper().reread(Hemisphere::Lower),
        sigma.classical().reflect_t(),
    )
    .expect("shapes preserved")
}

/// `σ_t = σ ∘ (α_t ⊕ −id_N)` with `α_t` the rotation by `πt`.
/// `σ_0 = σ^op` and `σ_1 = σ†`.
pub fn path_point(sigma: &ExtendedSymbol, t: f64) -> ExtendedSymbol {
    let phi = PI * t;
    ExtendedSymbol::from_parts(
        sigma.lower().reread(Hemisphere::Upper).rotate(phi),
        sigma.upper().reread(Hemisphere::Lower).rotate(phi),
        sigma.classical().reflect_t().rotate(phi),
    )
    .expect("shapes preserved")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PathSample {
    pub t: f64,
    pub min_singular: f64,
    pub classical_min_modulus: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HomotopyPath {
    pub samples: Vec<PathSample>,
    /// Distance of `σ_0` from `op_involution(σ)`.
    pub start_residual: f64,
    /// Distance of `σ_1` from `dagger(σ)`.
    pub end_residual: f64,
}

impl HomotopyPath {
    pub fn min_certificate(&self) -> f64 {
        self.samples.iter().map(|s| s.min_singular.min(s.classical_min_modulus)).fold(f64::INFINITY, f64::min)
    }
}

/// Samples the path from `σ^op` to `σ†` on `steps` uniform points of `[0, 1]`
/// with an invertibility certificate at each point.
pub fn homotopy_dagger_to_op(sigma: &ExtendedSymbol, steps: usize, delta: f64, order: usize) -> Result<HomotopyPath> {
    if steps < 2 {
        return Err(Error::Config(format!("homotopy needs at least 2 steps, got {steps}")));
    }
    let cert = is_invertible(sigma, delta, order)?;
    if !cert.invertible {
        return Err(Error::NotInvertible { component: "symbol".into(), value: cert.margin() });
    }
    let samples: Vec<Result<PathSample>> = (0..steps)
        .into_par_iter()
        .map(|i| {
            let t = i as f64 / (steps - 1) as f64;
            let c = is_invertible(&path_point(sigma, t), delta, order)?;
            if !c.invertible {
                return Err(Error::PathDegenerate { t });
            }
            let min_singular =
                c.upper_min_singular.iter().chain(&c.lower_min_singular).copied().fold(f64::INFINITY, f64::min);
            Ok(PathSample { t, min_singular, classical_min_modulus: c.classical_min_modulus })
        })
        .collect();
    let samples = samples.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(HomotopyPath {
        samples,
        start_residual: path_point(sigma, 0.0).distance(&op_involution(sigma)),
        end_residual: path_point(sigma, 1.0).distance(&dagger(sigma)),
    })
}

/// `σ̃`: equal to `σ` on the lower half and op-symmetric.
pub fn symmetrize_tilde(sigma: &ExtendedSymbol, delta: f64, order: usize) -> Result<ExtendedSymbol> {
    let lower_min = sigma.lower().min_singular(order)?;
    if lower_min <= delta {
        return Err(Error::LowerHalfNotInvertible(format!(
            "lower hemisphere minimal singular value {lower_min:e} at order {order}"
        )));
    }
    let arc = sigma.classical();
    let mid = arc.mid();
    let arc_min = arc.min_modulus_over(0..=mid);
    if arc_min <= delta {
        return Err(Error::LowerHalfNotInvertible(format!("classical arc modulus {arc_min:e} for t <= 0")));
    }
    let last = arc.t_points() - 1;
    let mut values = Vec::with_capacity(arc.values().len());
    for k in 0..=last {
        values.extend_from_slice(arc.slice_values(if k <= mid { k } else { last - k }));
    }
    ExtendedSymbol::new(
        sigma.lower().reread(Hemisphere::Upper),
        sigma.lower().clone(),
        ClassicalArc::new(arc.grid(), arc.t_points(), values)?,
    )
}

#[derive(Debug, Clone)]
pub struct HermiteReduction {
    pub tau: ExtendedSymbol,
    pub certificate: InvertibilityCertificate,
    /// `max |τ₋ − 1|` over the working operator and the boundary.
    pub lower_residual: f64,
    /// Whether every `t ≤ 0` arc sample of `τ` equals 1 exactly.
    pub lower_arc_exact: bool,
    /// Minimum of `|τ.classical(·, s)|` over `s ∈ [0, 1]`: the homotopy from
    /// the `t = 0` slice (≡ 1) to the upper corner stays invertible above this.
    pub corner_min_modulus: f64,
    pub corner_winding: i64,
}

impl HermiteReduction {
    /// `τ₊ = σ₊ #₊ (σ₋)⁻¹`, the upper component of `τ`.
    pub fn tau_plus(&self) -> &WeylElement {
        self.tau.upper()
    }
}

/// `τ = σ σ̃⁻¹`, trivial on the lower half, with the corner certificate.
pub fn hermite_reduction(sigma: &ExtendedSymbol, delta: f64, order: usize) -> Result<HermiteReduction> {
    let certificate = is_invertible(sigma, delta, order)?;
    if !certificate.invertible {
        return Err(Error::NotInvertible { component: "symbol".into(), value: certificate.margin() });
    }
    let tilde = symmetrize_tilde(sigma, delta, order)?;
    let inv = inverse(&tilde)?;
    let prod = compose(sigma, &inv)?;
    // the arc is formed by division so that τ = 1 holds exactly where c̃ = c
    let arc = sigma.classical().div(tilde.classical())?;
    let tau = ExtendedSymbol::from_parts(prod.upper().clone(), prod.lower().clone(), arc)?;

    let lower_op = tau.lower().working_operator();
    let d = lower_op.dim();
    let lower_residual = max_abs(&(lower_op.matrix() - CMatrix::identity(d, d))).max(
        tau.lower().boundary().samples().iter().map(|z| (z - Complex64::from(1.0)).norm()).fold(0.0, f64::max),
    );
    let mid = tau.classical().mid();
    let lower_arc_exact =
        (0..=mid).all(|k| tau.classical().slice_values(k).iter().all(|z| *z == Complex64::from(1.0)));
    let corner_min_modulus = tau.classical().min_modulus_over(mid..=tau.classical().t_points() - 1);
    if corner_min_modulus <= delta {
        return Err(Error::CornerNotNullhomotopic { min_modulus: corner_min_modulus });
    }
    let corner_winding = winding_number(&tau.classical().upper_slice())?;
    Ok(HermiteReduction { tau, certificate, lower_residual, lower_arc_exact, corner_min_modulus, corner_winding })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exsym::{validate, DEFAULT_DELTA};
    use crate::fock::{FockOperator, FockTruncation};
    use crate::weyl::{metaplectic_rotation, pullback, reflect, rotation, weyl_quantize, BoundaryFunction, PolySymbol};

    const G: usize = 64;
    const T: usize = 17;
    const WD: usize = 32;

    fn element(hem: Hemisphere, b: &BoundaryFunction, seed: f64) -> WeylElement {
        let t = FockTruncation::new(1, WD).unwrap();
        let k = CMatrix::from_fn(WD + 1, WD + 1, |i, j| {
            if i < 4 && j < 4 {
                Complex64::new(0.05 * seed * (i as f64 - j as f64), 0.03 * ((i * j) as f64).sin())
            } else {
                Complex64::default()
            }
        });
        WeylElement::new(hem, b.clone(), FockOperator::new(t, k).unwrap()).unwrap()
    }

    fn sample(seed: f64) -> ExtendedSymbol {
        let f = BoundaryFunction::trig(G, &[(0, Complex64::from(3.0)), (1, Complex64::new(0.5, seed)), (2, Complex64::from(0.2))]).unwrap();
        let g = BoundaryFunction::trig(G, &[(0, Complex64::from(2.5)), (-1, Complex64::new(seed, 0.3))]).unwrap();
        let arc = ClassicalArc::from_fn(G, T, |th, t| {
            let s = (t + 1.0) / 2.0;
            let fv = Complex64::from(3.0) + Complex64::new(0.5, seed) * Complex64::from_polar(1.0, th) + Complex64::from(0.2) * Complex64::from_polar(1.0, 2.0 * th);
            let gv = Complex64::from(2.5) + Complex64::new(seed, 0.3) * Complex64::from_polar(1.0, -th);
            fv * (1.0 - s) + gv * s + Complex64::new(0.0, 0.1 * (1.0 - t * t) * th.cos())
        })
        .unwrap();
        ExtendedSymbol::new(element(Hemisphere::Upper, &g, seed), element(Hemisphere::Lower, &f, -seed), arc).unwrap()
    }

    #[test]
    fn transpose_is_reflected_quantization() {
        // Oracle for the fiber reflection absorbed into the hemisphere swap:
        // transposing Op(f) in the number basis equals quantizing f ∘ R.
        let t = FockTruncation::new(1, 12).unwrap();
        for (p, q) in [(1u32, 0u32), (2, 1), (0, 3), (3, 2), (1, 1)] {
            let mut f = PolySymbol::zero(1);
            f.add_term(crate::weyl::Monomial { p: vec![p], q: vec![q] }, Complex64::new(0.7, -0.2));
            let a = weyl_quantize(&f, &t).unwrap();
            let b = weyl_quantize(&reflect(&f), &t).unwrap();
            assert!(max_abs(&(a.matrix().transpose() - b.matrix())) < 1e-12, "monomial ({p},{q})");
        }
    }

    #[test]
    fn metaplectic_conjugation_matches_rotated_symbol() {
        let phi = PI / 3.0;
        let w2 = PolySymbol::w(1, 0).pow(2);
        let t = FockTruncation::new(1, 20).unwrap();
        let u = metaplectic_rotation(phi, &t);
        let op = weyl_quantize(&w2, &t).unwrap();
        let conj = u.matrix() * op.matrix() * u.matrix().adjoint();
        let direct = weyl_quantize(&pullback(&w2, &rotation(phi, 1)).unwrap(), &t).unwrap();
        let reliable = 20 - 2;
        let diff = (conj - direct.matrix()).view((0, 0), (reliable + 1, reliable + 1)).into_owned();
        assert!(max_abs(&diff) < 1e-8);
    }

    #[test]
    fn dagger_and_op_are_involutions() {
        let s = sample(0.3);
        assert!(dagger(&dagger(&s)).distance(&s) < 1e-10);
        assert!(op_involution(&op_involution(&s)).distance(&s) < 1e-12);
        let u = ExtendedSymbol::unit(WD, G, T).unwrap();
        assert!(dagger(&u).distance(&u) == 0.0 && op_involution(&u).distance(&u) == 0.0);
        for x in [dagger(&s), op_involution(&s)] {
            let r = validate(&x);
            assert!(r.upper_corner < 1e-8 && r.lower_corner < 1e-8);
        }
    }

    #[test]
    fn dagger_is_anti_multiplicative() {
        let (a, b) = (sample(0.2), sample(-0.4));
        let l = dagger(&compose(&a, &b).unwrap());
        let r = compose(&dagger(&b), &dagger(&a)).unwrap();
        assert!(l.distance(&r) < 1e-8);
    }

    #[test]
    fn homotopy_endpoints_and_certificates() {
        let s = sample(0.1);
        let path = homotopy_dagger_to_op(&s, 21, DEFAULT_DELTA, 16).unwrap();
        assert_eq!(path.samples.len(), 21);
        assert!(path.start_residual < 1e-8 && path.end_residual < 1e-8);
        assert!(path.min_certificate() > DEFAULT_DELTA);
    }

    #[test]
    fn symmetrization_properties() {
        let s = sample(0.25);
        let st = symmetrize_tilde(&s, DEFAULT_DELTA, 16).unwrap();
        assert!(op_involution(&st).distance(&st) < 1e-10);
        let mid = s.classical().mid();
        for k in 0..=mid {
            assert_eq!(st.classical().slice_values(k), s.classical().slice_values(k));
        }
        assert_eq!(st.lower(), s.lower());
        // already symmetric input is a fixed point
        assert!(symmetrize_tilde(&st, DEFAULT_DELTA, 16).unwrap().distance(&st) == 0.0);
        // inversion commutes with symmetrization
        let inv = inverse(&st).unwrap();
        assert!(op_involution(&inv).distance(&inv) < 1e-8);
    }

    #[test]
    fn hermite_reduction_is_trivial_on_lower_half() {
        let s = sample(0.15);
        let h = hermite_reduction(&s, DEFAULT_DELTA, 16).unwrap();
        assert!(h.lower_arc_exact);
        assert!(h.lower_residual < 1e-8);
        assert!(h.corner_min_modulus > DEFAULT_DELTA);
        assert_eq!(h.corner_winding, 0);
        // τ₊ = σ₊ (σ₋ᵀ)⁻¹
        let expect = s.upper().compose(&s.lower().reread(Hemisphere::Upper).inverse().unwrap()).unwrap();
        assert!(h.tau_plus().distance(&expect) < 1e-10);
        // op-symmetric input reduces to the unit
        let st = symmetrize_tilde(&s, DEFAULT_DELTA, 16).unwrap();
        let u = ExtendedSymbol::unit(WD, G, T).unwrap();
        assert!(hermite_reduction(&st, DEFAULT_DELTA, 16).unwrap().tau.distance(&u) < 1e-10);
    }
}
