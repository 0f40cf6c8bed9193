//! Seeded samplers and residual measures shared by the verification suites.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::fock::FockTruncation;
use crate::index::factored_symbol;
use crate::weyl::{pullback, regulated_sharp_reference, sharp, sharp_quadrature, weyl_quantize, BoundaryFunction, Monomial, PolySymbol, Sign, SymplecticMap};
use crate::{max_abs, Result};

/// Random polynomial in `(w, wbar)` of total degree at most `max_degree`,
/// coefficients uniform in the unit square.
pub fn random_poly<R: Rng>(rng: &mut R, n: usize, max_degree: u32) -> PolySymbol {
    let mut out = PolySymbol::zero(n);
    let terms = rng.gen_range(1..=6);
    for _ in 0..terms {
        let d = rng.gen_range(0..=max_degree);
        let mut p = vec![0u32; n];
        let mut q = vec![0u32; n];
        for _ in 0..d {
            let axis = rng.gen_range(0..n);
            if rng.gen_bool(0.5) {
                p[axis] += 1;
            } else {
                q[axis] += 1;
            }
        }
        out.add_term(Monomial { p, q }, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    }
    out
}

/// `R(θ₁) diag(s, 1/s) R(θ₂)` with `s ∈ [1/2, 2]`: a random element of `Sp(2, R)`.
pub fn random_sp2<R: Rng>(rng: &mut R) -> SymplecticMap {
    let rot = |t: f64| DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
    let s: f64 = rng.gen_range(0.5..2.0);
    let m = rot(rng.gen_range(0.0..2.0 * PI)) * DMatrix::from_row_slice(2, 2, &[s, 0.0, 0.0, 1.0 / s]) * rot(rng.gen_range(0.0..2.0 * PI));
    SymplecticMap::new(m).expect("determinant one")
}

/// Nonvanishing trigonometric polynomial of degree at most 5: linear factors
/// with roots of modulus in `[0.2, 0.5]` or `[2, 5]`, times `z^{−m}`.
pub fn random_trig_symbol<R: Rng>(rng: &mut R, grid: usize) -> Result<BoundaryFunction> {
    let deg = rng.gen_range(0..=5usize);
    let n_in = rng.gen_range(0..=deg);
    let mut root = |lo: f64, hi: f64| Complex64::from_polar(rng.gen_range(lo..hi), rng.gen_range(0.0..2.0 * PI));
    let inside: Vec<_> = (0..n_in).map(|_| root(0.2, 0.5)).collect();
    let outside: Vec<_> = (n_in..deg).map(|_| root(2.0, 5.0)).collect();
    let shift = rng.gen_range(0..=deg as i64);
    factored_symbol(grid, &inside, &outside, shift)
}

/// `max |Op(a #₊ b) − Op(a) Op(b)|` on the block of degrees `≤ N − deg a − deg b`.
pub fn homomorphism_residual(a: &PolySymbol, b: &PolySymbol, max_degree: usize) -> Result<f64> {
    let t = FockTruncation::new(a.n(), max_degree)?;
    let lhs = weyl_quantize(&sharp(a, b, Sign::Plus)?, &t)?;
    let rhs = weyl_quantize(a, &t)?.mul(&weyl_quantize(b, &t)?)?;
    let reliable = max_degree.saturating_sub((a.degree() + b.degree()) as usize);
    let d = FockTruncation::new(a.n(), reliable)?.dim();
    Ok(max_abs(&(lhs.matrix() - rhs.matrix()).view((0, 0), (d, d)).into_owned()))
}

/// Largest coefficient of `(a∘α) #₊ (b∘α) − (a #₊ b)∘α`.
pub fn equivariance_residual(a: &PolySymbol, b: &PolySymbol, alpha: &SymplecticMap) -> Result<f64> {
    let l = sharp(&pullback(a, alpha)?, &pullback(b, alpha)?, Sign::Plus)?;
    let r = pullback(&sharp(a, b, Sign::Plus)?, alpha)?;
    Ok(l.sub(&r).max_coeff())
}

/// Gauss–Hermite evaluation of the regulated integral against its closed form at `xi`.
pub fn quadrature_residual(a: &PolySymbol, b: &PolySymbol, sign: Sign, xi: [f64; 2]) -> Result<f64> {
    let q = sharp_quadrature(a, b, sign, xi)?;
    let exact = regulated_sharp_reference(a, b, sign)?.eval_real(&xi);
    Ok((q - exact).norm())
}
