use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly::{Monomial, PolySymbol};
use crate::{Result, I};

/// Hemisphere sign of the sharp product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// `x #+ p - p #+ x` in the frozen coordinates (`dθ = dx ∧ dp`, `w = x + ip`).
pub const KAPPA: Complex64 = I;

fn falling(n: u32, k: u32) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// One-axis factor of the product of two monomials: terms
/// `(coefficient, w exponent, wbar exponent)`.
fn axis_terms(p1: u32, q1: u32, p2: u32, q2: u32, s: f64) -> Vec<(f64, u32, u32)> {
    let mut out = Vec::new();
    // α derivatives ∂w on the left and ∂wbar on the right, β the reverse
    for alpha in 0..=p1.min(q2) {
        for beta in 0..=q1.min(p2) {
            let sign = if beta % 2 == 0 { 1.0 } else { -1.0 };
            let c = s.powi((alpha + beta) as i32) * sign / (factorial(alpha) * factorial(beta))
                * falling(p1, alpha)
                * falling(q2, alpha)
                * falling(q1, beta)
                * falling(p2, beta);
            out.push((c, p1 - alpha + p2 - beta, q1 - beta + q2 - alpha));
        }
    }
    out
}

fn monomial_sharp(m1: &Monomial, m2: &Monomial, s: f64, coeff: Complex64, out: &mut PolySymbol) {
    let n = m1.n();
    let per_axis: Vec<_> = (0..n).map(|j| axis_terms(m1.p[j], m1.q[j], m2.p[j], m2.q[j], s)).collect();
    // cartesian product over axes
    let mut idx = vec![0usize; n];
    loop {
        let mut c = coeff;
        let mut p = Vec::with_capacity(n);
        let mut q = Vec::with_capacity(n);
        for j in 0..n {
            let (cj, pj, qj) = per_axis[j][idx[j]];
            c *= cj;
            p.push(pj);
            q.push(qj);
        }
        out.add_term(Monomial { p, q }, c);
        let mut j = 0;
        loop {
            if j == n {
                return;
            }
            idx[j] += 1;
            if idx[j] < per_axis[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Closed-form sharp product of polynomial symbols,
///
/// `a #± b = exp(± sum_j (∂w_j^a ∂wbar_j^b − ∂wbar_j^a ∂w_j^b)) (a b)`,
///
/// which is the exact value of `π^{-2n} ∫ e^{±2i dθ(u,v)} a(ξ+u) b(ξ+v) du dv`
/// on polynomials. The series terminates.
pub fn sharp(a: &PolySymbol, b: &PolySymbol, sign: Sign) -> Result<PolySymbol> {
    a.check_same_n(b)?;
    let s = sign.value();
    let mut out = PolySymbol::zero(a.n());
    for (m1, c1) in a.terms() {
        for (m2, c2) in b.terms() {
            monomial_sharp(m1, m2, s, c1 * c2, &mut out);
        }
    }
    Ok(out)
}

/// `a #± b − b #± a`.
pub fn sharp_commutator(a: &PolySymbol, b: &PolySymbol, sign: Sign) -> Result<PolySymbol> {
    Ok(sharp(a, b, sign)?.sub(&sharp(b, a, sign)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    fn close(a: &PolySymbol, b: &PolySymbol, tol: f64) -> bool {
        a.sub(b).max_coeff() <= tol
    }

    #[test]
    fn unit_is_neutral() {
        let b = PolySymbol::w(1, 0).pow(2).mul(&PolySymbol::wbar(1, 0)).add(&PolySymbol::x(1, 0));
        let one = PolySymbol::one(1);
        assert_eq!(sharp(&one, &b, Sign::Plus).unwrap(), b);
        assert_eq!(sharp(&b, &one, Sign::Minus).unwrap(), b);
    }

    #[test]
    fn kappa_and_sign_duality() {
        let x = PolySymbol::x(1, 0);
        let p = PolySymbol::p(1, 0);
        let plus = sharp_commutator(&x, &p, Sign::Plus).unwrap();
        let minus = sharp_commutator(&x, &p, Sign::Minus).unwrap();
        assert!(close(&plus, &PolySymbol::constant(1, KAPPA), 1e-15));
        assert!(close(&minus, &PolySymbol::constant(1, -KAPPA), 1e-15));
        assert!(close(&minus, &plus.scale(Complex64::from(-1.0)), 0.0));
        assert_eq!(KAPPA.re, 0.0);
    }

    #[test]
    fn w_wbar_products() {
        let w = PolySymbol::w(1, 0);
        let wb = PolySymbol::wbar(1, 0);
        let r = sharp(&w, &wb, Sign::Plus).unwrap();
        assert_eq!(r, PolySymbol::norm_sq(1).add(&PolySymbol::one(1)));
        assert_eq!(r.top_part(), PolySymbol::norm_sq(1));
        let r = sharp(&wb, &w, Sign::Plus).unwrap();
        assert_eq!(r, PolySymbol::norm_sq(1).sub(&PolySymbol::one(1)));
    }

    #[test]
    fn degree_bound_and_leading_part() {
        let a = PolySymbol::w(2, 0).pow(2).add(&PolySymbol::wbar(2, 1).scale(I));
        let b = PolySymbol::wbar(2, 0).mul(&PolySymbol::w(2, 1)).add(&PolySymbol::one(2));
        let r = sharp(&a, &b, Sign::Plus).unwrap();
        assert!(r.degree() <= a.degree() + b.degree());
        assert_eq!(r.top_part(), a.top_part().mul(&b.top_part()));
    }

    #[test]
    fn mismatched_dimensions_rejected() {
        let e = sharp(&PolySymbol::one(1), &PolySymbol::one(2), Sign::Plus);
        assert!(matches!(e, Err(Error::DimensionMismatch(_))));
    }
}
