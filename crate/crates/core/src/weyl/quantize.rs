use std::collections::HashMap;

use num_complex::Complex64;

use super::poly::{Monomial, PolySymbol};
use crate::fock::{annihilation, creation, FockOperator, FockTruncation};
use crate::{CMatrix, Error, Result};

/// Weyl quantization on the Bargmann-Fock space, normalized so that
/// `Op(a #+ b) = Op(a) Op(b)` with `Op(w_j) = √2 a_j` and `Op(wbar_j) = √2 a_j^†`.
///
/// Matrix elements are exact compressions of the infinite operator: the
/// monomial products are formed on `V^{N + deg}` and cropped to `V^N`.
pub fn weyl_quantize(sym: &PolySymbol, trunc: &FockTruncation) -> Result<FockOperator> {
    if sym.n() != trunc.n() {
        return Err(Error::DimensionMismatch(format!(
            "symbol with n = {} on truncation with n = {}",
            sym.n(),
            trunc.n()
        )));
    }
    let work = FockTruncation::new(trunc.n(), trunc.max_degree() + sym.degree() as usize)?;
    let mut q = Quantizer::new(&work)?;
    let d = work.dim();
    let mut acc = CMatrix::zeros(d, d);
    for (m, c) in sym.terms() {
        acc += q.monomial(m) * *c;
    }
    FockOperator::new(work, acc)?.resize(trunc.max_degree())
}

struct Quantizer {
    lower: Vec<CMatrix>,
    raise: Vec<CMatrix>,
    memo: HashMap<Monomial, CMatrix>,
    dim: usize,
}

impl Quantizer {
    fn new(work: &FockTruncation) -> Result<Self> {
        let s2 = Complex64::from(2f64.sqrt());
        let mut lower = Vec::new();
        let mut raise = Vec::new();
        for j in 0..work.n() {
            lower.push(annihilation(work, j)?.into_matrix() * s2);
            raise.push(creation(work, j)?.into_matrix() * s2);
        }
        Ok(Self { lower, raise, memo: HashMap::new(), dim: work.dim() })
    }

    // Op(w_j f) = Op(w_j) Op(f) − Op(∂wbar_j f) and
    // Op(wbar_j f) = Op(wbar_j) Op(f) + Op(∂w_j f), from w_j #+ f = w_j f + ∂wbar_j f.
    fn monomial(&mut self, m: &Monomial) -> CMatrix {
        if let Some(v) = self.memo.get(m) {
            return v.clone();
        }
        let out = if let Some(j) = m.p.iter().position(|&e| e > 0) {
            let mut f = m.clone();
            f.p[j] -= 1;
            let inner = self.monomial(&f);
            let mut r = &self.lower[j] * inner;
            if f.q[j] > 0 {
                let mut g = f.clone();
                g.q[j] -= 1;
                r -= self.monomial(&g) * Complex64::from(f.q[j] as f64);
            }
            r
        } else if let Some(j) = m.q.iter().position(|&e| e > 0) {
            let mut f = m.clone();
            f.q[j] -= 1;
            // f has no w factors, so ∂w_j f = 0
            let inner = self.monomial(&f);
            &self.raise[j] * inner
        } else {
            CMatrix::identity(self.dim, self.dim)
        };
        self.memo.insert(m.clone(), out.clone());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::build_truncation;
    use crate::max_abs;

    #[test]
    fn constant_one_is_identity() {
        let t = build_truncation(2, 4).unwrap();
        let op = weyl_quantize(&PolySymbol::one(2), &t).unwrap();
        assert_eq!(op, FockOperator::identity(&t));
    }

    #[test]
    fn linear_symbols_are_ladders() {
        // Oracle: exact Gaussian moments give <e_{k-1}, z̄-adjoint e_k> = √k, so
        // Op(w) = √2 a and Op(wbar) = √2 a^†.
        let t = build_truncation(1, 5).unwrap();
        let op = weyl_quantize(&PolySymbol::w(1, 0), &t).unwrap();
        for k in 1..=5usize {
            assert!((op.matrix()[(k - 1, k)].re - (2.0 * k as f64).sqrt()).abs() < 1e-14);
        }
        let opb = weyl_quantize(&PolySymbol::wbar(1, 0), &t).unwrap();
        assert!(max_abs(&(opb.matrix() - op.matrix().adjoint())) < 1e-14);
    }

    #[test]
    fn harmonic_oscillator_spectrum() {
        let t = build_truncation(1, 6).unwrap();
        let op = weyl_quantize(&PolySymbol::norm_sq(1), &t).unwrap();
        for k in 0..=6usize {
            for l in 0..=6usize {
                let expect = if k == l { 2.0 * k as f64 + 1.0 } else { 0.0 };
                assert!((op.matrix()[(k, l)] - Complex64::from(expect)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn real_symbols_are_self_adjoint() {
        let a = PolySymbol::x(1, 0).pow(3).add(&PolySymbol::p(1, 0).mul(&PolySymbol::x(1, 0)));
        let t = build_truncation(1, 10).unwrap();
        let op = weyl_quantize(&a, &t).unwrap();
        assert!(max_abs(&(op.matrix() - op.matrix().adjoint())) < 1e-12);
    }

    #[test]
    fn mismatched_n_rejected() {
        let t = build_truncation(2, 3).unwrap();
        assert!(weyl_quantize(&PolySymbol::one(1), &t).is_err());
    }
}
