use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, I};

/// Exponent pair of the monomial `w^p wbar^q` (multi-indices of length `n`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub p: Vec<u32>,
    pub q: Vec<u32>,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Self { p: vec![0; n], q: vec![0; n] }
    }

    pub fn degree(&self) -> u32 {
        self.p.iter().chain(&self.q).sum()
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }
}

/// Polynomial in `(w, wbar)`, `w in C^n = H*` with `w_j = x_j + i p_j`.
///
/// The table never stores exact zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySymbol {
    n: usize,
    terms: BTreeMap<Monomial, Complex64>,
}

impl PolySymbol {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        let mut s = Self::zero(n);
        s.add_term(Monomial::one(n), c);
        s
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Complex64::from(1.0))
    }

    pub fn monomial(p: Vec<u32>, q: Vec<u32>, c: Complex64) -> Result<Self> {
        if p.len() != q.len() || p.is_empty() {
            return Err(Error::DimensionMismatch("exponent vectors must have equal length n >= 1".into()));
        }
        let mut s = Self::zero(p.len());
        s.add_term(Monomial { p, q }, c);
        Ok(s)
    }

    fn unit(n: usize, axis: usize, conj: bool) -> Self {
        let mut m = Monomial::one(n);
        if conj {
            m.q[axis] = 1;
        } else {
            m.p[axis] = 1;
        }
        let mut s = Self::zero(n);
        s.add_term(m, Complex64::from(1.0));
        s
    }

    /// The coordinate `w_j`.
    pub fn w(n: usize, axis: usize) -> Self {
        Self::unit(n, axis, false)
    }

    /// The coordinate `wbar_j`.
    pub fn wbar(n: usize, axis: usize) -> Self {
        Self::unit(n, axis, true)
    }

    /// `x_j = (w_j + wbar_j) / 2`.
    pub fn x(n: usize, axis: usize) -> Self {
        Self::w(n, axis).add(&Self::wbar(n, axis)).scale(Complex64::from(0.5))
    }

    /// `p_j = (w_j - wbar_j) / 2i`.
    pub fn p(n: usize, axis: usize) -> Self {
        Self::w(n, axis).sub(&Self::wbar(n, axis)).scale(1.0 / (2.0 * I))
    }

    /// `|w|^2 = sum_j w_j wbar_j`.
    pub fn norm_sq(n: usize) -> Self {
        let mut s = Self::zero(n);
        for j in 0..n {
            s = s.add(&Self::w(n, j).mul(&Self::wbar(n, j)));
        }
        s
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, Complex64)>) -> Result<Self> {
        let mut s = Self::zero(n);
        for (m, c) in terms {
            if m.p.len() != n || m.q.len() != n {
                return Err(Error::DimensionMismatch(format!("monomial of length {} in n = {n}", m.p.len())));
            }
            s.add_term(m, c);
        }
        Ok(s)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Complex64) {
        if c == Complex64::from(0.0) {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == Complex64::from(0.0) {
                    e.remove();
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("symbols with n = {} and n = {}", self.n, other.n)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "PolySymbol::add with mismatched n");
        let mut s = self.clone();
        for (m, c) in &other.terms {
            s.add_term(m.clone(), *c);
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::from(-1.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut s = Self::zero(self.n);
        for (m, v) in &self.terms {
            s.add_term(m.clone(), v * c);
        }
        s
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "PolySymbol::mul with mismatched n");
        let mut s = Self::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let p = m1.p.iter().zip(&m2.p).map(|(a, b)| a + b).collect();
                let q = m1.q.iter().zip(&m2.q).map(|(a, b)| a + b).collect();
                s.add_term(Monomial { p, q }, c1 * c2);
            }
        }
        s
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.n), |acc, _| acc.mul(self))
    }

    /// `d/dw_j`.
    pub fn d_w(&self, axis: usize) -> Self {
        let mut s = Self::zero(self.n);
        for (m, c) in &self.terms {
            if m.p[axis] > 0 {
                let mut m2 = m.clone();
                m2.p[axis] -= 1;
                s.add_term(m2, c * m.p[axis] as f64);
            }
        }
        s
    }

    /// `d/dwbar_j`.
    pub fn d_wbar(&self, axis: usize) -> Self {
        let mut s = Self::zero(self.n);
        for (m, c) in &self.terms {
            if m.q[axis] > 0 {
                let mut m2 = m.clone();
                m2.q[axis] -= 1;
                s.add_term(m2, c * m.q[axis] as f64);
            }
        }
        s
    }

    /// Homogeneous part of top total degree.
    pub fn top_part(&self) -> Self {
        let d = self.degree();
        let mut s = Self::zero(self.n);
        for (m, c) in &self.terms {
            if m.degree() == d {
                s.add_term(m.clone(), *c);
            }
        }
        s
    }

    /// Drop coefficients with modulus at most `tol`.
    pub fn chop(&self, tol: f64) -> Self {
        let mut s = Self::zero(self.n);
        for (m, c) in &self.terms {
            if c.norm() > tol {
                s.add_term(m.clone(), *c);
            }
        }
        s
    }

    /// Evaluate at `w`; `wbar` is taken as the conjugate.
    pub fn eval(&self, w: &[Complex64]) -> Complex64 {
        assert_eq!(w.len(), self.n);
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = *c;
                for j in 0..self.n {
                    v *= w[j].powu(m.p[j]) * w[j].conj().powu(m.q[j]);
                }
                v
            })
            .sum()
    }

    /// Evaluate at real coordinates `(x_1, p_1, x_2, p_2, ...)`.
    pub fn eval_real(&self, xi: &[f64]) -> Complex64 {
        assert_eq!(xi.len(), 2 * self.n);
        let w: Vec<Complex64> = (0..self.n).map(|j| Complex64::new(xi[2 * j], xi[2 * j + 1])).collect();
        self.eval(&w)
    }

    /// Complex conjugate function `ξ ↦ conj(a(ξ))`.
    pub fn conj(&self) -> Self {
        let mut s = Self::zero(self.n);
        for (m, c) in &self.terms {
            s.add_term(Monomial { p: m.q.clone(), q: m.p.clone() }, c.conj());
        }
        s
    }

    /// True when the symbol is real-valued as a function (coefficients up to `tol`).
    pub fn is_real(&self, tol: f64) -> bool {
        self.sub(&self.conj()).terms.values().all(|c| c.norm() <= tol)
    }

    /// Maximum coefficient modulus.
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |a, c| a.max(c.norm()))
    }

    /// Dilation `ξ ↦ a(λ ξ)`.
    pub fn dilate(&self, lambda: f64) -> Self {
        let mut s = Self::zero(self.n);
        for (m, c) in &self.terms {
            s.add_term(m.clone(), c * lambda.powi(m.degree() as i32));
        }
        s
    }

    /// Heat flow `exp(τ Δ)` with `Δ` the real Laplacian `sum ∂x² + ∂p² = 4 sum ∂w ∂wbar`.
    /// Finite on polynomials.
    pub fn heat(&self, tau: f64) -> Self {
        let mut out = self.clone();
        let mut term = self.clone();
        let mut k = 1u32;
        loop {
            let mut lap = Self::zero(self.n);
            for j in 0..self.n {
                lap = lap.add(&term.d_w(j).d_wbar(j));
            }
            term = lap.scale(Complex64::from(4.0 * tau / k as f64));
            if term.is_zero() {
                return out;
            }
            out = out.add(&term);
            k += 1;
        }
    }
}

/// JSON form: `{"n": int, "terms": [{"p": [..], "q": [..], "re": f, "im": f}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolySymbolJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub p: Vec<u32>,
    pub q: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

impl From<&PolySymbol> for PolySymbolJson {
    fn from(s: &PolySymbol) -> Self {
        Self {
            n: s.n,
            terms: s
                .terms
                .iter()
                .map(|(m, c)| TermJson { p: m.p.clone(), q: m.q.clone(), re: c.re, im: c.im })
                .collect(),
        }
    }
}

impl TryFrom<PolySymbolJson> for PolySymbol {
    type Error = Error;

    fn try_from(j: PolySymbolJson) -> Result<Self> {
        if j.n == 0 {
            return Err(Error::DimensionMismatch("n must be >= 1".into()));
        }
        if j.terms.iter().any(|t| !t.re.is_finite() || !t.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        PolySymbol::from_terms(
            j.n,
            j.terms.into_iter().map(|t| (Monomial { p: t.p, q: t.q }, Complex64::new(t.re, t.im))),
        )
    }
}
