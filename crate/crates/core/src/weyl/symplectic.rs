use nalgebra::DMatrix;
use num_complex::Complex64;

use super::poly::{Monomial, PolySymbol};
use crate::fock::{FockOperator, FockTruncation};
use crate::{Error, Result, I};

/// Tolerance for `Mᵀ Ω M = Ω`.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// Matrix of `dθ` in interleaved coordinates `(x_1, p_1, ..., x_n, p_n)`:
/// `dθ(u, v) = uᵀ Ω v = sum_j (u_{x_j} v_{p_j} − u_{p_j} v_{x_j})`.
pub fn symplectic_form(n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        m[(2 * j, 2 * j + 1)] = 1.0;
        m[(2 * j + 1, 2 * j)] = -1.0;
    }
    m
}

/// Compatible complex structure: multiplication by `i` on `w = x + ip`.
pub fn complex_structure(n: usize) -> DMatrix<f64> {
    -symplectic_form(n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMap {
    matrix: DMatrix<f64>,
}

impl SymplecticMap {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() % 2 != 0 || matrix.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "symplectic map must be 2n x 2n, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let residual = symplectic_residual(&matrix);
        if residual > SYMPLECTIC_TOL {
            return Err(Error::NotSymplectic { residual });
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: DMatrix::identity(2 * n, 2 * n) }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix * &other.matrix }
    }
}

/// `max |Mᵀ Ω M − Ω|`.
pub fn symplectic_residual(m: &DMatrix<f64>) -> f64 {
    let omega = symplectic_form(m.nrows() / 2);
    (m.transpose() * &omega * m - omega).amax()
}

/// `a ∘ α`. Fails with `NotSymplectic` when `α` does not preserve `dθ`.
pub fn pullback(a: &PolySymbol, alpha: &SymplecticMap) -> Result<PolySymbol> {
    pullback_linear(a, alpha.matrix())
}

/// `a ∘ M` for any real linear map, checking the symplectic condition first.
pub fn pullback_linear(a: &PolySymbol, m: &DMatrix<f64>) -> Result<PolySymbol> {
    let n = a.n();
    if m.nrows() != 2 * n || m.ncols() != 2 * n {
        return Err(Error::DimensionMismatch(format!("map of size {} for n = {n}", m.nrows())));
    }
    let residual = symplectic_residual(m);
    if residual > SYMPLECTIC_TOL {
        return Err(Error::NotSymplectic { residual });
    }
    Ok(substitute(a, m))
}

/// Linear substitution without the symplectic check.
pub(crate) fn substitute(a: &PolySymbol, m: &DMatrix<f64>) -> PolySymbol {
    let n = a.n();
    // coordinates in terms of (w, wbar)
    let coord = |k: usize| {
        if k % 2 == 0 {
            PolySymbol::x(n, k / 2)
        } else {
            PolySymbol::p(n, k / 2)
        }
    };
    let mut w_new = Vec::with_capacity(n);
    let mut wbar_new = Vec::with_capacity(n);
    for j in 0..n {
        let mut xj = PolySymbol::zero(n);
        let mut pj = PolySymbol::zero(n);
        for k in 0..2 * n {
            xj = xj.add(&coord(k).scale(Complex64::from(m[(2 * j, k)])));
            pj = pj.add(&coord(k).scale(Complex64::from(m[(2 * j + 1, k)])));
        }
        w_new.push(xj.add(&pj.scale(I)));
        wbar_new.push(xj.sub(&pj.scale(I)));
    }
    let mut out = PolySymbol::zero(n);
    for (mono, c) in a.terms() {
        let mut t = PolySymbol::constant(n, *c);
        for j in 0..n {
            t = t.mul(&w_new[j].pow(mono.p[j])).mul(&wbar_new[j].pow(mono.q[j]));
        }
        out = out.add(&t);
    }
    out
}

/// `α_t = cos(πt) + J sin(πt)`: `α_0 = id`, `α_{1/2} = J`, `α_1 = −id`.
pub fn rotation_homotopy(t: f64, n: usize) -> SymplecticMap {
    let (s, c) = (std::f64::consts::PI * t).sin_cos();
    let m = DMatrix::<f64>::identity(2 * n, 2 * n) * c + complex_structure(n) * s;
    SymplecticMap { matrix: m }
}

/// Rotation of every fiber coordinate by angle `phi` (`w ↦ e^{iφ} w`).
pub fn rotation(phi: f64, n: usize) -> SymplecticMap {
    rotation_homotopy(phi / std::f64::consts::PI, n)
}

/// Unitary `diag(e^{−i|k|φ})`. Conjugation `U Op(a) U^*` equals `Op(a ∘ α_φ)`
/// for the fiber rotation `α_φ`.
pub fn metaplectic_rotation(phi: f64, trunc: &FockTruncation) -> FockOperator {
    FockOperator::diagonal(trunc, |k| {
        let deg = k.iter().sum::<u32>() as f64;
        Complex64::from_polar(1.0, -deg * phi)
    })
}

/// Reflection `(x, p) ↦ (x, −p)`, i.e. `w ↦ wbar`. Anti-symplectic.
pub fn reflect(a: &PolySymbol) -> PolySymbol {
    let mut out = PolySymbol::zero(a.n());
    for (m, c) in a.terms() {
        out.add_term(Monomial { p: m.q.clone(), q: m.p.clone() }, *c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_homotopy_endpoints() {
        let id = rotation_homotopy(0.0, 1);
        assert_eq!(id.matrix(), &DMatrix::identity(2, 2));
        let neg = rotation_homotopy(1.0, 1);
        assert!((neg.matrix() + DMatrix::<f64>::identity(2, 2)).amax() < 1e-15);
        let half = rotation_homotopy(0.5, 2);
        assert!((half.matrix() - complex_structure(2)).amax() < 1e-15);
        for k in 0..=20 {
            assert!(symplectic_residual(rotation_homotopy(k as f64 / 20.0, 2).matrix()) < 1e-14);
        }
    }

    #[test]
    fn complex_structure_squares_to_minus_one_and_is_compatible() {
        let j = complex_structure(2);
        assert!((&j * &j + DMatrix::<f64>::identity(4, 4)).amax() == 0.0);
        assert!(symplectic_residual(&j) == 0.0);
        // dθ(u, J u) > 0
        let omega = symplectic_form(2);
        let u = nalgebra::DVector::from_vec(vec![0.3, -1.0, 2.0, 0.5]);
        assert!((u.transpose() * &omega * (&j * &u))[(0, 0)] > 0.0);
    }

    #[test]
    fn pullback_identity_and_negation() {
        let a = PolySymbol::w(1, 0).pow(2).add(&PolySymbol::wbar(1, 0).scale(I));
        assert_eq!(pullback(&a, &SymplecticMap::identity(1)).unwrap(), a);
        let neg = SymplecticMap::new(-DMatrix::<f64>::identity(2, 2)).unwrap();
        let w = PolySymbol::w(1, 0);
        assert_eq!(pullback(&w, &neg).unwrap(), w.scale(Complex64::from(-1.0)));
    }

    #[test]
    fn rotation_multiplies_w_by_phase() {
        let phi = 0.7;
        let w = PolySymbol::w(1, 0);
        let r = pullback(&w, &rotation(phi, 1)).unwrap();
        assert!(r.sub(&w.scale(Complex64::from_polar(1.0, phi))).max_coeff() < 1e-15);
    }

    #[test]
    fn non_symplectic_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]);
        assert!(matches!(SymplecticMap::new(m.clone()), Err(Error::NotSymplectic { .. })));
        assert!(matches!(pullback_linear(&PolySymbol::one(1), &m), Err(Error::NotSymplectic { .. })));
    }

    #[test]
    fn metaplectic_rotation_is_periodic() {
        let t = crate::fock::build_truncation(1, 8).unwrap();
        assert_eq!(metaplectic_rotation(0.0, &t), FockOperator::identity(&t));
        let full = metaplectic_rotation(2.0 * std::f64::consts::PI, &t);
        assert!(crate::max_abs(&(full.matrix() - FockOperator::identity(&t).matrix())) < 1e-13);
    }
}
