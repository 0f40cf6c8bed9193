//! Gauss–Hermite evaluation of the sharp-product integral. Oracle path only.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::poly::PolySymbol;
use super::sharp::{sharp, Sign};
use crate::{Error, Result};

pub const ORACLE_NODES: usize = 40;

/// Nodes and weights for `∫ f(x) e^{−x²} dx` (Golub–Welsch).
pub fn gauss_hermite(nodes: usize) -> (Vec<f64>, Vec<f64>) {
    let mut jacobi = DMatrix::<f64>::zeros(nodes, nodes);
    for k in 1..nodes {
        let b = (k as f64 / 2.0).sqrt();
        jacobi[(k, k - 1)] = b;
        jacobi[(k - 1, k)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..nodes)
        .map(|i| (eig.eigenvalues[i], PI.sqrt() * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// `π^{-2n} ∫∫ e^{±2i dθ(u,v)} e^{−|u|²−|v|²} a(ξ+u) b(ξ+v) du dv` at the real
/// point `xi = (x, p)`, by tensor Gauss–Hermite quadrature (n = 1 only).
///
/// The Gaussian factor regularizes the oscillatory integral. On polynomials the
/// exact value is [`regulated_sharp_reference`].
pub fn sharp_quadrature(a: &PolySymbol, b: &PolySymbol, sign: Sign, xi: [f64; 2]) -> Result<Complex64> {
    a.check_same_n(b)?;
    if a.n() != 1 {
        return Err(Error::UnsupportedDimension(a.n()));
    }
    let (x, w) = gauss_hermite(ORACLE_NODES);
    let m = x.len();
    let s = sign.value();
    let mut av = vec![Complex64::default(); m * m];
    let mut bv = vec![Complex64::default(); m * m];
    for i in 0..m {
        for j in 0..m {
            let pt = [xi[0] + x[i], xi[1] + x[j]];
            av[i * m + j] = a.eval_real(&pt) * (w[i] * w[j]);
            bv[i * m + j] = b.eval_real(&pt) * (w[i] * w[j]);
        }
    }
    // e^{2is(u_x v_p − u_p v_x)} = E[u_x][v_p] · conj(E[u_p][v_x])
    let e: Vec<Complex64> = (0..m * m)
        .map(|k| Complex64::from_polar(1.0, 2.0 * s * x[k / m] * x[k % m]))
        .collect();
    let mut total = Complex64::default();
    for ux in 0..m {
        for up in 0..m {
            let au = av[ux * m + up];
            let mut inner = Complex64::default();
            for vx in 0..m {
                let eu = e[up * m + vx].conj();
                for vp in 0..m {
                    inner += bv[vx * m + vp] * e[ux * m + vp] * eu;
                }
            }
            total += au * inner;
        }
    }
    Ok(total / (PI * PI))
}

/// Closed form of the regularized integral through the polynomial sharp:
/// `2^{-n} S_{√2}[ S_{1/√2}(e^{Δ/8} a) #± S_{1/√2}(e^{Δ/8} b) ]`, `S_λ f = f(λ ·)`.
pub fn regulated_sharp_reference(a: &PolySymbol, b: &PolySymbol, sign: Sign) -> Result<PolySymbol> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let aa = a.heat(0.125).dilate(r);
    let bb = b.heat(0.125).dilate(r);
    let prod = sharp(&aa, &bb, sign)?;
    Ok(prod.dilate(2f64.sqrt()).scale(Complex64::from(0.5f64.powi(a.n() as i32))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_hermite_moments() {
        let (x, w) = gauss_hermite(ORACLE_NODES);
        let m0: f64 = w.iter().sum();
        let m2: f64 = x.iter().zip(&w).map(|(x, w)| x * x * w).sum();
        let m4: f64 = x.iter().zip(&w).map(|(x, w)| x.powi(4) * w).sum();
        assert!((m0 - PI.sqrt()).abs() < 1e-13);
        assert!((m2 - PI.sqrt() / 2.0).abs() < 1e-13);
        assert!((m4 - 3.0 * PI.sqrt() / 4.0).abs() < 1e-12);
    }

    #[test]
    fn quadrature_pins_kappa_sign() {
        // regularized x # p − p # x is independent of ξ; compare its value at one point
        let x = PolySymbol::x(1, 0);
        let p = PolySymbol::p(1, 0);
        let pt = [0.3, -0.4];
        for sign in [Sign::Plus, Sign::Minus] {
            let q = sharp_quadrature(&x, &p, sign, pt).unwrap() - sharp_quadrature(&p, &x, sign, pt).unwrap();
            let r = regulated_sharp_reference(&x, &p, sign).unwrap().sub(&regulated_sharp_reference(&p, &x, sign).unwrap());
            assert!((q - r.eval_real(&pt)).norm() < 1e-10);
            // the regularization halves the commutator: κ/4 after the 2^{-n}/2 scaling
            assert!((q - crate::weyl::KAPPA * sign.value() / 4.0).norm() < 1e-10);
        }
    }
}
