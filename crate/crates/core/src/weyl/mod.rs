//! Polynomial symbols on the symplectic fiber `H* ≅ R^{2n}`.
//!
//! Frozen conventions: interleaved real coordinates `(x_1, p_1, ...)`,
//! `dθ = sum dx_j ∧ dp_j`, complex coordinate `w_j = x_j + i p_j`, complex
//! structure `J` = multiplication by `i`. With these, `x #+ p − p #+ x = i`
//! ([`KAPPA`]) and the quantization sends `w_j ↦ √2 a_j`.

mod boundary;
mod poly;
mod quadrature;
mod quantize;
mod sharp;
mod symplectic;

pub use boundary::{boundary_symbol, grid_angle, BoundaryFunction, DEFAULT_GRID, DEGENERATE_TOL};
pub use poly::{Monomial, PolySymbol, PolySymbolJson, TermJson};
pub use quadrature::{gauss_hermite, regulated_sharp_reference, sharp_quadrature, ORACLE_NODES};
pub use quantize::weyl_quantize;
pub use sharp::{sharp, sharp_commutator, Sign, KAPPA};
pub use symplectic::{
    complex_structure, metaplectic_rotation, pullback, pullback_linear, reflect, rotation,
    rotation_homotopy, symplectic_form, symplectic_residual, SymplecticMap, SYMPLECTIC_TOL,
};
