//! Numerical laboratory for the extended Heisenberg symbol calculus on
//! co-oriented contact manifolds.
//!
//! The crate works at the level of completed symbols:
//!
//! - [`fock`]: truncated Bargmann-Fock spaces, ladder operators, the vacuum
//!   projector and the number-basis transpose.
//! - [`weyl`]: polynomial symbols on the symplectic fiber, the sharp products,
//!   Weyl quantization, symplectic pullbacks and the rotation homotopy.
//! - [`exsym`]: extended symbols `(upper, lower, classical arc)` with their
//!   involutions and the reduction to the Hermite ideal.
//! - [`index`]: truncation-stabilized Fredholm index extraction, winding
//!   numbers and Hardy-space Toeplitz matrices.
//! - [`chern`]: grid models of closed 3-manifolds, odd Chern character forms,
//!   Todd forms and the topological side of the index formula.
//! - [`models`]: the example symbols and the systems-case obstruction demo.
//! - [`sampling`]: seeded samplers and residuals shared by the suites.
//! - [`cli`]: batch driver and report formats.

pub mod chern;
pub mod cli;
pub mod error;
pub mod exsym;
pub mod fock;
pub mod index;
pub mod models;
pub mod sampling;
pub mod weyl;

pub use error::{Error, Result};

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Dense complex matrix used throughout the crate.
pub type CMatrix = DMatrix<Complex64>;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest entry modulus of a complex matrix.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}
