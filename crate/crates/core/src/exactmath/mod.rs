//! Exact rational linear algebra plus tolerance-carrying complex matrices.
//!
//! Homology, duality and signatures go through [`RatMatrix`] and never touch
//! floating point. Representation matrices live in [`CxMatrix`], which carries
//! its own comparison tolerance.

mod complex;
mod hermitian;
mod rational;
mod signature;
mod sparse;

use thiserror::Error;

pub use complex::{cx_solve_homogeneous, orthonormalize, CxMatrix, DEFAULT_TOL};
pub use hermitian::hermitian_inertia;
pub use num_complex::Complex64;
pub use rational::{rat, RatMatrix, Rational};
pub use signature::{symmetric_signature, SignatureTriple};
pub use sparse::SparseIntMatrix;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("form is not symmetric: entry ({row}, {col}) differs from its transpose")]
    NonSymmetric { row: usize, col: usize },
    #[error("form must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}
