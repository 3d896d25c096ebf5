//! Rational chain complexes with group action, the duality maps given by cap
//! product with a fundamental cycle, and signature invariants.

mod chains;
mod cohomology;
mod duality;
mod signature;
mod subdivision;

use thiserror::Error;

use crate::complex::ComplexError;
use crate::exactmath::ExactError;
use crate::reps::RepError;

pub use chains::{chains, permutation_module_check, DegreeCensus, GChainComplex, PermutationModuleReport};
pub use cohomology::{act_on_cochain, cup_pairing, frame_of, CohomologyFrame, MiddleCohomology};
pub use duality::{build_apc, cap_matrix, fundamental_cycle, Apc, ApcReport};
pub use signature::{
    g_signature, g_signature_of, quotient_signature, signature, signature_of, transfer, GSignature, IrrepSignature,
    QuotientSignature, TransferDegree,
};
pub use subdivision::{subdivision_check, StratumComparison, SubdivisionReport};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ApcError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("not closed: {simplex:?} has {cofaces} top-dimensional cofaces")]
    NotClosed { simplex: Vec<usize>, cofaces: usize },
    #[error("not orientable: orientation conflict across {face:?}")]
    NotOrientable { face: Vec<usize> },
    #[error("supplied orientation does not cancel on face {face:?}")]
    BadOrientation { face: Vec<usize> },
    #[error("complex carries no orientation")]
    MissingOrientation,
    #[error("property ({property}) fails in degree {degree}")]
    PropertyFailure { property: u8, degree: usize },
    #[error("group element {element} reverses the fundamental class")]
    OrientationReversed { element: usize },
    #[error("rational Poincaré duality fails for the quotient in degree {degree}")]
    DualityFailure { degree: usize },
    #[error("pulled-back classes are not a basis: expected {expected}, found {found}")]
    NotABasis { expected: usize, found: usize },
    #[error("isotypic block of {irrep} has inertia not divisible by its dimension")]
    BlockNotDivisible { irrep: String },
}
