//! Simplicial complexes with finite group actions: validation, regularity,
//! fixed subcomplexes, strata, orbit quotients and the split of fixed sets
//! along conjugate subgroups.

mod conner_floyd;
pub mod fixtures;
mod gcomplex;
mod quotient;
mod simplicial;
mod strata;

use thiserror::Error;

pub use conner_floyd::{conner_floyd_split, ConnerFloydSplit, SplitComponent};
pub use gcomplex::{ActionReport, ActionViolation, GComplex, Subdivision};
pub use quotient::{quotient_complex, QuotientComplex};
pub use simplicial::SimplicialComplex;
pub use strata::{fixed_subcomplex, stratify, SimplexSet, Stratification, StratificationChecks};

pub(crate) use simplicial::permutation_sign;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("vertex {vertex} out of range for {count} vertices")]
    BadVertex { vertex: usize, count: usize },
    #[error("simplex {simplex:?} is empty or repeats a vertex")]
    DegenerateSimplex { simplex: Vec<usize> },
    #[error("expected {expected} vertex permutations, found {found}")]
    WrongPermutationCount { expected: usize, found: usize },
    #[error("permutation {index} is not a permutation of 0..{degree}")]
    BadPermutation { index: usize, degree: usize },
    #[error("invalid action: {0}")]
    Action(ActionViolation),
    #[error("orientation needs {expected} signs of ±1, found {found} entries")]
    BadOrientation { expected: usize, found: usize },
    #[error("complex is not pure: maximal simplex {simplex:?} is below top dimension")]
    NotPure { simplex: Vec<usize> },
    #[error("face {face:?} has {cofaces} top-dimensional cofaces instead of 2")]
    NotPseudomanifold { face: Vec<usize>, cofaces: usize },
    #[error("no coherent orientation: conflict across face {face:?}")]
    NotOrientable { face: Vec<usize> },
    #[error("action is not regular: element {element} fixes {simplex:?} setwise but not pointwise")]
    NotRegular { element: usize, simplex: Vec<usize> },
    #[error("action still not regular after {limit} subdivisions")]
    RegularizationLimit { limit: usize },
    #[error("subgroup is not maximal: simplex {simplex:?} has larger isotropy {larger:?}")]
    NotMaximal { larger: Vec<usize>, simplex: Vec<usize> },
}
