//! Equivariant bundles over `G`-complexes: charts on the total space,
//! transition data valued in equivariant automorphisms of the fiber model,
//! the principal-bundle description over the orbit space, isomorphism
//! witnesses, and the splitting for non-normal isotropy.

mod atlas;
pub mod fixtures;
mod isomorphism;
mod nonnormal;
mod principal;
mod transition;

use thiserror::Error;

use crate::complex::ComplexError;
use crate::model::ModelError;
use crate::reps::RepError;

pub use atlas::{validate_atlas, AtlasReport, AtlasViolation, EquivariantAtlas, OverlapSummary, SimplexId};
pub use isomorphism::{bundle_isomorphism, IsoFailure, IsomorphismWitness};
pub use nonnormal::{classification_pairing, ClassificationRecord, NonNormalBundle, ReductionReport, SplitReport};
pub use principal::{check_principal, from_principal, projected_cocycle, to_principal, PrincipalData, ProjectedCocycle};
pub use transition::{
    check_cocycle, gauge_transform, homomorphic_section, identity, invert, kernel_twisted, trivial_bundle, CocycleReport, CocycleViolation,
    TransitionBundle, Transitions,
};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum BundleError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("chart {chart} has no centers")]
    EmptyChart { chart: usize },
    #[error("chart {chart} has an invalid or repeated center {vertex}")]
    BadCenter { chart: usize, vertex: usize },
    #[error("atlas and fiber model use different groups")]
    GroupMismatch,
    #[error("transition key ({alpha}, {beta}) is not an ordered pair of charts")]
    BadChartPair { alpha: usize, beta: usize },
    #[error("cell {cell} does not exist")]
    BadCell { cell: usize },
    #[error("the representation does not extend to a homomorphic section")]
    NoHomomorphicSection,
    #[error("invalid atlas: {violation}")]
    InvalidAtlas { violation: AtlasViolation },
    #[error("base vertex {vertex} lies in no chart center")]
    UncoveredVertex { vertex: usize },
    #[error("no transition for charts {charts:?} on cell {cell:?}")]
    MissingTransition { charts: (usize, usize), cell: Vec<usize> },
    #[error("lifting cell {cell:?} produces a non-free action")]
    NonFreeAction { cell: Vec<usize> },
    #[error("subgroup fixes no point of the total space")]
    EmptyFixedSet,
    #[error("component {component} is not an equivariant bundle: {reason}")]
    Component { component: usize, reason: String },
}
