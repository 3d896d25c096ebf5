//! The fiber model `G₀ × (F⊗V)` over a single orbit with its canonical
//! `G`-action, model isomorphisms between sections, equivariant
//! automorphisms, and the extension to non-normal isotropy.

mod automorphism;
mod fibermap;
mod isomorphism;
mod nonnormal;

use serde::Serialize;
use thiserror::Error;

use crate::exactmath::CxMatrix;
use crate::groups::{EmbeddedGroup, FiniteGroup, GroupError, HSection, Quotient, Subgroup};
use crate::reps::{RepError, UnitaryRep};

pub use automorphism::{automorphism_from, lift_report, EquivariantAutomorphism, LiftReport};
pub use fibermap::FiberMap;
pub use isomorphism::{model_isomorphism, ModelIsomorphism};
pub use nonnormal::{nonnormal_aut_iso, Component, NonNormalModel, NonNormalReport, TransportReport};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ModelError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("representation is not defined on the chosen subgroup")]
    RepOnWrongGroup,
    #[error("fiber factor dimension must be positive")]
    ZeroFiberDim,
    #[error("action check failed: {0}")]
    ActionFailed(Violation),
    #[error("models differ in {0}")]
    SectionMismatch(String),
    #[error("coset {a} does not lift: rho and its conjugate by {rep} are inequivalent")]
    NotLiftable { a: usize, rep: usize },
    #[error("block over coset {coset} is not of the form B (x) id (residual {residual:e})")]
    NotPureTensor { coset: usize, residual: f64 },
    #[error("automorphism does not commute with the action at coset {coset}, element {g1} (deviation {deviation:e})")]
    CommutationFails { coset: usize, g1: usize, deviation: f64 },
    #[error("coset index {0} out of range")]
    BadCoset(usize),
    #[error("matrix has shape {rows}x{cols}, expected {expected}x{expected}")]
    BadBlock { rows: usize, cols: usize, expected: usize },
    #[error("matrix B is singular")]
    SingularMatrix,
    #[error("automorphism projects to {found}, expected the identity coset")]
    NotInKernel { found: usize },
}

/// A failed identity in the action checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    /// `φ([g], g₂g₁) ≠ φ([g₁g], g₂) φ([g], g₁)`.
    Associativity { coset: usize, g1: usize, g2: usize, deviation: f64 },
    /// The formula evaluated at representative `g` disagrees with the table.
    Representative { coset: usize, representative: usize, g1: usize, deviation: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Associativity { coset, g1, g2, deviation } => write!(
                f,
                "associativity fails at coset {coset}, g1 = {g1}, g2 = {g2} (deviation {deviation:e})"
            ),
            Violation::Representative { coset, representative, g1, deviation } => write!(
                f,
                "value at coset {coset}, g1 = {g1} changes with representative {representative} (deviation {deviation:e})"
            ),
        }
    }
}

/// Outcome of the exhaustive action checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionReport {
    pub triples_checked: usize,
    pub representatives_checked: usize,
    pub violations: Vec<Violation>,
}

impl ActionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// One entry of the action table: the image coset and the fiber matrix.
#[derive(Debug, Clone)]
pub struct PhiEntry {
    pub target: usize,
    pub matrix: CxMatrix,
}

/// `G₀ × (F⊗V)` with `φ([g], g₁) = id_F ⊗ ρ(u(g₁g) u(g)⁻¹)` mapping the fiber
/// over `[g]` to the fiber over `[g₁g]`.
#[derive(Debug, Clone)]
pub struct CanonicalModel {
    group: FiniteGroup,
    section: HSection,
    sub: EmbeddedGroup,
    rho: UnitaryRep,
    f_dim: usize,
    quotient: Quotient,
    phi: Vec<Vec<PhiEntry>>,
    tol: f64,
}

impl CanonicalModel {
    /// Materialise the action table and run the action checks.
    pub fn build(
        group: &FiniteGroup,
        section: &HSection,
        rho: &UnitaryRep,
        f_dim: usize,
    ) -> Result<Self, ModelError> {
        let model = Self::build_unchecked(group, section, rho, f_dim)?;
        let report = model.verify_action();
        match report.violations.into_iter().next() {
            Some(v) => Err(ModelError::ActionFailed(v)),
            None => Ok(model),
        }
    }

    /// Materialise the table without running the action checks.
    pub fn build_unchecked(
        group: &FiniteGroup,
        section: &HSection,
        rho: &UnitaryRep,
        f_dim: usize,
    ) -> Result<Self, ModelError> {
        if f_dim == 0 {
            return Err(ModelError::ZeroFiberDim);
        }
        let sub = section.subgroup().to_group(group);
        if rho.group() != &sub.group {
            return Err(ModelError::RepOnWrongGroup);
        }
        if !rho.is_irreducible()? {
            return Err(RepError::NotIrreducible { name: rho.name().to_string() }.into());
        }
        let quotient = section.subgroup().quotient(group)?;
        let tol = rho.tol();
        let mut model = CanonicalModel {
            group: group.clone(),
            section: section.clone(),
            sub,
            rho: rho.clone(),
            f_dim,
            quotient,
            phi: Vec::new(),
            tol,
        };
        model.phi = (0..section.coset_count())
            .map(|c| {
                let g = section.rep(c);
                group.elements().map(|g1| model.phi_formula(g, g1)).collect()
            })
            .collect();
        Ok(model)
    }

    /// `φ` evaluated from the formula at an arbitrary representative `g` of its coset.
    pub fn phi_formula(&self, g: usize, g1: usize) -> PhiEntry {
        let grp = &self.group;
        let g1g = grp.mul(g1, g);
        let h = grp.mul(self.section.u(g1g), grp.inv(self.section.u(g)));
        PhiEntry {
            target: self.section.coset_of(g1g),
            matrix: self.lift(h),
        }
    }

    /// `id_F ⊗ ρ(h)` for `h ∈ H` given as a parent index.
    pub fn lift(&self, h: usize) -> CxMatrix {
        CxMatrix::identity(self.f_dim).kron(self.rho_at(h)).with_tol(self.tol)
    }

    /// `ρ(h)` for `h ∈ H` given as a parent index.
    pub fn rho_at(&self, h: usize) -> &CxMatrix {
        let local = self.sub.local(h).expect("element of H");
        self.rho.matrix(local)
    }

    /// Replace one table entry; used to build deliberately broken fixtures.
    pub fn with_phi_override(mut self, coset: usize, g1: usize, matrix: CxMatrix) -> Self {
        self.phi[coset][g1].matrix = matrix;
        self
    }

    pub fn phi(&self, coset: usize, g1: usize) -> &PhiEntry {
        &self.phi[coset][g1]
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn section(&self) -> &HSection {
        &self.section
    }

    pub fn subgroup(&self) -> &Subgroup {
        self.section.subgroup()
    }

    pub fn embedded_subgroup(&self) -> &EmbeddedGroup {
        &self.sub
    }

    pub fn rho(&self) -> &UnitaryRep {
        &self.rho
    }

    pub fn f_dim(&self) -> usize {
        self.f_dim
    }

    pub fn fiber_dim(&self) -> usize {
        self.f_dim * self.rho.dim()
    }

    /// `G₀ = G/H`, with coset indices matching the section.
    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    pub fn coset_count(&self) -> usize {
        self.section.coset_count()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// The action of `g₁` as a map of the whole model.
    pub fn action_map(&self, g1: usize) -> FiberMap {
        FiberMap {
            targets: (0..self.coset_count()).map(|c| self.phi[c][g1].target).collect(),
            blocks: (0..self.coset_count()).map(|c| self.phi[c][g1].matrix.clone()).collect(),
        }
    }

    /// Exhaustive checks: (a) `φ([g], g₂g₁) = φ([g₁g], g₂) φ([g], g₁)` on all
    /// triples and (b) the formula at every representative of every coset
    /// agrees with the table.
    pub fn verify_action(&self) -> ActionReport {
        let grp = &self.group;
        let mut violations = Vec::new();
        let mut triples = 0;
        for coset in 0..self.coset_count() {
            for g1 in grp.elements() {
                let first = &self.phi[coset][g1];
                for g2 in grp.elements() {
                    triples += 1;
                    let combined = &self.phi[coset][grp.mul(g2, g1)];
                    let second = &self.phi[first.target][g2];
                    let composed = &second.matrix * &first.matrix;
                    let deviation = if combined.target == second.target {
                        composed.distance(&combined.matrix)
                    } else {
                        f64::INFINITY
                    };
                    if deviation > self.tol {
                        violations.push(Violation::Associativity { coset, g1, g2, deviation });
                    }
                }
            }
        }
        let mut reps = 0;
        for coset in 0..self.coset_count() {
            for &representative in &self.section.cosets()[coset] {
                for g1 in grp.elements() {
                    reps += 1;
                    let formula = self.phi_formula(representative, g1);
                    let stored = &self.phi[coset][g1];
                    let deviation = if formula.target == stored.target {
                        formula.matrix.distance(&stored.matrix)
                    } else {
                        f64::INFINITY
                    };
                    if deviation > self.tol {
                        violations.push(Violation::Representative { coset, representative, g1, deviation });
                    }
                }
            }
        }
        ActionReport {
            triples_checked: triples,
            representatives_checked: reps,
            violations,
        }
    }
}

/// Convenience: build a model with the default transversal.
pub fn build_model(
    group: &FiniteGroup,
    subgroup: &Subgroup,
    rho: &UnitaryRep,
    f_dim: usize,
) -> Result<CanonicalModel, ModelError> {
    let section = HSection::new(group, subgroup, None)?;
    CanonicalModel::build(group, &section, rho, f_dim)
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::groups::{cyclic, dicyclic, dihedral};
    use crate::reps::irreps;

    fn sign_of_z4() -> (FiniteGroup, Subgroup, UnitaryRep) {
        let z4 = cyclic(4);
        let h = Subgroup::new(&z4, &[0, 2]).unwrap();
        let local = h.to_group(&z4);
        let sign = irreps(&local.group).unwrap().remove(1);
        (z4, h, sign)
    }

    #[test]
    fn trivial_subgroup_gives_translation() {
        let g = dihedral(3);
        let h = Subgroup::trivial();
        let rho = UnitaryRep::trivial(&h.to_group(&g).group);
        let m = build_model(&g, &h, &rho, 2).unwrap();
        for c in 0..m.coset_count() {
            for g1 in g.elements() {
                assert!(m.phi(c, g1).matrix.is_identity());
            }
        }
    }

    #[test]
    fn z4_sign_model_values() {
        let (z4, h, sign) = sign_of_z4();
        let m = build_model(&z4, &h, &sign, 1).unwrap();
        // φ([1], 1) = ρ(u(2) u(1)⁻¹) = ρ(2) = -1
        let e = m.phi(1, 1);
        assert_eq!(e.target, 0);
        assert!((e.matrix.get(0, 0) - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        for c in 0..2 {
            for g1 in z4.elements() {
                let v = m.phi(c, g1).matrix.get(0, 0);
                assert!((v.re.abs() - 1.0).abs() < 1e-12 && v.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn whole_group_reduces_to_rep() {
        let q8 = dicyclic(2);
        let whole = Subgroup::whole(&q8);
        let two = irreps(&whole.to_group(&q8).group).unwrap().pop().unwrap();
        let m = build_model(&q8, &whole, &two, 1).unwrap();
        assert_eq!(m.coset_count(), 1);
        assert!(m.verify_action().passed());
    }

    #[test]
    fn q8_centre_sign_model_passes() {
        let q8 = dicyclic(2);
        let z = q8.center();
        let sign = irreps(&z.to_group(&q8).group).unwrap().remove(1);
        let m = build_model(&q8, &z, &sign, 1).unwrap();
        assert_eq!(m.coset_count(), 4);
    }

    #[test]
    fn negated_entry_is_caught() {
        let (z4, h, sign) = sign_of_z4();
        let m = build_model(&z4, &h, &sign, 1).unwrap();
        let flipped = m.phi(1, 1).matrix.scale(Complex64::new(-1.0, 0.0));
        let broken = m.with_phi_override(1, 1, flipped);
        let report = broken.verify_action();
        assert!(!report.passed());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Associativity { coset: 1, g1: 1, .. })
                || matches!(v, Violation::Representative { coset: 1, g1: 1, .. })));
    }

    #[test]
    fn reducible_rep_rejected() {
        let (z4, h, _) = sign_of_z4();
        let reg = UnitaryRep::regular(&h.to_group(&z4).group);
        assert!(matches!(
            build_model(&z4, &h, &reg, 1),
            Err(ModelError::Rep(RepError::NotIrreducible { .. }))
        ));
    }
}
