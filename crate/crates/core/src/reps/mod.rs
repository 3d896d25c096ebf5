//! Unitary representations of finite groups: characters, irreducibility,
//! conjugate representations, isotypic decomposition and Schur intertwiners.

mod catalog;
mod intertwiner;
mod isotypic;

use std::collections::VecDeque;

use num_complex::Complex64;
use thiserror::Error;

use crate::exactmath::{CxMatrix, DEFAULT_TOL};
use crate::groups::{EmbeddedGroup, FiniteGroup};

pub use catalog::{irreps, linear_characters, standard_rep};
pub use intertwiner::{intertwiner, Intertwiner};
pub use isotypic::{isotypic_decompose, IsotypicDecomposition};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RepError {
    #[error("expected {expected} matrices, got {got}")]
    WrongMatrixCount { expected: usize, got: usize },
    #[error("matrix for element {element} has the wrong shape")]
    BadDimension { element: usize },
    #[error("matrix for element {element} is not unitary (deviation {deviation:e})")]
    NotUnitary { element: usize, deviation: f64 },
    #[error("rho({a})rho({b}) != rho({a}*{b}) (deviation {deviation:e})")]
    NotHomomorphism { a: usize, b: usize, deviation: f64 },
    #[error("character norm {value} is not within tolerance of an integer")]
    CharacterNormNotIntegral { value: f64 },
    #[error("irreducible list explains dimension {covered} of {dim}")]
    IncompleteIrrepList { covered: usize, dim: usize },
    #[error("intertwiner solution space has dimension {dim}; inputs are not irreducible")]
    SchurDimensionAnomaly { dim: usize },
    #[error("conjugation sends subgroup element {h} outside the subgroup")]
    ConjugationLeavesSubgroup { h: usize },
    #[error("representations live on different groups")]
    GroupMismatch,
    #[error("no irreducible representation catalog for {group} (order {order})")]
    NoIrrepCatalog { group: String, order: usize },
    #[error("representation {name} is not irreducible")]
    NotIrreducible { name: String },
}

/// A unitary representation: one matrix per group element.
#[derive(Debug, Clone)]
pub struct UnitaryRep {
    name: String,
    group: FiniteGroup,
    dim: usize,
    matrices: Vec<CxMatrix>,
    tol: f64,
}

impl UnitaryRep {
    /// Validate a full table of matrices against the homomorphism and unitarity axioms.
    pub fn new(
        name: impl Into<String>,
        group: &FiniteGroup,
        matrices: Vec<CxMatrix>,
        tol: f64,
    ) -> Result<Self, RepError> {
        if matrices.len() != group.order() {
            return Err(RepError::WrongMatrixCount {
                expected: group.order(),
                got: matrices.len(),
            });
        }
        let dim = matrices[0].rows();
        let matrices: Vec<CxMatrix> = matrices.into_iter().map(|m| m.with_tol(tol)).collect();
        let rep = UnitaryRep {
            name: name.into(),
            group: group.clone(),
            dim,
            matrices,
            tol,
        };
        rep.verify()?;
        Ok(rep)
    }

    /// Extend generator images to the whole group by breadth-first products,
    /// then validate the result.
    pub fn from_generators(
        name: impl Into<String>,
        group: &FiniteGroup,
        images: &[CxMatrix],
        tol: f64,
    ) -> Result<Self, RepError> {
        let gens = group.generators();
        if images.len() != gens.len() {
            return Err(RepError::WrongMatrixCount {
                expected: gens.len(),
                got: images.len(),
            });
        }
        let dim = images.first().map_or(1, CxMatrix::rows);
        for (i, m) in images.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(RepError::BadDimension { element: gens[i] });
            }
        }
        let mut table: Vec<Option<CxMatrix>> = vec![None; group.order()];
        table[0] = Some(CxMatrix::identity(dim));
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (&g, img) in gens.iter().zip(images) {
                let y = group.mul(x, g);
                if table[y].is_none() {
                    table[y] = Some(table[x].as_ref().expect("visited") * img);
                    queue.push_back(y);
                }
            }
        }
        let matrices = table.into_iter().map(|m| m.expect("generators span")).collect();
        Self::new(name, group, matrices, tol)
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        let matrices = vec![CxMatrix::identity(1); group.order()];
        UnitaryRep {
            name: "trivial".into(),
            group: group.clone(),
            dim: 1,
            matrices,
            tol: DEFAULT_TOL,
        }
    }

    /// Permutation representation from a left action `perms[g][i] = g·i`.
    pub fn permutation(name: impl Into<String>, group: &FiniteGroup, perms: &[Vec<usize>]) -> Result<Self, RepError> {
        let n = perms.first().map_or(0, Vec::len);
        let matrices = perms
            .iter()
            .map(|p| {
                let mut m = CxMatrix::zeros(n, n);
                for (i, &j) in p.iter().enumerate() {
                    m.set(j, i, Complex64::new(1.0, 0.0));
                }
                m
            })
            .collect();
        Self::new(name, group, matrices, DEFAULT_TOL)
    }

    /// Left regular representation.
    pub fn regular(group: &FiniteGroup) -> Self {
        let perms: Vec<Vec<usize>> = group
            .elements()
            .map(|g| group.elements().map(|x| group.mul(g, x)).collect())
            .collect();
        Self::permutation("regular", group, &perms).expect("regular representation is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn matrix(&self, g: usize) -> &CxMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CxMatrix] {
        &self.matrices
    }

    /// Check unitarity of every matrix and `ρ(a)ρ(b) = ρ(ab)` for every pair.
    pub fn verify(&self) -> Result<(), RepError> {
        let id = CxMatrix::identity(self.dim);
        for (element, m) in self.matrices.iter().enumerate() {
            if m.rows() != self.dim || m.cols() != self.dim {
                return Err(RepError::BadDimension { element });
            }
            let deviation = (&m.adjoint() * m).distance(&id);
            if deviation > self.tol {
                return Err(RepError::NotUnitary { element, deviation });
            }
        }
        for a in self.group.elements() {
            for b in self.group.elements() {
                let lhs = &self.matrices[a] * &self.matrices[b];
                let deviation = lhs.distance(&self.matrices[self.group.mul(a, b)]);
                if deviation > self.tol {
                    return Err(RepError::NotHomomorphism { a, b, deviation });
                }
            }
        }
        Ok(())
    }

    /// Trace of every element.
    pub fn character_values(&self) -> Vec<Complex64> {
        self.matrices.iter().map(CxMatrix::trace).collect()
    }

    /// Character on conjugacy classes, in the order of `FiniteGroup::conjugacy_classes`.
    pub fn character(&self) -> Vec<Complex64> {
        self.group
            .conjugacy_classes()
            .iter()
            .map(|c| self.matrices[c[0]].trace())
            .collect()
    }

    /// `⟨χ_self, χ_other⟩ = |G|⁻¹ Σ conj(χ_self(g)) χ_other(g)`.
    pub fn inner_product(&self, other: &UnitaryRep) -> Complex64 {
        let a = self.character_values();
        let b = other.character_values();
        let sum: Complex64 = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
        sum / self.group.order() as f64
    }

    /// Irreducibility via the character norm, which must round to an integer.
    pub fn is_irreducible(&self) -> Result<bool, RepError> {
        let norm = self.inner_product(self);
        let rounded = norm.re.round();
        if (norm.re - rounded).abs() > self.tol.max(1e-6) || norm.im.abs() > self.tol.max(1e-6) {
            return Err(RepError::CharacterNormNotIntegral { value: norm.re });
        }
        Ok(rounded == 1.0)
    }

    pub fn characters_match(&self, other: &UnitaryRep) -> bool {
        self.group == other.group
            && self
                .character_values()
                .iter()
                .zip(other.character_values())
                .all(|(a, b)| (a - b).norm() <= self.tol.max(1e-7))
    }

    pub fn direct_sum(&self, other: &UnitaryRep) -> UnitaryRep {
        assert_eq!(self.group, other.group);
        UnitaryRep {
            name: format!("{}+{}", self.name, other.name),
            group: self.group.clone(),
            dim: self.dim + other.dim,
            matrices: self
                .matrices
                .iter()
                .zip(&other.matrices)
                .map(|(a, b)| CxMatrix::block_diag(&[a.clone(), b.clone()]).with_tol(self.tol))
                .collect(),
            tol: self.tol,
        }
    }

    /// Tensor product of representations of the same group.
    pub fn tensor(&self, other: &UnitaryRep) -> UnitaryRep {
        assert_eq!(self.group, other.group);
        UnitaryRep {
            name: format!("{}*{}", self.name, other.name),
            group: self.group.clone(),
            dim: self.dim * other.dim,
            matrices: self
                .matrices
                .iter()
                .zip(&other.matrices)
                .map(|(a, b)| a.kron(b))
                .collect(),
            tol: self.tol,
        }
    }

    /// Outer tensor product on a direct product group whose element `(a, b)`
    /// sits at index `a * |B| + b`.
    pub fn outer_tensor(&self, other: &UnitaryRep, product: &FiniteGroup) -> UnitaryRep {
        let nb = other.group.order();
        assert_eq!(product.order(), self.group.order() * nb);
        UnitaryRep {
            name: format!("{}*{}", self.name, other.name),
            group: product.clone(),
            dim: self.dim * other.dim,
            matrices: product
                .elements()
                .map(|x| self.matrices[x / nb].kron(&other.matrices[x % nb]))
                .collect(),
            tol: self.tol,
        }
    }

    /// Pull back along a group homomorphism `source → self.group` given as an image table.
    pub fn pull_back(&self, source: &FiniteGroup, map: &[usize]) -> UnitaryRep {
        UnitaryRep {
            name: self.name.clone(),
            group: source.clone(),
            dim: self.dim,
            matrices: map.iter().map(|&x| self.matrices[x].clone()).collect(),
            tol: self.tol,
        }
    }

    /// Restriction to a subgroup, as a representation of the embedded group.
    pub fn restrict(&self, sub: &EmbeddedGroup) -> UnitaryRep {
        self.pull_back(&sub.group, &sub.to_parent)
    }

    /// Complex-conjugate (dual) representation.
    pub fn dual(&self) -> UnitaryRep {
        UnitaryRep {
            name: format!("{}^", self.name),
            matrices: self
                .matrices
                .iter()
                .map(|m| m.adjoint().transpose())
                .collect(),
            ..self.clone()
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.matrices = self.matrices.into_iter().map(|m| m.with_tol(tol)).collect();
        self
    }
}

/// `ρ_g(k) = ρ(g⁻¹ k g)` for a representation `ρ` of a subgroup `H ≤ G`.
///
/// With `target = None` the result lives on `H` itself and `g` must normalise
/// `H`; otherwise it lives on the supplied subgroup, normally `gHg⁻¹`.
pub fn conjugate_rep(
    rho: &UnitaryRep,
    sub: &EmbeddedGroup,
    ambient: &FiniteGroup,
    g: usize,
    target: Option<&EmbeddedGroup>,
) -> Result<UnitaryRep, RepError> {
    let target = target.unwrap_or(sub);
    let ginv = ambient.inv(g);
    let mut matrices = Vec::with_capacity(target.group.order());
    for &k in &target.to_parent {
        let back = ambient.mul(ambient.mul(ginv, k), g);
        let local = sub.local(back).ok_or(RepError::ConjugationLeavesSubgroup { h: k })?;
        matrices.push(rho.matrix(local).clone());
    }
    Ok(UnitaryRep {
        name: format!("{}^{}", rho.name, g),
        group: target.group.clone(),
        dim: rho.dim,
        matrices,
        tol: rho.tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, dicyclic, dihedral, Subgroup};

    fn close(a: Complex64, b: f64) -> bool {
        (a - Complex64::new(b, 0.0)).norm() < 1e-9
    }

    #[test]
    fn trivial_and_regular_characters() {
        let z3 = cyclic(3);
        assert!(UnitaryRep::trivial(&z3).character().iter().all(|&c| close(c, 1.0)));
        let reg = UnitaryRep::regular(&z3).character();
        assert!(close(reg[0], 3.0) && close(reg[1], 0.0) && close(reg[2], 0.0));
    }

    #[test]
    fn s3_two_dimensional_character() {
        let s3 = dihedral(3);
        let two = irreps(&s3).unwrap().into_iter().find(|r| r.dim() == 2).unwrap();
        // classes: identity, rotations, reflections
        let classes = s3.conjugacy_classes();
        let chi = two.character();
        for (class, value) in classes.iter().zip(chi) {
            let expect = match s3.element_order(class[0]) {
                1 => 2.0,
                2 => 0.0,
                _ => -1.0,
            };
            assert!(close(value, expect));
        }
    }

    #[test]
    fn irreducibility_checks() {
        let z2 = cyclic(2);
        assert!(UnitaryRep::trivial(&z2).is_irreducible().unwrap());
        assert!(!UnitaryRep::regular(&z2).is_irreducible().unwrap());
        let q8 = dicyclic(2);
        let two = irreps(&q8).unwrap().into_iter().find(|r| r.dim() == 2).unwrap();
        assert!(two.is_irreducible().unwrap());
    }

    #[test]
    fn broken_matrices_are_rejected() {
        let z2 = cyclic(2);
        let m = vec![CxMatrix::identity(1), CxMatrix::from_real(1, 1, &[2.0])];
        assert!(matches!(
            UnitaryRep::new("bad", &z2, m, 1e-9),
            Err(RepError::NotUnitary { element: 1, .. })
        ));
        let m = vec![CxMatrix::identity(1), CxMatrix::from_rows(vec![vec![Complex64::new(0.0, 1.0)]])];
        assert!(matches!(
            UnitaryRep::new("bad", &z2, m, 1e-9),
            Err(RepError::NotHomomorphism { .. })
        ));
    }

    #[test]
    fn conjugating_a3_character_by_transposition_conjugates_it() {
        let s3 = dihedral(3);
        let a3 = Subgroup::generated(&s3, &[1]).to_group(&s3);
        let chars = irreps(&a3.group).unwrap();
        let omega = chars.iter().find(|r| r.matrix(1).get(0, 0).im > 0.5).unwrap();
        let conj = conjugate_rep(omega, &a3, &s3, 3, None).unwrap();
        assert!(conj.characters_match(&omega.dual()));
        assert!(!conj.characters_match(omega));
    }

    #[test]
    fn conjugation_outside_normaliser_needs_a_target() {
        let s3 = dihedral(3);
        let h = Subgroup::generated(&s3, &[3]);
        let emb = h.to_group(&s3);
        let sign = irreps(&emb.group).unwrap().pop().unwrap();
        assert!(matches!(
            conjugate_rep(&sign, &emb, &s3, 1, None),
            Err(RepError::ConjugationLeavesSubgroup { .. })
        ));
        let target = h.conjugate(&s3, 1).to_group(&s3);
        let moved = conjugate_rep(&sign, &emb, &s3, 1, Some(&target)).unwrap();
        moved.verify().unwrap();
    }
}
