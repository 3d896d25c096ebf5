//! Finite groups given by multiplication tables, with the subgroup, normalizer,
//! quotient and coset-section machinery used by the rest of the crate.
//!
//! Elements are plain indices; the identity is always index 0.

mod constructors;
mod iso;
mod section;
mod subgroup;

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

pub use constructors::{alternating4, cyclic, dicyclic, dihedral, direct_product, klein_four, symmetric4};
pub use iso::find_isomorphism;
pub use section::HSection;
pub use subgroup::{max_families, ConjugationIso, EmbeddedGroup, Quotient, Subgroup};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table is empty")]
    Empty,
    #[error("multiplication table row {row} has length {len}, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("entry {value} at ({row}, {col}) is out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("element 0 is not a two-sided identity (fails against {element})")]
    IdentityNotFirst { element: usize },
    #[error("row or column {index} of the multiplication table repeats an entry")]
    NotLatin { index: usize },
    #[error("associativity fails for ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("generator {index} is not a permutation of 0..{degree}")]
    BadPermutation { index: usize, degree: usize },
    #[error("element {element} is out of range for a group of order {order}")]
    BadElement { element: usize, order: usize },
    #[error("subgroup is not normal: conjugating by {g} moves {h} outside it")]
    NotNormal { g: usize, h: usize },
    #[error("element set is not a subgroup: {reason}")]
    NotSubgroup { reason: String },
    #[error("bad transversal: {reason}")]
    BadTransversal { reason: String },
    #[error("permutation group closure exceeded {limit} elements")]
    TooLarge { limit: usize },
}

/// Largest group the permutation closure will enumerate.
pub const MAX_ORDER: usize = 720;

/// A finite group stored as a full multiplication table.
///
/// Equality compares multiplication tables only, not names or generators.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    generators: Vec<usize>,
    permutations: Option<Vec<Vec<usize>>>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Build from a multiplication table, checking the group axioms exhaustively.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::Ragged { row, len: r.len(), expected: n });
            }
            if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(GroupError::OutOfRange { row, col, value });
            }
        }
        if let Some(element) = (0..n).find(|&g| table[0][g] != g || table[g][0] != g) {
            return Err(GroupError::IdentityNotFirst { element });
        }
        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                if std::mem::replace(&mut seen_row[table[i][j]], true)
                    || std::mem::replace(&mut seen_col[table[j][i]], true)
                {
                    return Err(GroupError::NotLatin { index: i });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(Self::from_checked_table(name.into(), table, None))
    }

    /// Build from a table that is already known to satisfy the axioms.
    pub(crate) fn from_checked_table(
        name: String,
        table: Vec<Vec<usize>>,
        generators: Option<Vec<usize>>,
    ) -> Self {
        let n = table.len();
        let mut inverses = vec![0; n];
        for (g, inv) in inverses.iter_mut().enumerate() {
            *inv = (0..n).find(|&h| table[g][h] == 0).expect("latin square has inverses");
        }
        let mut group = FiniteGroup {
            name,
            table,
            inverses,
            generators: Vec::new(),
            permutations: None,
        };
        group.generators = match generators {
            Some(g) => g,
            None => group.greedy_generators(),
        };
        group
    }

    /// Closure of permutation generators on `0..degree`.
    ///
    /// Composition is `(gh)(i) = g(h(i))`. Elements are numbered in
    /// breadth-first order from the identity, so the result is deterministic.
    pub fn from_permutations(
        name: impl Into<String>,
        degree: usize,
        generators: &[Vec<usize>],
    ) -> Result<Self, GroupError> {
        for (index, p) in generators.iter().enumerate() {
            let mut seen = vec![false; degree];
            let ok = p.len() == degree
                && p.iter().all(|&x| x < degree && !std::mem::replace(&mut seen[x], true));
            if !ok {
                return Err(GroupError::BadPermutation { index, degree });
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let prod: Vec<usize> = (0..degree).map(|x| elements[i][g[x]]).collect();
                if !index.contains_key(&prod) {
                    if elements.len() >= MAX_ORDER {
                        return Err(GroupError::TooLarge { limit: MAX_ORDER });
                    }
                    index.insert(prod.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(prod);
                }
            }
        }
        let n = elements.len();
        let table: Vec<Vec<usize>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let prod: Vec<usize> = (0..degree).map(|x| elements[a][elements[b][x]]).collect();
                        index[&prod]
                    })
                    .collect()
            })
            .collect();
        let gens = generators.iter().map(|g| index[g]).collect();
        let mut group = Self::from_checked_table(name.into(), table, Some(gens));
        group.permutations = Some(elements);
        Ok(group)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `g h g⁻¹`.
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Permutation realising each element, when the group was built from permutations.
    pub fn permutations(&self) -> Option<&[Vec<usize>]> {
        self.permutations.as_deref()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn check_element(&self, g: usize) -> Result<usize, GroupError> {
        if g < self.order() {
            Ok(g)
        } else {
            Err(GroupError::BadElement { element: g, order: self.order() })
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| (a + 1..self.order()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy classes, each sorted, ordered by smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut classes = Vec::new();
        for x in self.elements() {
            if seen[x] {
                continue;
            }
            let mut class: Vec<usize> = self.elements().map(|g| self.conj(g, x)).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                seen[c] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Elements reachable from the generators, i.e. the subgroup they generate.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0];
        for g in self.elements() {
            if span.binary_search(&g).is_err() {
                gens.push(g);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// Verify that `images` (indexed by element of `self`) is a homomorphism into `target`.
    pub fn is_homomorphism(&self, target: &FiniteGroup, images: &[usize]) -> bool {
        images.len() == self.order()
            && self.elements().all(|a| {
                self.elements()
                    .all(|b| images[self.mul(a, b)] == target.mul(images[a], images[b]))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_validation_catches_non_latin() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(matches!(
            FiniteGroup::from_table("bad", bad),
            Err(GroupError::NotLatin { .. })
        ));
    }

    #[test]
    fn table_validation_catches_misplaced_identity() {
        let bad = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(
            FiniteGroup::from_table("bad", bad),
            Err(GroupError::IdentityNotFirst { element: 0 })
        );
    }

    #[test]
    fn permutation_closure_of_s3() {
        let g = FiniteGroup::from_permutations("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert_eq!(g.conjugacy_classes().len(), 3);
        assert_eq!(g.generators().len(), 2);
    }

    #[test]
    fn bad_permutation_rejected() {
        assert_eq!(
            FiniteGroup::from_permutations("x", 3, &[vec![0, 0, 1]]),
            Err(GroupError::BadPermutation { index: 0, degree: 3 })
        );
    }
}
