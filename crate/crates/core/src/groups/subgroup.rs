use std::collections::BTreeSet;

use serde::Serialize;

use super::{FiniteGroup, GroupError};

/// A subgroup, stored as the sorted set of parent-element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    /// Validate that `elements` is closed under multiplication and inverses.
    pub fn new(group: &FiniteGroup, elements: &[usize]) -> Result<Self, GroupError> {
        let mut els = elements.to_vec();
        els.sort_unstable();
        els.dedup();
        for &e in &els {
            group.check_element(e)?;
        }
        if els.first() != Some(&0) {
            return Err(GroupError::NotSubgroup { reason: "identity missing".into() });
        }
        let s = Subgroup { elements: els };
        for &a in &s.elements {
            if !s.contains(group.inv(a)) {
                return Err(GroupError::NotSubgroup { reason: format!("inverse of {a} missing") });
            }
            for &b in &s.elements {
                if !s.contains(group.mul(a, b)) {
                    return Err(GroupError::NotSubgroup {
                        reason: format!("product of {a} and {b} missing"),
                    });
                }
            }
        }
        Ok(s)
    }

    pub fn generated(group: &FiniteGroup, gens: &[usize]) -> Self {
        Subgroup { elements: group.closure(gens) }
    }

    pub fn trivial() -> Self {
        Subgroup { elements: vec![0] }
    }

    pub fn whole(group: &FiniteGroup) -> Self {
        Subgroup { elements: group.elements().collect() }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }

    pub fn is_proper_subgroup_of(&self, other: &Subgroup) -> bool {
        self.order() < other.order() && self.is_subgroup_of(other)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            elements: self.elements.iter().copied().filter(|&g| other.contains(g)).collect(),
        }
    }

    /// `g H g⁻¹`.
    pub fn conjugate(&self, group: &FiniteGroup, g: usize) -> Subgroup {
        let mut elements: Vec<usize> = self.elements.iter().map(|&h| group.conj(g, h)).collect();
        elements.sort_unstable();
        Subgroup { elements }
    }

    pub fn is_normal_in(&self, group: &FiniteGroup) -> bool {
        self.normality_witness(group).is_none()
    }

    fn normality_witness(&self, group: &FiniteGroup) -> Option<(usize, usize)> {
        for g in group.generators().iter().copied().chain(group.elements()) {
            for &h in &self.elements {
                if !self.contains(group.conj(g, h)) {
                    return Some((g, h));
                }
            }
        }
        None
    }

    /// `{g : g H g⁻¹ = H}`.
    pub fn normalizer(&self, group: &FiniteGroup) -> Subgroup {
        let elements = group
            .elements()
            .filter(|&g| self.elements.iter().all(|&h| self.contains(group.conj(g, h))))
            .collect();
        Subgroup { elements }
    }

    /// Left cosets `gH`, each sorted, ordered by smallest element (so `[1]` comes first).
    pub fn left_cosets(&self, group: &FiniteGroup) -> Vec<Vec<usize>> {
        let mut seen = vec![false; group.order()];
        let mut cosets = Vec::new();
        for g in group.elements() {
            if seen[g] {
                continue;
            }
            let mut coset: Vec<usize> = self.elements.iter().map(|&h| group.mul(g, h)).collect();
            coset.sort_unstable();
            for &x in &coset {
                seen[x] = true;
            }
            cosets.push(coset);
        }
        cosets
    }

    pub fn index_in(&self, group: &FiniteGroup) -> usize {
        group.order() / self.order()
    }

    /// The subgroup as a group in its own right, with index translation tables.
    pub fn to_group(&self, parent: &FiniteGroup) -> EmbeddedGroup {
        let mut from_parent = vec![None; parent.order()];
        for (i, &g) in self.elements.iter().enumerate() {
            from_parent[g] = Some(i);
        }
        let table = self
            .elements
            .iter()
            .map(|&a| {
                self.elements
                    .iter()
                    .map(|&b| from_parent[parent.mul(a, b)].expect("closed subgroup"))
                    .collect()
            })
            .collect();
        let group = FiniteGroup::from_checked_table(format!("{}<{}>", parent.name(), self.order()), table, None);
        EmbeddedGroup {
            group,
            to_parent: self.elements.clone(),
            from_parent,
        }
    }

    /// Quotient `G / H`, failing with a witness when `H` is not normal.
    pub fn quotient(&self, group: &FiniteGroup) -> Result<Quotient, GroupError> {
        if let Some((g, h)) = self.normality_witness(group) {
            return Err(GroupError::NotNormal { g, h });
        }
        let cosets = self.left_cosets(group);
        let mut projection = vec![0; group.order()];
        for (i, c) in cosets.iter().enumerate() {
            for &g in c {
                projection[g] = i;
            }
        }
        let table = cosets
            .iter()
            .map(|a| cosets.iter().map(|b| projection[group.mul(a[0], b[0])]).collect())
            .collect();
        let quotient =
            FiniteGroup::from_checked_table(format!("{}/{}", group.name(), self.order()), table, None);
        debug_assert!(group.is_homomorphism(&quotient, &projection));
        Ok(Quotient { group: quotient, projection, cosets })
    }
}

/// A subgroup turned into a standalone group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedGroup {
    pub group: FiniteGroup,
    /// Local index to parent index.
    pub to_parent: Vec<usize>,
    /// Parent index to local index, `None` outside the subgroup.
    pub from_parent: Vec<Option<usize>>,
}

impl EmbeddedGroup {
    pub fn local(&self, parent_element: usize) -> Option<usize> {
        self.from_parent.get(parent_element).copied().flatten()
    }

    pub fn parent(&self, local_element: usize) -> usize {
        self.to_parent[local_element]
    }
}

/// `G / H` with the projection and the coset list it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub group: FiniteGroup,
    pub projection: Vec<usize>,
    pub cosets: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Every subgroup, sorted by order and then by element list.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let cyclic: BTreeSet<Vec<usize>> = self.elements().map(|g| self.closure(&[g])).collect();
        let mut frontier: Vec<Vec<usize>> = cyclic.iter().cloned().collect();
        found.extend(cyclic.iter().cloned());
        // every subgroup is a join of cyclic subgroups
        while let Some(s) = frontier.pop() {
            for c in &cyclic {
                if c.iter().all(|x| s.binary_search(x).is_ok()) {
                    continue;
                }
                let gens: Vec<usize> = s.iter().chain(c.iter()).copied().collect();
                let joined = self.closure(&gens);
                if found.insert(joined.clone()) {
                    frontier.push(joined);
                }
            }
        }
        let mut out: Vec<Subgroup> = found.into_iter().map(|elements| Subgroup { elements }).collect();
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
        out
    }

    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        self.all_subgroups().into_iter().filter(|s| s.is_normal_in(self)).collect()
    }

    pub fn center(&self) -> Subgroup {
        let elements = self
            .elements()
            .filter(|&z| self.elements().all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect();
        Subgroup { elements }
    }
}

/// `s_g(n) = g n g⁻¹`, from `N(H)` onto `N(gHg⁻¹)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugationIso {
    pub g: usize,
    pub source: Subgroup,
    pub target: Subgroup,
    pub conjugated: Subgroup,
}

impl ConjugationIso {
    pub fn new(group: &FiniteGroup, subgroup: &Subgroup, g: usize) -> Self {
        let source = subgroup.normalizer(group);
        let conjugated = subgroup.conjugate(group, g);
        let target = conjugated.normalizer(group);
        let iso = ConjugationIso { g, source, target, conjugated };
        debug_assert!(iso.verify(group));
        iso
    }

    pub fn apply(&self, group: &FiniteGroup, n: usize) -> usize {
        group.conj(self.g, n)
    }

    pub fn apply_inverse(&self, group: &FiniteGroup, n: usize) -> usize {
        group.conj(group.inv(self.g), n)
    }

    /// Bijective homomorphism from source onto target.
    pub fn verify(&self, group: &FiniteGroup) -> bool {
        let image: BTreeSet<usize> = self.source.elements().iter().map(|&n| self.apply(group, n)).collect();
        let onto = image.len() == self.target.order() && image.iter().all(|&x| self.target.contains(x));
        let hom = self.source.elements().iter().all(|&a| {
            self.source.elements().iter().all(|&b| {
                self.apply(group, group.mul(a, b)) == group.mul(self.apply(group, a), self.apply(group, b))
            })
        });
        onto && hom
    }
}

/// Peel a family of subgroups into layers of maximal elements, top layer first.
pub fn max_families(family: &[Subgroup]) -> Vec<Vec<Subgroup>> {
    let mut rest: Vec<Subgroup> = family.to_vec();
    rest.sort();
    rest.dedup();
    let mut layers = Vec::new();
    while !rest.is_empty() {
        let (top, below): (Vec<Subgroup>, Vec<Subgroup>) = rest
            .iter()
            .cloned()
            .partition(|h| !rest.iter().any(|k| h.is_proper_subgroup_of(k)));
        layers.push(top);
        rest = below;
    }
    layers
}

#[cfg(test)]
mod tests {
    use super::super::{cyclic, dicyclic, dihedral, klein_four};
    use super::*;

    #[test]
    fn subgroup_counts() {
        assert_eq!(cyclic(4).all_subgroups().len(), 3);
        assert_eq!(klein_four().all_subgroups().len(), 5);
        let s3 = dihedral(3).all_subgroups();
        let orders: Vec<usize> = s3.iter().map(Subgroup::order).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn normalizer_of_transposition_is_itself() {
        let s3 = dihedral(3);
        let h = Subgroup::generated(&s3, &[3]);
        assert_eq!(h.normalizer(&s3), h);
        let q8 = dicyclic(2);
        assert_eq!(q8.center().normalizer(&q8).order(), 8);
    }

    #[test]
    fn quotients() {
        let z4 = cyclic(4);
        let q = Subgroup::new(&z4, &[0, 2]).unwrap().quotient(&z4).unwrap();
        assert_eq!(q.group.order(), 2);
        let s3 = dihedral(3);
        let a3 = Subgroup::generated(&s3, &[1]);
        assert_eq!(a3.quotient(&s3).unwrap().group.order(), 2);
        let q8 = dicyclic(2);
        let v = q8.center().quotient(&q8).unwrap().group;
        assert_eq!(v.order(), 4);
        assert!(v.elements().all(|g| v.mul(g, g) == 0));
        let refl = Subgroup::generated(&s3, &[3]);
        assert!(matches!(refl.quotient(&s3), Err(GroupError::NotNormal { .. })));
    }

    #[test]
    fn conjugation_moves_reflection_subgroup() {
        let s3 = dihedral(3);
        let h = Subgroup::generated(&s3, &[3]);
        let iso = ConjugationIso::new(&s3, &h, 1);
        assert!(iso.verify(&s3));
        assert_ne!(iso.target, iso.source);
        assert_eq!(iso.target, iso.conjugated);
    }

    #[test]
    fn max_families_layers() {
        let v = klein_four();
        let nontrivial: Vec<Subgroup> = v.all_subgroups().into_iter().filter(|s| !s.is_trivial()).collect();
        let layers = max_families(&nontrivial);
        assert_eq!(layers.len(), 2);
        assert_eq!(layers[0].len(), 1);
        let proper: Vec<Subgroup> = nontrivial.into_iter().filter(|s| s.order() == 2).collect();
        assert_eq!(max_families(&proper).len(), 1);
        let z8 = cyclic(8);
        let chain: Vec<Subgroup> = z8.all_subgroups().into_iter().skip(1).collect();
        let layers = max_families(&chain);
        assert_eq!(layers.len(), 3);
        assert_eq!(layers[0][0].order(), 8);
    }
}
