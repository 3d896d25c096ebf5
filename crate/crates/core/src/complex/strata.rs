use serde::Serialize;

use super::{ComplexError, GComplex};
use crate::groups::{max_families, Subgroup};

/// A set of simplices of a parent complex, as sorted index lists per dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplexSet {
    pub simplices: Vec<Vec<usize>>,
}

impl SimplexSet {
    pub fn empty(dims: usize) -> Self {
        SimplexSet {
            simplices: vec![Vec::new(); dims],
        }
    }

    pub fn contains(&self, k: usize, idx: usize) -> bool {
        self.simplices.get(k).is_some_and(|l| l.binary_search(&idx).is_ok())
    }

    pub fn len(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Counts per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(k, l)| if k % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// Vertices, as vertex labels of the parent (0-simplex indices coincide with labels).
    pub fn vertices(&self) -> &[usize] {
        self.simplices.first().map_or(&[], Vec::as_slice)
    }

    pub fn is_subset_of(&self, other: &SimplexSet) -> bool {
        self.simplices
            .iter()
            .enumerate()
            .all(|(k, l)| l.iter().all(|&i| other.contains(k, i)))
    }

    pub fn is_disjoint_from(&self, other: &SimplexSet) -> bool {
        self.simplices
            .iter()
            .enumerate()
            .all(|(k, l)| l.iter().all(|&i| !other.contains(k, i)))
    }

    pub fn union(&self, other: &SimplexSet) -> SimplexSet {
        let simplices = self
            .simplices
            .iter()
            .zip(&other.simplices)
            .map(|(a, b)| {
                let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
                u.sort_unstable();
                u.dedup();
                u
            })
            .collect();
        SimplexSet { simplices }
    }

    pub fn difference(&self, other: &SimplexSet) -> SimplexSet {
        let simplices = self
            .simplices
            .iter()
            .enumerate()
            .map(|(k, l)| l.iter().copied().filter(|&i| !other.contains(k, i)).collect())
            .collect();
        SimplexSet { simplices }
    }

    /// Image under a group element.
    pub fn translate(&self, c: &GComplex, g: usize) -> SimplexSet {
        let simplices = self
            .simplices
            .iter()
            .enumerate()
            .map(|(k, l)| {
                let mut out: Vec<usize> =
                    l.iter().map(|&i| c.act_simplex(g, k, i).expect("validated action").0).collect();
                out.sort_unstable();
                out
            })
            .collect();
        SimplexSet { simplices }
    }
}

/// Results of the exhaustive consistency checks run by [`stratify`].
#[derive(Debug, Clone, Serialize)]
pub struct StratificationChecks {
    pub containment: bool,
    pub set_difference: bool,
    pub disjoint: bool,
    pub covers: bool,
    pub conjugation: bool,
}

impl StratificationChecks {
    pub fn passed(&self) -> bool {
        self.containment && self.set_difference && self.disjoint && self.covers && self.conjugation
    }
}

/// Nontrivial isotropy groups with their fixed sets `M^H` and strata `V^H`.
#[derive(Debug, Clone, Serialize)]
pub struct Stratification {
    /// Nontrivial isotropy groups, sorted.
    pub family: Vec<Subgroup>,
    /// The family peeled into maximal layers, top first.
    pub layers: Vec<Vec<Subgroup>>,
    /// `M^H` for each member of `family`, same order.
    pub fixed_sets: Vec<SimplexSet>,
    /// Simplices whose isotropy is exactly `H`, same order.
    pub strata: Vec<SimplexSet>,
    /// Simplices with trivial isotropy.
    pub free_stratum: SimplexSet,
    pub checks: StratificationChecks,
}

impl Stratification {
    pub fn position(&self, h: &Subgroup) -> Option<usize> {
        self.family.iter().position(|x| x == h)
    }
}

/// `M^H`: simplices all of whose vertices are fixed by `H`.
pub fn fixed_subcomplex(c: &GComplex, h: &Subgroup) -> SimplexSet {
    let simplices = (0..=c.dim())
        .map(|k| {
            c.complex()
                .simplices(k)
                .iter()
                .enumerate()
                .filter(|(_, s)| s.iter().all(|&v| h.elements().iter().all(|&g| c.vertex_perm(g)[v] == v)))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    SimplexSet { simplices }
}

/// Isotropy family, layers, fixed sets and strata of a regular action.
pub fn stratify(c: &GComplex) -> Result<Stratification, ComplexError> {
    if let Some((element, simplex)) = c.regularity_witness() {
        return Err(ComplexError::NotRegular { element, simplex });
    }
    let dims = c.dim() + 1;
    let isotropy: Vec<Vec<Subgroup>> = (0..dims)
        .map(|k| (0..c.complex().count(k)).map(|i| c.isotropy(k, i)).collect())
        .collect();
    let mut family: Vec<Subgroup> = isotropy.iter().flatten().filter(|h| !h.is_trivial()).cloned().collect();
    family.sort();
    family.dedup();
    let layers = max_families(&family);
    let fixed_sets: Vec<SimplexSet> = family.iter().map(|h| fixed_subcomplex(c, h)).collect();
    let select = |pred: &dyn Fn(&Subgroup) -> bool| SimplexSet {
        simplices: isotropy
            .iter()
            .map(|level| level.iter().enumerate().filter(|(_, h)| pred(h)).map(|(i, _)| i).collect())
            .collect(),
    };
    let strata: Vec<SimplexSet> = family.iter().map(|h| select(&|x: &Subgroup| x == h)).collect();
    let free_stratum = select(&|x: &Subgroup| x.is_trivial());

    let mut containment = true;
    let mut set_difference = true;
    for (i, h1) in family.iter().enumerate() {
        let mut larger = SimplexSet::empty(dims);
        for (j, h2) in family.iter().enumerate() {
            if h1.is_subgroup_of(h2) {
                containment &= fixed_sets[j].is_subset_of(&fixed_sets[i]);
            }
            if h1.is_proper_subgroup_of(h2) {
                larger = larger.union(&fixed_sets[j]);
            }
        }
        set_difference &= fixed_sets[i].difference(&larger) == strata[i];
    }
    let mut disjoint = true;
    let mut cover = free_stratum.clone();
    for (i, s) in strata.iter().enumerate() {
        disjoint &= s.is_disjoint_from(&free_stratum);
        for t in &strata[i + 1..] {
            disjoint &= s.is_disjoint_from(t);
        }
        cover = cover.union(s);
    }
    let covers = cover.f_vector() == c.complex().f_vector();
    let group = c.group();
    let conjugation = family.iter().zip(&fixed_sets).all(|(h, fixed)| {
        group.elements().all(|g| {
            let conj = h.conjugate(group, g);
            family.contains(&conj) && fixed.translate(c, g) == fixed_subcomplex(c, &conj)
        })
    });
    Ok(Stratification {
        family,
        layers,
        fixed_sets,
        strata,
        free_stratum,
        checks: StratificationChecks {
            containment,
            set_difference,
            disjoint,
            covers,
            conjugation,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures;

    #[test]
    fn trivial_subgroup_fixes_everything() {
        let c = fixtures::octahedron_rotation();
        let all = fixed_subcomplex(&c, &Subgroup::trivial());
        assert_eq!(all.f_vector(), c.complex().f_vector());
    }

    #[test]
    fn rotation_fixes_the_poles() {
        let c = fixtures::octahedron_rotation();
        let h = Subgroup::whole(c.group());
        let fixed = fixed_subcomplex(&c, &h);
        assert_eq!(fixed.vertices(), &[0, 5]);
        assert_eq!(fixed.len(), 2);
        let s = stratify(&c).unwrap();
        assert_eq!(s.family, vec![h]);
        assert_eq!(s.strata[0].vertices(), &[0, 5]);
        assert!(s.checks.passed());
    }

    #[test]
    fn free_action_has_empty_family() {
        let c = fixtures::torus7();
        let s = stratify(&c).unwrap();
        assert!(s.family.is_empty());
        assert_eq!(s.free_stratum.f_vector(), vec![7, 21, 14]);
        assert!(s.checks.passed());
        let h = Subgroup::whole(c.group());
        assert!(fixed_subcomplex(&c, &h).is_empty());
    }

    #[test]
    fn klein_four_family_is_three_order_two_groups() {
        let c = fixtures::octahedron_klein();
        let s = stratify(&c).unwrap();
        assert_eq!(s.family.len(), 3);
        assert!(s.family.iter().all(|h| h.order() == 2));
        assert_eq!(s.layers.len(), 1);
        assert!(s.checks.passed());
        for fixed in &s.fixed_sets {
            assert_eq!(fixed.len(), 2);
        }
    }

    #[test]
    fn non_regular_action_is_rejected() {
        assert!(matches!(
            stratify(&fixtures::edge_flip()),
            Err(ComplexError::NotRegular { element: 1, .. })
        ));
    }
}
