use serde::Serialize;

use super::strata::{fixed_subcomplex, SimplexSet};
use super::{ComplexError, GComplex};
use crate::groups::Subgroup;

/// One translate `g·M^H = M^{gHg⁻¹}` of the fixed set.
#[derive(Debug, Clone, Serialize)]
pub struct SplitComponent {
    /// Least element of the coset `g·N(H)`.
    pub representative: usize,
    pub conjugate: Subgroup,
    pub fixed_set: SimplexSet,
    /// Vertex map `M^H → M^{gHg⁻¹}` given by the representative, as pairs.
    pub vertex_map: Vec<(usize, usize)>,
}

/// Decomposition of the union of fixed sets of a maximal isotropy class into
/// translates of a single fixed set.
#[derive(Debug, Clone, Serialize)]
pub struct ConnerFloydSplit {
    pub subgroup: Subgroup,
    pub normalizer: Subgroup,
    pub components: Vec<SplitComponent>,
    pub pairwise_disjoint: bool,
    /// Each translate equals the fixed set of the conjugate subgroup, and
    /// their union is the union over all conjugates.
    pub translates_match: bool,
    /// `G` permutes the components transitively.
    pub transitive: bool,
    /// `N(H)` preserves `M^H` and `N(H)/H` acts on it without fixed vertices.
    pub normalizer_quotient_free: bool,
    /// `g·(n·v) = (g n g⁻¹)·(g·v)` for all representatives, `n ∈ N(H)`, `v ∈ M^H`.
    pub conjugation_square: bool,
}

impl ConnerFloydSplit {
    pub fn passed(&self) -> bool {
        self.pairwise_disjoint
            && self.translates_match
            && self.transitive
            && self.normalizer_quotient_free
            && self.conjugation_square
    }
}

/// Split `M' = ∪_g M^{gHg⁻¹}` into the translates of `M^H` indexed by `G/N(H)`.
///
/// `H` must be maximal among isotropy groups meeting `M^H`. An empty fixed
/// set yields components with empty fixed sets.
pub fn conner_floyd_split(c: &GComplex, h: &Subgroup) -> Result<ConnerFloydSplit, ComplexError> {
    if let Some((element, simplex)) = c.regularity_witness() {
        return Err(ComplexError::NotRegular { element, simplex });
    }
    let group = c.group();
    let fixed = fixed_subcomplex(c, h);
    for (k, level) in fixed.simplices.iter().enumerate() {
        for &i in level {
            let iso = c.isotropy(k, i);
            if iso != *h {
                return Err(ComplexError::NotMaximal {
                    larger: iso.elements().to_vec(),
                    simplex: c.complex().simplices(k)[i].clone(),
                });
            }
        }
    }
    let normalizer = h.normalizer(group);
    let components: Vec<SplitComponent> = normalizer
        .left_cosets(group)
        .into_iter()
        .map(|coset| {
            let g = coset[0];
            let fixed_set = fixed.translate(c, g);
            let vertex_map = fixed.vertices().iter().map(|&v| (v, c.vertex_perm(g)[v])).collect();
            SplitComponent {
                representative: g,
                conjugate: h.conjugate(group, g),
                fixed_set,
                vertex_map,
            }
        })
        .collect();

    let mut pairwise_disjoint = true;
    for (i, a) in components.iter().enumerate() {
        for b in &components[i + 1..] {
            pairwise_disjoint &= a.fixed_set.is_disjoint_from(&b.fixed_set);
        }
    }
    let dims = c.dim() + 1;
    let mut all_conjugates = SimplexSet::empty(dims);
    for g in group.elements() {
        all_conjugates = all_conjugates.union(&fixed_subcomplex(c, &h.conjugate(group, g)));
    }
    let mut union = SimplexSet::empty(dims);
    let mut translates_match = true;
    for comp in &components {
        translates_match &= comp.fixed_set == fixed_subcomplex(c, &comp.conjugate);
        union = union.union(&comp.fixed_set);
    }
    translates_match &= union == all_conjugates;
    let transitive = fixed.is_empty()
        || group.elements().all(|x| {
            components.iter().all(|comp| {
                let moved = comp.fixed_set.translate(c, x);
                components.iter().any(|other| other.fixed_set == moved)
            })
        });
    let normalizer_quotient_free = normalizer.elements().iter().all(|&n| {
        let preserves = fixed.translate(c, n) == fixed;
        let free = h.contains(n) || fixed.vertices().iter().all(|&v| c.vertex_perm(n)[v] != v);
        preserves && free
    });
    let conjugation_square = components.iter().all(|comp| {
        let g = comp.representative;
        normalizer.elements().iter().all(|&n| {
            let s = group.conj(g, n);
            fixed.vertices().iter().all(|&v| {
                c.vertex_perm(g)[c.vertex_perm(n)[v]] == c.vertex_perm(s)[c.vertex_perm(g)[v]]
            })
        })
    });
    Ok(ConnerFloydSplit {
        subgroup: h.clone(),
        normalizer,
        components,
        pairwise_disjoint,
        translates_match,
        transitive,
        normalizer_quotient_free,
        conjugation_square,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures;

    #[test]
    fn hexagon_reflection_splits_into_three() {
        let c = fixtures::hexagon_s3();
        let reflection = fixtures::hexagon_reflection_fixing_zero(&c);
        let h = Subgroup::generated(c.group(), &[reflection]);
        let split = conner_floyd_split(&c, &h).unwrap();
        assert_eq!(split.components.len(), 3);
        assert_eq!(split.components[0].fixed_set.vertices(), &[0, 3]);
        assert!(split.passed(), "{split:?}");
    }

    #[test]
    fn normal_subgroup_gives_single_component() {
        let c = fixtures::octahedron_rotation();
        let h = Subgroup::whole(c.group());
        let split = conner_floyd_split(&c, &h).unwrap();
        assert_eq!(split.components.len(), 1);
        assert_eq!(split.normalizer.order(), 2);
        assert!(split.passed());
    }

    #[test]
    fn free_action_gives_empty_components() {
        let c = fixtures::torus7();
        let h = Subgroup::whole(c.group());
        let split = conner_floyd_split(&c, &h).unwrap();
        assert!(split.components.iter().all(|comp| comp.fixed_set.is_empty()));
        assert!(split.passed());
    }

    #[test]
    fn non_maximal_class_is_rejected() {
        let c = fixtures::octahedron_klein();
        let sub = Subgroup::trivial();
        assert!(matches!(conner_floyd_split(&c, &sub), Err(ComplexError::NotMaximal { .. })));
    }
}
