use serde::Serialize;

use super::cohomology::MiddleCohomology;
use super::duality::fundamental_cycle;
use super::signature::{g_signature_of, signature_of};
use super::ApcError;
use crate::complex::{stratify, ComplexError, GComplex};
use crate::exactmath::{SignatureTriple, DEFAULT_TOL};
use crate::groups::Subgroup;

/// Fixed set and stratum of one isotropy group before and after subdivision.
///
/// Barycenters of simplices of `M^H` are exactly the vertices of the
/// subdivided fixed set, so simplex counts upstairs match vertex counts below.
#[derive(Debug, Clone, Serialize)]
pub struct StratumComparison {
    pub subgroup: Subgroup,
    pub fixed_simplices: usize,
    pub subdivided_fixed_vertices: usize,
    pub stratum_simplices: usize,
    pub subdivided_stratum_vertices: usize,
    pub fixed_euler: i64,
    pub subdivided_fixed_euler: i64,
    pub matches: bool,
}

/// Invariants of a regular oriented complex and of its barycentric subdivision.
#[derive(Debug, Clone, Serialize)]
pub struct SubdivisionReport {
    pub betti: Vec<usize>,
    pub subdivided_betti: Vec<usize>,
    pub signature: SignatureTriple,
    pub subdivided_signature: SignatureTriple,
    /// Per-irrep signatures, when the group preserves orientation and its
    /// irreducible representations are available.
    pub g_signature: Option<Vec<SignatureTriple>>,
    pub subdivided_g_signature: Option<Vec<SignatureTriple>>,
    pub family_matches: bool,
    pub strata: Vec<StratumComparison>,
}

impl SubdivisionReport {
    pub fn passed(&self) -> bool {
        self.betti == self.subdivided_betti
            && self.signature == self.subdivided_signature
            && self.g_signature == self.subdivided_g_signature
            && self.family_matches
            && self.strata.iter().all(|s| s.matches)
    }
}

/// Compare Betti numbers, signature, equivariant signature and the
/// stratification of `c` with those of its barycentric subdivision.
pub fn subdivision_check(c: &GComplex) -> Result<SubdivisionReport, ApcError> {
    if let Some((element, simplex)) = c.regularity_witness() {
        return Err(ComplexError::NotRegular { element, simplex }.into());
    }
    let fundamental = fundamental_cycle(c)?;
    let c = c.clone().with_orientation(fundamental.clone())?;
    let middle = MiddleCohomology::exact(&c, &fundamental);
    let sub = c.subdivide();
    let sd_middle = MiddleCohomology::pulled_back(&sub, &c, &middle)?;
    let signature = signature_of(&middle)?;
    let subdivided_signature = signature_of(&sd_middle)?;
    let equivariant = |m: &MiddleCohomology| -> Option<Vec<SignatureTriple>> {
        if c.orientation_reversing_element().is_some() {
            return None;
        }
        let gs = g_signature_of(m, c.group(), DEFAULT_TOL).ok()?;
        Some(gs.per_irrep.iter().map(|r| r.signature).collect())
    };
    let g_signature = equivariant(&middle);
    let subdivided_g_signature = equivariant(&sd_middle);

    let strat = stratify(&c)?;
    let sd_strat = stratify(&sub.complex)?;
    let family_matches = strat.family == sd_strat.family;
    let strata = strat
        .family
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let j = sd_strat.position(h);
            let pick = |f: &dyn Fn(usize) -> usize| j.map_or(0, f);
            let subdivided_fixed_vertices = pick(&|j| sd_strat.fixed_sets[j].vertices().len());
            let subdivided_stratum_vertices = pick(&|j| sd_strat.strata[j].vertices().len());
            let subdivided_fixed_euler = j.map_or(0, |j| sd_strat.fixed_sets[j].euler_characteristic());
            let fixed_simplices = strat.fixed_sets[i].len();
            let stratum_simplices = strat.strata[i].len();
            let fixed_euler = strat.fixed_sets[i].euler_characteristic();
            StratumComparison {
                subgroup: h.clone(),
                fixed_simplices,
                subdivided_fixed_vertices,
                stratum_simplices,
                subdivided_stratum_vertices,
                fixed_euler,
                subdivided_fixed_euler,
                matches: j.is_some()
                    && fixed_simplices == subdivided_fixed_vertices
                    && stratum_simplices == subdivided_stratum_vertices
                    && fixed_euler == subdivided_fixed_euler,
            }
        })
        .collect();
    Ok(SubdivisionReport {
        betti: c.complex().betti_numbers(),
        subdivided_betti: sub.complex.complex().betti_numbers(),
        signature,
        subdivided_signature,
        g_signature,
        subdivided_g_signature,
        family_matches,
        strata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures;

    #[test]
    fn invariants_survive_subdivision() {
        for c in [fixtures::octahedron_rotation(), fixtures::octahedron_klein(), fixtures::torus7(), fixtures::s2xs2_swap()] {
            let report = subdivision_check(&c).unwrap();
            assert!(report.passed(), "{report:?}");
        }
    }

    #[test]
    fn non_regular_input_is_rejected() {
        assert!(subdivision_check(&fixtures::tetra_rotation()).is_err());
    }
}
