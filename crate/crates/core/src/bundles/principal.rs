use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::atlas::{validate_atlas, EquivariantAtlas};
use super::transition::{deviation, lookup, CocycleReport, CocycleViolation, TransitionBundle, Transitions};
use super::BundleError;
use crate::complex::{GComplex, SimplicialComplex};
use crate::model::CanonicalModel;

/// Transition data over the orbit space `X = M/G₀` with values in the
/// automorphisms of the canonical model.
///
/// Charts are open stars of center vertices of `X`; cells are simplices of
/// `X` by flat index (dimension offset plus index).
#[derive(Debug, Clone)]
pub struct PrincipalData {
    pub base: SimplicialComplex,
    pub charts: Vec<Vec<usize>>,
    pub model: CanonicalModel,
    pub transitions: Transitions,
}

impl PrincipalData {
    fn offsets(&self) -> Vec<usize> {
        self.base.simplex_offsets()
    }

    /// Vertices of the cell with flat index `cell`.
    pub fn cell_vertices(&self, cell: usize) -> &[usize] {
        let offsets = self.offsets();
        let k = offsets.iter().rposition(|&o| o <= cell).expect("offsets start at zero");
        &self.base.simplices(k)[cell - offsets[k]]
    }

    pub fn cell_count(&self) -> usize {
        self.base.total_simplices()
    }

    /// Cells of `U_α`, ascending.
    pub fn chart_cells(&self, chart: usize) -> BTreeSet<usize> {
        let centers = &self.charts[chart];
        let offsets = self.offsets();
        let mut out = BTreeSet::new();
        for k in 0..=self.base.dim() {
            for (i, s) in self.base.simplices(k).iter().enumerate() {
                if s.iter().any(|v| centers.contains(v)) {
                    out.insert(offsets[k] + i);
                }
            }
        }
        out
    }

    pub fn overlap_cells(&self, alpha: usize, beta: usize) -> BTreeSet<usize> {
        let a = self.chart_cells(alpha);
        self.chart_cells(beta).into_iter().filter(|c| a.contains(c)).collect()
    }

    /// `pr Ψ_{αβ}(cell)` for any ordered pair.
    pub fn projected(&self, alpha: usize, beta: usize, cell: usize) -> Option<usize> {
        lookup(&self.transitions, &self.model, alpha, beta, cell).map(|a| a.a)
    }

    /// First chart having `v` as a center.
    fn home(&self, v: usize) -> Option<usize> {
        self.charts.iter().position(|c| c.contains(&v))
    }
}

/// The `G₀`-valued cocycle `pr Ψ` and its failures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectedCocycle {
    /// `(α, β, cell, pr Ψ_{αβ}(cell))` for every stored value.
    pub values: Vec<(usize, usize, usize, usize)>,
    pub locally_constant: bool,
    pub cocycle: bool,
}

impl ProjectedCocycle {
    pub fn passed(&self) -> bool {
        self.locally_constant && self.cocycle
    }
}

/// Check the same conditions as [`super::check_cocycle`] directly on the orbit space.
pub fn check_principal(p: &PrincipalData) -> CocycleReport {
    let model = &p.model;
    let tol = model.tol();
    let offsets = p.base.simplex_offsets();
    let name = |cell: usize| p.cell_vertices(cell).to_vec();
    let mut violations = Vec::new();
    let mut max_deviation: f64 = 0.0;
    let n = p.charts.len();
    let mut covered = BTreeSet::new();
    for chart in 0..n {
        covered.extend(p.chart_cells(chart));
    }
    if let Some(cell) = (0..p.cell_count()).find(|c| !covered.contains(c)) {
        violations.push(CocycleViolation::InvalidAtlas {
            violation: super::AtlasViolation::Uncovered { simplex: name(cell) },
        });
    }
    let mut overlaps = BTreeMap::new();
    for alpha in 0..n {
        for beta in alpha + 1..n {
            let cells = p.overlap_cells(alpha, beta);
            let charts = (alpha, beta);
            let given = p.transitions.get(&charts);
            if let Some(given) = given {
                for &cell in given.keys().filter(|c| !cells.contains(c)) {
                    violations.push(CocycleViolation::UnexpectedTransition { charts, cell: name(cell) });
                }
            }
            if cells.is_empty() {
                continue;
            }
            for &cell in &cells {
                let Some(value) = given.and_then(|g| g.get(&cell)) else {
                    violations.push(CocycleViolation::MissingTransition { charts, cell: name(cell) });
                    continue;
                };
                let (dev, _) = value.commutation_deviation(model);
                max_deviation = max_deviation.max(dev);
                if dev > tol {
                    violations.push(CocycleViolation::NotEquivariant { charts, cell: name(cell), deviation: dev });
                }
                let k = p.cell_vertices(cell).len() - 1;
                if k == 0 {
                    continue;
                }
                for (face, _) in p.base.boundary_of(k, cell - offsets[k]) {
                    let face_cell = offsets[k - 1] + face;
                    if let Some(other) = given.and_then(|g| g.get(&face_cell)).filter(|_| cells.contains(&face_cell)) {
                        let dev = deviation(model, value, other);
                        max_deviation = max_deviation.max(dev.min(f64::MAX));
                        if dev > tol {
                            violations.push(CocycleViolation::NotLocallyConstant {
                                charts,
                                face: name(face_cell),
                                coface: name(cell),
                                deviation: dev,
                            });
                        }
                    }
                }
            }
            overlaps.insert(charts, cells);
        }
    }
    let mut triples = 0;
    for alpha in 0..n {
        for beta in alpha + 1..n {
            for gamma in beta + 1..n {
                let (Some(ab), Some(bc), Some(ac)) = (
                    overlaps.get(&(alpha, beta)),
                    overlaps.get(&(beta, gamma)),
                    overlaps.get(&(alpha, gamma)),
                ) else {
                    continue;
                };
                for &cell in ab.iter().filter(|c| bc.contains(c) && ac.contains(c)) {
                    triples += 1;
                    let get = |x, y| lookup(&p.transitions, model, x, y, cell);
                    let (Some(x), Some(y), Some(z)) = (get(alpha, beta), get(beta, gamma), get(alpha, gamma)) else {
                        continue;
                    };
                    let dev = deviation(model, &x.then(&y, model), &z);
                    max_deviation = max_deviation.max(dev.min(f64::MAX));
                    if dev > tol {
                        violations.push(CocycleViolation::CocycleFails {
                            charts: (alpha, beta, gamma),
                            cell: name(cell),
                            deviation: dev,
                        });
                    }
                }
            }
        }
    }
    CocycleReport {
        overlaps_checked: overlaps.len(),
        triples_checked: triples,
        max_deviation,
        violations,
    }
}

/// Project the transition values to `G₀` and check that the result is
/// again a locally constant cocycle.
pub fn projected_cocycle(p: &PrincipalData) -> ProjectedCocycle {
    let q = &p.model.quotient().group;
    let offsets = p.base.simplex_offsets();
    let mut values = Vec::new();
    let mut locally_constant = true;
    for (&(alpha, beta), cells) in &p.transitions {
        for (&cell, aut) in cells {
            values.push((alpha, beta, cell, aut.a));
            let k = p.cell_vertices(cell).len() - 1;
            if k > 0 {
                for (face, _) in p.base.boundary_of(k, cell - offsets[k]) {
                    if let Some(other) = cells.get(&(offsets[k - 1] + face)) {
                        locally_constant &= other.a == aut.a;
                    }
                }
            }
        }
    }
    let n = p.charts.len();
    let mut cocycle = true;
    for alpha in 0..n {
        for beta in alpha + 1..n {
            for gamma in beta + 1..n {
                let triple: BTreeSet<usize> = p
                    .overlap_cells(alpha, beta)
                    .intersection(&p.overlap_cells(alpha, gamma))
                    .copied()
                    .filter(|c| p.chart_cells(gamma).contains(c))
                    .collect();
                for cell in triple {
                    let get = |x, y| p.projected(x, y, cell);
                    if let (Some(x), Some(y), Some(z)) = (get(alpha, beta), get(beta, gamma), get(alpha, gamma)) {
                        cocycle &= q.mul(x, y) == z;
                    }
                }
            }
        }
    }
    ProjectedCocycle { values, locally_constant, cocycle }
}

/// Read the transition data of `b` over the orbit space.
pub fn to_principal(b: &TransitionBundle) -> Result<PrincipalData, BundleError> {
    let atlas = b.atlas();
    if let Some(violation) = validate_atlas(atlas).violations.into_iter().next() {
        return Err(BundleError::InvalidAtlas { violation });
    }
    let (base, flat) = atlas.base_complex().map_err(|violation| BundleError::InvalidAtlas { violation })?;
    let charts = atlas
        .charts()
        .iter()
        .map(|centers| centers.iter().map(|&v| atlas.cell_of((0, v))).collect())
        .collect();
    let transitions = b
        .transitions()
        .iter()
        .map(|(&pair, cells)| (pair, cells.iter().map(|(&c, aut)| (flat[c], aut.clone())).collect()))
        .collect();
    Ok(PrincipalData {
        base,
        charts,
        model: b.model().clone(),
        transitions,
    })
}

/// Glue `U_α × G₀` along `pr Ψ` into the covering `M → X` with free `G₀`
/// action and assemble the bundle over it.
///
/// Vertex `(v, g)` of `M`, labelled `g·|X₀| + v`, is the point `g·s_h(v)`
/// where `h` is the first chart centered at `v`. A simplex `σ` of `X` lifted
/// at `g` in chart `α` has vertex `(v, g · pr Ψ_{α,h(v)}(σ))` over each of
/// its vertices `v`.
pub fn from_principal(p: &PrincipalData) -> Result<TransitionBundle, BundleError> {
    let q = &p.model.quotient().group;
    let order = q.order();
    let nx = p.base.vertex_count();
    let offsets = p.base.simplex_offsets();
    let home: Vec<usize> = (0..nx)
        .map(|v| p.home(v).ok_or(BundleError::UncoveredVertex { vertex: v }))
        .collect::<Result<_, _>>()?;
    let pr = |alpha: usize, beta: usize, cell: usize| -> Result<usize, BundleError> {
        p.projected(alpha, beta, cell).ok_or_else(|| BundleError::MissingTransition {
            charts: (alpha.min(beta), alpha.max(beta)),
            cell: p.cell_vertices(cell).to_vec(),
        })
    };
    // lift every simplex of X at every g in the home chart of its first vertex
    let mut lifts: Vec<Vec<Vec<usize>>> = Vec::with_capacity(p.cell_count());
    for k in 0..=p.base.dim() {
        for (i, s) in p.base.simplices(k).iter().enumerate() {
            let cell = offsets[k] + i;
            let alpha = home[s[0]];
            let shifts: Vec<usize> = s.iter().map(|&v| pr(alpha, home[v], cell)).collect::<Result<_, _>>()?;
            let per_g = q
                .elements()
                .map(|g| {
                    let mut lifted: Vec<usize> = s.iter().zip(&shifts).map(|(&v, &t)| q.mul(g, t) * nx + v).collect();
                    lifted.sort_unstable();
                    lifted
                })
                .collect();
            lifts.push(per_g);
        }
    }
    let all: Vec<Vec<usize>> = lifts.iter().flatten().cloned().collect();
    let complex = SimplicialComplex::from_facets(nx * order, &all)?;
    let distinct: BTreeSet<&Vec<usize>> = all.iter().collect();
    if distinct.len() != all.len() || complex.total_simplices() != all.len() {
        let cell = lifts
            .iter()
            .position(|per_g| per_g.iter().collect::<BTreeSet<_>>().len() != per_g.len())
            .unwrap_or(0);
        return Err(BundleError::NonFreeAction {
            cell: p.cell_vertices(cell).to_vec(),
        });
    }
    let perms: Vec<Vec<usize>> = q
        .elements()
        .map(|a| (0..nx * order).map(|x| q.mul(a, x / nx) * nx + x % nx).collect())
        .collect();
    let total = GComplex::new(complex, q.clone(), perms)?;
    let charts: Vec<Vec<usize>> = p
        .charts
        .iter()
        .enumerate()
        .map(|(beta, centers)| {
            centers
                .iter()
                .map(|&v| Ok(pr(beta, home[v], v)? * nx + v))
                .collect::<Result<Vec<usize>, BundleError>>()
        })
        .collect::<Result<_, _>>()?;
    let atlas = EquivariantAtlas::new(total, charts)?;
    // base cell of X ↔ orbit cell of M through the lift at the identity
    let to_orbit: Vec<usize> = lifts
        .iter()
        .map(|per_g| {
            let s = &per_g[0];
            let k = s.len() - 1;
            atlas.cell_of((k, atlas.total().complex().index_of(s).expect("lifted simplex")))
        })
        .collect();
    let transitions = p
        .transitions
        .iter()
        .map(|(&pair, cells)| (pair, cells.iter().map(|(&c, aut)| (to_orbit[c], aut.clone())).collect()))
        .collect();
    TransitionBundle::new(atlas, p.model.clone(), transitions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::{bundle_isomorphism, check_cocycle, fixtures};

    #[test]
    fn round_trip_through_the_orbit_space() {
        for b in [
            fixtures::hexagon_double_cover(),
            fixtures::sphere_pair_kernel_cocycle(),
            fixtures::projective_plane_cover(),
        ] {
            let p = to_principal(&b).unwrap();
            assert!(check_principal(&p).passed());
            assert!(projected_cocycle(&p).passed());
            let rebuilt = from_principal(&p).unwrap();
            assert!(check_cocycle(&rebuilt).passed());
            let w = bundle_isomorphism(&b, &rebuilt).unwrap();
            assert!(w.residual < 1e-8);
        }
    }

    #[test]
    fn double_cover_is_connected_after_rebuilding() {
        let rebuilt = from_principal(&to_principal(&fixtures::hexagon_double_cover()).unwrap()).unwrap();
        assert_eq!(rebuilt.atlas().total().complex().components().len(), 1);
        let trivial_cover = from_principal(&to_principal(&fixtures::sphere_pair_trivial()).unwrap()).unwrap();
        assert_eq!(trivial_cover.atlas().total().complex().components().len(), 2);
    }

    #[test]
    fn ambiguous_atlas_has_no_orbit_space_description() {
        let b = TransitionBundle::new(fixtures::hexagon_two_arc_atlas(), fixtures::free_z2_model(1), Transitions::new()).unwrap();
        assert!(matches!(to_principal(&b), Err(BundleError::InvalidAtlas { .. })));
    }

    #[test]
    fn broken_cocycle_is_seen_downstairs() {
        let p = to_principal(&fixtures::sphere_pair_broken_cocycle()).unwrap();
        assert!(!check_principal(&p).passed());
    }
}
