use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::Serialize;

use super::atlas::{validate_atlas, AtlasViolation, EquivariantAtlas};
use super::BundleError;
use crate::exactmath::{cx_solve_homogeneous, CxMatrix};
use crate::model::{CanonicalModel, EquivariantAutomorphism};
use crate::reps::{irreps, UnitaryRep};

/// Transition values per chart pair `α < β`, per base cell.
pub type Transitions = BTreeMap<(usize, usize), BTreeMap<usize, EquivariantAutomorphism>>;

/// A failed bundle condition, naming charts and cells by their vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum CocycleViolation {
    InvalidAtlas { violation: AtlasViolation },
    MissingTransition { charts: (usize, usize), cell: Vec<usize> },
    /// A value is assigned to a cell outside the overlap.
    UnexpectedTransition { charts: (usize, usize), cell: Vec<usize> },
    /// `pr Ψ_{αβ}` differs from the overlap class.
    WrongClass { charts: (usize, usize), cell: Vec<usize>, expected: usize, found: usize },
    NotEquivariant { charts: (usize, usize), cell: Vec<usize>, deviation: f64 },
    /// Values on a cell and on one of its faces inside the overlap disagree.
    NotLocallyConstant { charts: (usize, usize), face: Vec<usize>, coface: Vec<usize>, deviation: f64 },
    /// `Ψ_{αγ} ≠ Ψ_{βγ}·Ψ_{αβ}` on a triple overlap.
    CocycleFails { charts: (usize, usize, usize), cell: Vec<usize>, deviation: f64 },
}

impl std::fmt::Display for CocycleViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CocycleViolation::InvalidAtlas { violation } => write!(f, "invalid atlas: {violation}"),
            CocycleViolation::MissingTransition { charts, cell } => {
                write!(f, "no transition for charts {charts:?} on {cell:?}")
            }
            CocycleViolation::UnexpectedTransition { charts, cell } => {
                write!(f, "transition for charts {charts:?} on {cell:?} outside their overlap")
            }
            CocycleViolation::WrongClass { charts, cell, expected, found } => {
                write!(f, "transition for charts {charts:?} on {cell:?} covers {found}, overlap class is {expected}")
            }
            CocycleViolation::NotEquivariant { charts, cell, deviation } => {
                write!(f, "transition for charts {charts:?} on {cell:?} is not equivariant (deviation {deviation:e})")
            }
            CocycleViolation::NotLocallyConstant { charts, face, coface, deviation } => write!(
                f,
                "transition for charts {charts:?} jumps between {face:?} and {coface:?} (deviation {deviation:e})"
            ),
            CocycleViolation::CocycleFails { charts, cell, deviation } => {
                write!(f, "cocycle fails for charts {charts:?} on {cell:?} (deviation {deviation:e})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CocycleReport {
    pub overlaps_checked: usize,
    pub triples_checked: usize,
    pub max_deviation: f64,
    pub violations: Vec<CocycleViolation>,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A `G`-bundle with quasi-free action over the total complex of an atlas,
/// given by transition functions with values in the automorphisms of the
/// canonical model, constant on each cell.
///
/// `Ψ_{αβ}` maps chart-`α` coordinates to chart-`β` coordinates and covers
/// right translation by `g_{αβ}`; only pairs `α < β` are stored.
#[derive(Debug, Clone)]
pub struct TransitionBundle {
    atlas: EquivariantAtlas,
    model: CanonicalModel,
    transitions: Transitions,
}

impl TransitionBundle {
    pub fn new(atlas: EquivariantAtlas, model: CanonicalModel, transitions: Transitions) -> Result<Self, BundleError> {
        if &model.quotient().group != atlas.group() {
            return Err(BundleError::GroupMismatch);
        }
        for &(alpha, beta) in transitions.keys() {
            if alpha >= beta || beta >= atlas.chart_count() {
                return Err(BundleError::BadChartPair { alpha, beta });
            }
        }
        for values in transitions.values() {
            for (&cell, aut) in values {
                if cell >= atlas.cell_count() {
                    return Err(BundleError::BadCell { cell });
                }
                EquivariantAutomorphism::from_blocks(&model, aut.a, aut.blocks.clone())?;
            }
        }
        Ok(TransitionBundle { atlas, model, transitions })
    }

    pub fn atlas(&self) -> &EquivariantAtlas {
        &self.atlas
    }

    pub fn model(&self) -> &CanonicalModel {
        &self.model
    }

    pub fn transitions(&self) -> &Transitions {
        &self.transitions
    }

    /// `Ψ_{αβ}(cell)` for any ordered pair, using `Ψ_{βα} = Ψ_{αβ}⁻¹` and `Ψ_{αα} = id`.
    pub fn transition(&self, alpha: usize, beta: usize, cell: usize) -> Option<EquivariantAutomorphism> {
        lookup(&self.transitions, &self.model, alpha, beta, cell)
    }

    /// Replace a single value; used to build mutation fixtures.
    pub fn with_transition(mut self, alpha: usize, beta: usize, cell: usize, value: EquivariantAutomorphism) -> Self {
        self.transitions.entry((alpha, beta)).or_default().insert(cell, value);
        self
    }

    pub(crate) fn into_parts(self) -> (EquivariantAtlas, CanonicalModel, Transitions) {
        (self.atlas, self.model, self.transitions)
    }
}

pub(crate) fn lookup(
    transitions: &Transitions,
    model: &CanonicalModel,
    alpha: usize,
    beta: usize,
    cell: usize,
) -> Option<EquivariantAutomorphism> {
    use std::cmp::Ordering;
    match alpha.cmp(&beta) {
        Ordering::Equal => Some(identity(model)),
        Ordering::Less => transitions.get(&(alpha, beta))?.get(&cell).cloned(),
        Ordering::Greater => invert(model, transitions.get(&(beta, alpha))?.get(&cell)?),
    }
}

pub fn identity(model: &CanonicalModel) -> EquivariantAutomorphism {
    EquivariantAutomorphism {
        a: 0,
        blocks: vec![CxMatrix::identity(model.fiber_dim()); model.coset_count()],
    }
}

/// Inverse automorphism, `None` if a block is singular.
pub fn invert(model: &CanonicalModel, aut: &EquivariantAutomorphism) -> Option<EquivariantAutomorphism> {
    let inverse = aut.to_fiber_map(model).inverse()?;
    Some(EquivariantAutomorphism {
        a: model.quotient().group.inv(aut.a),
        blocks: inverse.blocks,
    })
}

pub(crate) fn deviation(model: &CanonicalModel, a: &EquivariantAutomorphism, b: &EquivariantAutomorphism) -> f64 {
    a.to_fiber_map(model).distance(&b.to_fiber_map(model))
}

/// Verify values against the overlap classes, equivariance, local
/// constancy along faces, and the cocycle identity on triple overlaps.
pub fn check_cocycle(b: &TransitionBundle) -> CocycleReport {
    let atlas = &b.atlas;
    let model = &b.model;
    let tol = model.tol();
    let atlas_report = validate_atlas(atlas);
    if !atlas_report.passed() {
        return CocycleReport {
            overlaps_checked: 0,
            triples_checked: 0,
            max_deviation: 0.0,
            violations: atlas_report
                .violations
                .into_iter()
                .map(|violation| CocycleViolation::InvalidAtlas { violation })
                .collect(),
        };
    }
    let name = |cell: usize| atlas.vertices(atlas.cell_representative(cell)).to_vec();
    let mut violations = Vec::new();
    let mut max_deviation: f64 = 0.0;
    let n = atlas.chart_count();
    let mut overlap_cells: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
    for alpha in 0..n {
        for beta in alpha + 1..n {
            let Some((class, cells)) = atlas.overlap(alpha, beta) else {
                continue;
            };
            let charts = (alpha, beta);
            let given = b.transitions.get(&charts);
            let cells: BTreeSet<usize> = cells.into_iter().collect();
            if let Some(given) = given {
                for &cell in given.keys().filter(|c| !cells.contains(c)) {
                    violations.push(CocycleViolation::UnexpectedTransition { charts, cell: name(cell) });
                }
            }
            for &cell in &cells {
                let Some(value) = given.and_then(|g| g.get(&cell)) else {
                    violations.push(CocycleViolation::MissingTransition { charts, cell: name(cell) });
                    continue;
                };
                if value.a != class {
                    violations.push(CocycleViolation::WrongClass {
                        charts,
                        cell: name(cell),
                        expected: class,
                        found: value.a,
                    });
                }
                let (dev, _) = value.commutation_deviation(model);
                max_deviation = max_deviation.max(dev);
                if dev > tol {
                    violations.push(CocycleViolation::NotEquivariant { charts, cell: name(cell), deviation: dev });
                }
            }
            // faces of a cell inside the overlap are lifted to faces of its lift
            for &cell in &cells {
                let (k, idx) = atlas.lift(alpha, cell).expect("overlap cell lies in the chart");
                if k == 0 {
                    continue;
                }
                let Some(value) = given.and_then(|g| g.get(&cell)) else { continue };
                for (face, _) in atlas.total().complex().boundary_of(k, idx) {
                    let face_cell = atlas.cell_of((k - 1, face));
                    if !cells.contains(&face_cell) {
                        continue;
                    }
                    if let Some(other) = given.and_then(|g| g.get(&face_cell)) {
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
            overlap_cells.insert(charts, cells);
        }
    }
    let mut triples = 0;
    for alpha in 0..n {
        for beta in alpha + 1..n {
            for gamma in beta + 1..n {
                let (Some(ab), Some(bc), Some(ac)) = (
                    overlap_cells.get(&(alpha, beta)),
                    overlap_cells.get(&(beta, gamma)),
                    overlap_cells.get(&(alpha, gamma)),
                ) else {
                    continue;
                };
                for &cell in ab.iter().filter(|c| bc.contains(c) && ac.contains(c)) {
                    triples += 1;
                    let (Some(x), Some(y), Some(z)) = (
                        b.transition(alpha, beta, cell),
                        b.transition(beta, gamma, cell),
                        b.transition(alpha, gamma, cell),
                    ) else {
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
        overlaps_checked: overlap_cells.len(),
        triples_checked: triples,
        max_deviation,
        violations,
    }
}

/// A homomorphism `s : G₀ → Aut` with `pr ∘ s = id`, when one exists.
///
/// Built from an extension `W` of `id_F ⊗ ρ` to all of `G`: right
/// translation on `G/H × (F⊗V)` read in model coordinates gives
/// `s(a)[c] = W(r_{ca})⁻¹ W(r_c)`. Returns `None` when no sum of irreducible
/// representations of `G` restricts to `f·ρ`.
pub fn homomorphic_section(model: &CanonicalModel) -> Result<Option<Vec<EquivariantAutomorphism>>, BundleError> {
    let Some(w) = extension(model)? else {
        return Ok(None);
    };
    let q = &model.quotient().group;
    let section = model.section();
    let inverses: Vec<CxMatrix> = (0..model.coset_count())
        .map(|c| w[section.rep(c)].inverse().ok_or(BundleError::NoHomomorphicSection))
        .collect::<Result<_, _>>()?;
    let s: Vec<EquivariantAutomorphism> = q
        .elements()
        .map(|a| EquivariantAutomorphism {
            a,
            blocks: (0..model.coset_count())
                .map(|c| (&inverses[q.mul(c, a)] * &w[section.rep(c)]).with_tol(model.tol()))
                .collect(),
        })
        .collect();
    for aut in &s {
        aut.verify(model)?;
    }
    Ok(Some(s))
}

/// Matrices `W(g)` of a representation of `G` with `W(h) = id_F ⊗ ρ(h)` on `H`.
fn extension(model: &CanonicalModel) -> Result<Option<Vec<CxMatrix>>, BundleError> {
    let group = model.group();
    let sub = model.embedded_subgroup();
    let rho = model.rho();
    let d = rho.dim();
    let f = model.f_dim();
    let candidates: Vec<(UnitaryRep, usize)> = irreps(group)?
        .into_iter()
        .filter_map(|sigma| {
            let restricted = sigma.restrict(sub);
            let m = restricted.inner_product(rho).re.round() as usize;
            (m > 0 && m * d == sigma.dim()).then_some((sigma, m))
        })
        .collect();
    let Some(choice) = pick(&candidates, f) else {
        return Ok(None);
    };
    let mut w = candidates[choice[0]].0.clone();
    for &i in &choice[1..] {
        w = w.direct_sum(&candidates[i].0);
    }
    // T with T W(h) = (id_F ⊗ ρ(h)) T on generators of H
    let dim = f * d;
    let constraints: Vec<CxMatrix> = rho
        .group()
        .generators()
        .iter()
        .map(|&h| {
            let parent = sub.parent(h);
            &w.matrix(parent).transpose().kron(&CxMatrix::identity(dim)) - &CxMatrix::identity(dim).kron(&model.lift(parent))
        })
        .collect();
    let solutions = if constraints.is_empty() {
        vec![CxMatrix::identity(dim).vectorize()]
    } else {
        cx_solve_homogeneous(&constraints, dim * dim, model.tol().max(1e-7))
    };
    let Some(t) = generic_invertible(&solutions, dim) else {
        return Ok(None);
    };
    let t_inv = t.inverse().expect("checked invertible");
    Ok(Some(
        group
            .elements()
            .map(|g| (&(&t * w.matrix(g)) * &t_inv).with_tol(model.tol()))
            .collect(),
    ))
}

/// Indices (with repetition) of candidates whose multiplicities sum to `f`.
fn pick(candidates: &[(UnitaryRep, usize)], f: usize) -> Option<Vec<usize>> {
    if f == 0 {
        return Some(Vec::new());
    }
    candidates.iter().enumerate().find_map(|(i, (_, m))| {
        if *m > f {
            return None;
        }
        let mut rest = pick(candidates, f - m)?;
        rest.insert(0, i);
        Some(rest)
    })
}

/// A fixed generic combination of column-major solution vectors that is invertible.
fn generic_invertible(solutions: &[Vec<Complex64>], dim: usize) -> Option<CxMatrix> {
    if solutions.is_empty() {
        return None;
    }
    let mut v = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (k, s) in solutions.iter().enumerate() {
        let w = Complex64::new(1.0 / (k as f64 + 1.0), 0.37 / (k as f64 + 2.0));
        for (x, y) in v.iter_mut().zip(s) {
            *x += w * y;
        }
    }
    let m = CxMatrix::from_column_major(dim, dim, &v);
    m.inverse().map(|_| m)
}

/// The bundle `M × (F⊗V)`: every transition is `s(g_{αβ})` for a homomorphic section `s`.
pub fn trivial_bundle(atlas: &EquivariantAtlas, model: &CanonicalModel) -> Result<TransitionBundle, BundleError> {
    let section = homomorphic_section(model)?.ok_or(BundleError::NoHomomorphicSection)?;
    let mut transitions = Transitions::new();
    for alpha in 0..atlas.chart_count() {
        for beta in alpha + 1..atlas.chart_count() {
            if let Some((class, cells)) = atlas.overlap(alpha, beta) {
                transitions.insert(
                    (alpha, beta),
                    cells.into_iter().map(|c| (c, section[class].clone())).collect(),
                );
            }
        }
    }
    TransitionBundle::new(atlas.clone(), model.clone(), transitions)
}

/// Transitions `Ψ_{αβ} = s(g_{αβ})` composed with kernel factors `B_{αβ} ⊗ id`.
pub fn kernel_twisted(
    atlas: &EquivariantAtlas,
    model: &CanonicalModel,
    factors: &BTreeMap<(usize, usize), CxMatrix>,
) -> Result<TransitionBundle, BundleError> {
    let trivial = trivial_bundle(atlas, model)?;
    let (atlas, model, mut transitions) = trivial.into_parts();
    let d = model.rho().dim();
    for (charts, values) in transitions.iter_mut() {
        if let Some(b) = factors.get(charts) {
            let kernel = EquivariantAutomorphism {
                a: 0,
                blocks: vec![b.kron(&CxMatrix::identity(d)); model.coset_count()],
            };
            for value in values.values_mut() {
                *value = kernel.then(value, &model);
            }
        }
    }
    TransitionBundle::new(atlas, model, transitions)
}

/// Change of coordinates by kernel factors `C_α ⊗ id` in every chart:
/// `Ψ'_{αβ} = (C_β ⊗ id) Ψ_{αβ} (C_α ⊗ id)⁻¹`. The result is isomorphic to `b`.
pub fn gauge_transform(b: &TransitionBundle, factors: &[CxMatrix]) -> Result<TransitionBundle, BundleError> {
    let model = &b.model;
    let d = model.rho().dim();
    let kernel = |c: &CxMatrix| EquivariantAutomorphism {
        a: 0,
        blocks: vec![c.kron(&CxMatrix::identity(d)); model.coset_count()],
    };
    if factors.len() != b.atlas.chart_count() {
        return Err(BundleError::BadChartPair { alpha: factors.len(), beta: b.atlas.chart_count() });
    }
    let mut forward = Vec::with_capacity(factors.len());
    let mut backward = Vec::with_capacity(factors.len());
    for c in factors {
        let k = EquivariantAutomorphism::from_blocks(model, 0, kernel(c).blocks)?;
        backward.push(invert(model, &k).ok_or(crate::model::ModelError::SingularMatrix)?);
        forward.push(k);
    }
    let mut transitions = b.transitions.clone();
    for (&(alpha, beta), values) in transitions.iter_mut() {
        for value in values.values_mut() {
            *value = backward[alpha].then(value, model).then(&forward[beta], model);
        }
    }
    TransitionBundle::new(b.atlas.clone(), model.clone(), transitions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::fixtures;

    #[test]
    fn trivial_bundles_satisfy_the_cocycle_conditions() {
        for b in [
            fixtures::hexagon_double_cover(),
            fixtures::sphere_pair_trivial(),
            fixtures::sphere_pair_kernel_cocycle(),
            fixtures::projective_plane_cover(),
            fixtures::circle_holonomy(2.0),
        ] {
            let report = check_cocycle(&b);
            assert!(report.passed(), "{report:?}");
        }
    }

    #[test]
    fn double_cover_has_a_nontrivial_overlap_class() {
        let b = fixtures::hexagon_double_cover();
        assert_eq!(b.atlas().overlap(0, 2).unwrap().0, 1);
        let psi = b.transition(0, 2, b.atlas().overlap(0, 2).unwrap().1[0]).unwrap();
        assert_eq!(psi.a, 1);
        assert!(psi.commutation_deviation(b.model()).0 < 1e-9);
    }

    #[test]
    fn triple_overlaps_are_checked() {
        let report = check_cocycle(&fixtures::sphere_pair_kernel_cocycle());
        assert!(report.triples_checked > 0);
    }

    #[test]
    fn broken_cocycle_names_the_triple() {
        let report = check_cocycle(&fixtures::sphere_pair_broken_cocycle());
        assert!(!report.passed());
        assert!(report.violations.iter().all(|v| match v {
            CocycleViolation::CocycleFails { charts, .. } => [charts.0, charts.1, charts.2].contains(&0) && [charts.0, charts.1, charts.2].contains(&1),
            _ => false,
        }), "{:?}", report.violations);
    }

    #[test]
    fn wrong_class_is_reported() {
        let b = fixtures::hexagon_double_cover();
        let cell = b.atlas().overlap(0, 1).unwrap().1[0];
        let flipped = b.transition(0, 2, b.atlas().overlap(0, 2).unwrap().1[0]).unwrap();
        let report = check_cocycle(&b.with_transition(0, 1, cell, flipped));
        assert!(report.violations.iter().any(|v| matches!(v, CocycleViolation::WrongClass { expected: 0, found: 1, .. })));
    }

    #[test]
    fn ambiguous_atlas_is_rejected_before_transitions() {
        let atlas = fixtures::hexagon_two_arc_atlas();
        let b = TransitionBundle::new(atlas, fixtures::free_z2_model(1), Transitions::new()).unwrap();
        let report = check_cocycle(&b);
        assert!(matches!(
            report.violations[0],
            CocycleViolation::InvalidAtlas { violation: AtlasViolation::AmbiguousOverlap { .. } }
        ));
    }

    #[test]
    fn homomorphic_section_is_a_homomorphism() {
        let model = fixtures::z4_sign_model();
        let s = homomorphic_section(&model).unwrap().unwrap();
        let q = &model.quotient().group;
        for a in q.elements() {
            for b in q.elements() {
                let lhs = s[a].then(&s[b], &model);
                assert_eq!(lhs.a, q.mul(a, b));
                assert!(deviation(&model, &lhs, &s[q.mul(a, b)]) < 1e-9);
            }
            assert!(s[a].commutation_deviation(&model).0 < 1e-9);
        }
    }
}
