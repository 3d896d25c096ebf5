use std::collections::BTreeSet;

use serde::Serialize;

use super::atlas::{validate_atlas, AtlasViolation, EquivariantAtlas};
use super::isomorphism::bundle_isomorphism;
use super::transition::{check_cocycle, deviation, trivial_bundle, TransitionBundle, Transitions};
use super::BundleError;
use crate::complex::{conner_floyd_split, ConnerFloydSplit, GComplex, SimplexSet, SimplicialComplex};
use crate::model::{EquivariantAutomorphism, NonNormalModel};

/// A bundle with isotropy `H` over the fixed sets of the conjugates of `H`.
///
/// Component `c` lives over `M^{g_c H g_c⁻¹}` with the free action of
/// `N_c / H_c`, where `g_c` is the least element of the `c`-th coset of
/// `N(H)`. Component 0 carries the data; the others are its translates.
#[derive(Debug, Clone)]
pub struct NonNormalBundle {
    total: GComplex,
    split: ConnerFloydSplit,
    model: NonNormalModel,
    components: Vec<TransitionBundle>,
    /// Local vertex label to ambient vertex, per component.
    vertices: Vec<Vec<usize>>,
    /// Coset `k` of component 0 corresponds to coset `cosets[c][k]` of component `c`.
    cosets: Vec<Vec<usize>>,
}

/// Checks that the components are the translates of the first one.
#[derive(Debug, Clone, Serialize)]
pub struct SplitReport {
    pub components: usize,
    /// Ambient vertices of each component's fixed set.
    pub fixed_vertices: Vec<Vec<usize>>,
    pub disjoint: bool,
    pub transitive: bool,
    pub model_passed: bool,
    pub cocycles_passed: bool,
    /// Component `c` pulled back along `g_c` is isomorphic to component 0.
    pub pulled_back_isomorphic: Vec<bool>,
    /// For every `x ∈ G`, `x` carries each component's charts and transition
    /// values onto those of the component it lands in.
    pub translation_square: bool,
    pub translation_deviation: f64,
}

impl SplitReport {
    pub fn passed(&self) -> bool {
        self.disjoint
            && self.transitive
            && self.model_passed
            && self.cocycles_passed
            && self.pulled_back_isomorphic.iter().all(|&b| b)
            && self.translation_square
    }
}

/// Checks for restricting to the first component.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionReport {
    /// `N(H)/H` acts freely on `M^H`.
    pub free: bool,
    pub normal_in_normalizer: bool,
    /// Inducing the first component back up recovers every component.
    pub round_trip: bool,
    pub residual: f64,
}

impl ReductionReport {
    pub fn passed(&self) -> bool {
        self.free && self.normal_in_normalizer && self.round_trip
    }
}

/// One connected component of the orbit space of a normal-isotropy piece,
/// with the data that classifies the bundle over it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationRecord {
    pub piece: usize,
    pub component: usize,
    pub rep: String,
    pub rep_dim: usize,
    pub f_dim: usize,
    pub base_f_vector: Vec<usize>,
    /// Order of the deck group `G₀` of the principal bundle.
    pub deck_order: usize,
    /// `G₀` acts freely on the preimage of this component.
    pub deck_free: bool,
    /// Connected components of the preimage; one means the cover is connected.
    pub preimage_components: usize,
    pub charts: Vec<usize>,
    /// `(α, β, g_{αβ})` for every overlap class inside this component.
    pub overlap_classes: Vec<(usize, usize, usize)>,
}

impl NonNormalBundle {
    /// The atlas of the first component, with chart centers given as ambient
    /// vertices of `M^H`.
    pub fn fixed_atlas(total: &GComplex, model: &NonNormalModel, charts: &[Vec<usize>]) -> Result<EquivariantAtlas, BundleError> {
        let split = split_for(total, model)?;
        let (complex, vertices) = fixed_complex(total, model, &split, 0)?;
        let charts = localize(&vertices, charts, |v| v)?;
        EquivariantAtlas::new(complex, charts)
    }

    /// The bundle whose first component is the trivial bundle on `charts`.
    pub fn trivial(total: &GComplex, model: NonNormalModel, charts: &[Vec<usize>]) -> Result<Self, BundleError> {
        let atlas = Self::fixed_atlas(total, &model, charts)?;
        let first = trivial_bundle(&atlas, &model.components()[0].model)?;
        Self::induce(total, model, first)
    }

    /// Spread a bundle over `M^H` to all conjugate fixed sets.
    ///
    /// `first` must be built on [`NonNormalBundle::fixed_atlas`] with the
    /// first component model.
    pub fn induce(total: &GComplex, model: NonNormalModel, first: TransitionBundle) -> Result<Self, BundleError> {
        let split = split_for(total, &model)?;
        let (complex0, vertices0) = fixed_complex(total, &model, &split, 0)?;
        let given = first.atlas().total();
        if given.complex() != complex0.complex() || given.vertex_perms() != complex0.vertex_perms() {
            return Err(component_error(0, "total space is not the fixed set of H"));
        }
        if first.model().quotient().group != model.components()[0].model.quotient().group {
            return Err(BundleError::GroupMismatch);
        }
        let ambient_charts: Vec<Vec<usize>> =
            first.atlas().charts().iter().map(|cs| cs.iter().map(|&v| vertices0[v]).collect()).collect();
        let group = model.group();
        let first_comp = &model.components()[0];
        let mut components = Vec::with_capacity(model.components().len());
        let mut vertices = Vec::with_capacity(model.components().len());
        let mut cosets = Vec::with_capacity(model.components().len());
        for (c, comp) in model.components().iter().enumerate() {
            let gc = comp.representative;
            let (complex, verts) = fixed_complex(total, &model, &split, c)?;
            let pi: Vec<usize> = (0..first_comp.model.coset_count())
                .map(|k| {
                    let r = first_comp.normalizer.parent(first_comp.model.section().rep(k));
                    let local = comp.normalizer.local(group.conj(gc, r)).expect("conjugate normalizer");
                    comp.model.section().coset_of(local)
                })
                .collect();
            let charts = localize(&verts, &ambient_charts, |v| total.vertex_perm(gc)[v])?;
            let atlas = EquivariantAtlas::new(complex, charts)?;
            let mut transitions = Transitions::new();
            for (&pair, values) in first.transitions() {
                let entry = transitions.entry(pair).or_default();
                for (&cell, aut) in values {
                    let moved = transport_cell(first.atlas(), &vertices0, cell, &atlas, &verts, |v| total.vertex_perm(gc)[v])
                        .ok_or_else(|| component_error(c, "translated cell is not in the fixed set"))?;
                    entry.insert(moved, permute(aut, &pi));
                }
            }
            components.push(TransitionBundle::new(atlas, comp.model.clone(), transitions)?);
            vertices.push(verts);
            cosets.push(pi);
        }
        Ok(NonNormalBundle {
            total: total.clone(),
            split,
            model,
            components,
            vertices,
            cosets,
        })
    }

    pub fn total(&self) -> &GComplex {
        &self.total
    }

    pub fn components(&self) -> &[TransitionBundle] {
        &self.components
    }

    pub fn model(&self) -> &NonNormalModel {
        &self.model
    }

    pub fn split(&self) -> &ConnerFloydSplit {
        &self.split
    }

    /// Ambient vertex of each local vertex label of component `c`.
    pub fn component_vertices(&self, c: usize) -> &[usize] {
        &self.vertices[c]
    }

    /// Component `c` expressed on the atlas of component 0 via `g_c⁻¹`.
    fn pulled_back(&self, c: usize) -> Result<TransitionBundle, BundleError> {
        let first = &self.components[0];
        let comp = &self.components[c];
        let g = self.model.group();
        let back = g.inv(self.model.components()[c].representative);
        let mut inverse = vec![0; self.cosets[c].len()];
        for (k, &j) in self.cosets[c].iter().enumerate() {
            inverse[j] = k;
        }
        let mut transitions = Transitions::new();
        for (&pair, values) in comp.transitions() {
            let entry = transitions.entry(pair).or_default();
            for (&cell, aut) in values {
                let moved = transport_cell(comp.atlas(), &self.vertices[c], cell, first.atlas(), &self.vertices[0], |v| {
                    self.total.vertex_perm(back)[v]
                })
                .ok_or_else(|| component_error(c, "translated cell is not in the fixed set of H"))?;
                entry.insert(moved, permute(aut, &inverse));
            }
        }
        TransitionBundle::new(first.atlas().clone(), first.model().clone(), transitions)
    }

    /// Check that the components are disjoint translates of `M^H`, permuted
    /// transitively by `G`, and that the action of `G` matches the transition data.
    pub fn split_by_conjugates(&self) -> SplitReport {
        let tol = self.model.tol();
        let model_passed = self.model.verify().passed(tol);
        let cocycles_passed = self.components.iter().all(|b| check_cocycle(b).passed());
        let pulled_back_isomorphic = (0..self.components.len())
            .map(|c| {
                self.pulled_back(c)
                    .ok()
                    .and_then(|b| bundle_isomorphism(&self.components[0], &b).ok())
                    .is_some_and(|w| w.residual <= tol.max(1e-7))
            })
            .collect();
        let (translation_square, translation_deviation) = self.translation_square();
        SplitReport {
            components: self.components.len(),
            fixed_vertices: self.split.components.iter().map(|c| c.fixed_set.vertices().to_vec()).collect(),
            disjoint: self.split.pairwise_disjoint,
            transitive: self.split.transitive,
            model_passed,
            cocycles_passed,
            pulled_back_isomorphic,
            translation_square,
            translation_deviation,
        }
    }

    fn translation_square(&self) -> (bool, f64) {
        let g = self.model.group();
        let tol = self.model.tol().max(1e-9);
        let class_of = |x: usize| {
            self.model
                .components()
                .iter()
                .position(|comp| {
                    let n = g.mul(g.inv(comp.representative), x);
                    self.split.normalizer.contains(n)
                })
                .expect("cosets cover the group")
        };
        let mut inverses = Vec::with_capacity(self.cosets.len());
        for pi in &self.cosets {
            let mut inv = vec![0; pi.len()];
            for (k, &j) in pi.iter().enumerate() {
                inv[j] = k;
            }
            inverses.push(inv);
        }
        let first_model = self.components[0].model();
        let mut worst: f64 = 0.0;
        let mut ok = true;
        for x in g.elements() {
            for (c, comp) in self.components.iter().enumerate() {
                let c2 = class_of(g.mul(x, self.model.components()[c].representative));
                let target = &self.components[c2];
                let charts = comp.atlas().chart_count();
                for cell in 0..comp.atlas().cell_count() {
                    let Some(moved) = transport_cell(comp.atlas(), &self.vertices[c], cell, target.atlas(), &self.vertices[c2], |v| {
                        self.total.vertex_perm(x)[v]
                    }) else {
                        ok = false;
                        continue;
                    };
                    for alpha in 0..charts {
                        ok &= comp.atlas().contains(alpha, cell) == target.atlas().contains(alpha, moved);
                        for beta in alpha + 1..charts {
                            match (comp.transition(alpha, beta, cell), target.transition(alpha, beta, moved)) {
                                (None, None) => {}
                                (Some(p), Some(q)) => {
                                    let p = permute(&p, &inverses[c]);
                                    let q = permute(&q, &inverses[c2]);
                                    if p.a != q.a {
                                        ok = false;
                                    } else {
                                        worst = worst.max(deviation(first_model, &p, &q));
                                    }
                                }
                                _ => ok = false,
                            }
                        }
                    }
                }
            }
        }
        (ok && worst <= tol, worst)
    }

    /// The first component as a bundle with normal isotropy over `M^H`,
    /// after checking that inducing it back recovers this bundle.
    pub fn reduce_to_normal(&self) -> Result<(TransitionBundle, ReductionReport), BundleError> {
        let first = self.components[0].clone();
        let free = !validate_atlas(first.atlas())
            .violations
            .iter()
            .any(|v| matches!(v, AtlasViolation::NotFree { .. }));
        let m = first.model();
        let normal_in_normalizer = m.subgroup().is_normal_in(m.group());
        let again = Self::induce(&self.total, self.model.clone(), first.clone())?;
        let mut round_trip = again.components.len() == self.components.len();
        let mut residual: f64 = 0.0;
        for (a, b) in again.components.iter().zip(&self.components) {
            match bundle_isomorphism(a, b) {
                Ok(w) => residual = residual.max(w.residual),
                Err(_) => round_trip = false,
            }
        }
        round_trip &= residual <= self.model.tol().max(1e-7);
        Ok((
            first,
            ReductionReport {
                free,
                normal_in_normalizer,
                round_trip,
                residual,
            },
        ))
    }
}

/// One record per connected component of each piece's orbit space.
pub fn classification_pairing(pieces: &[TransitionBundle]) -> Result<Vec<ClassificationRecord>, BundleError> {
    let mut records = Vec::new();
    for (p, piece) in pieces.iter().enumerate() {
        let atlas = piece.atlas();
        let total = atlas.total();
        let g0 = atlas.group();
        let (base, _) = atlas.base_complex().map_err(|violation| BundleError::InvalidAtlas { violation })?;
        let upstairs = total.complex().components();
        let mut upstairs_of = vec![0; total.complex().vertex_count()];
        for (i, comp) in upstairs.iter().enumerate() {
            for &v in comp {
                upstairs_of[v] = i;
            }
        }
        for (k, vertices) in base.components().into_iter().enumerate() {
            let inside: BTreeSet<usize> = vertices.iter().copied().collect();
            let base_f_vector: Vec<usize> = (0..=base.dim())
                .map(|d| base.simplices(d).iter().filter(|s| inside.contains(&s[0])).count())
                .take_while(|&n| n > 0)
                .collect();
            let complex = total.complex();
            // vertex cells are numbered first, so the base vertex label is the cell id
            let over = |v: usize| inside.contains(&atlas.cell_of((0, v)));
            let preimage: BTreeSet<usize> = (0..complex.vertex_count()).filter(|&v| over(v)).map(|v| upstairs_of[v]).collect();
            let deck_free = g0.elements().filter(|&g| g != g0.identity()).all(|g| {
                (0..=complex.dim()).all(|d| {
                    (0..complex.count(d)).all(|i| !over(complex.simplices(d)[i][0]) || total.act_simplex(g, d, i).map(|x| x.0) != Some(i))
                })
            });
            let charts: Vec<usize> = (0..atlas.chart_count())
                .filter(|&a| inside.contains(&atlas.cell_of((0, atlas.charts()[a][0]))))
                .collect();
            let mut overlap_classes = Vec::new();
            for (i, &alpha) in charts.iter().enumerate() {
                for &beta in &charts[i + 1..] {
                    for (g, _) in atlas.overlap_classes(alpha, beta) {
                        overlap_classes.push((alpha, beta, g));
                    }
                }
            }
            let m = piece.model();
            records.push(ClassificationRecord {
                piece: p,
                component: k,
                rep: m.rho().name().to_string(),
                rep_dim: m.rho().dim(),
                f_dim: m.f_dim(),
                base_f_vector,
                deck_order: g0.order(),
                deck_free,
                preimage_components: preimage.len(),
                charts,
                overlap_classes,
            });
        }
    }
    Ok(records)
}

fn component_error(component: usize, reason: &str) -> BundleError {
    BundleError::Component {
        component,
        reason: reason.to_string(),
    }
}

fn split_for(total: &GComplex, model: &NonNormalModel) -> Result<ConnerFloydSplit, BundleError> {
    if total.group() != model.group() {
        return Err(BundleError::GroupMismatch);
    }
    let split = conner_floyd_split(total, &model.components()[0].conjugate)?;
    if split.components.first().is_none_or(|c| c.fixed_set.is_empty()) {
        return Err(BundleError::EmptyFixedSet);
    }
    let same_order = split
        .components
        .iter()
        .zip(model.components())
        .all(|(s, m)| s.representative == m.representative);
    if !same_order || split.components.len() != model.components().len() {
        return Err(component_error(0, "fixed-set components and model components are indexed differently"));
    }
    Ok(split)
}

/// The fixed set of component `c` as a complex on local labels with the
/// action of `N_c / H_c`.
fn fixed_complex(total: &GComplex, model: &NonNormalModel, split: &ConnerFloydSplit, c: usize) -> Result<(GComplex, Vec<usize>), BundleError> {
    let fixed: &SimplexSet = &split.components[c].fixed_set;
    let vertices = fixed.vertices().to_vec();
    let local = |v: usize| vertices.binary_search(&v).expect("vertex of the fixed set");
    let simplices: Vec<Vec<usize>> = fixed
        .simplices
        .iter()
        .enumerate()
        .flat_map(|(k, level)| level.iter().map(move |&i| (k, i)))
        .map(|(k, i)| total.complex().simplices(k)[i].iter().map(|&v| local(v)).collect())
        .collect();
    let complex = SimplicialComplex::from_facets(vertices.len(), &simplices)?;
    let comp = &model.components()[c];
    let quotient = comp.model.quotient();
    let perms = quotient
        .cosets
        .iter()
        .map(|coset| {
            let x = comp.normalizer.parent(coset[0]);
            vertices.iter().map(|&v| local(total.vertex_perm(x)[v])).collect()
        })
        .collect();
    Ok((GComplex::new(complex, quotient.group.clone(), perms)?, vertices))
}

/// Chart centers moved by `map` and relabelled locally.
fn localize(vertices: &[usize], charts: &[Vec<usize>], map: impl Fn(usize) -> usize) -> Result<Vec<Vec<usize>>, BundleError> {
    charts
        .iter()
        .enumerate()
        .map(|(chart, centers)| {
            centers
                .iter()
                .map(|&v| {
                    let w = map(v);
                    vertices.binary_search(&w).map_err(|_| BundleError::BadCenter { chart, vertex: v })
                })
                .collect()
        })
        .collect()
}

/// The cell of `to` containing the image of `cell`'s representative under `map`.
fn transport_cell(
    from: &EquivariantAtlas,
    from_vertices: &[usize],
    cell: usize,
    to: &EquivariantAtlas,
    to_vertices: &[usize],
    map: impl Fn(usize) -> usize,
) -> Option<usize> {
    let s = from.cell_representative(cell);
    let mut image = from
        .vertices(s)
        .iter()
        .map(|&v| to_vertices.binary_search(&map(from_vertices[v])).ok())
        .collect::<Option<Vec<usize>>>()?;
    image.sort_unstable();
    let idx = to.total().complex().index_of(&image)?;
    Some(to.cell_of((s.0, idx)))
}

/// Relabel cosets: block `k` moves to position `pi[k]` and `a` to `pi[a]`.
fn permute(aut: &EquivariantAutomorphism, pi: &[usize]) -> EquivariantAutomorphism {
    let mut blocks = aut.blocks.clone();
    for (k, b) in aut.blocks.iter().enumerate() {
        blocks[pi[k]] = b.clone();
    }
    EquivariantAutomorphism { a: pi[aut.a], blocks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::fixtures;

    #[test]
    fn s3_hexagon_splits_into_three_translates() {
        let b = fixtures::s3_hexagon();
        let report = b.split_by_conjugates();
        assert_eq!(report.components, 3);
        assert_eq!(report.fixed_vertices[0], vec![0, 3]);
        assert!(report.passed(), "{report:?}");
        let (first, reduction) = b.reduce_to_normal().unwrap();
        assert!(reduction.passed(), "{reduction:?}");
        assert_eq!(first.atlas().total().complex().vertex_count(), 2);
    }

    #[test]
    fn octagon_normalizer_quotient_acts_freely() {
        let b = fixtures::octagon_d4();
        let report = b.split_by_conjugates();
        assert_eq!(report.fixed_vertices, vec![vec![0, 4], vec![2, 6]]);
        assert!(report.passed(), "{report:?}");
        let (first, reduction) = b.reduce_to_normal().unwrap();
        assert!(reduction.free && reduction.passed());
        assert_eq!(first.atlas().group().order(), 2);
    }

    #[test]
    fn klein_poles_form_a_trivial_double_cover_of_a_point() {
        let b = fixtures::klein_poles();
        assert_eq!(b.components().len(), 1);
        let (first, reduction) = b.reduce_to_normal().unwrap();
        assert!(reduction.passed());
        let records = classification_pairing(&[first]).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].base_f_vector, vec![1]);
        assert_eq!(records[0].deck_order, 2);
        assert_eq!(records[0].preimage_components, 2);
        assert!(records[0].deck_free);
    }

    #[test]
    fn distinct_characters_give_separate_records() {
        let records = classification_pairing(&fixtures::two_point_characters()).unwrap();
        assert_eq!(records.len(), 2);
        assert_ne!(records[0].rep, records[1].rep);
    }

    #[test]
    fn double_cover_record_is_connected() {
        let records = classification_pairing(&[fixtures::hexagon_double_cover()]).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].base_f_vector, vec![3, 3]);
        assert_eq!(records[0].preimage_components, 1);
        assert!(records[0].overlap_classes.contains(&(0, 2, 1)));
    }

    #[test]
    fn fixed_atlas_rejects_centers_off_the_fixed_set() {
        let total = crate::complex::fixtures::hexagon_s3();
        let model = fixtures::s3_hexagon().model().clone();
        assert!(matches!(
            NonNormalBundle::fixed_atlas(&total, &model, &[vec![1]]),
            Err(BundleError::BadCenter { .. })
        ));
    }
}
