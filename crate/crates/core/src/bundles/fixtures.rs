//! Bundles used by tests, the acceptance suite and the CLI catalog,
//! together with deliberately broken variants.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{gauge_transform, kernel_twisted, trivial_bundle, EquivariantAtlas, NonNormalBundle, TransitionBundle};
use crate::complex::{fixtures as complexes, GComplex, SimplicialComplex};
use crate::exactmath::CxMatrix;
use crate::groups::{cyclic, dihedral, FiniteGroup, Subgroup};
use crate::model::{build_model, CanonicalModel, EquivariantAutomorphism, NonNormalModel};
use crate::reps::{linear_characters, UnitaryRep};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// One chart per vertex orbit, centered at its least vertex.
pub fn vertex_star_atlas(total: GComplex) -> EquivariantAtlas {
    let charts = total.orbits(0).into_iter().map(|orbit| vec![orbit[0]]).collect();
    EquivariantAtlas::new(total, charts).expect("orbit representatives are valid centers")
}

/// The 6-cycle with `Z/2` acting by the half turn `i ↦ i+3`.
pub fn hexagon_half_turn() -> GComplex {
    let facets: Vec<Vec<usize>> = (0..6).map(|i| vec![i, (i + 1) % 6]).collect();
    let complex = SimplicialComplex::from_facets(6, &facets).expect("valid");
    let turn: Vec<usize> = (0..6).map(|i| (i + 3) % 6).collect();
    GComplex::from_generators(complex, cyclic(2), &[turn]).expect("valid action")
}

/// The nontrivial character of a group of order two, as a representation
/// of `sub` viewed as a group on its own.
fn sign_of(group: &FiniteGroup, sub: &Subgroup) -> UnitaryRep {
    linear_characters(&sub.to_group(group).group).remove(1)
}

/// `Z/4` over `{0, 2}` with the sign character and a one-dimensional fiber factor.
pub fn z4_sign_model() -> CanonicalModel {
    let z4 = cyclic(4);
    let h = Subgroup::new(&z4, &[0, 2]).expect("subgroup");
    build_model(&z4, &h, &sign_of(&z4, &h), 1).expect("valid model")
}

/// `Z/2` with trivial isotropy and fiber factor of dimension `f`.
pub fn free_z2_model(f: usize) -> CanonicalModel {
    let z2 = cyclic(2);
    let h = Subgroup::trivial();
    build_model(&z2, &h, &UnitaryRep::trivial(&h.to_group(&z2).group), f).expect("valid model")
}

/// The trivial bundle for the `Z/4`-sign model over the connected double
/// cover of a triangle by the hexagon. Charts are the vertex stars of 0, 1, 2
/// and the overlap of charts 0 and 2 has the nontrivial class.
pub fn hexagon_double_cover() -> TransitionBundle {
    trivial_bundle(&vertex_star_atlas(hexagon_half_turn()), &z4_sign_model()).expect("section exists")
}

/// Charts on the arcs `{0,1}` and `{2}` of the hexagon; the overlap has two
/// classes, so the atlas is rejected.
pub fn hexagon_two_arc_atlas() -> EquivariantAtlas {
    EquivariantAtlas::new(hexagon_half_turn(), vec![vec![0, 1], vec![2]]).expect("valid centers")
}

/// The hexagon double cover for the free `Z/2` model with the overlap of
/// charts 0 and 1 twisted by the scalar `holonomy`.
pub fn circle_holonomy(holonomy: f64) -> TransitionBundle {
    let atlas = vertex_star_atlas(hexagon_half_turn());
    let factors = BTreeMap::from([((0, 1), CxMatrix::scalar(1, c(holonomy, 0.0)))]);
    kernel_twisted(&atlas, &free_z2_model(1), &factors).expect("section exists")
}

/// Two copies of the boundary of a tetrahedron swapped by `Z/2`.
pub fn sphere_pair() -> GComplex {
    let mut facets = Vec::new();
    for copy in 0..2 {
        for skip in 0..4 {
            facets.push((0..4).filter(|&v| v != skip).map(|v| v + 4 * copy).collect::<Vec<_>>());
        }
    }
    let complex = SimplicialComplex::from_facets(8, &facets).expect("valid");
    GComplex::from_generators(complex, cyclic(2), &[vec![4, 5, 6, 7, 0, 1, 2, 3]]).expect("valid action")
}

/// Fixed invertible chart factors used to gauge the sphere pair.
pub fn sphere_pair_gauge() -> Vec<CxMatrix> {
    (0..4)
        .map(|a| {
            let t = a as f64;
            CxMatrix::from_rows(vec![vec![c(1.0 + t, 0.0), c(0.5, -0.25 * t)], vec![c(0.0, 0.25), c(1.0, 0.1 * t)]])
        })
        .collect()
}

/// The trivial rank-two bundle over the sphere pair.
pub fn sphere_pair_trivial() -> TransitionBundle {
    trivial_bundle(&vertex_star_atlas(sphere_pair()), &free_z2_model(2)).expect("section exists")
}

/// The trivial bundle over the sphere pair after a change of chart
/// coordinates; its transitions form a nonconstant kernel cocycle.
pub fn sphere_pair_kernel_cocycle() -> TransitionBundle {
    gauge_transform(&sphere_pair_trivial(), &sphere_pair_gauge()).expect("factors are invertible")
}

/// [`sphere_pair_kernel_cocycle`] with every value on the overlap of charts
/// 0 and 1 doubled, which breaks the cocycle on the triples through that overlap.
pub fn sphere_pair_broken_cocycle() -> TransitionBundle {
    let b = sphere_pair_kernel_cocycle();
    let values = b.transitions()[&(0, 1)].clone();
    values.into_iter().fold(b, |b, (cell, aut)| {
        let doubled = EquivariantAutomorphism {
            a: aut.a,
            blocks: aut.blocks.iter().map(|m| m.scale(c(2.0, 0.0))).collect(),
        };
        b.with_transition(0, 1, cell, doubled)
    })
}

/// Barycentric subdivision of the octahedron with the antipodal action; the
/// orbit space is a simplicial projective plane.
pub fn projective_plane_cover() -> TransitionBundle {
    let total = complexes::octahedron_antipodal().subdivide().complex;
    trivial_bundle(&vertex_star_atlas(total), &free_z2_model(1)).expect("section exists")
}

/// Hexagon with the dihedral group of order 6, isotropy the reflection
/// fixing 0 and 3, sign character, trivial over the two fixed points.
pub fn s3_hexagon() -> NonNormalBundle {
    let total = complexes::hexagon_s3();
    let reflection = complexes::hexagon_reflection_fixing_zero(&total);
    let h = Subgroup::generated(total.group(), &[reflection]);
    let model = NonNormalModel::build(total.group(), &h, &sign_of(total.group(), &h), 1).expect("valid model");
    NonNormalBundle::trivial(&total, model, &[vec![0], vec![3]]).expect("valid bundle")
}

/// The 8-cycle with the dihedral group of order 8 (`r: i ↦ i+2`, `s: i ↦ -i`),
/// isotropy `⟨s⟩` fixing 0 and 4, whose normalizer quotient swaps them.
pub fn octagon_d4() -> NonNormalBundle {
    let facets: Vec<Vec<usize>> = (0..8).map(|i| vec![i, (i + 1) % 8]).collect();
    let complex = SimplicialComplex::from_facets(8, &facets).expect("valid");
    let r: Vec<usize> = (0..8).map(|i| (i + 2) % 8).collect();
    let s: Vec<usize> = (0..8).map(|i| (8 - i) % 8).collect();
    let total = GComplex::from_generators(complex, dihedral(4), &[r, s]).expect("valid action");
    let h = Subgroup::generated(total.group(), &[4]);
    let model = NonNormalModel::build(total.group(), &h, &sign_of(total.group(), &h), 1).expect("valid model");
    NonNormalBundle::trivial(&total, model, &[vec![0]]).expect("valid bundle")
}

/// The octahedron with the Klein four-group and isotropy the half turn about
/// the polar axis; the fixed set is the two poles, swapped by the quotient.
pub fn klein_poles() -> NonNormalBundle {
    let total = complexes::octahedron_klein();
    let polar = total
        .group()
        .elements()
        .find(|&g| total.vertex_perm(g) == [0, 3, 4, 1, 2, 5])
        .expect("polar half turn");
    let h = Subgroup::generated(total.group(), &[polar]);
    let model = NonNormalModel::build(total.group(), &h, &sign_of(total.group(), &h), 1).expect("valid model");
    NonNormalBundle::trivial(&total, model, &[vec![0]]).expect("valid bundle")
}

/// `Z/3` acting trivially on a point, once with the trivial character and
/// once with a nontrivial one.
pub fn two_point_characters() -> Vec<TransitionBundle> {
    let z3 = cyclic(3);
    let whole = Subgroup::whole(&z3);
    let characters = linear_characters(&whole.to_group(&z3).group);
    [0, 1]
        .iter()
        .map(|&k| {
            let model = build_model(&z3, &whole, &characters[k], 1).expect("valid model");
            let point = GComplex::trivial(SimplicialComplex::from_facets(1, &[vec![0]]).expect("valid"), model.quotient().group.clone());
            trivial_bundle(&vertex_star_atlas(point), &model).expect("section exists")
        })
        .collect()
}
