//! Shipped groups and problem descriptions.
//!
//! Every fixture emits a [`ProblemSpec`] and states what running it should
//! give: a pass, or a failure in a named task with a named witness.

mod suites;

use serde::Serialize;

use crate::bundles::{fixtures as bundles, trivial_bundle, TransitionBundle};
use crate::complex::{fixtures as complexes, GComplex};
use crate::groups::{alternating4, cyclic, dicyclic, dihedral, direct_product, klein_four, FiniteGroup, Subgroup};
use crate::reps::{linear_characters, UnitaryRep};
use crate::runner::spec::{
    matrix_to_json, ActionBlock, BundleBase, BundleBlock, ComplexBlock, GroupBlock, ModelBlock, ProblemSpec, RepBlock,
    TransitionValue,
};
use crate::runner::RunError;

pub use suites::{
    check_model, intertwiner_suite, largest_transversal, model_suite, IntertwinerCheck, ModelCheck,
};

/// Groups with shipped irreducible representations: all cyclic groups up to
/// order 16, the abelian groups of order at most 16, dihedral groups up to
/// order 16, the dicyclic groups of order 8, 12, 16 (order 8 is `Q8`), `A4`,
/// and `Z/2 × D4`, `Z/2 × Q8`.
pub fn catalog_groups() -> Vec<FiniteGroup> {
    let z = cyclic;
    let mut out: Vec<FiniteGroup> = (1..=16).map(z).collect();
    out.push(klein_four());
    out.push(direct_product(&z(2), &z(4)));
    out.push(direct_product(&klein_four(), &z(2)));
    out.push(direct_product(&z(3), &z(3)));
    out.push(direct_product(&z(2), &z(6)));
    out.push(direct_product(&z(2), &z(8)));
    out.push(direct_product(&z(4), &z(4)));
    out.push(direct_product(&klein_four(), &z(4)));
    out.push(direct_product(&klein_four(), &klein_four()));
    out.extend((3..=8).map(dihedral));
    out.extend((2..=4).map(dicyclic));
    out.push(alternating4());
    out.push(direct_product(&z(2), &dihedral(4)));
    out.push(direct_product(&z(2), &dicyclic(2)));
    out
}

/// Shipped complexes with group actions, by fixture name.
pub fn catalog_complexes() -> Vec<(&'static str, GComplex)> {
    vec![
        ("point", complexes::point()),
        ("boundary_delta3", complexes::boundary_simplex(3)),
        ("boundary_delta5", complexes::boundary_simplex(5)),
        ("octahedron_rotation", complexes::octahedron_rotation()),
        ("octahedron_reflection", complexes::octahedron_reflection()),
        ("octahedron_antipodal", complexes::octahedron_antipodal()),
        ("octahedron_klein", complexes::octahedron_klein()),
        ("torus7", complexes::torus7()),
        ("hexagon_s3", complexes::hexagon_s3()),
        ("triangle_rotation", complexes::triangle_rotation()),
        ("tetra_rotation", complexes::tetra_rotation()),
        ("cp2_9", complexes::cp2_9()),
        ("s2xs2_swap", complexes::s2xs2_swap()),
    ]
}

/// Shipped bundles that should validate, including every component of the
/// non-normal fixtures.
pub fn catalog_bundles() -> Vec<(String, TransitionBundle)> {
    let mut out = vec![
        ("hexagon_double_cover".to_string(), bundles::hexagon_double_cover()),
        ("sphere_pair_trivial".to_string(), bundles::sphere_pair_trivial()),
        ("sphere_pair_kernel_cocycle".to_string(), bundles::sphere_pair_kernel_cocycle()),
        ("projective_plane_cover".to_string(), bundles::projective_plane_cover()),
        ("circle_holonomy".to_string(), bundles::circle_holonomy(-1.0)),
    ];
    for (k, b) in bundles::two_point_characters().into_iter().enumerate() {
        out.push((format!("two_point_character_{k}"), b));
    }
    let split = [
        ("s3_hexagon_split", bundles::s3_hexagon()),
        ("octagon_d4_split", bundles::octagon_d4()),
        ("klein_poles", bundles::klein_poles()),
    ];
    for (name, b) in split {
        for (c, comp) in b.components().iter().enumerate() {
            out.push((format!("{name}/{c}"), comp.clone()));
        }
    }
    out
}

/// What running a fixture is expected to produce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Expectation {
    Pass,
    /// The named task fails with a witness of the given kind.
    Fail { task: String, witness: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub expect: Expectation,
}

const COMPLEX_TASKS: &[&str] = &["validate", "stratify", "apc", "signature", "g_signature", "transfer", "projectivity", "subdivision"];
const REVERSING_TASKS: &[&str] = &["validate", "stratify", "apc", "signature", "transfer", "projectivity", "subdivision"];
const BUNDLE_TASKS: &[&str] = &["validate", "model", "atlas", "cocycle", "round_trip", "split", "classification"];
const MODEL_TASKS: &[&str] = &["validate", "model"];

type Builder = fn() -> ProblemSpec;

const FIXTURES: &[(&str, &str, Builder)] = &[
    ("point", "a single point", || complex_spec("point", &complexes::point(), COMPLEX_TASKS)),
    ("boundary_delta3", "boundary of the tetrahedron, trivial action", || {
        complex_spec("boundary_delta3", &complexes::boundary_simplex(3), COMPLEX_TASKS)
    }),
    ("boundary_delta5", "boundary of the 5-simplex, a 4-sphere", || {
        complex_spec("boundary_delta5", &complexes::boundary_simplex(5), COMPLEX_TASKS)
    }),
    ("octahedron_rotation", "octahedron with a quarter turn about the polar axis", || {
        complex_spec("octahedron_rotation", &complexes::octahedron_rotation(), COMPLEX_TASKS)
    }),
    ("octahedron_reflection", "octahedron with the reflection swapping the poles", || {
        complex_spec("octahedron_reflection", &complexes::octahedron_reflection(), REVERSING_TASKS)
    }),
    ("octahedron_antipodal", "octahedron with the free antipodal map", || {
        complex_spec("octahedron_antipodal", &complexes::octahedron_antipodal(), REVERSING_TASKS)
    }),
    ("octahedron_klein", "octahedron with the three half-turns", || {
        complex_spec("octahedron_klein", &complexes::octahedron_klein(), COMPLEX_TASKS)
    }),
    ("torus7", "seven-vertex torus with the free shift", || complex_spec("torus7", &complexes::torus7(), COMPLEX_TASKS)),
    ("hexagon_s3", "hexagon with the dihedral group of order 6", || {
        complex_spec("hexagon_s3", &complexes::hexagon_s3(), REVERSING_TASKS)
    }),
    ("triangle_rotation", "triangle boundary with the free rotation", || {
        complex_spec("triangle_rotation", &complexes::triangle_rotation(), COMPLEX_TASKS)
    }),
    ("tetra_rotation", "tetrahedron boundary with a rotation fixing a face setwise", || {
        complex_spec("tetra_rotation", &complexes::tetra_rotation(), COMPLEX_TASKS)
    }),
    ("cp2_9", "nine-vertex complex projective plane", || complex_spec("cp2_9", &complexes::cp2_9(), COMPLEX_TASKS)),
    ("s2xs2_swap", "product of two 2-spheres with the factor swap", || {
        complex_spec("s2xs2_swap", &complexes::s2xs2_swap(), COMPLEX_TASKS)
    }),
    ("q8_center_model", "quaternion group over its center with the sign character", q8_center_model),
    ("s3_a3_character", "rotations in S3 with a nontrivial character, not liftable", s3_a3_character),
    ("hexagon_double_cover", "trivial bundle over a connected double cover of the triangle", || {
        transition_spec("hexagon_double_cover", &bundles::hexagon_double_cover(), BUNDLE_TASKS)
    }),
    ("sphere_pair_kernel_cocycle", "trivial bundle in changed chart coordinates", || {
        transition_spec("sphere_pair_kernel_cocycle", &bundles::sphere_pair_kernel_cocycle(), BUNDLE_TASKS)
    }),
    ("projective_plane_cover", "trivial bundle over the projective plane", || {
        transition_spec("projective_plane_cover", &bundles::projective_plane_cover(), BUNDLE_TASKS)
    }),
    ("s3_hexagon_split", "reflection isotropy in S3 on the hexagon: three conjugate fixed sets", s3_hexagon_split),
    ("octagon_d4_split", "reflection isotropy in D4 on the octagon: two conjugate fixed sets", octagon_d4_split),
    ("klein_poles", "half-turn isotropy on the octahedron poles", klein_poles),
    ("broken_cocycle", "kernel cocycle with one overlap doubled", || {
        transition_spec("broken_cocycle", &bundles::sphere_pair_broken_cocycle(), &["validate", "atlas", "cocycle"])
    }),
    ("two_arc_atlas", "hexagon charts meeting through two classes", || {
        let b = trivial_bundle(&bundles::hexagon_two_arc_atlas(), &bundles::z4_sign_model()).expect("section exists");
        transition_spec("two_arc_atlas", &b, &["validate", "atlas", "cocycle"])
    }),
];

fn expectation(name: &str) -> Expectation {
    let fail = |task: &str, witness: &str| Expectation::Fail {
        task: task.to_string(),
        witness: witness.to_string(),
    };
    match name {
        "broken_cocycle" => fail("cocycle", "CocycleFails"),
        "two_arc_atlas" => fail("atlas", "AmbiguousOverlap"),
        _ => Expectation::Pass,
    }
}

/// All shipped fixtures in catalog order.
pub fn fixtures() -> Vec<Fixture> {
    FIXTURES
        .iter()
        .map(|&(name, summary, _)| Fixture {
            name,
            summary,
            expect: expectation(name),
        })
        .collect()
}

/// The problem description of a named fixture.
pub fn emit(name: &str) -> Result<ProblemSpec, RunError> {
    FIXTURES
        .iter()
        .find(|f| f.0 == name)
        .map(|f| (f.2)())
        .ok_or_else(|| RunError::UnknownFixture { name: name.to_string() })
}

fn tasks(list: &[&str]) -> Vec<String> {
    list.iter().map(|t| t.to_string()).collect()
}

fn group_block(group: &FiniteGroup) -> GroupBlock {
    GroupBlock {
        name: Some(group.name().to_string()),
        table: Some(group.table().to_vec()),
        degree: None,
        generators: None,
    }
}

fn complex_block(c: &GComplex) -> ComplexBlock {
    let trivial = c.group().order() == 1;
    ComplexBlock {
        vertices: c.complex().vertex_count(),
        facets: c.complex().facets().to_vec(),
        orientation: c.orientation().map(<[i64]>::to_vec),
        action: (!trivial).then(|| ActionBlock {
            generators: None,
            elements: Some(c.vertex_perms().to_vec()),
        }),
    }
}

fn complex_spec(name: &str, c: &GComplex, list: &[&str]) -> ProblemSpec {
    ProblemSpec {
        name: name.to_string(),
        group: group_block(c.group()),
        complex: Some(complex_block(c)),
        reps: Default::default(),
        model: None,
        bundle: None,
        tasks: tasks(list),
    }
}

fn rep_block(sub: &Subgroup, rho: &UnitaryRep) -> RepBlock {
    RepBlock {
        subgroup: Some(sub.elements().to_vec()),
        matrices: Some(rho.matrices().iter().map(matrix_to_json).collect()),
        irrep: None,
    }
}

fn model_spec(name: &str, group: &FiniteGroup, sub: &Subgroup, rho: &UnitaryRep, f_dim: usize, list: &[&str]) -> ProblemSpec {
    ProblemSpec {
        name: name.to_string(),
        group: group_block(group),
        complex: None,
        reps: [("rho".to_string(), rep_block(sub, rho))].into_iter().collect(),
        model: Some(ModelBlock {
            subgroup: sub.elements().to_vec(),
            rep: "rho".to_string(),
            f_dim,
            transversal: None,
        }),
        bundle: None,
        tasks: tasks(list),
    }
}

fn q8_center_model() -> ProblemSpec {
    let q8 = dicyclic(2).with_name("Q8");
    let center = q8.center();
    let sign = linear_characters(&center.to_group(&q8).group).remove(1).with_name("rho");
    model_spec("q8_center_model", &q8, &center, &sign, 2, MODEL_TASKS)
}

fn s3_a3_character() -> ProblemSpec {
    let s3 = dihedral(3).with_name("S3");
    let a3 = Subgroup::generated(&s3, &[1]);
    let chi = linear_characters(&a3.to_group(&s3).group).remove(1).with_name("rho");
    model_spec("s3_a3_character", &s3, &a3, &chi, 2, MODEL_TASKS)
}

/// A bundle over the orbit complex of `G₀ = G/H` written as a problem on
/// the ambient group `G`, which acts on the total complex through `G → G₀`.
/// Every transition value is listed explicitly.
fn transition_spec(name: &str, b: &TransitionBundle, list: &[&str]) -> ProblemSpec {
    let model = b.model();
    let group = model.group();
    let total = b.atlas().total();
    let projection = &model.quotient().projection;
    let perms: Vec<Vec<usize>> = group.elements().map(|g| total.vertex_perm(projection[g]).to_vec()).collect();
    let lifted = GComplex::new(total.complex().clone(), group.clone(), perms).expect("action through the quotient");
    let lifted = match total.orientation() {
        Some(signs) => lifted.with_orientation(signs.to_vec()).expect("same complex"),
        None => lifted,
    };
    let atlas = b.atlas();
    let values = b
        .transitions()
        .iter()
        .flat_map(|(&charts, cells)| {
            cells.iter().map(move |(&cell, aut)| TransitionValue {
                charts,
                cell: atlas.vertices(atlas.cell_representative(cell)).to_vec(),
                a: model.section().rep(aut.a),
                blocks: aut.blocks.iter().map(matrix_to_json).collect(),
            })
        })
        .collect();
    let mut spec = model_spec(name, group, model.subgroup(), model.rho(), model.f_dim(), list);
    spec.complex = Some(complex_block(&lifted));
    spec.bundle = Some(BundleBlock {
        charts: atlas.charts().to_vec(),
        base: BundleBase::None,
        gauge: None,
        values,
    });
    spec
}

/// A bundle that is trivial over the chosen charts of `M^H`.
fn fixed_set_spec(name: &str, total: &GComplex, sub: &Subgroup, charts: Vec<Vec<usize>>) -> ProblemSpec {
    let group = total.group();
    let sign = linear_characters(&sub.to_group(group).group).remove(1).with_name("rho");
    let mut spec = model_spec(name, group, sub, &sign, 1, BUNDLE_TASKS);
    spec.complex = Some(complex_block(total));
    spec.bundle = Some(BundleBlock {
        charts,
        base: BundleBase::Trivial,
        gauge: None,
        values: Vec::new(),
    });
    spec
}

fn s3_hexagon_split() -> ProblemSpec {
    let total = complexes::hexagon_s3();
    let h = Subgroup::generated(total.group(), &[complexes::hexagon_reflection_fixing_zero(&total)]);
    fixed_set_spec("s3_hexagon_split", &total, &h, vec![vec![0], vec![3]])
}

fn octagon_d4_split() -> ProblemSpec {
    let b = bundles::octagon_d4();
    let h = b.split().subgroup.clone();
    fixed_set_spec("octagon_d4_split", b.total(), &h, vec![vec![0]])
}

fn klein_poles() -> ProblemSpec {
    let b = bundles::klein_poles();
    let h = b.split().subgroup.clone();
    fixed_set_spec("klein_poles", b.total(), &h, vec![vec![0]])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_has_distinct_names() {
        let names: Vec<&str> = fixtures().iter().map(|f| f.name).collect();
        let mut sorted = names.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
        assert!(names.len() >= 12);
    }

    #[test]
    fn unknown_fixture_is_reported() {
        assert!(matches!(emit("nope"), Err(RunError::UnknownFixture { .. })));
    }

    #[test]
    fn catalog_groups_stay_within_order_sixteen() {
        let groups = catalog_groups();
        assert!(groups.iter().all(|g| g.order() <= 16));
        assert!(groups.iter().any(|g| g.order() == 16 && !g.is_abelian()));
    }
}
