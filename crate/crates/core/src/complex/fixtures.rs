//! Small triangulations with group actions used by tests, the acceptance
//! suite and the CLI catalog.

use super::{GComplex, SimplicialComplex};
use crate::groups::{cyclic, dihedral, klein_four, FiniteGroup};

fn build(complex: SimplicialComplex, group: FiniteGroup, gens: &[Vec<usize>]) -> GComplex {
    GComplex::from_generators(complex, group, gens).expect("fixture action is valid")
}

fn oriented(c: GComplex) -> GComplex {
    let signs = c.complex().coherent_orientation().expect("fixture is an oriented pseudomanifold");
    c.with_orientation(signs).expect("one sign per top simplex")
}

/// A single point.
pub fn point() -> GComplex {
    let complex = SimplicialComplex::from_facets(1, &[vec![0]]).expect("valid");
    oriented(GComplex::trivial(complex, cyclic(1)))
}

/// Boundary of the `n`-simplex: a triangulated `(n-1)`-sphere on `n+1` vertices.
pub fn boundary_simplex_complex(n: usize) -> SimplicialComplex {
    let facets: Vec<Vec<usize>> = (0..=n).map(|skip| (0..=n).filter(|&v| v != skip).collect()).collect();
    SimplicialComplex::from_facets(n + 1, &facets).expect("valid")
}

/// Boundary of the `n`-simplex with the trivial action and coherent orientation.
pub fn boundary_simplex(n: usize) -> GComplex {
    oriented(GComplex::trivial(boundary_simplex_complex(n), cyclic(1)))
}

/// Boundary of the tetrahedron with `Z/3` rotating vertices `0 → 1 → 2` about
/// the axis through vertex 3. The face `{0,1,2}` is fixed setwise only, so
/// this action is not regular.
pub fn tetra_rotation() -> GComplex {
    oriented(build(boundary_simplex_complex(3), cyclic(3), &[vec![1, 2, 0, 3]]))
}

/// Octahedron: poles 0 and 5, equator 1, 2, 3, 4 in cyclic order.
pub fn octahedron() -> SimplicialComplex {
    let equator = [1usize, 2, 3, 4];
    let mut facets = Vec::new();
    for i in 0..4 {
        let (a, b) = (equator[i], equator[(i + 1) % 4]);
        facets.push(vec![0, a, b]);
        facets.push(vec![5, a, b]);
    }
    SimplicialComplex::from_facets(6, &facets).expect("valid")
}

/// Octahedron with `Z/2` rotating half a turn about the polar axis.
pub fn octahedron_rotation() -> GComplex {
    oriented(build(octahedron(), cyclic(2), &[vec![0, 3, 4, 1, 2, 5]]))
}

/// Octahedron with `Z/2` reflecting through the equatorial plane
/// (orientation reversing).
pub fn octahedron_reflection() -> GComplex {
    oriented(build(octahedron(), cyclic(2), &[vec![5, 1, 2, 3, 4, 0]]))
}

/// Octahedron with the free antipodal `Z/2` action; the quotient is `RP²`.
pub fn octahedron_antipodal() -> GComplex {
    build(octahedron(), cyclic(2), &[vec![5, 3, 4, 1, 2, 0]])
}

/// Octahedron with the Klein four-group of half-turns about the three axes.
pub fn octahedron_klein() -> GComplex {
    // generators of klein_four() are the elements (1,0) and (0,1)
    let polar = vec![0, 3, 4, 1, 2, 5];
    let through_1_3 = vec![5, 1, 4, 3, 2, 0];
    oriented(build(octahedron(), klein_four(), &[polar, through_1_3]))
}

/// Seven-vertex torus with the free `Z/7` shift.
pub fn torus7() -> GComplex {
    let mut facets = Vec::new();
    for i in 0..7 {
        facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    let complex = SimplicialComplex::from_facets(7, &facets).expect("valid");
    let shift: Vec<usize> = (0..7).map(|i| (i + 1) % 7).collect();
    oriented(build(complex, cyclic(7), &[shift]))
}

/// Hexagon (a 6-cycle) with the dihedral group of order 6 acting by
/// rotation `i ↦ i+2` and the reflections `i ↦ 2j - i`.
pub fn hexagon_s3() -> GComplex {
    let facets: Vec<Vec<usize>> = (0..6).map(|i| vec![i, (i + 1) % 6]).collect();
    let complex = SimplicialComplex::from_facets(6, &facets).expect("valid");
    let rotation: Vec<usize> = (0..6).map(|i| (i + 2) % 6).collect();
    let reflection: Vec<usize> = (0..6).map(|i| (6 - i) % 6).collect();
    build(complex, dihedral(3), &[rotation, reflection])
}

/// The element of [`hexagon_s3`] acting by `i ↦ -i`, which fixes vertices 0 and 3.
pub fn hexagon_reflection_fixing_zero(c: &GComplex) -> usize {
    let target: Vec<usize> = (0..6).map(|i| (6 - i) % 6).collect();
    c.group()
        .elements()
        .find(|&g| c.vertex_perm(g) == target.as_slice())
        .expect("reflection present")
}

/// A single edge with `Z/2` swapping its endpoints (not regular).
pub fn edge_flip() -> GComplex {
    let complex = SimplicialComplex::from_facets(2, &[vec![0, 1]]).expect("valid");
    build(complex, cyclic(2), &[vec![1, 0]])
}

/// Boundary of a triangle with `Z/3` rotation (free and regular).
pub fn triangle_rotation() -> GComplex {
    oriented(build(boundary_simplex_complex(2), cyclic(3), &[vec![1, 2, 0]]))
}

/// Six-vertex real projective plane (not orientable).
pub fn projective_plane6() -> SimplicialComplex {
    let facets = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 1, 5],
        [1, 2, 4],
        [2, 3, 5],
        [1, 3, 4],
        [2, 4, 5],
        [1, 3, 5],
    ];
    let facets: Vec<Vec<usize>> = facets.iter().map(|f| f.to_vec()).collect();
    SimplicialComplex::from_facets(6, &facets).expect("valid")
}

/// Facets of the nine-vertex triangulation of the complex projective plane.
pub const CP2_FACETS: [[usize; 5]; 36] = [
    [0, 1, 2, 3, 4],
    [0, 1, 2, 3, 5],
    [0, 1, 2, 4, 5],
    [0, 1, 3, 4, 6],
    [0, 1, 3, 5, 7],
    [0, 1, 3, 6, 7],
    [0, 1, 4, 5, 6],
    [0, 1, 5, 6, 8],
    [0, 1, 5, 7, 8],
    [0, 1, 6, 7, 8],
    [0, 2, 3, 4, 8],
    [0, 2, 3, 5, 8],
    [0, 2, 4, 5, 6],
    [0, 2, 4, 6, 7],
    [0, 2, 4, 7, 8],
    [0, 2, 5, 6, 8],
    [0, 2, 6, 7, 8],
    [0, 3, 4, 6, 7],
    [0, 3, 4, 7, 8],
    [0, 3, 5, 7, 8],
    [1, 2, 3, 4, 8],
    [1, 2, 3, 5, 7],
    [1, 2, 3, 6, 7],
    [1, 2, 3, 6, 8],
    [1, 2, 4, 5, 7],
    [1, 2, 4, 7, 8],
    [1, 2, 6, 7, 8],
    [1, 3, 4, 6, 8],
    [1, 4, 5, 6, 8],
    [1, 4, 5, 7, 8],
    [2, 3, 5, 6, 7],
    [2, 3, 5, 6, 8],
    [2, 4, 5, 6, 7],
    [3, 4, 5, 6, 7],
    [3, 4, 5, 6, 8],
    [3, 4, 5, 7, 8],
];

/// Nine-vertex complex projective plane, trivial action, oriented so that
/// its signature is `+1`.
pub fn cp2_9() -> GComplex {
    let facets: Vec<Vec<usize>> = CP2_FACETS.iter().map(|f| f.to_vec()).collect();
    let complex = SimplicialComplex::from_facets(9, &facets).expect("valid");
    let c = oriented(GComplex::trivial(complex, cyclic(1)));
    if CP2_PROPAGATED_ORIENTATION_IS_NEGATIVE {
        c.reversed()
    } else {
        c
    }
}

/// Whether orientation propagation from facet 0 yields signature `-1`.
const CP2_PROPAGATED_ORIENTATION_IS_NEGATIVE: bool = true;

/// `S² × S²` as the staircase triangulation of the product of two
/// tetrahedron boundaries, with `Z/2` swapping the factors.
///
/// Vertex `(a, b)` has label `4a + b`; a simplex is a chain in the product
/// order whose projections are faces of the two factors.
pub fn s2xs2_swap() -> GComplex {
    let triangles: Vec<Vec<usize>> = boundary_simplex_complex(3).simplices(2).to_vec();
    let mut facets = Vec::new();
    for s in &triangles {
        for t in &triangles {
            // monotone lattice paths from (0,0) to (2,2) in the index grid
            for path in lattice_paths(2, 2) {
                facets.push(path.iter().map(|&(i, j)| 4 * s[i] + t[j]).collect::<Vec<usize>>());
            }
        }
    }
    let complex = SimplicialComplex::from_facets(16, &facets).expect("valid");
    let swap: Vec<usize> = (0..16).map(|v| 4 * (v % 4) + v / 4).collect();
    oriented(build(complex, cyclic(2), &[swap]))
}

fn lattice_paths(p: usize, q: usize) -> Vec<Vec<(usize, usize)>> {
    if p == 0 && q == 0 {
        return vec![vec![(0, 0)]];
    }
    let mut out = Vec::new();
    if p > 0 {
        for mut path in lattice_paths(p - 1, q) {
            path.push((p, q));
            out.push(path);
        }
    }
    if q > 0 {
        for mut path in lattice_paths(p, q - 1) {
            path.push((p, q));
            out.push(path);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_shapes() {
        assert_eq!(octahedron().f_vector(), vec![6, 12, 8]);
        assert_eq!(torus7().complex().betti_numbers(), vec![1, 2, 1]);
        assert_eq!(boundary_simplex(5).complex().f_vector(), vec![6, 15, 20, 15, 6]);
        assert_eq!(cp2_9().complex().f_vector(), vec![9, 36, 84, 90, 36]);
        assert_eq!(cp2_9().complex().betti_numbers(), vec![1, 0, 1, 0, 1]);
        let s = s2xs2_swap();
        assert_eq!(s.complex().count(4), 96);
        assert_eq!(s.complex().betti_numbers(), vec![1, 0, 2, 0, 1]);
        assert!(s.is_regular());
        assert!(s.orientation_reversing_element().is_none());
    }

    #[test]
    fn klein_four_fixture_is_valid() {
        let c = octahedron_klein();
        assert!(c.validate_action().passed());
        assert!(c.is_regular());
        assert!(c.orientation_reversing_element().is_none());
    }

    #[test]
    fn tetra_rotation_regularizes() {
        let c = tetra_rotation();
        assert!(!c.is_regular());
        let (r, rounds) = c.regularize(2).unwrap();
        assert!(rounds >= 1);
        assert!(r.is_regular());
    }
}
