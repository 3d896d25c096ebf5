use std::collections::VecDeque;

use serde::Serialize;

use super::simplicial::{permutation_sign, SimplicialComplex};
use super::ComplexError;
use crate::groups::{FiniteGroup, Subgroup};

/// One way in which a group action on a complex can be broken.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionViolation {
    NotPermutation { element: usize },
    NotHomomorphism { a: usize, b: usize },
    SimplexNotMapped { element: usize, simplex: Vec<usize>, image: Vec<usize> },
    BoundaryNotEquivariant { element: usize, simplex: Vec<usize> },
}

impl std::fmt::Display for ActionViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ActionViolation::NotPermutation { element } => {
                write!(f, "element {element} does not act by a vertex permutation")
            }
            ActionViolation::NotHomomorphism { a, b } => {
                write!(f, "action of {a}*{b} differs from the composite action")
            }
            ActionViolation::SimplexNotMapped { element, simplex, image } => {
                write!(f, "element {element} maps simplex {simplex:?} to non-simplex {image:?}")
            }
            ActionViolation::BoundaryNotEquivariant { element, simplex } => {
                write!(f, "boundary is not equivariant for element {element} on {simplex:?}")
            }
        }
    }
}

/// Result of [`GComplex::validate_action`].
#[derive(Debug, Clone, Default, Serialize)]
pub struct ActionReport {
    pub elements_checked: usize,
    pub simplices_checked: usize,
    /// `None` when the complex carries no orientation.
    pub orientation_preserving: Option<bool>,
    pub violations: Vec<ActionViolation>,
}

impl ActionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A simplicial complex with a finite group acting by vertex permutations,
/// optionally carrying an orientation (a sign per top simplex).
#[derive(Debug, Clone)]
pub struct GComplex {
    complex: SimplicialComplex,
    group: FiniteGroup,
    perms: Vec<Vec<usize>>,
    orientation: Option<Vec<i64>>,
}

/// A barycentric subdivision together with the simplex each new vertex is the
/// barycenter of.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub complex: GComplex,
    pub carriers: Vec<(usize, usize)>,
}

impl Subdivision {
    /// Simplicial approximation of the identity back to the parent complex:
    /// the barycenter of a simplex goes to its largest vertex.
    pub fn approximation(&self, parent: &GComplex) -> Vec<usize> {
        self.carriers
            .iter()
            .map(|&(k, i)| *parent.complex().simplices(k)[i].last().expect("nonempty simplex"))
            .collect()
    }
}

impl GComplex {
    /// Build without checking the action; see [`GComplex::validate_action`].
    pub fn new_unchecked(complex: SimplicialComplex, group: FiniteGroup, perms: Vec<Vec<usize>>) -> Self {
        GComplex {
            complex,
            group,
            perms,
            orientation: None,
        }
    }

    /// Build from one vertex permutation per group element and validate.
    pub fn new(complex: SimplicialComplex, group: FiniteGroup, perms: Vec<Vec<usize>>) -> Result<Self, ComplexError> {
        if perms.len() != group.order() {
            return Err(ComplexError::WrongPermutationCount {
                expected: group.order(),
                found: perms.len(),
            });
        }
        let c = Self::new_unchecked(complex, group, perms);
        c.check()?;
        Ok(c)
    }

    /// The trivial action of `group` on `complex`.
    pub fn trivial(complex: SimplicialComplex, group: FiniteGroup) -> Self {
        let id: Vec<usize> = (0..complex.vertex_count()).collect();
        let perms = vec![id; group.order()];
        Self::new_unchecked(complex, group, perms)
    }

    /// Build from vertex permutations of the group's generators, extended
    /// along the Cayley graph and then validated.
    pub fn from_generators(
        complex: SimplicialComplex,
        group: FiniteGroup,
        generator_perms: &[Vec<usize>],
    ) -> Result<Self, ComplexError> {
        let gens = group.generators().to_vec();
        if generator_perms.len() != gens.len() {
            return Err(ComplexError::WrongPermutationCount {
                expected: gens.len(),
                found: generator_perms.len(),
            });
        }
        let nv = complex.vertex_count();
        for (i, p) in generator_perms.iter().enumerate() {
            if !is_permutation(p, nv) {
                return Err(ComplexError::BadPermutation { index: i, degree: nv });
            }
        }
        let mut perms: Vec<Option<Vec<usize>>> = vec![None; group.order()];
        perms[0] = Some((0..nv).collect());
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let px = perms[x].clone().expect("visited");
            for (&g, pg) in gens.iter().zip(generator_perms) {
                let y = group.mul(x, g);
                let py: Vec<usize> = (0..nv).map(|v| px[pg[v]]).collect();
                match &perms[y] {
                    Some(existing) if *existing != py => {
                        return Err(ComplexError::Action(ActionViolation::NotHomomorphism { a: x, b: g }));
                    }
                    Some(_) => {}
                    None => {
                        perms[y] = Some(py);
                        queue.push_back(y);
                    }
                }
            }
        }
        let perms = perms.into_iter().map(|p| p.expect("generators generate")).collect();
        Self::new(complex, group, perms)
    }

    fn check(&self) -> Result<(), ComplexError> {
        match self.validate_action().violations.into_iter().next() {
            Some(v) => Err(ComplexError::Action(v)),
            None => Ok(()),
        }
    }

    /// Attach an orientation: one sign per top-dimensional simplex.
    pub fn with_orientation(mut self, signs: Vec<i64>) -> Result<Self, ComplexError> {
        let n = self.complex.dim();
        if signs.len() != self.complex.count(n) || signs.iter().any(|s| s.abs() != 1) {
            return Err(ComplexError::BadOrientation {
                expected: self.complex.count(n),
                found: signs.len(),
            });
        }
        self.orientation = Some(signs);
        Ok(self)
    }

    pub fn without_orientation(mut self) -> Self {
        self.orientation = None;
        self
    }

    /// The same complex with every orientation sign flipped.
    pub fn reversed(&self) -> Self {
        let mut c = self.clone();
        if let Some(o) = &mut c.orientation {
            o.iter_mut().for_each(|s| *s = -*s);
        }
        c
    }

    /// `self ⊔ other` with the vertices of `other` shifted past those of
    /// `self`. Both must carry the same group; orientations are concatenated
    /// when both are present and of equal dimension.
    pub fn disjoint_union(&self, other: &GComplex) -> Result<GComplex, ComplexError> {
        if self.group != other.group {
            return Err(ComplexError::WrongPermutationCount {
                expected: self.group.order(),
                found: other.group.order(),
            });
        }
        let shift = self.complex.vertex_count();
        let mut facets: Vec<Vec<usize>> = self.complex.facets().to_vec();
        facets.extend(other.complex.facets().iter().map(|f| f.iter().map(|&v| v + shift).collect()));
        let complex = SimplicialComplex::from_facets(shift + other.complex.vertex_count(), &facets)?;
        let perms = self
            .perms
            .iter()
            .zip(&other.perms)
            .map(|(p, q)| p.iter().copied().chain(q.iter().map(|&v| v + shift)).collect())
            .collect();
        let union = GComplex::new(complex, self.group.clone(), perms)?;
        match (&self.orientation, &other.orientation) {
            (Some(a), Some(b)) if self.complex.dim() == other.complex.dim() => {
                union.with_orientation(a.iter().chain(b).copied().collect())
            }
            _ => Ok(union),
        }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn orientation(&self) -> Option<&[i64]> {
        self.orientation.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    /// Vertex permutation of element `g`.
    pub fn vertex_perm(&self, g: usize) -> &[usize] {
        &self.perms[g]
    }

    pub fn vertex_perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    /// Image of simplex `idx` of dimension `k` under `g`, with the sign of the
    /// induced map on oriented simplices.
    pub fn act_simplex(&self, g: usize, k: usize, idx: usize) -> Option<(usize, i64)> {
        let image: Vec<usize> = self.complex.simplices(k)[idx].iter().map(|&v| self.perms[g][v]).collect();
        let sign = permutation_sign(&image);
        let mut sorted = image;
        sorted.sort_unstable();
        self.complex.index_of(&sorted).map(|i| (i, sign))
    }

    /// Signed permutation action of `g` on `C_k`: entry `j` is `(image, sign)`.
    pub fn chain_action(&self, g: usize, k: usize) -> Vec<(usize, i64)> {
        (0..self.complex.count(k))
            .map(|j| self.act_simplex(g, k, j).expect("validated action"))
            .collect()
    }

    /// Check the homomorphism property, closure of the simplex set and
    /// equivariance of the boundary; when oriented, also record whether the
    /// fundamental chain is preserved.
    pub fn validate_action(&self) -> ActionReport {
        let mut report = ActionReport {
            elements_checked: self.group.order(),
            ..ActionReport::default()
        };
        let nv = self.complex.vertex_count();
        if self.perms.len() != self.group.order() {
            report.violations.push(ActionViolation::NotPermutation { element: self.perms.len() });
            return report;
        }
        for (g, p) in self.perms.iter().enumerate() {
            if !is_permutation(p, nv) {
                report.violations.push(ActionViolation::NotPermutation { element: g });
            }
        }
        if !report.passed() {
            return report;
        }
        if self.perms[0].iter().enumerate().any(|(i, &v)| i != v) {
            report.violations.push(ActionViolation::NotHomomorphism { a: 0, b: 0 });
        }
        'hom: for a in self.group.elements() {
            for b in self.group.elements() {
                let ab = self.group.mul(a, b);
                if (0..nv).any(|v| self.perms[ab][v] != self.perms[a][self.perms[b][v]]) {
                    report.violations.push(ActionViolation::NotHomomorphism { a, b });
                    break 'hom;
                }
            }
        }
        for g in self.group.elements() {
            for k in 0..=self.complex.dim() {
                for (idx, s) in self.complex.simplices(k).iter().enumerate() {
                    report.simplices_checked += 1;
                    let Some((image, sign)) = self.act_simplex(g, k, idx) else {
                        let mut image: Vec<usize> = s.iter().map(|&v| self.perms[g][v]).collect();
                        image.sort_unstable();
                        report.violations.push(ActionViolation::SimplexNotMapped {
                            element: g,
                            simplex: s.clone(),
                            image,
                        });
                        continue;
                    };
                    // g∂σ against ∂(gσ) as signed chains
                    let mut lhs: Vec<(usize, i64)> = Vec::new();
                    let mut ok = true;
                    for (f, c) in self.complex.boundary_of(k, idx) {
                        match self.act_simplex(g, k - 1, f) {
                            Some((fi, fs)) => lhs.push((fi, c * fs)),
                            None => ok = false,
                        }
                    }
                    let mut rhs: Vec<(usize, i64)> =
                        self.complex.boundary_of(k, image).into_iter().map(|(f, c)| (f, c * sign)).collect();
                    lhs.sort_unstable();
                    rhs.sort_unstable();
                    if !ok || lhs != rhs {
                        report.violations.push(ActionViolation::BoundaryNotEquivariant {
                            element: g,
                            simplex: s.clone(),
                        });
                    }
                }
            }
        }
        if report.passed() && self.orientation.is_some() {
            report.orientation_preserving = Some(self.orientation_reversing_element().is_none());
        }
        report
    }

    /// First element that does not fix the fundamental chain, if oriented.
    pub fn orientation_reversing_element(&self) -> Option<usize> {
        let signs = self.orientation.as_ref()?;
        let n = self.complex.dim();
        self.group.elements().find(|&g| {
            (0..self.complex.count(n)).any(|j| match self.act_simplex(g, n, j) {
                Some((i, s)) => signs[i] != s * signs[j],
                None => true,
            })
        })
    }

    /// A group element fixing a simplex setwise but moving one of its vertices.
    pub fn regularity_witness(&self) -> Option<(usize, Vec<usize>)> {
        for g in self.group.elements().skip(1) {
            for k in 1..=self.complex.dim() {
                for (idx, s) in self.complex.simplices(k).iter().enumerate() {
                    if let Some((image, _)) = self.act_simplex(g, k, idx) {
                        if image == idx && s.iter().any(|&v| self.perms[g][v] != v) {
                            return Some((g, s.clone()));
                        }
                    }
                }
            }
        }
        None
    }

    /// Every element fixing a simplex setwise fixes it pointwise.
    pub fn is_regular(&self) -> bool {
        self.regularity_witness().is_none()
    }

    /// Barycentric subdivision with the induced action and orientation.
    pub fn subdivide(&self) -> Subdivision {
        let (sd, carriers) = self.complex.barycentric_subdivision();
        let offsets = self.complex.simplex_offsets();
        let perms = self
            .perms
            .iter()
            .enumerate()
            .map(|(g, _)| {
                carriers
                    .iter()
                    .map(|&(k, i)| {
                        let (image, _) = self.act_simplex(g, k, i).expect("validated action");
                        offsets[k] + image
                    })
                    .collect()
            })
            .collect();
        let orientation = self.orientation.as_ref().map(|signs| {
            let n = self.complex.dim();
            sd.simplices(n)
                .iter()
                .map(|flag| {
                    // flag vertices are barycenters of a chain of faces in increasing dimension
                    let top = carriers[flag[n]];
                    let parent = &self.complex.simplices(n)[top.1];
                    let mut order = Vec::with_capacity(n + 1);
                    let mut previous: Vec<usize> = Vec::new();
                    for &b in flag {
                        let (k, i) = carriers[b];
                        let face = &self.complex.simplices(k)[i];
                        let added = face.iter().find(|v| !previous.contains(v)).expect("chain grows");
                        order.push(parent.iter().position(|v| v == added).expect("face of parent"));
                        previous = face.clone();
                    }
                    signs[top.1] * permutation_sign(&order)
                })
                .collect()
        });
        let complex = GComplex {
            complex: sd,
            group: self.group.clone(),
            perms,
            orientation,
        };
        Subdivision { complex, carriers }
    }

    /// Subdivide until the action is regular; fails if more than
    /// `max_subdivisions` rounds would be needed. Returns the number of rounds.
    pub fn regularize(&self, max_subdivisions: usize) -> Result<(GComplex, usize), ComplexError> {
        let mut current = self.clone();
        let mut rounds = 0;
        while !current.is_regular() {
            if rounds == max_subdivisions {
                return Err(ComplexError::RegularizationLimit { limit: max_subdivisions });
            }
            current = current.subdivide().complex;
            rounds += 1;
        }
        Ok((current, rounds))
    }

    pub fn vertex_stabilizer(&self, v: usize) -> Subgroup {
        let els: Vec<usize> = self.group.elements().filter(|&g| self.perms[g][v] == v).collect();
        Subgroup::new(&self.group, &els).expect("stabilizers are subgroups")
    }

    /// Elements fixing every vertex of the simplex.
    pub fn isotropy(&self, k: usize, idx: usize) -> Subgroup {
        let s = &self.complex.simplices(k)[idx];
        let els: Vec<usize> = self
            .group
            .elements()
            .filter(|&g| s.iter().all(|&v| self.perms[g][v] == v))
            .collect();
        Subgroup::new(&self.group, &els).expect("isotropy groups are subgroups")
    }

    /// Orbits of `k`-simplices as sorted index lists, ordered by least member.
    pub fn orbits(&self, k: usize) -> Vec<Vec<usize>> {
        let count = self.complex.count(k);
        let mut seen = vec![false; count];
        let mut out = Vec::new();
        for j in 0..count {
            if seen[j] {
                continue;
            }
            let mut orbit: Vec<usize> = self
                .group
                .elements()
                .map(|g| self.act_simplex(g, k, j).expect("validated action").0)
                .collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &i in &orbit {
                seen[i] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// Every nonidentity element acts without fixed vertices.
    pub fn is_free(&self) -> bool {
        self.group
            .elements()
            .skip(1)
            .all(|g| (0..self.complex.vertex_count()).all(|v| self.perms[g][v] != v))
    }
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    if p.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in p {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures;
    use crate::groups::cyclic;

    #[test]
    fn octahedron_rotation_is_valid_and_regular() {
        let c = fixtures::octahedron_rotation();
        assert!(c.validate_action().passed());
        assert!(c.is_regular());
        assert!(c.orientation_reversing_element().is_none());
    }

    #[test]
    fn edge_to_non_edge_is_named() {
        let complex = SimplicialComplex::from_facets(4, &[vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        let c = GComplex::new_unchecked(complex, cyclic(2), vec![vec![0, 1, 2, 3], vec![1, 0, 2, 3]]);
        let report = c.validate_action();
        assert!(report.violations.iter().any(|v| matches!(
            v,
            ActionViolation::SimplexNotMapped { simplex, .. } if simplex == &vec![1, 2]
        )));
    }

    #[test]
    fn edge_flip_needs_one_subdivision() {
        let c = fixtures::edge_flip();
        assert_eq!(c.regularity_witness(), Some((1, vec![0, 1])));
        let (r, rounds) = c.regularize(2).unwrap();
        assert_eq!(rounds, 1);
        assert!(r.is_regular());
        assert_eq!(r.complex().f_vector(), vec![3, 2]);
    }

    #[test]
    fn regular_complex_is_unchanged() {
        let c = fixtures::triangle_rotation();
        let (r, rounds) = c.regularize(2).unwrap();
        assert_eq!(rounds, 0);
        assert_eq!(r.complex(), c.complex());
    }

    #[test]
    fn subdivision_transports_orientation() {
        let c = fixtures::octahedron_rotation();
        let sd = c.subdivide().complex;
        assert!(sd.validate_action().passed());
        let n = sd.dim();
        let signs = sd.orientation().unwrap();
        let mut boundary = vec![0i64; sd.complex().count(n - 1)];
        for (j, &s) in signs.iter().enumerate() {
            for (f, c) in sd.complex().boundary_of(n, j) {
                boundary[f] += s * c;
            }
        }
        assert!(boundary.iter().all(|&x| x == 0));
    }

    #[test]
    fn reflection_reverses_orientation() {
        let c = fixtures::octahedron_reflection();
        assert!(c.orientation_reversing_element().is_some());
        let report = c.validate_action();
        assert!(report.passed());
        assert_eq!(report.orientation_preserving, Some(false));
    }
}
