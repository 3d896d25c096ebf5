use std::collections::{BTreeSet, HashMap};

use super::ComplexError;
use crate::exactmath::{RatMatrix, SparseIntMatrix};
use crate::exactmath::rat;

/// A finite abstract simplicial complex on vertices `0..vertex_count`.
///
/// Simplices are stored per dimension as sorted vertex lists in lexicographic
/// order; a simplex is oriented by its sorted vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Close a list of simplices under taking faces. Every vertex below
    /// `vertex_count` is a 0-simplex even if no listed simplex uses it.
    pub fn from_facets(vertex_count: usize, facets: &[Vec<usize>]) -> Result<Self, ComplexError> {
        let mut sorted_facets = Vec::with_capacity(facets.len());
        for f in facets {
            let mut s = f.clone();
            s.sort_unstable();
            if s.is_empty() {
                return Err(ComplexError::DegenerateSimplex { simplex: f.clone() });
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(ComplexError::DegenerateSimplex { simplex: f.clone() });
            }
            if let Some(&v) = s.iter().find(|&&v| v >= vertex_count) {
                return Err(ComplexError::BadVertex { vertex: v, count: vertex_count });
            }
            sorted_facets.push(s);
        }
        let top = sorted_facets.iter().map(|f| f.len() - 1).max().unwrap_or(0);
        let mut sets: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); top + 1];
        for v in 0..vertex_count {
            sets[0].insert(vec![v]);
        }
        for f in &sorted_facets {
            let k = f.len();
            for mask in 1u64..(1u64 << k) {
                let face: Vec<usize> = (0..k).filter(|&i| mask & (1 << i) != 0).map(|i| f[i]).collect();
                sets[face.len() - 1].insert(face);
            }
        }
        let simplices: Vec<Vec<Vec<usize>>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        Ok(Self::from_simplices(vertex_count, simplices))
    }

    fn from_simplices(vertex_count: usize, simplices: Vec<Vec<Vec<usize>>>) -> Self {
        let index = simplices
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let mut complex = SimplicialComplex {
            vertex_count,
            simplices,
            index,
            facets: Vec::new(),
        };
        complex.facets = complex.compute_facets();
        complex
    }

    fn compute_facets(&self) -> Vec<Vec<usize>> {
        let mut covered: Vec<Vec<bool>> = self.simplices.iter().map(|l| vec![false; l.len()]).collect();
        for k in 1..self.simplices.len() {
            for s in &self.simplices[k] {
                for i in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(i);
                    covered[k - 1][self.index[k - 1][&face]] = true;
                }
            }
        }
        let mut out = Vec::new();
        for (k, level) in self.simplices.iter().enumerate() {
            for (i, s) in level.iter().enumerate() {
                if !covered[k][i] {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Top dimension.
    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.dim()).map(|k| self.count(k)).collect()
    }

    pub fn total_simplices(&self) -> usize {
        self.f_vector().iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Maximal simplices.
    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn is_pure(&self) -> bool {
        self.facets.iter().all(|f| f.len() == self.dim() + 1)
    }

    /// Index of a sorted simplex.
    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        let k = simplex.len().checked_sub(1)?;
        self.index.get(k)?.get(simplex).copied()
    }

    /// Signed faces of simplex `idx` in dimension `k`: `∂σ = Σ (-1)^i σ_î`.
    pub fn boundary_of(&self, k: usize, idx: usize) -> Vec<(usize, i64)> {
        if k == 0 {
            return Vec::new();
        }
        let s = &self.simplices[k][idx];
        (0..s.len())
            .map(|i| {
                let mut face = s.clone();
                face.remove(i);
                let sign = if i % 2 == 0 { 1 } else { -1 };
                (self.index[k - 1][&face], sign)
            })
            .collect()
    }

    /// `∂_k : C_k → C_{k-1}` as an exact dense matrix.
    pub fn boundary_matrix(&self, k: usize) -> RatMatrix {
        let rows = if k == 0 { 0 } else { self.count(k - 1) };
        let mut m = RatMatrix::zeros(rows, self.count(k));
        for j in 0..self.count(k) {
            for (i, s) in self.boundary_of(k, j) {
                m.set(i, j, rat(s));
            }
        }
        m
    }

    /// Rank of `∂_k` over the rationals via sparse elimination.
    pub fn boundary_rank(&self, k: usize) -> usize {
        if k == 0 || k > self.dim() {
            return 0;
        }
        let mut m = SparseIntMatrix::new(self.count(k - 1));
        for j in 0..self.count(k) {
            m.push_row(self.boundary_of(k, j));
        }
        m.rank()
    }

    /// Rational Betti numbers `b_0..b_n`.
    pub fn betti_numbers(&self) -> Vec<usize> {
        let n = self.dim();
        let ranks: Vec<usize> = (0..=n + 1).map(|k| self.boundary_rank(k)).collect();
        (0..=n).map(|k| self.count(k) - ranks[k] - ranks[k + 1]).collect()
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for e in self.simplices(1) {
            let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for v in 0..self.vertex_count {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    /// The full subcomplex spanned by a vertex set, with vertices renumbered
    /// in increasing order; also returns the new-to-old vertex table.
    pub fn induced_subcomplex(&self, vertices: &[usize]) -> (SimplicialComplex, Vec<usize>) {
        let mut keep: Vec<usize> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut renumber = vec![usize::MAX; self.vertex_count];
        for (i, &v) in keep.iter().enumerate() {
            renumber[v] = i;
        }
        let simplices: Vec<Vec<Vec<usize>>> = self
            .simplices
            .iter()
            .map(|level| {
                level
                    .iter()
                    .filter(|s| s.iter().all(|&v| renumber[v] != usize::MAX))
                    .map(|s| s.iter().map(|&v| renumber[v]).collect())
                    .collect::<Vec<Vec<usize>>>()
            })
            .take_while(|level| !level.is_empty())
            .collect();
        let simplices = if simplices.is_empty() { vec![Vec::new()] } else { simplices };
        (Self::from_simplices(keep.len(), simplices), keep)
    }

    /// Barycentric subdivision. Vertex `i` of the result is the barycenter of
    /// the `i`-th simplex of `self` in (dimension, index) order; the returned
    /// carrier table records that simplex.
    pub fn barycentric_subdivision(&self) -> (SimplicialComplex, Vec<(usize, usize)>) {
        let mut offsets = Vec::with_capacity(self.dim() + 1);
        let mut carriers = Vec::new();
        for k in 0..=self.dim() {
            offsets.push(carriers.len());
            carriers.extend((0..self.count(k)).map(|i| (k, i)));
        }
        let mut flags: BTreeSet<Vec<usize>> = BTreeSet::new();
        for facet in &self.facets {
            for chain in increasing_chains(facet) {
                let verts: Vec<usize> = chain
                    .iter()
                    .map(|face| offsets[face.len() - 1] + self.index[face.len() - 1][face])
                    .collect();
                flags.insert(verts);
            }
        }
        let flags: Vec<Vec<usize>> = flags.into_iter().collect();
        let sd = Self::from_facets(carriers.len(), &flags).expect("flags are valid simplices");
        (sd, carriers)
    }

    /// Top simplices containing each codimension-one simplex, with the sign of
    /// that face in their boundary.
    pub fn cofaces(&self) -> Vec<Vec<(usize, i64)>> {
        let n = self.dim();
        let mut out = vec![Vec::new(); if n == 0 { 0 } else { self.count(n - 1) }];
        if n == 0 {
            return out;
        }
        for j in 0..self.count(n) {
            for (f, s) in self.boundary_of(n, j) {
                out[f].push((j, s));
            }
        }
        out
    }

    /// Signs on top simplices making their sum a cycle, found by propagating
    /// across codimension-one faces; each connected piece starts positive.
    pub fn coherent_orientation(&self) -> Result<Vec<i64>, ComplexError> {
        let n = self.dim();
        if !self.is_pure() {
            let facet = self.facets.iter().find(|f| f.len() != n + 1).expect("impure");
            return Err(ComplexError::NotPure { simplex: facet.clone() });
        }
        if n == 0 {
            return Ok(vec![1; self.count(0)]);
        }
        let cofaces = self.cofaces();
        if let Some(f) = cofaces.iter().position(|c| c.len() != 2) {
            return Err(ComplexError::NotPseudomanifold {
                face: self.simplices[n - 1][f].clone(),
                cofaces: cofaces[f].len(),
            });
        }
        let mut signs = vec![0i64; self.count(n)];
        for start in 0..self.count(n) {
            if signs[start] != 0 {
                continue;
            }
            signs[start] = 1;
            let mut stack = vec![start];
            while let Some(j) = stack.pop() {
                for (f, c) in self.boundary_of(n, j) {
                    let &(other, c_other) = cofaces[f].iter().find(|&&(o, _)| o != j).expect("two cofaces");
                    // the face must cancel: signs[j]·c + signs[other]·c_other = 0
                    let wanted = -signs[j] * c * c_other;
                    if signs[other] == 0 {
                        signs[other] = wanted;
                        stack.push(other);
                    } else if signs[other] != wanted {
                        return Err(ComplexError::NotOrientable {
                            face: self.simplices[n - 1][f].clone(),
                        });
                    }
                }
            }
        }
        Ok(signs)
    }

    /// Vertex `(dim, index)` lookup table offsets for the subdivision numbering.
    pub fn simplex_offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dim() + 1);
        let mut total = 0;
        for k in 0..=self.dim() {
            out.push(total);
            total += self.count(k);
        }
        out
    }
}

/// Every maximal flag of faces of `facet`, as the list of sorted prefixes of
/// a vertex ordering, paired with the ordering's permutation sign.
pub(crate) fn increasing_chains(facet: &[usize]) -> Vec<Vec<Vec<usize>>> {
    permutations_with_sign(facet.len())
        .into_iter()
        .map(|(perm, _)| {
            let mut chain = Vec::with_capacity(facet.len());
            let mut current: Vec<usize> = Vec::with_capacity(facet.len());
            for &p in &perm {
                current.push(facet[p]);
                let mut sorted = current.clone();
                sorted.sort_unstable();
                chain.push(sorted);
            }
            chain
        })
        .collect()
}

/// All permutations of `0..n` in lexicographic order with their signs.
pub(crate) fn permutations_with_sign(n: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        out.push((perm.clone(), permutation_sign(&perm)));
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else { break };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).expect("successor exists");
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    out
}

/// Sign of the permutation sorting `seq` (entries distinct).
pub(crate) fn permutation_sign<T: Ord>(seq: &[T]) -> i64 {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra_boundary() -> SimplicialComplex {
        SimplicialComplex::from_facets(4, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap()
    }

    #[test]
    fn face_closure_and_euler() {
        let c = tetra_boundary();
        assert_eq!(c.f_vector(), vec![4, 6, 4]);
        assert_eq!(c.euler_characteristic(), 2);
        assert_eq!(c.betti_numbers(), vec![1, 0, 1]);
        assert!(c.is_pure());
    }

    #[test]
    fn boundary_squares_to_zero() {
        let c = SimplicialComplex::from_facets(4, &[vec![0, 1, 2, 3]]).unwrap();
        for k in 2..=3 {
            assert!((&c.boundary_matrix(k - 1) * &c.boundary_matrix(k)).is_zero());
        }
        assert_eq!(c.betti_numbers(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn subdivision_preserves_homology() {
        let c = tetra_boundary();
        let (sd, carriers) = c.barycentric_subdivision();
        assert_eq!(carriers.len(), 14);
        assert_eq!(sd.f_vector(), vec![14, 36, 24]);
        assert_eq!(sd.betti_numbers(), vec![1, 0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            SimplicialComplex::from_facets(2, &[vec![0, 2]]),
            Err(ComplexError::BadVertex { vertex: 2, count: 2 })
        ));
        assert!(matches!(
            SimplicialComplex::from_facets(2, &[vec![1, 1]]),
            Err(ComplexError::DegenerateSimplex { .. })
        ));
    }

    #[test]
    fn permutation_signs() {
        let perms = permutations_with_sign(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms.iter().map(|p| p.1).sum::<i64>(), 0);
        assert_eq!(permutation_sign(&[2, 0, 1]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
    }

    #[test]
    fn orientation_of_sphere_and_failure_modes() {
        let c = tetra_boundary();
        let signs = c.coherent_orientation().unwrap();
        let mut acc = vec![0i64; c.count(1)];
        for (j, s) in signs.iter().enumerate() {
            for (f, x) in c.boundary_of(2, j) {
                acc[f] += s * x;
            }
        }
        assert!(acc.iter().all(|&x| x == 0));
        let disk = SimplicialComplex::from_facets(3, &[vec![0, 1, 2]]).unwrap();
        assert!(matches!(disk.coherent_orientation(), Err(ComplexError::NotPseudomanifold { .. })));
    }

    #[test]
    fn components_of_disjoint_union() {
        let c = SimplicialComplex::from_facets(5, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(c.components(), vec![vec![0, 1], vec![2, 3], vec![4]]);
        assert_eq!(c.betti_numbers()[0], 3);
    }
}
