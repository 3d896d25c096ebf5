use serde::Serialize;

use super::{ComplexError, GComplex};
use crate::exactmath::SparseIntMatrix;

/// The orbit complex `M/G` of a regular action: one cell per orbit of
/// simplices, glued along orbit boundaries.
///
/// Cells are oriented by their least representative. When the quotient is
/// not a simplicial complex (two cells over the same vertex orbits), it is
/// still a valid Δ-complex and all homological data are computed from it.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientComplex {
    /// Orbits per dimension; each orbit lists simplex indices of `M`.
    pub cells: Vec<Vec<Vec<usize>>>,
    /// Signed boundary of each cell per dimension.
    pub boundary: Vec<Vec<Vec<(usize, i64)>>>,
    /// Projection of simplices: `(cell, sign)` per simplex per dimension.
    pub projection: Vec<Vec<(usize, i64)>>,
    /// Vertex orbits spanned by each cell (sorted, with repetition if any).
    pub cell_vertices: Vec<Vec<Vec<usize>>>,
    pub is_simplicial: bool,
    /// Set when the action is free: every orbit has `|G|` elements.
    pub covering_degree: Option<usize>,
}

impl QuotientComplex {
    pub fn dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(k, l)| if k % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    pub fn boundary_rank(&self, k: usize) -> usize {
        if k == 0 || k >= self.cells.len() {
            return 0;
        }
        let mut m = SparseIntMatrix::new(self.cells[k - 1].len());
        for b in &self.boundary[k] {
            m.push_row(b.clone());
        }
        m.rank()
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        let n = self.dim();
        let ranks: Vec<usize> = (0..=n + 1).map(|k| self.boundary_rank(k)).collect();
        (0..=n).map(|k| self.cells[k].len() - ranks[k] - ranks[k + 1]).collect()
    }

    /// Whether `∂∘∂ = 0` holds on cells.
    pub fn boundary_squares_to_zero(&self) -> bool {
        (2..self.cells.len()).all(|k| {
            self.boundary[k].iter().all(|b| {
                let mut acc = vec![0i64; self.cells[k - 2].len()];
                for &(f, s) in b {
                    for &(e, t) in &self.boundary[k - 1][f] {
                        acc[e] += s * t;
                    }
                }
                acc.iter().all(|&x| x == 0)
            })
        })
    }
}

/// Orbit complex of a regular action together with the projection.
pub fn quotient_complex(c: &GComplex) -> Result<QuotientComplex, ComplexError> {
    if let Some((element, simplex)) = c.regularity_witness() {
        return Err(ComplexError::NotRegular { element, simplex });
    }
    let dims = c.dim() + 1;
    let mut cells = Vec::with_capacity(dims);
    let mut projection = Vec::with_capacity(dims);
    for k in 0..dims {
        let orbits = c.orbits(k);
        let mut proj = vec![(usize::MAX, 0i64); c.complex().count(k)];
        for (o, orbit) in orbits.iter().enumerate() {
            let rep = orbit[0];
            for g in c.group().elements() {
                let (i, s) = c.act_simplex(g, k, rep).expect("validated action");
                // regularity makes the sign independent of the chosen element
                proj[i] = (o, s);
            }
        }
        cells.push(orbits);
        projection.push(proj);
    }
    let mut boundary: Vec<Vec<Vec<(usize, i64)>>> = Vec::with_capacity(dims);
    for k in 0..dims {
        let level = cells[k]
            .iter()
            .map(|orbit: &Vec<usize>| {
                let mut acc: Vec<(usize, i64)> = Vec::new();
                for (f, s) in c.complex().boundary_of(k, orbit[0]) {
                    let (cell, t) = projection[k - 1][f];
                    match acc.iter_mut().find(|(x, _)| *x == cell) {
                        Some(entry) => entry.1 += s * t,
                        None => acc.push((cell, s * t)),
                    }
                }
                acc.retain(|&(_, v)| v != 0);
                acc.sort_unstable();
                acc
            })
            .collect();
        boundary.push(level);
    }
    let cell_vertices: Vec<Vec<Vec<usize>>> = cells
        .iter()
        .enumerate()
        .map(|(k, level)| {
            level
                .iter()
                .map(|orbit| {
                    let mut vs: Vec<usize> =
                        c.complex().simplices(k)[orbit[0]].iter().map(|&v| projection[0][v].0).collect();
                    vs.sort_unstable();
                    vs
                })
                .collect()
        })
        .collect();
    let is_simplicial = cell_vertices.iter().all(|level| {
        let distinct_vertices = level.iter().all(|vs| vs.windows(2).all(|w| w[0] != w[1]));
        let mut sorted = level.clone();
        sorted.sort();
        sorted.dedup();
        distinct_vertices && sorted.len() == level.len()
    });
    let order = c.group().order();
    let covering_degree = cells
        .iter()
        .all(|level| level.iter().all(|o| o.len() == order))
        .then_some(order);
    Ok(QuotientComplex {
        cells,
        boundary,
        projection,
        cell_vertices,
        is_simplicial,
        covering_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures;
    use crate::groups::cyclic;

    #[test]
    fn trivial_action_gives_the_complex_back() {
        let complex = fixtures::octahedron();
        let c = GComplex::trivial(complex.clone(), cyclic(3));
        let q = quotient_complex(&c).unwrap();
        assert_eq!(q.f_vector(), complex.f_vector());
        assert!(q.is_simplicial);
        assert_eq!(q.betti_numbers(), vec![1, 0, 1]);
        assert_eq!(q.covering_degree, None);
    }

    #[test]
    fn free_torus_quotient() {
        let c = fixtures::torus7();
        let q = quotient_complex(&c).unwrap();
        assert_eq!(q.f_vector(), vec![1, 3, 2]);
        assert_eq!(q.euler_characteristic(), 0);
        assert_eq!(q.betti_numbers(), vec![1, 2, 1]);
        assert_eq!(q.covering_degree, Some(7));
        assert!(!q.is_simplicial);
        assert!(q.boundary_squares_to_zero());
        assert_eq!(c.complex().euler_characteristic(), 7 * q.euler_characteristic());
    }

    #[test]
    fn rotation_quotient_is_a_sphere() {
        let q = quotient_complex(&fixtures::octahedron_rotation()).unwrap();
        assert_eq!(q.f_vector(), vec![4, 6, 4]);
        assert_eq!(q.euler_characteristic(), 2);
        assert_eq!(q.betti_numbers(), vec![1, 0, 1]);
        assert!(q.boundary_squares_to_zero());
    }

    #[test]
    fn antipodal_quotient_is_projective_plane() {
        let q = quotient_complex(&fixtures::octahedron_antipodal()).unwrap();
        assert_eq!(q.euler_characteristic(), 1);
        assert_eq!(q.betti_numbers(), vec![1, 0, 0]);
    }

    #[test]
    fn skipped_regularization_is_reported() {
        let flip = fixtures::edge_flip();
        assert!(matches!(quotient_complex(&flip), Err(ComplexError::NotRegular { .. })));
        let (regular, _) = flip.regularize(2).unwrap();
        let q = quotient_complex(&regular).unwrap();
        assert_eq!(q.f_vector(), vec![2, 1]);
    }
}
