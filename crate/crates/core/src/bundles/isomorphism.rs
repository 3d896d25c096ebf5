use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::Serialize;

use super::transition::TransitionBundle;
use crate::exactmath::{cx_solve_homogeneous, CxMatrix};

/// Why two bundles could not be matched.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum IsoFailure {
    GroupMismatch,
    ModelMismatch,
    ChartCount { left: usize, right: usize },
    /// Translates of chart centers do not define a bijection of vertices.
    VertexMap { vertex: usize },
    /// The vertex map does not carry this simplex to a simplex.
    NotSimplicial { simplex: Vec<usize> },
    /// The two bundles have different overlaps or classes for these charts.
    OverlapMismatch { charts: (usize, usize) },
    /// No invertible chartwise factors satisfy the conjugation equations
    /// once the overlaps up to and including these charts are imposed.
    NoWitness { charts: (usize, usize) },
}

/// An equivariant isomorphism between two bundles: a `G₀`-equivariant
/// vertex bijection carrying sheets to sheets, and per chart a factor
/// `B_α ⊗ id` with `Ψ'_{αβ} (B_α ⊗ id) = (B_β ⊗ id) Ψ_{αβ}` on every overlap cell.
#[derive(Debug, Clone, Serialize)]
pub struct IsomorphismWitness {
    pub vertex_map: Vec<usize>,
    #[serde(skip)]
    pub factors: Vec<CxMatrix>,
    pub residual: f64,
}

/// Search for an equivariant isomorphism from `left` to `right`.
///
/// The base map is forced by the chart centers. The fiber factors solve a
/// homogeneous linear system, and a fixed generic combination of its
/// solutions is taken; if that is singular no invertible solution exists
/// except on a measure-zero set, which is reported as no witness.
pub fn bundle_isomorphism(left: &TransitionBundle, right: &TransitionBundle) -> Result<IsomorphismWitness, IsoFailure> {
    let (la, ra) = (left.atlas(), right.atlas());
    if la.group() != ra.group() {
        return Err(IsoFailure::GroupMismatch);
    }
    let (lm, rm) = (left.model(), right.model());
    if lm.fiber_dim() != rm.fiber_dim() || lm.f_dim() != rm.f_dim() || lm.coset_count() != rm.coset_count() {
        return Err(IsoFailure::ModelMismatch);
    }
    if la.chart_count() != ra.chart_count() {
        return Err(IsoFailure::ChartCount {
            left: la.chart_count(),
            right: ra.chart_count(),
        });
    }
    let vertex_map = vertex_map(left, right)?;
    let lc = la.total().complex();
    let rc = ra.total().complex();
    let mut cell_map = vec![usize::MAX; la.cell_count()];
    for k in 0..=lc.dim() {
        for (i, s) in lc.simplices(k).iter().enumerate() {
            let mut image: Vec<usize> = s.iter().map(|&v| vertex_map[v]).collect();
            image.sort_unstable();
            let j = rc.index_of(&image).ok_or(IsoFailure::NotSimplicial { simplex: s.clone() })?;
            cell_map[la.cell_of((k, i))] = ra.cell_of((k, j));
        }
    }
    if lc.f_vector() != rc.f_vector() {
        return Err(IsoFailure::NotSimplicial { simplex: Vec::new() });
    }

    let f = lm.f_dim();
    let d = lm.rho().dim();
    let dim = f * d;
    let charts = la.chart_count();
    let unknowns = charts * f * f;
    let unit = |i: usize, j: usize| {
        let mut e = CxMatrix::zeros(f, f);
        e.set(i, j, Complex64::new(1.0, 0.0));
        e.kron(&CxMatrix::identity(d))
    };
    let mut constraints: Vec<CxMatrix> = Vec::new();
    let mut solutions = identity_solutions(charts, f);
    for alpha in 0..charts {
        for beta in alpha + 1..charts {
            let lo = la.overlap(alpha, beta);
            let ro = ra.overlap(alpha, beta);
            let (lo, ro) = match (lo, ro) {
                (None, None) => continue,
                (Some(l), Some(r)) => (l, r),
                _ => return Err(IsoFailure::OverlapMismatch { charts: (alpha, beta) }),
            };
            let mapped: BTreeSet<usize> = lo.1.iter().map(|&c| cell_map[c]).collect();
            if lo.0 != ro.0 || mapped != ro.1.iter().copied().collect() {
                return Err(IsoFailure::OverlapMismatch { charts: (alpha, beta) });
            }
            for &cell in &lo.1 {
                let (Some(psi), Some(psi2)) = (
                    left.transition(alpha, beta, cell),
                    right.transition(alpha, beta, cell_map[cell]),
                ) else {
                    return Err(IsoFailure::NoWitness { charts: (alpha, beta) });
                };
                if psi.a != psi2.a {
                    return Err(IsoFailure::NoWitness { charts: (alpha, beta) });
                }
                for c in 0..lm.coset_count() {
                    let mut columns = vec![vec![Complex64::new(0.0, 0.0); dim * dim]; unknowns];
                    for i in 0..f {
                        for j in 0..f {
                            let e = unit(i, j);
                            columns[(alpha * f + i) * f + j] = (&psi2.blocks[c] * &e).vectorize();
                            columns[(beta * f + i) * f + j] = (&e * &psi.blocks[c]).scale(Complex64::new(-1.0, 0.0)).vectorize();
                        }
                    }
                    constraints.push(CxMatrix::from_columns(dim * dim, &columns));
                }
            }
            solutions = cx_solve_homogeneous(&constraints, unknowns, lm.tol().max(1e-7));
            if combine(&solutions, charts, f).is_none() {
                return Err(IsoFailure::NoWitness { charts: (alpha, beta) });
            }
        }
    }
    let factors = combine(&solutions, charts, f).expect("checked after every overlap");
    let residual = constraints
        .iter()
        .map(|m| {
            let v: Vec<Complex64> = factors.iter().flat_map(row_major).collect();
            m.mul_vec(&v).iter().map(|z| z.norm()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    Ok(IsomorphismWitness {
        vertex_map,
        factors,
        residual,
    })
}

/// Entries of `B` in the unknown ordering `(i, j) ↦ i·f + j`.
fn row_major(b: &CxMatrix) -> Vec<Complex64> {
    (0..b.rows()).flat_map(|i| (0..b.cols()).map(move |j| b.get(i, j))).collect()
}

fn identity_solutions(charts: usize, f: usize) -> Vec<Vec<Complex64>> {
    // before any overlap is imposed each chart is independent
    (0..charts)
        .map(|alpha| {
            let mut w = vec![Complex64::new(0.0, 0.0); charts * f * f];
            for i in 0..f {
                w[(alpha * f + i) * f + i] = Complex64::new(1.0, 0.0);
            }
            w
        })
        .collect()
}

/// Split a generic combination of solutions into per-chart factors, if all are invertible.
fn combine(solutions: &[Vec<Complex64>], charts: usize, f: usize) -> Option<Vec<CxMatrix>> {
    if solutions.is_empty() {
        return None;
    }
    let n = charts * f * f;
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for (k, s) in solutions.iter().enumerate() {
        let w = Complex64::new(1.0 / (k as f64 + 1.0), 0.37 / (k as f64 + 2.0));
        for (x, y) in v.iter_mut().zip(s) {
            *x += w * y;
        }
    }
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale < 1e-12 {
        return None;
    }
    (0..charts)
        .map(|alpha| {
            let rows: Vec<Vec<Complex64>> = (0..f)
                .map(|i| v[(alpha * f + i) * f..(alpha * f + i + 1) * f].iter().map(|z| z / scale).collect())
                .collect();
            let b = CxMatrix::from_rows(rows);
            b.inverse().map(|_| b)
        })
        .collect()
}

/// Vertex bijection sending `g·c` to `g·c'` for corresponding chart centers.
fn vertex_map(left: &TransitionBundle, right: &TransitionBundle) -> Result<Vec<usize>, IsoFailure> {
    let (la, ra) = (left.atlas(), right.atlas());
    let n = la.total().complex().vertex_count();
    if n != ra.total().complex().vertex_count() {
        return Err(IsoFailure::VertexMap { vertex: 0 });
    }
    let mut map = vec![usize::MAX; n];
    for (lcenters, rcenters) in la.charts().iter().zip(ra.charts()) {
        if lcenters.len() != rcenters.len() {
            return Err(IsoFailure::VertexMap { vertex: lcenters[0] });
        }
        for (&lc, &rc) in lcenters.iter().zip(rcenters) {
            for g in la.group().elements() {
                let (from, to) = (la.total().vertex_perm(g)[lc], ra.total().vertex_perm(g)[rc]);
                if map[from] != usize::MAX && map[from] != to {
                    return Err(IsoFailure::VertexMap { vertex: from });
                }
                map[from] = to;
            }
        }
    }
    let mut hit = vec![false; n];
    for (v, &w) in map.iter().enumerate() {
        if w == usize::MAX || hit[w] {
            return Err(IsoFailure::VertexMap { vertex: v });
        }
        hit[w] = true;
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::{fixtures, gauge_transform};

    #[test]
    fn a_bundle_is_isomorphic_to_itself() {
        let b = fixtures::hexagon_double_cover();
        let w = bundle_isomorphism(&b, &b).unwrap();
        assert_eq!(w.vertex_map, (0..6).collect::<Vec<_>>());
        assert!(w.residual < 1e-9);
    }

    #[test]
    fn gauge_transform_has_a_witness() {
        let w = bundle_isomorphism(&fixtures::sphere_pair_trivial(), &fixtures::sphere_pair_kernel_cocycle()).unwrap();
        assert!(w.residual < 1e-8, "{}", w.residual);
        assert!(w.factors.iter().all(|b| b.inverse().is_some()));
    }

    #[test]
    fn random_kernel_gauge_on_the_double_cover() {
        let b = fixtures::hexagon_double_cover();
        let factors = [2.0, -0.5, 3.0].map(|x| CxMatrix::scalar(1, Complex64::new(x, 0.3)));
        let twisted = gauge_transform(&b, &factors).unwrap();
        assert!(bundle_isomorphism(&b, &twisted).unwrap().residual < 1e-9);
    }

    #[test]
    fn holonomy_obstructs_isomorphism() {
        let failure = bundle_isomorphism(&fixtures::circle_holonomy(1.0), &fixtures::circle_holonomy(2.0)).unwrap_err();
        assert!(matches!(failure, IsoFailure::NoWitness { .. }), "{failure:?}");
    }

    #[test]
    fn different_models_are_rejected() {
        let failure = bundle_isomorphism(&fixtures::sphere_pair_trivial(), &fixtures::projective_plane_cover()).unwrap_err();
        assert_eq!(failure, IsoFailure::ModelMismatch);
    }
}
