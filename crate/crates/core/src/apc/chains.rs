use num_traits::Zero;
use serde::Serialize;

use crate::complex::GComplex;
use crate::exactmath::{rat, RatMatrix, Rational, SparseIntMatrix};
use crate::groups::{FiniteGroup, Subgroup};

/// Simplicial chains of a complex with the signed permutation action of the group.
#[derive(Debug, Clone)]
pub struct GChainComplex {
    group: FiniteGroup,
    counts: Vec<usize>,
    /// `boundary[k][j]`: signed faces of the `j`-th `k`-simplex.
    boundary: Vec<Vec<Vec<(usize, i64)>>>,
    /// `actions[g][k][j]`: image of the `j`-th `k`-simplex under `g`, with sign.
    actions: Vec<Vec<Vec<(usize, i64)>>>,
}

/// Simplicial chain complex with its group action.
pub fn chains(c: &GComplex) -> GChainComplex {
    let complex = c.complex();
    let n = complex.dim();
    let boundary = (0..=n)
        .map(|k| (0..complex.count(k)).map(|j| complex.boundary_of(k, j)).collect())
        .collect();
    let actions = c
        .group()
        .elements()
        .map(|g| (0..=n).map(|k| c.chain_action(g, k)).collect())
        .collect();
    GChainComplex {
        group: c.group().clone(),
        counts: complex.f_vector(),
        boundary,
        actions,
    }
}

impl GChainComplex {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.counts.len() - 1
    }

    /// Rank of `C_k`; zero outside `0..=n`.
    pub fn rank(&self, k: usize) -> usize {
        self.counts.get(k).copied().unwrap_or(0)
    }

    pub fn faces(&self, k: usize, j: usize) -> &[(usize, i64)] {
        &self.boundary[k][j]
    }

    /// `d_k : C_k → C_{k-1}`; the zero map when either side vanishes.
    pub fn boundary_matrix(&self, k: usize) -> RatMatrix {
        let rows = if k == 0 { 0 } else { self.rank(k - 1) };
        let mut m = RatMatrix::zeros(rows, self.rank(k));
        if k > 0 && k <= self.dim() {
            for (j, faces) in self.boundary[k].iter().enumerate() {
                for &(i, s) in faces {
                    m.set(i, j, rat(s));
                }
            }
        }
        m
    }

    /// `δ_k : C^k → C^{k+1}`, the transpose of `d_{k+1}`.
    pub fn coboundary_matrix(&self, k: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.rank(k + 1), self.rank(k));
        if k < self.dim() {
            for (j, faces) in self.boundary[k + 1].iter().enumerate() {
                for &(i, s) in faces {
                    m.set(j, i, rat(s));
                }
            }
        }
        m
    }

    /// Signed image of each `k`-simplex under `g`.
    pub fn action(&self, g: usize, k: usize) -> &[(usize, i64)] {
        &self.actions[g][k]
    }

    /// The action of `g` on `C_k` as a signed permutation matrix.
    pub fn action_matrix(&self, g: usize, k: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.rank(k), self.rank(k));
        for (j, &(i, s)) in self.actions[g][k].iter().enumerate() {
            m.set(i, j, rat(s));
        }
        m
    }

    /// The action of `g` on cochains, `(g·φ)(σ) = φ(g⁻¹σ)`.
    pub fn act_on_cochain(&self, g: usize, k: usize, cochain: &[Rational]) -> Vec<Rational> {
        let inv = self.group.inv(g);
        self.actions[inv][k]
            .iter()
            .map(|&(i, s)| if s > 0 { cochain[i].clone() } else { -cochain[i].clone() })
            .collect()
    }

    /// Exact check that `d_{k-1} d_k = 0` in every degree.
    pub fn boundary_squares_to_zero(&self) -> bool {
        (2..=self.dim()).all(|k| {
            self.boundary[k].iter().all(|faces| {
                let mut acc = vec![0i64; self.rank(k - 2)];
                for &(f, s) in faces {
                    for &(e, t) in &self.boundary[k - 1][f] {
                        acc[e] += s * t;
                    }
                }
                acc.iter().all(|&x| x == 0)
            })
        })
    }

    /// Exact check that every group element acts by a chain map.
    pub fn action_commutes_with_boundary(&self) -> bool {
        self.group.elements().all(|g| {
            (1..=self.dim()).all(|k| {
                self.boundary[k].iter().enumerate().all(|(j, faces)| {
                    let (image, sign) = self.actions[g][k][j];
                    let mut lhs: Vec<(usize, i64)> = faces
                        .iter()
                        .map(|&(f, s)| {
                            let (fi, fs) = self.actions[g][k - 1][f];
                            (fi, s * fs)
                        })
                        .collect();
                    let mut rhs: Vec<(usize, i64)> =
                        self.boundary[k][image].iter().map(|&(f, s)| (f, s * sign)).collect();
                    lhs.sort_unstable();
                    rhs.sort_unstable();
                    lhs == rhs
                })
            })
        })
    }

    /// Rational Betti numbers by sparse elimination.
    pub fn betti_numbers(&self) -> Vec<usize> {
        let n = self.dim();
        let ranks: Vec<usize> = (0..=n + 1)
            .map(|k| {
                if k == 0 || k > n {
                    return 0;
                }
                let mut m = SparseIntMatrix::new(self.rank(k - 1));
                for faces in &self.boundary[k] {
                    m.push_row(faces.clone());
                }
                m.rank()
            })
            .collect();
        (0..=n).map(|k| self.rank(k) - ranks[k] - ranks[k + 1]).collect()
    }

    /// Trace of the action of each element on `C_k`.
    pub fn character(&self, k: usize) -> Vec<i64> {
        self.group
            .elements()
            .map(|g| {
                self.actions[g][k]
                    .iter()
                    .enumerate()
                    .filter(|&(j, &(i, _))| i == j)
                    .map(|(_, &(_, s))| s)
                    .sum()
            })
            .collect()
    }
}

/// Orbit census of one degree of the chain complex.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeCensus {
    pub degree: usize,
    /// Trace of each group element on `C_k`.
    pub character: Vec<i64>,
    /// Character of `⊕ Ind_{H_σ}^G ε_σ` over orbit representatives.
    pub orbit_character: Vec<String>,
    /// `(stabilizer order, number of orbits)` pairs, ascending.
    pub orbit_types: Vec<(usize, usize)>,
    /// Some orbit has a stabilizer acting on its simplex with a sign.
    pub signed_stabilizers: bool,
    pub matches: bool,
}

/// Result of [`permutation_module_check`].
#[derive(Debug, Clone, Serialize)]
pub struct PermutationModuleReport {
    pub degrees: Vec<DegreeCensus>,
}

impl PermutationModuleReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.matches)
    }
}

/// Compare the character of each `C_k` with the character predicted by the
/// decomposition into modules induced from simplex stabilizers.
pub fn permutation_module_check(cc: &GChainComplex, c: &GComplex) -> PermutationModuleReport {
    let group = cc.group();
    let order = group.order();
    let degrees = (0..=cc.dim())
        .map(|k| {
            let character = cc.character(k);
            let mut predicted = vec![Rational::zero(); order];
            let mut types: Vec<(usize, usize)> = Vec::new();
            let mut signed = false;
            for orbit in c.orbits(k) {
                let rep = orbit[0];
                let stab: Vec<usize> = group.elements().filter(|&g| cc.action(g, k)[rep].0 == rep).collect();
                let stab = Subgroup::new(group, &stab).expect("stabilizers are subgroups");
                let sign = |h: usize| cc.action(h, k)[rep].1;
                signed |= stab.elements().iter().any(|&h| sign(h) < 0);
                match types.iter_mut().find(|t| t.0 == stab.order()) {
                    Some(t) => t.1 += 1,
                    None => types.push((stab.order(), 1)),
                }
                // induced character: (1/|H|) Σ_{x ∈ G, x⁻¹gx ∈ H} ε(x⁻¹gx)
                for (g, slot) in predicted.iter_mut().enumerate() {
                    let mut total = 0i64;
                    for x in group.elements() {
                        let h = group.conj(group.inv(x), g);
                        if stab.contains(h) {
                            total += sign(h);
                        }
                    }
                    *slot += Rational::new(total.into(), (stab.order() as i64).into());
                }
            }
            types.sort_unstable();
            let matches = character.iter().zip(&predicted).all(|(&a, b)| rat(a) == *b);
            DegreeCensus {
                degree: k,
                character,
                orbit_character: predicted.iter().map(ToString::to_string).collect(),
                orbit_types: types,
                signed_stabilizers: signed,
                matches,
            }
        })
        .collect();
    PermutationModuleReport { degrees }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{fixtures, SimplicialComplex};
    use crate::groups::cyclic;

    #[test]
    fn single_simplex_boundaries() {
        let complex = SimplicialComplex::from_facets(3, &[vec![0, 1, 2]]).unwrap();
        let cc = chains(&GComplex::trivial(complex, cyclic(1)));
        assert_eq!(cc.boundary_matrix(1), RatMatrix::from_i64(3, 3, &[-1, -1, 0, 1, 0, -1, 0, 1, 1]));
        assert_eq!(cc.boundary_matrix(2), RatMatrix::from_i64(3, 1, &[1, -1, 1]));
        assert!(cc.boundary_squares_to_zero());
        assert_eq!(cc.betti_numbers(), vec![1, 0, 0]);
    }

    #[test]
    fn octahedron_and_torus_homology() {
        let oct = chains(&fixtures::octahedron_rotation());
        assert_eq!((0..3).map(|k| oct.rank(k)).collect::<Vec<_>>(), vec![6, 12, 8]);
        assert_eq!(oct.betti_numbers(), vec![1, 0, 1]);
        assert!(oct.action_commutes_with_boundary());
        let torus = chains(&fixtures::torus7());
        assert_eq!(torus.betti_numbers(), vec![1, 2, 1]);
    }

    #[test]
    fn orbit_census_matches_characters() {
        for c in [fixtures::octahedron_rotation(), fixtures::torus7(), fixtures::octahedron_klein(), fixtures::hexagon_s3()] {
            let cc = chains(&c);
            let report = permutation_module_check(&cc, &c);
            assert!(report.passed(), "{report:?}");
        }
    }

    #[test]
    fn free_action_gives_regular_multiples() {
        let c = fixtures::torus7();
        let report = permutation_module_check(&chains(&c), &c);
        for d in &report.degrees {
            assert!(d.character[1..].iter().all(|&x| x == 0));
            assert_eq!(d.orbit_types.len(), 1);
            assert_eq!(d.orbit_types[0].0, 1);
        }
    }

    #[test]
    fn signed_stabilizer_on_non_regular_action() {
        let c = fixtures::edge_flip();
        let report = permutation_module_check(&chains(&c), &c);
        assert!(report.passed());
        assert!(report.degrees[1].signed_stabilizers);
        assert_eq!(report.degrees[1].character, vec![1, -1]);
    }
}
