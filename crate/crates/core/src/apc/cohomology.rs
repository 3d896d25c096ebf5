use num_traits::Zero;

use super::ApcError;
use crate::complex::{GComplex, Subdivision};
use crate::exactmath::{rat, RatMatrix, Rational};

/// Cocycle representatives of a basis of `H^k`, with the coboundaries needed
/// to express other cocycles in that basis.
#[derive(Debug, Clone)]
pub struct CohomologyFrame {
    /// Independent coboundaries spanning `B^k`, as columns.
    coboundaries: RatMatrix,
    /// Cocycles completing `B^k` to `Z^k`.
    pub classes: Vec<Vec<Rational>>,
}

impl CohomologyFrame {
    /// From `δ_{k-1} : C^{k-1} → C^k` and `δ_k : C^k → C^{k+1}`.
    pub fn new(previous: &RatMatrix, next: &RatMatrix) -> Self {
        let dim = next.cols();
        let cocycles = next.kernel();
        let b_cols = previous.independent_columns();
        let coboundaries = previous.select_columns(&b_cols);
        let classes = if cocycles.is_empty() {
            Vec::new()
        } else {
            let z = RatMatrix::from_columns(dim, &cocycles);
            let stacked = coboundaries.hstack(&z);
            stacked
                .independent_columns()
                .into_iter()
                .filter(|&c| c >= coboundaries.cols())
                .map(|c| cocycles[c - coboundaries.cols()].clone())
                .collect()
        };
        CohomologyFrame { coboundaries, classes }
    }

    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    /// Coordinates of a cocycle's class in the basis, or `None` if the
    /// cochain is not a cocycle in the span.
    pub fn coordinates(&self, cocycle: &[Rational]) -> Option<Vec<Rational>> {
        let b = self.coboundaries.cols();
        let mut columns: Vec<Vec<Rational>> = (0..b).map(|c| self.coboundaries.column(c)).collect();
        columns.extend(self.classes.iter().cloned());
        if columns.is_empty() {
            return cocycle.iter().all(Zero::is_zero).then(Vec::new);
        }
        let m = RatMatrix::from_columns(cocycle.len(), &columns);
        m.solve(cocycle).map(|x| x[b..].to_vec())
    }

    /// Matrix of a cochain map on cohomology in this basis.
    pub fn induced(&self, map: impl Fn(&[Rational]) -> Vec<Rational>) -> RatMatrix {
        let cols: Vec<Vec<Rational>> = self
            .classes
            .iter()
            .map(|a| self.coordinates(&map(a)).expect("cochain maps preserve cocycles"))
            .collect();
        RatMatrix::from_columns(self.dim(), &cols)
    }
}

/// `(g·φ)(σ) = φ(g⁻¹σ)` on `k`-cochains of a complex.
pub fn act_on_cochain(c: &GComplex, g: usize, k: usize, cochain: &[Rational]) -> Vec<Rational> {
    let inv = c.group().inv(g);
    (0..c.complex().count(k))
        .map(|j| {
            let (i, s) = c.act_simplex(inv, k, j).expect("validated action");
            if s > 0 {
                cochain[i].clone()
            } else {
                -cochain[i].clone()
            }
        })
        .collect()
}

/// The cup-product pairing `(x, y) ↦ ⟨x ∪ y, z⟩` of degree-`m` cochains
/// against a weighted top chain `z`, using front and back faces.
pub fn cup_pairing(c: &GComplex, weights: &[Rational], m: usize, classes: &[Vec<Rational>]) -> RatMatrix {
    let complex = c.complex();
    let n = complex.dim();
    let b = classes.len();
    let mut form = RatMatrix::zeros(b, b);
    for (j, w) in weights.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        let sigma = &complex.simplices(n)[j];
        let front = complex.index_of(&sigma[..=m]).expect("face");
        let back = complex.index_of(&sigma[m..]).expect("face");
        for (p, x) in classes.iter().enumerate() {
            if x[front].is_zero() {
                continue;
            }
            let wx = w * &x[front];
            for (q, y) in classes.iter().enumerate() {
                if !y[back].is_zero() {
                    form.add_to(p, q, &(&wx * &y[back]));
                }
            }
        }
    }
    form
}

/// Middle-dimensional cohomology with its pairing and the group action.
#[derive(Debug, Clone)]
pub struct MiddleCohomology {
    pub dim: usize,
    /// Middle degree, `None` in odd dimension.
    pub degree: Option<usize>,
    pub classes: Vec<Vec<Rational>>,
    pub form: RatMatrix,
    /// Matrix of each group element on the classes.
    pub actions: Vec<RatMatrix>,
}

impl MiddleCohomology {
    /// Exact computation from cochains: basis by kernel/image splitting,
    /// action by solving in that basis.
    pub fn exact(c: &GComplex, fundamental: &[i64]) -> Self {
        let n = c.dim();
        let order = c.group().order();
        if n % 2 == 1 {
            return MiddleCohomology {
                dim: n,
                degree: None,
                classes: Vec::new(),
                form: RatMatrix::zeros(0, 0),
                actions: vec![RatMatrix::zeros(0, 0); order],
            };
        }
        let m = n / 2;
        let frame = frame_of(c, m);
        let weights: Vec<Rational> = fundamental.iter().map(|&s| rat(s)).collect();
        let form = cup_pairing(c, &weights, m, &frame.classes);
        let actions = c
            .group()
            .elements()
            .map(|g| frame.induced(|x| act_on_cochain(c, g, m, x)))
            .collect();
        MiddleCohomology {
            dim: n,
            degree: Some(m),
            classes: frame.classes,
            form,
            actions,
        }
    }

    /// Pull the classes of `parent` back along the simplicial approximation
    /// of a subdivision. The pulled-back classes are proved to be a basis by
    /// nondegeneracy of the pairing together with the Betti number of the
    /// subdivision; the action is recovered from the pairing.
    pub fn pulled_back(sub: &Subdivision, parent: &GComplex, middle: &MiddleCohomology) -> Result<Self, ApcError> {
        let sd = &sub.complex;
        let order = sd.group().order();
        let Some(m) = middle.degree else {
            return Ok(MiddleCohomology {
                dim: middle.dim,
                degree: None,
                classes: Vec::new(),
                form: RatMatrix::zeros(0, 0),
                actions: vec![RatMatrix::zeros(0, 0); order],
            });
        };
        let approx = sub.approximation(parent);
        let classes: Vec<Vec<Rational>> = middle.classes.iter().map(|x| pull_back(sd, parent, &approx, m, x)).collect();
        let fundamental = sd.orientation().ok_or(ApcError::MissingOrientation)?;
        let weights: Vec<Rational> = fundamental.iter().map(|&s| rat(s)).collect();
        let form = cup_pairing(sd, &weights, m, &classes);
        let betti = sd.complex().betti_numbers()[m];
        let inverse = form.inverse();
        if betti != classes.len() || inverse.is_none() {
            return Err(ApcError::NotABasis {
                expected: betti,
                found: classes.len(),
            });
        }
        let inverse = inverse.expect("checked");
        let actions = sd
            .group()
            .elements()
            .map(|g| {
                let moved: Vec<Vec<Rational>> = classes.iter().map(|x| act_on_cochain(sd, g, m, x)).collect();
                let mut mixed = classes.clone();
                mixed.extend(moved);
                let pairing = cup_pairing(sd, &weights, m, &mixed);
                // P_ij = Q(a_i, g·a_j) and M_g = Q⁻¹ P
                let b = classes.len();
                let mut p = RatMatrix::zeros(b, b);
                for i in 0..b {
                    for j in 0..b {
                        p.set(i, j, pairing.get(i, b + j).clone());
                    }
                }
                &inverse * &p
            })
            .collect();
        Ok(MiddleCohomology {
            dim: middle.dim,
            degree: Some(m),
            classes,
            form,
            actions,
        })
    }

    pub fn rank(&self) -> usize {
        self.classes.len()
    }

    /// Trace of each group element on the classes.
    pub fn character(&self) -> Vec<Rational> {
        self.actions.iter().map(RatMatrix::trace).collect()
    }
}

/// Cohomology frame of degree `k` computed from the complex's coboundaries.
pub fn frame_of(c: &GComplex, k: usize) -> CohomologyFrame {
    let complex = c.complex();
    let coboundary = |j: usize| -> RatMatrix {
        // δ_j = d_{j+1}ᵀ : C^j → C^{j+1}
        let mut m = RatMatrix::zeros(complex.count(j + 1), complex.count(j));
        if j < complex.dim() {
            for col in 0..complex.count(j + 1) {
                for (f, s) in complex.boundary_of(j + 1, col) {
                    m.set(col, f, rat(s));
                }
            }
        }
        m
    };
    let previous = if k == 0 {
        RatMatrix::zeros(complex.count(0), 0)
    } else {
        coboundary(k - 1)
    };
    CohomologyFrame::new(&previous, &coboundary(k))
}

/// Pullback of a `k`-cochain along a vertex map into `parent`; simplices
/// whose image is degenerate get zero.
fn pull_back(sd: &GComplex, parent: &GComplex, vertex_map: &[usize], k: usize, cochain: &[Rational]) -> Vec<Rational> {
    sd.complex()
        .simplices(k)
        .iter()
        .map(|s| {
            let image: Vec<usize> = s.iter().map(|&v| vertex_map[v]).collect();
            let sign = crate::complex::permutation_sign(&image);
            let mut sorted = image;
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Rational::zero();
            }
            let idx = parent.complex().index_of(&sorted).expect("simplicial approximation");
            if sign > 0 {
                cochain[idx].clone()
            } else {
                -cochain[idx].clone()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apc::fundamental_cycle;
    use crate::complex::fixtures;

    #[test]
    fn frame_dimensions_match_betti() {
        let c = fixtures::torus7();
        let betti = c.complex().betti_numbers();
        for (k, b) in betti.iter().enumerate() {
            assert_eq!(frame_of(&c, k).dim(), *b);
        }
    }

    #[test]
    fn torus_pairing_is_nondegenerate() {
        let c = fixtures::torus7();
        let z = fundamental_cycle(&c).unwrap();
        let frame = frame_of(&c, 1);
        let w: Vec<Rational> = z.iter().map(|&s| rat(s)).collect();
        let q = cup_pairing(&c, &w, 1, &frame.classes);
        assert!(q.inverse().is_some());
        // skew on cohomology in odd middle degree
        assert_eq!(q.transpose(), q.scale(&rat(-1)));
    }

    #[test]
    fn sphere_square_pullback_recovers_action() {
        let c = fixtures::s2xs2_swap();
        let z = fundamental_cycle(&c).unwrap();
        let middle = MiddleCohomology::exact(&c, &z);
        assert_eq!(middle.rank(), 2);
        let sub = c.subdivide();
        let pulled = MiddleCohomology::pulled_back(&sub, &c, &middle).unwrap();
        assert_eq!(pulled.form, middle.form);
        assert_eq!(pulled.character(), middle.character());
    }
}
