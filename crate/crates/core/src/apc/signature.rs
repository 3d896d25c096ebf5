use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::cohomology::{act_on_cochain, cup_pairing, frame_of, CohomologyFrame, MiddleCohomology};
use super::duality::{fundamental_cycle, Apc};
use super::ApcError;
use crate::complex::{quotient_complex, GComplex, QuotientComplex};
use crate::exactmath::{
    hermitian_inertia, orthonormalize, rat, symmetric_signature, CxMatrix, RatMatrix, Rational, SignatureTriple,
};
use crate::groups::FiniteGroup;
use crate::reps::{irreps, UnitaryRep};

/// Signature of the middle pairing on `H^{n/2}(M; Q)`; `(0, 0, b)` with `b`
/// the middle Betti number (or zero in odd dimension) when `n ≢ 0 mod 4`.
pub fn signature(apc: &Apc) -> Result<SignatureTriple, ApcError> {
    signature_of(&apc.middle())
}

/// Signature of already computed middle cohomology.
pub fn signature_of(middle: &MiddleCohomology) -> Result<SignatureTriple, ApcError> {
    if !middle.dim.is_multiple_of(4) {
        return Ok(SignatureTriple::new(0, 0, middle.rank()));
    }
    Ok(symmetric_signature(&middle.form)?)
}

/// Signature contribution of one irreducible representation.
#[derive(Debug, Clone, Serialize)]
pub struct IrrepSignature {
    pub name: String,
    pub dim: usize,
    pub multiplicity: usize,
    /// Inertia of the pairing on the isotypic block divided by `dim`.
    pub signature: SignatureTriple,
}

/// Equivariant signature: the total and the per-irreducible decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct GSignature {
    pub total: SignatureTriple,
    pub per_irrep: Vec<IrrepSignature>,
    /// Projections done in exact rational arithmetic (all characters rational).
    pub exact: bool,
    /// Isotypic blocks are pairwise orthogonal for the pairing.
    pub blocks_orthogonal: bool,
    /// `Σ dim · per-irrep = total`.
    pub consistent: bool,
}

impl GSignature {
    pub fn passed(&self) -> bool {
        self.blocks_orthogonal && self.consistent
    }

    pub fn irrep(&self, name: &str) -> Option<&IrrepSignature> {
        self.per_irrep.iter().find(|r| r.name == name)
    }
}

/// Equivariant signature of an APC whose group preserves orientation.
pub fn g_signature(apc: &Apc) -> Result<GSignature, ApcError> {
    if let Some(element) = apc.complex().orientation_reversing_element() {
        return Err(ApcError::OrientationReversed { element });
    }
    g_signature_of(&apc.middle(), apc.complex().group(), apc.tol())
}

/// Equivariant signature of already computed middle cohomology.
pub fn g_signature_of(middle: &MiddleCohomology, group: &FiniteGroup, tol: f64) -> Result<GSignature, ApcError> {
    let total = signature_of(middle)?;
    let list = irreps(group)?;
    let order = group.order();
    let character = middle.character();
    let integral = |z: Complex64| z.im.abs() < tol && (z.re - z.re.round()).abs() < tol;
    let exact = list.iter().all(|r| r.character_values().into_iter().all(integral));
    let multiplicities: Vec<usize> = list
        .iter()
        .map(|r| {
            let chi = r.character_values();
            let sum: Complex64 = chi
                .iter()
                .zip(&character)
                .map(|(c, x)| c.conj() * x.to_f64().expect("finite"))
                .sum();
            (sum.re / order as f64).round() as usize
        })
        .collect();
    let blocks = if exact {
        exact_blocks(middle, &list, order)?
    } else {
        complex_blocks(middle, &list, order, tol)?
    };
    let mut per_irrep = Vec::with_capacity(list.len());
    let mut recombined = SignatureTriple::default();
    for ((rep, triple), &mult) in list.iter().zip(&blocks.triples).zip(&multiplicities) {
        let d = rep.dim();
        if triple.positive % d != 0 || triple.negative % d != 0 || triple.null % d != 0 {
            return Err(ApcError::BlockNotDivisible { irrep: rep.name().to_string() });
        }
        let signature = SignatureTriple::new(triple.positive / d, triple.negative / d, triple.null / d);
        for _ in 0..d {
            recombined = recombined.direct_sum(&signature);
        }
        per_irrep.push(IrrepSignature {
            name: rep.name().to_string(),
            dim: d,
            multiplicity: mult,
            signature,
        });
    }
    let consistent = recombined == total
        && per_irrep
            .iter()
            .all(|r| r.signature.dimension() == r.multiplicity);
    Ok(GSignature {
        total,
        per_irrep,
        exact,
        blocks_orthogonal: blocks.orthogonal,
        consistent,
    })
}

struct Blocks {
    triples: Vec<SignatureTriple>,
    orthogonal: bool,
}

fn block_triple(middle: &MiddleCohomology, exact_form: Option<&RatMatrix>, size: usize) -> Option<SignatureTriple> {
    if !middle.dim.is_multiple_of(4) {
        return Some(SignatureTriple::new(0, 0, size));
    }
    exact_form.map(|f| symmetric_signature(f).expect("restricted symmetric form is symmetric"))
}

/// Rational isotypic projectors `(d/|G|) Σ χ(g) g` for integer characters.
fn exact_blocks(middle: &MiddleCohomology, list: &[UnitaryRep], order: usize) -> Result<Blocks, ApcError> {
    let b = middle.rank();
    let mut bases: Vec<RatMatrix> = Vec::with_capacity(list.len());
    for rep in list {
        let mut p = RatMatrix::zeros(b, b);
        for (g, chi) in rep.character_values().into_iter().enumerate() {
            let c = rat(chi.re.round() as i64);
            if !c.is_zero() {
                p = &p + &middle.actions[g].scale(&c);
            }
        }
        let p = p.scale(&Rational::new((rep.dim() as i64).into(), (order as i64).into()));
        let cols = p.independent_columns();
        bases.push(p.select_columns(&cols));
    }
    let mut triples = Vec::with_capacity(list.len());
    for basis in &bases {
        let restricted = &(&basis.transpose() * &middle.form) * basis;
        triples.push(block_triple(middle, Some(&restricted), basis.cols()).expect("exact form"));
    }
    let mut orthogonal = true;
    for (i, a) in bases.iter().enumerate() {
        for bb in &bases[i + 1..] {
            orthogonal &= (&(&a.transpose() * &middle.form) * bb).is_zero();
        }
    }
    Ok(Blocks { triples, orthogonal })
}

/// Complex isotypic projectors with Hermitian inertia on each block.
fn complex_blocks(middle: &MiddleCohomology, list: &[UnitaryRep], order: usize, tol: f64) -> Result<Blocks, ApcError> {
    let b = middle.rank();
    let to_cx = |m: &RatMatrix| {
        let entries: Vec<f64> = (0..m.rows())
            .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j).to_f64().expect("finite"))
            .collect();
        CxMatrix::from_real(m.rows(), m.cols(), &entries)
    };
    let form = to_cx(&middle.form);
    let actions: Vec<CxMatrix> = middle.actions.iter().map(to_cx).collect();
    let mut bases: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(list.len());
    for rep in list {
        let mut p = CxMatrix::zeros(b, b);
        for (g, chi) in rep.character_values().into_iter().enumerate() {
            p = &p + &actions[g].scale(chi.conj());
        }
        let p = p.scale(Complex64::new(rep.dim() as f64 / order as f64, 0.0));
        let columns: Vec<Vec<Complex64>> = (0..b).map(|j| p.column(j)).collect();
        bases.push(orthonormalize(&columns, tol.sqrt()));
    }
    let restrict = |x: &[Vec<Complex64>], y: &[Vec<Complex64>]| {
        let mut m = CxMatrix::zeros(x.len(), y.len());
        for (i, u) in x.iter().enumerate() {
            let qu: Vec<Complex64> = (0..b)
                .map(|r| (0..b).map(|c| u[c].conj() * form.get(c, r)).sum())
                .collect();
            for (j, v) in y.iter().enumerate() {
                m.set(i, j, qu.iter().zip(v).map(|(a, w)| a * w).sum());
            }
        }
        m
    };
    let mut triples = Vec::with_capacity(list.len());
    for basis in &bases {
        let triple = if !middle.dim.is_multiple_of(4) {
            SignatureTriple::new(0, 0, basis.len())
        } else {
            hermitian_inertia(&restrict(basis, basis), tol.sqrt())
        };
        triples.push(triple);
    }
    let mut orthogonal = true;
    for (i, x) in bases.iter().enumerate() {
        for y in &bases[i + 1..] {
            orthogonal &= restrict(x, y).max_abs() < tol.sqrt();
        }
    }
    Ok(Blocks { triples, orthogonal })
}

/// Transfer identity in one degree.
#[derive(Debug, Clone, Serialize)]
pub struct TransferDegree {
    pub degree: usize,
    pub quotient_betti: usize,
    /// Rank of the averaging projector on `H^k(M; Q)`.
    pub invariant_dim: usize,
    pub holds: bool,
}

/// Homology and middle pairing of the orbit space.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientSignature {
    pub betti: Vec<usize>,
    pub signature: SignatureTriple,
    pub transfer: Vec<TransferDegree>,
    /// `b_k(M/G) = b_{n-k}(M/G)` in every degree.
    pub duality: bool,
    /// The orbit-weighted top chain is a cycle.
    pub weighted_cycle: bool,
}

impl QuotientSignature {
    pub fn passed(&self) -> bool {
        self.duality && self.weighted_cycle && self.transfer.iter().all(|t| t.holds)
    }
}

/// `dim H^k(M/G; Q)` against the rank of the averaging projector on
/// `H^k(M; Q)` in every degree. Needs no orientation.
pub fn transfer(c: &GComplex) -> Result<Vec<TransferDegree>, ApcError> {
    let q = quotient_complex(c)?;
    Ok(transfer_degrees(c, &q.betti_numbers()))
}

fn transfer_degrees(c: &GComplex, betti: &[usize]) -> Vec<TransferDegree> {
    let group = c.group();
    let order = Rational::from_integer((group.order() as i64).into());
    (0..=c.dim())
        .map(|k| {
            let frame = frame_of(c, k);
            let trace_sum = group
                .elements()
                .map(|g| frame.induced(|x| act_on_cochain(c, g, k, x)).trace())
                .fold(Rational::zero(), |acc, t| acc + t);
            let invariant = trace_sum / &order;
            let invariant_dim = invariant.to_integer().to_usize().expect("projector rank");
            TransferDegree {
                degree: k,
                quotient_betti: betti[k],
                invariant_dim,
                holds: invariant.is_integer() && invariant_dim == betti[k],
            }
        })
        .collect()
}

/// Betti numbers, transfer check and middle pairing of `M/G`.
///
/// Cohomology classes of the quotient are computed on the orbit complex and
/// paired after pulling back to `M`, against the top chain that weights each
/// simplex by the reciprocal of its orbit size (which pushes forward to the
/// fundamental class of the quotient).
pub fn quotient_signature(c: &GComplex) -> Result<QuotientSignature, ApcError> {
    if let Some(element) = c.orientation_reversing_element() {
        return Err(ApcError::OrientationReversed { element });
    }
    let fundamental = fundamental_cycle(c)?;
    let q = quotient_complex(c)?;
    let n = c.dim();
    let betti = q.betti_numbers();
    if let Some(k) = (0..=n).find(|&k| betti[k] != betti[n - k]) {
        return Err(ApcError::DualityFailure { degree: k });
    }
    let transfer = transfer_degrees(c, &betti);
    let weights: Vec<Rational> = fundamental
        .iter()
        .enumerate()
        .map(|(j, &s)| Rational::new(s.into(), (q.cells[n][q.projection[n][j].0].len() as i64).into()))
        .collect();
    let weighted_cycle = {
        let mut acc = vec![Rational::zero(); c.complex().count(n.saturating_sub(1))];
        if n > 0 {
            for (j, w) in weights.iter().enumerate() {
                for (f, s) in c.complex().boundary_of(n, j) {
                    acc[f] += w * rat(s);
                }
            }
        }
        acc.iter().all(Zero::is_zero)
    };
    let signature = if !n.is_multiple_of(4) {
        SignatureTriple::new(0, 0, if n.is_multiple_of(2) { betti[n / 2] } else { 0 })
    } else {
        let m = n / 2;
        let frame = quotient_frame(&q, m);
        let pulled: Vec<Vec<Rational>> = frame
            .classes
            .iter()
            .map(|x| {
                q.projection[m]
                    .iter()
                    .map(|&(cell, s)| if s > 0 { x[cell].clone() } else { -x[cell].clone() })
                    .collect()
            })
            .collect();
        symmetric_signature(&cup_pairing(c, &weights, m, &pulled))?
    };
    Ok(QuotientSignature {
        betti,
        signature,
        transfer,
        duality: true,
        weighted_cycle,
    })
}

fn quotient_frame(q: &QuotientComplex, k: usize) -> CohomologyFrame {
    let coboundary = |j: usize| -> RatMatrix {
        let rows = q.cells.get(j + 1).map_or(0, Vec::len);
        let mut m = RatMatrix::zeros(rows, q.cells[j].len());
        if j < q.dim() {
            for (col, faces) in q.boundary[j + 1].iter().enumerate() {
                for &(f, s) in faces {
                    m.set(col, f, rat(s));
                }
            }
        }
        m
    };
    let previous = if k == 0 {
        RatMatrix::zeros(q.cells[0].len(), 0)
    } else {
        coboundary(k - 1)
    };
    CohomologyFrame::new(&previous, &coboundary(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apc::build_apc;
    use crate::complex::fixtures;

    #[test]
    fn manifold_plus_its_reverse_has_zero_signature() {
        let m = fixtures::cp2_9();
        let both = m.disjoint_union(&m.reversed()).unwrap();
        let sig = signature(&build_apc(&both).unwrap()).unwrap();
        assert_eq!(sig, SignatureTriple::new(1, 1, 0));
        assert_eq!(sig.value(), 0);
    }

    #[test]
    fn sphere_has_zero_signature() {
        let apc = build_apc(&fixtures::boundary_simplex(5)).unwrap();
        assert_eq!(signature(&apc).unwrap(), SignatureTriple::new(0, 0, 0));
    }

    #[test]
    fn projective_plane_signature_and_reversal() {
        let c = fixtures::cp2_9();
        let apc = build_apc(&c).unwrap();
        assert_eq!(signature(&apc).unwrap(), SignatureTriple::new(1, 0, 0));
        let reversed = build_apc(&c.reversed()).unwrap();
        assert_eq!(signature(&reversed).unwrap(), SignatureTriple::new(0, 1, 0));
    }

    #[test]
    fn swap_on_sphere_square_splits_hyperbolic_form() {
        let apc = build_apc(&fixtures::s2xs2_swap()).unwrap();
        let gs = g_signature(&apc).unwrap();
        assert!(gs.passed(), "{gs:?}");
        assert!(gs.exact);
        assert_eq!(gs.total, SignatureTriple::new(1, 1, 0));
        assert_eq!(gs.per_irrep[0].signature, SignatureTriple::new(1, 0, 0));
        assert_eq!(gs.per_irrep[1].signature, SignatureTriple::new(0, 1, 0));
    }

    #[test]
    fn trivial_group_collapses_to_signature() {
        let apc = build_apc(&fixtures::cp2_9()).unwrap();
        let gs = g_signature(&apc).unwrap();
        assert_eq!(gs.per_irrep.len(), 1);
        assert_eq!(gs.per_irrep[0].signature, gs.total);
    }

    #[test]
    fn orientation_reversing_group_is_rejected() {
        let apc = build_apc(&fixtures::octahedron_reflection()).unwrap();
        assert!(matches!(g_signature(&apc), Err(ApcError::OrientationReversed { element: 1 })));
    }

    #[test]
    fn quotient_homology_and_transfer() {
        let rot = quotient_signature(&fixtures::octahedron_rotation()).unwrap();
        assert_eq!(rot.betti, vec![1, 0, 1]);
        assert!(rot.passed(), "{rot:?}");
        let torus = quotient_signature(&fixtures::torus7()).unwrap();
        assert_eq!(torus.betti, vec![1, 2, 1]);
        assert!(torus.passed());
        let klein = quotient_signature(&fixtures::octahedron_klein()).unwrap();
        assert!(klein.passed());
    }

    #[test]
    fn trivial_action_quotient_keeps_signature() {
        let c = fixtures::cp2_9();
        let q = quotient_signature(&c).unwrap();
        assert_eq!(q.signature, SignatureTriple::new(1, 0, 0));
    }

    #[test]
    fn swap_quotient_matches_trivial_block() {
        let c = fixtures::s2xs2_swap();
        let q = quotient_signature(&c).unwrap();
        let gs = g_signature(&build_apc(&c).unwrap()).unwrap();
        assert!(q.passed(), "{q:?}");
        assert_eq!(q.signature, gs.per_irrep[0].signature);
    }
}
