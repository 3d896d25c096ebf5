use num_traits::Zero;
use serde::Serialize;

use super::chains::{chains, GChainComplex};
use super::cohomology::MiddleCohomology;
use super::ApcError;
use crate::complex::{ComplexError, GComplex};
use crate::exactmath::{rat, RatMatrix, Rational, DEFAULT_TOL};

/// The fundamental cycle `[M] = Σ s_σ σ` of an oriented closed pseudomanifold.
///
/// Uses the orientation carried by `c`, or propagates one if there is none.
/// Fails with the offending face when some codimension-one simplex does not
/// have exactly two cofaces or when the signs do not cancel.
pub fn fundamental_cycle(c: &GComplex) -> Result<Vec<i64>, ApcError> {
    let complex = c.complex();
    let n = complex.dim();
    if let Some(f) = complex.facets().iter().find(|f| f.len() != n + 1) {
        return Err(ApcError::NotClosed { simplex: f.clone(), cofaces: 0 });
    }
    if n == 0 {
        return Ok(c.orientation().map_or_else(|| vec![1; complex.count(0)], <[i64]>::to_vec));
    }
    let cofaces = complex.cofaces();
    if let Some(f) = cofaces.iter().position(|cf| cf.len() != 2) {
        return Err(ApcError::NotClosed {
            simplex: complex.simplices(n - 1)[f].clone(),
            cofaces: cofaces[f].len(),
        });
    }
    let signs = match c.orientation() {
        Some(s) => s.to_vec(),
        None => complex.coherent_orientation().map_err(orientation_error)?,
    };
    let mut acc = vec![0i64; complex.count(n - 1)];
    for (j, &s) in signs.iter().enumerate() {
        for (f, x) in complex.boundary_of(n, j) {
            acc[f] += s * x;
        }
    }
    if let Some(f) = acc.iter().position(|&x| x != 0) {
        // distinguish a bad sign choice from a non-orientable complex
        complex.coherent_orientation().map_err(orientation_error)?;
        return Err(ApcError::BadOrientation {
            face: complex.simplices(n - 1)[f].clone(),
        });
    }
    Ok(signs)
}

fn orientation_error(e: ComplexError) -> ApcError {
    match e {
        ComplexError::NotOrientable { face } => ApcError::NotOrientable { face },
        ComplexError::NotPseudomanifold { face, cofaces } => ApcError::NotClosed { simplex: face, cofaces },
        other => ApcError::Complex(other),
    }
}

/// Exact verdicts for the four defining properties, per degree where relevant.
#[derive(Debug, Clone, Serialize)]
pub struct ApcReport {
    /// `d_{k-1} d_k = 0`.
    pub boundary_squares_to_zero: bool,
    /// `d_k D_k + (-1)^{k+1} D_{k-1} δ_{n-k} = 0`, per `k`.
    pub chain_homotopy: Vec<bool>,
    /// `D_k = (-1)^{k(n-k)} D_{n-k}ᵀ`, per `k`.
    pub symmetry: Vec<bool>,
    /// `D_k` induces an isomorphism `H^{n-k} → H_k`, per `k`.
    pub homology_isomorphism: Vec<bool>,
    pub betti: Vec<usize>,
}

impl ApcReport {
    pub fn passed(&self) -> bool {
        self.first_failure().is_none()
    }

    /// `(property number, degree)` of the first failing identity.
    pub fn first_failure(&self) -> Option<(u8, usize)> {
        if !self.boundary_squares_to_zero {
            return Some((1, 0));
        }
        let find = |v: &[bool]| v.iter().position(|ok| !ok);
        if let Some(k) = find(&self.chain_homotopy) {
            return Some((2, k));
        }
        if let Some(k) = find(&self.symmetry) {
            return Some((3, k));
        }
        find(&self.homology_isomorphism).map(|k| (4, k))
    }
}

/// Chains, cochains and the duality maps `D_k : C^{n-k} → C_k` given by the
/// cap product with the fundamental cycle.
#[derive(Debug, Clone)]
pub struct Apc {
    complex: GComplex,
    chain: GChainComplex,
    fundamental: Vec<i64>,
    duality: Vec<RatMatrix>,
    report: ApcReport,
}

impl Apc {
    pub fn complex(&self) -> &GComplex {
        &self.complex
    }

    /// Tolerance for the complex-arithmetic parts of the equivariant signature.
    pub fn tol(&self) -> f64 {
        DEFAULT_TOL
    }

    /// Middle cohomology with its pairing and group action, computed exactly.
    pub fn middle(&self) -> MiddleCohomology {
        MiddleCohomology::exact(&self.complex, &self.fundamental)
    }

    pub fn chain(&self) -> &GChainComplex {
        &self.chain
    }

    pub fn dim(&self) -> usize {
        self.chain.dim()
    }

    /// Signs of the top simplices in the fundamental cycle.
    pub fn fundamental(&self) -> &[i64] {
        &self.fundamental
    }

    /// `D_k : C^{n-k} → C_k`.
    pub fn duality(&self, k: usize) -> &RatMatrix {
        &self.duality[k]
    }

    pub fn report(&self) -> &ApcReport {
        &self.report
    }
}

/// Cap product `C^{n-k} → C_k` with the fundamental cycle, averaged over the
/// front-face and back-face conventions.
///
/// With `σ = [v_0..v_n]` and sign `s_σ`, the front-face term sends a cochain
/// `φ` to `s_σ φ[v_0..v_{n-k}] [v_{n-k}..v_n]` and the back-face term to
/// `s_σ φ[v_k..v_n] [v_0..v_k]`. Weighting the front term by `(-1)^{k(n-k)}`
/// makes the average exactly satisfy both the homotopy and symmetry identities.
pub fn cap_matrix(c: &GComplex, fundamental: &[i64], k: usize) -> RatMatrix {
    let complex = c.complex();
    let n = complex.dim();
    let l = n - k;
    let half = Rational::new(1.into(), 2.into());
    let front_weight = if (k * l).is_multiple_of(2) { half.clone() } else { -half.clone() };
    let mut m = RatMatrix::zeros(complex.count(k), complex.count(l));
    for (j, &s) in fundamental.iter().enumerate() {
        let sigma = &complex.simplices(n)[j];
        let s = rat(s);
        let idx = |range: std::ops::RangeInclusive<usize>| complex.index_of(&sigma[range]).expect("face of simplex");
        m.add_to(idx(l..=n), idx(0..=l), &(&s * &front_weight));
        m.add_to(idx(0..=k), idx(k..=n), &(&s * &half));
    }
    m
}

/// Build the duality maps and verify all four properties exactly.
pub fn build_apc(c: &GComplex) -> Result<Apc, ApcError> {
    let fundamental = fundamental_cycle(c)?;
    let chain = chains(c);
    let n = chain.dim();
    let duality: Vec<RatMatrix> = (0..=n).map(|k| cap_matrix(c, &fundamental, k)).collect();
    let d: Vec<RatMatrix> = (0..=n).map(|k| chain.boundary_matrix(k)).collect();
    let delta: Vec<RatMatrix> = (0..=n).map(|k| chain.coboundary_matrix(k)).collect();

    let chain_homotopy = (0..=n)
        .map(|k| {
            if k == 0 {
                return true;
            }
            // d_k D_k : C^{n-k} → C_{k-1};  D_{k-1} δ_{n-k} : C^{n-k} → C_{k-1}
            let lhs = &d[k] * &duality[k];
            let rhs = &duality[k - 1] * &delta[n - k];
            let sign = if (k + 1) % 2 == 0 { rat(1) } else { rat(-1) };
            (&lhs + &rhs.scale(&sign)).is_zero()
        })
        .collect();
    let symmetry = (0..=n)
        .map(|k| {
            let sign = if (k * (n - k)).is_multiple_of(2) { rat(1) } else { rat(-1) };
            duality[k] == duality[n - k].transpose().scale(&sign)
        })
        .collect();
    let betti = chain.betti_numbers();
    let homology_isomorphism = (0..=n)
        .map(|k| {
            // cocycles of degree n-k
            let cocycles = delta[n - k].kernel();
            let cohomology_dim = cocycles.len() - delta_rank(&delta, n - k);
            if cohomology_dim != betti[k] {
                return false;
            }
            let images: Vec<Vec<Rational>> = cocycles.iter().map(|z| duality[k].mul_vec(z)).collect();
            // images must be cycles and span the cycles modulo boundaries
            let cycles_dim = chain.rank(k) - d[k].rank();
            let lands_in_cycles = k == 0 || images.iter().all(|v| d[k].mul_vec(v).iter().all(Zero::is_zero));
            let spanned = if images.is_empty() {
                d.get(k + 1).map_or(0, RatMatrix::rank)
            } else {
                let image_matrix = RatMatrix::from_columns(chain.rank(k), &images);
                match d.get(k + 1) {
                    Some(next) => image_matrix.hstack(next).rank(),
                    None => image_matrix.rank(),
                }
            };
            lands_in_cycles && spanned == cycles_dim
        })
        .collect();
    let report = ApcReport {
        boundary_squares_to_zero: chain.boundary_squares_to_zero(),
        chain_homotopy,
        symmetry,
        homology_isomorphism,
        betti,
    };
    if let Some((property, degree)) = report.first_failure() {
        return Err(ApcError::PropertyFailure { property, degree });
    }
    Ok(Apc {
        complex: c.clone(),
        chain,
        fundamental,
        duality,
        report,
    })
}

/// Rank of `δ_{k-1}` (the coboundaries in degree `k`).
fn delta_rank(delta: &[RatMatrix], k: usize) -> usize {
    if k == 0 {
        0
    } else {
        delta[k - 1].rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{fixtures, SimplicialComplex};
    use crate::groups::cyclic;

    #[test]
    fn point_duality_is_identity() {
        let apc = build_apc(&fixtures::point()).unwrap();
        assert_eq!(apc.duality(0), &RatMatrix::identity(1));
    }

    #[test]
    fn tetrahedron_boundary_cycle_and_duality() {
        let c = fixtures::boundary_simplex(3);
        let z = fundamental_cycle(&c).unwrap();
        assert_eq!(z.len(), 4);
        assert_eq!(z.iter().map(|s| s.abs()).sum::<i64>(), 4);
        let apc = build_apc(&c).unwrap();
        assert!(apc.report().passed());
        assert_eq!(apc.report().betti, vec![1, 0, 1]);
    }

    #[test]
    fn octahedron_and_torus_satisfy_all_properties() {
        for c in [fixtures::octahedron_rotation(), fixtures::torus7(), fixtures::boundary_simplex(5)] {
            let apc = build_apc(&c).unwrap();
            assert!(apc.report().passed(), "{:?}", apc.report());
        }
    }

    #[test]
    fn open_and_non_orientable_inputs_fail() {
        let disk = GComplex::trivial(SimplicialComplex::from_facets(3, &[vec![0, 1, 2]]).unwrap(), cyclic(1));
        assert!(matches!(fundamental_cycle(&disk), Err(ApcError::NotClosed { .. })));
        let rp2 = GComplex::trivial(fixtures::projective_plane6(), cyclic(1));
        assert!(matches!(fundamental_cycle(&rp2), Err(ApcError::NotOrientable { .. })));
    }

    #[test]
    fn inconsistent_signs_are_caught() {
        let c = fixtures::boundary_simplex(3);
        let mut signs = c.orientation().unwrap().to_vec();
        signs[0] = -signs[0];
        let bad = c.with_orientation(signs).unwrap();
        assert!(matches!(fundamental_cycle(&bad), Err(ApcError::BadOrientation { .. })));
    }
}
