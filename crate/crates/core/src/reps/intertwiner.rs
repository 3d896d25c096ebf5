use num_complex::Complex64;

use super::{RepError, UnitaryRep};
use crate::exactmath::{cx_solve_homogeneous, CxMatrix};

/// A unitary `C` with `C ρ(h) = σ(h) C` for every `h`.
///
/// By Schur's lemma `C` is only determined up to a unit scalar; the phase is
/// fixed by making the first entry of non-negligible size (row-major) real
/// positive.
#[derive(Debug, Clone)]
pub struct Intertwiner {
    pub matrix: CxMatrix,
}

impl Intertwiner {
    /// Largest deviation of `C ρ(h) C⁻¹` from `σ(h)` over all elements.
    pub fn residual(&self, source: &UnitaryRep, target: &UnitaryRep) -> f64 {
        let inv = self.matrix.adjoint();
        source
            .group()
            .elements()
            .map(|h| (&(&self.matrix * source.matrix(h)) * &inv).distance(target.matrix(h)))
            .fold(0.0, f64::max)
    }
}

/// Solve `C ρ(h) = σ(h) C` on the generators of the common group.
///
/// Returns `None` when only the zero solution exists and an error when the
/// solution space is larger than one-dimensional, which cannot happen for
/// irreducible inputs.
pub fn intertwiner(rho: &UnitaryRep, sigma: &UnitaryRep) -> Result<Option<Intertwiner>, RepError> {
    if rho.group() != sigma.group() {
        return Err(RepError::GroupMismatch);
    }
    let (d, m) = (rho.dim(), sigma.dim());
    let tol = rho.tol();
    // C is m×d, vec(C) column-major: vec(Cρ) = (ρᵀ ⊗ I_m) vec C, vec(σC) = (I_d ⊗ σ) vec C
    let constraints: Vec<CxMatrix> = rho
        .group()
        .generators()
        .iter()
        .map(|&h| &rho.matrix(h).transpose().kron(&CxMatrix::identity(m)) - &CxMatrix::identity(d).kron(sigma.matrix(h)))
        .collect();
    let kernel = if constraints.is_empty() {
        // trivial group: every matrix intertwines
        (0..d * m)
            .map(|i| {
                let mut v = vec![Complex64::new(0.0, 0.0); d * m];
                v[i] = Complex64::new(1.0, 0.0);
                v
            })
            .collect()
    } else {
        cx_solve_homogeneous(&constraints, d * m, tol.max(1e-7))
    };
    match kernel.len() {
        0 => Ok(None),
        1 => {
            let c = CxMatrix::from_column_major(m, d, &kernel[0]).with_tol(tol);
            if m != d {
                return Err(RepError::SchurDimensionAnomaly { dim: 1 });
            }
            let gram = (&c.adjoint() * &c).trace().re / d as f64;
            let c = c.scale(Complex64::new(1.0 / gram.sqrt(), 0.0)).normalize_phase();
            let out = Intertwiner { matrix: c };
            debug_assert!(out.matrix.is_unitary());
            Ok(Some(out))
        }
        dim => Err(RepError::SchurDimensionAnomaly { dim }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, dihedral, Subgroup};
    use crate::reps::{conjugate_rep, irreps};

    #[test]
    fn self_intertwiner_is_identity() {
        let s3 = dihedral(3);
        for r in irreps(&s3).unwrap() {
            let c = intertwiner(&r, &r).unwrap().unwrap();
            assert!(c.matrix.is_identity(), "{:?}", c.matrix);
        }
    }

    #[test]
    fn distinct_characters_have_no_intertwiner() {
        let z3 = cyclic(3);
        let list = irreps(&z3).unwrap();
        assert!(intertwiner(&list[1], &list[2]).unwrap().is_none());
    }

    #[test]
    fn s3_irrep_and_its_conjugate() {
        let s3 = dihedral(3);
        let whole = Subgroup::whole(&s3).to_group(&s3);
        let two = irreps(&s3).unwrap().into_iter().find(|r| r.dim() == 2).unwrap();
        let conj = conjugate_rep(&two, &whole, &s3, 3, None).unwrap();
        let c = intertwiner(&two, &conj).unwrap().unwrap();
        assert!(c.matrix.is_unitary());
        assert!(c.residual(&two, &conj) < 1e-9);
    }

    #[test]
    fn reducible_input_is_an_anomaly() {
        let z2 = cyclic(2);
        let reg = crate::reps::UnitaryRep::regular(&z2);
        assert!(matches!(
            intertwiner(&reg, &reg),
            Err(RepError::SchurDimensionAnomaly { dim: 2 })
        ));
    }
}
