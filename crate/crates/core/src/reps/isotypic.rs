use num_complex::Complex64;

use super::{RepError, UnitaryRep};
use crate::exactmath::{orthonormalize, CxMatrix};

/// Splitting of a representation into isotypic blocks `I_{m_k} ⊗ ρ_k`.
///
/// Columns of `unitary` are grouped by irrep `k`, then by copy `j < m_k`,
/// then by basis index `i < dim ρ_k`, so `Uᴴ ρ(h) U = ⊕_k I_{m_k} ⊗ ρ_k(h)`.
#[derive(Debug, Clone)]
pub struct IsotypicDecomposition {
    pub multiplicities: Vec<usize>,
    pub dims: Vec<usize>,
    pub unitary: CxMatrix,
}

impl IsotypicDecomposition {
    /// Column offset of the block belonging to irrep `k`.
    pub fn offset(&self, k: usize) -> usize {
        (0..k).map(|i| self.multiplicities[i] * self.dims[i]).sum()
    }

    /// Columns spanning the `k`-isotypic component.
    pub fn component(&self, k: usize) -> CxMatrix {
        let width = self.multiplicities[k] * self.dims[k];
        self.unitary.block(0, self.offset(k), self.unitary.rows(), width)
    }

    /// Largest deviation of `Uᴴ ρ(h) U` from the block-diagonal model.
    pub fn residual(&self, total: &UnitaryRep, irreps: &[UnitaryRep]) -> f64 {
        total
            .group()
            .elements()
            .map(|h| {
                let blocks: Vec<CxMatrix> = irreps
                    .iter()
                    .zip(&self.multiplicities)
                    .filter(|(_, &m)| m > 0)
                    .map(|(r, &m)| CxMatrix::identity(m).kron(r.matrix(h)))
                    .collect();
                let model = CxMatrix::block_diag(&blocks);
                let conj = &(&self.unitary.adjoint() * total.matrix(h)) * &self.unitary;
                conj.distance(&model)
            })
            .fold(0.0, f64::max)
    }
}

/// Multiplicities from characters, basis from the projection operators
/// `P^k_{ij} = (d_k/|H|) Σ_h conj(ρ_k(h)_{ij}) ρ(h)`.
pub fn isotypic_decompose(total: &UnitaryRep, irreps: &[UnitaryRep]) -> Result<IsotypicDecomposition, RepError> {
    let order = total.group().order() as f64;
    let tol = total.tol().max(1e-7);
    let mut multiplicities = Vec::with_capacity(irreps.len());
    for r in irreps {
        if r.group() != total.group() {
            return Err(RepError::GroupMismatch);
        }
        let ip = r.inner_product(total);
        let m = ip.re.round();
        if (ip.re - m).abs() > tol || ip.im.abs() > tol || m < 0.0 {
            return Err(RepError::CharacterNormNotIntegral { value: ip.re });
        }
        multiplicities.push(m as usize);
    }
    let covered: usize = irreps.iter().zip(&multiplicities).map(|(r, &m)| r.dim() * m).sum();
    if covered != total.dim() {
        return Err(RepError::IncompleteIrrepList { covered, dim: total.dim() });
    }
    let n = total.dim();
    let projector = |r: &UnitaryRep, i: usize, j: usize| -> CxMatrix {
        let mut p = CxMatrix::zeros(n, n);
        for h in total.group().elements() {
            let coeff = r.matrix(h).get(i, j).conj() * (r.dim() as f64 / order);
            p = &p + &total.matrix(h).scale(coeff);
        }
        p
    };
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for (r, &m) in irreps.iter().zip(&multiplicities) {
        if m == 0 {
            continue;
        }
        let p11 = projector(r, 0, 0);
        let image: Vec<Vec<Complex64>> = (0..n).map(|c| p11.column(c)).collect();
        let seeds = orthonormalize(&image, 1e-6);
        if seeds.len() != m {
            return Err(RepError::IncompleteIrrepList { covered: seeds.len() * r.dim(), dim: m * r.dim() });
        }
        let transfers: Vec<CxMatrix> = (0..r.dim()).map(|i| projector(r, i, 0)).collect();
        for seed in &seeds {
            for t in &transfers {
                columns.push(t.mul_vec(seed));
            }
        }
    }
    let dims = irreps.iter().map(UnitaryRep::dim).collect();
    let unitary = CxMatrix::from_columns(n, &columns).with_tol(total.tol());
    Ok(IsotypicDecomposition { multiplicities, dims, unitary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, dihedral};
    use crate::reps::irreps;

    #[test]
    fn regular_rep_of_z3() {
        let z3 = cyclic(3);
        let list = irreps(&z3).unwrap();
        let reg = UnitaryRep::regular(&z3);
        let d = isotypic_decompose(&reg, &list).unwrap();
        assert_eq!(d.multiplicities, vec![1, 1, 1]);
        assert!(d.unitary.is_unitary());
        assert!(d.residual(&reg, &list) < 1e-9);
    }

    #[test]
    fn regular_rep_of_s3() {
        let s3 = dihedral(3);
        let list = irreps(&s3).unwrap();
        let reg = UnitaryRep::regular(&s3);
        let d = isotypic_decompose(&reg, &list).unwrap();
        let by_dim: Vec<(usize, usize)> = list.iter().map(UnitaryRep::dim).zip(d.multiplicities.clone()).collect();
        assert_eq!(by_dim, vec![(1, 1), (1, 1), (2, 2)]);
        assert!(d.unitary.is_unitary());
        assert!(d.residual(&reg, &list) < 1e-9);
    }

    #[test]
    fn irreducible_input_is_one_block() {
        let s3 = dihedral(3);
        let list = irreps(&s3).unwrap();
        let d = isotypic_decompose(&list[2], &list).unwrap();
        assert_eq!(d.multiplicities, vec![0, 0, 1]);
        assert!(d.residual(&list[2], &list) < 1e-9);
    }

    #[test]
    fn missing_irrep_is_reported() {
        let s3 = dihedral(3);
        let list = irreps(&s3).unwrap();
        let reg = UnitaryRep::regular(&s3);
        assert!(matches!(
            isotypic_decompose(&reg, &list[..2]),
            Err(RepError::IncompleteIrrepList { .. })
        ));
    }
}
