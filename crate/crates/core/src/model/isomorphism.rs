use super::{CanonicalModel, FiberMap, ModelError};

/// The fiberwise map `ψ([g]) = id ⊗ ρ(u′(g) u(g)⁻¹)` between two models that
/// differ only in their section, with its verification results.
#[derive(Debug, Clone)]
pub struct ModelIsomorphism {
    pub map: FiberMap,
    /// Largest deviation of `ψ` across representatives of a coset.
    pub representative_deviation: f64,
    /// Largest deviation in `ψ([g₁g]) φ([g], g₁) = φ′([g], g₁) ψ([g])`.
    pub square_deviation: f64,
}

impl ModelIsomorphism {
    pub fn passed(&self, tol: f64) -> bool {
        self.representative_deviation <= tol && self.square_deviation <= tol
    }
}

pub fn model_isomorphism(m: &CanonicalModel, other: &CanonicalModel) -> Result<ModelIsomorphism, ModelError> {
    if m.group() != other.group() {
        return Err(ModelError::SectionMismatch("group".into()));
    }
    if m.subgroup() != other.subgroup() {
        return Err(ModelError::SectionMismatch("subgroup".into()));
    }
    if m.f_dim() != other.f_dim() {
        return Err(ModelError::SectionMismatch("fiber factor dimension".into()));
    }
    let same_rho = m.rho().group() == other.rho().group()
        && m
            .rho()
            .matrices()
            .iter()
            .zip(other.rho().matrices())
            .all(|(a, b)| a.distance(b) <= m.tol());
    if !same_rho {
        return Err(ModelError::SectionMismatch("representation".into()));
    }
    let g = m.group();
    let (s, s2) = (m.section(), other.section());
    let psi_at = |x: usize| m.lift(g.mul(s2.u(x), g.inv(s.u(x))));
    let mut representative_deviation: f64 = 0.0;
    let mut blocks = Vec::with_capacity(m.coset_count());
    for coset in s.cosets() {
        let base = psi_at(coset[0]);
        for &x in &coset[1..] {
            representative_deviation = representative_deviation.max(psi_at(x).distance(&base));
        }
        blocks.push(base);
    }
    let map = FiberMap {
        targets: (0..m.coset_count()).collect(),
        blocks,
    };
    let mut square_deviation: f64 = 0.0;
    for g1 in g.elements() {
        let lhs = m.action_map(g1).then(&map);
        let rhs = map.then(&other.action_map(g1));
        square_deviation = square_deviation.max(lhs.distance(&rhs));
    }
    Ok(ModelIsomorphism {
        map,
        representative_deviation,
        square_deviation,
    })
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::groups::{cyclic, HSection, Subgroup};
    use crate::reps::irreps;

    #[test]
    fn z4_transversal_change() {
        let z4 = cyclic(4);
        let h = Subgroup::new(&z4, &[0, 2]).unwrap();
        let sign = irreps(&h.to_group(&z4).group).unwrap().remove(1);
        let s1 = HSection::new(&z4, &h, Some(&[0, 1])).unwrap();
        let s2 = HSection::new(&z4, &h, Some(&[0, 3])).unwrap();
        let m1 = CanonicalModel::build(&z4, &s1, &sign, 1).unwrap();
        let m2 = CanonicalModel::build(&z4, &s2, &sign, 1).unwrap();
        let iso = model_isomorphism(&m1, &m2).unwrap();
        assert!(iso.passed(1e-9));
        assert!((iso.map.blocks[1].get(0, 0) - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!(iso.map.blocks[0].is_identity());
        let same = model_isomorphism(&m1, &m1).unwrap();
        assert!(same.map.blocks.iter().all(|b| b.is_identity()));
    }

    #[test]
    fn mismatched_fiber_dimension() {
        let z4 = cyclic(4);
        let h = Subgroup::new(&z4, &[0, 2]).unwrap();
        let sign = irreps(&h.to_group(&z4).group).unwrap().remove(1);
        let s = HSection::new(&z4, &h, None).unwrap();
        let m1 = CanonicalModel::build(&z4, &s, &sign, 1).unwrap();
        let m2 = CanonicalModel::build(&z4, &s, &sign, 2).unwrap();
        assert!(matches!(model_isomorphism(&m1, &m2), Err(ModelError::SectionMismatch(_))));
    }
}
