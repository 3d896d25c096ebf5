use serde::Serialize;

use super::{CanonicalModel, FiberMap, ModelError};
use crate::exactmath::CxMatrix;
use crate::reps::{conjugate_rep, intertwiner};

/// An equivariant automorphism covering right translation by `a ∈ G₀`:
/// block `c` maps the fiber over coset `c` to the fiber over `c·a`.
///
/// Stored extensionally so that invalid candidates can be represented too.
#[derive(Debug, Clone)]
pub struct EquivariantAutomorphism {
    pub a: usize,
    pub blocks: Vec<CxMatrix>,
}

impl EquivariantAutomorphism {
    pub fn from_blocks(model: &CanonicalModel, a: usize, blocks: Vec<CxMatrix>) -> Result<Self, ModelError> {
        if a >= model.coset_count() {
            return Err(ModelError::BadCoset(a));
        }
        if blocks.len() != model.coset_count() {
            return Err(ModelError::BadCoset(blocks.len()));
        }
        let d = model.fiber_dim();
        if let Some(b) = blocks.iter().find(|b| b.rows() != d || b.cols() != d) {
            return Err(ModelError::BadBlock { rows: b.rows(), cols: b.cols(), expected: d });
        }
        Ok(EquivariantAutomorphism { a, blocks })
    }

    /// Identity coset of `G₀` for kernel elements, `a` otherwise.
    pub fn project(&self) -> usize {
        self.a
    }

    pub fn to_fiber_map(&self, model: &CanonicalModel) -> FiberMap {
        let q = &model.quotient().group;
        FiberMap {
            targets: (0..model.coset_count()).map(|c| q.mul(c, self.a)).collect(),
            blocks: self.blocks.clone(),
        }
    }

    /// Largest deviation in `φ([ga], g₁) A[g] = A[g₁g] φ([g], g₁)` and where it occurs.
    pub fn commutation_deviation(&self, model: &CanonicalModel) -> (f64, Option<(usize, usize)>) {
        let map = self.to_fiber_map(model);
        let mut worst = (0.0, None);
        for g1 in model.group().elements() {
            let act = model.action_map(g1);
            let lhs = map.then(&act);
            let rhs = act.then(&map);
            for c in 0..model.coset_count() {
                let dev = if lhs.targets[c] == rhs.targets[c] {
                    lhs.blocks[c].distance(&rhs.blocks[c])
                } else {
                    f64::INFINITY
                };
                if dev > worst.0 {
                    worst = (dev, Some((c, g1)));
                }
            }
        }
        worst
    }

    pub fn verify(&self, model: &CanonicalModel) -> Result<(), ModelError> {
        match self.commutation_deviation(model) {
            (deviation, Some((coset, g1))) if deviation > model.tol() => {
                Err(ModelError::CommutationFails { coset, g1, deviation })
            }
            _ => Ok(()),
        }
    }

    /// `self` followed by `next`; projects to `pr(self)·pr(next)`.
    pub fn then(&self, next: &EquivariantAutomorphism, model: &CanonicalModel) -> EquivariantAutomorphism {
        let q = &model.quotient().group;
        let composed = self.to_fiber_map(model).then(&next.to_fiber_map(model));
        EquivariantAutomorphism {
            a: q.mul(self.a, next.a),
            blocks: composed.blocks,
        }
    }

    /// Rebuild every block from the one over the identity coset via
    /// `A[g] = φ([a], g) A[1] φ([1], g)⁻¹`.
    pub fn reconstruct(model: &CanonicalModel, a: usize, identity_block: &CxMatrix) -> EquivariantAutomorphism {
        let blocks = (0..model.coset_count())
            .map(|c| {
                let g = model.section().rep(c);
                let forward = &model.phi(a, g).matrix;
                let back = model.phi(0, g).matrix.adjoint();
                &(forward * identity_block) * &back
            })
            .collect();
        EquivariantAutomorphism { a, blocks }
    }

    /// For a kernel element, extract `B` with `A[g] = B ⊗ id` on every coset.
    pub fn kernel_witness(&self, model: &CanonicalModel) -> Result<CxMatrix, ModelError> {
        if self.a != 0 {
            return Err(ModelError::NotInKernel { found: self.a });
        }
        let f = model.f_dim();
        let d = model.rho().dim();
        let first = &self.blocks[0];
        let mut b = CxMatrix::zeros(f, f);
        for i in 0..f {
            for j in 0..f {
                let tr = first.block(i * d, j * d, d, d).trace();
                b.set(i, j, tr / d as f64);
            }
        }
        let b = b.with_tol(model.tol());
        let model_block = b.kron(&CxMatrix::identity(d));
        for (coset, block) in self.blocks.iter().enumerate() {
            let residual = block.distance(&model_block);
            if residual > model.tol() {
                return Err(ModelError::NotPureTensor { coset, residual });
            }
        }
        Ok(b)
    }
}

/// Build the automorphism over `a ∈ G₀` with fiber factor `B`:
/// `A[g] = B ⊗ ρ(u(ga) u(a)⁻¹) C ρ(u(g))⁻¹`, where `a` is lifted to its
/// transversal representative and `C` intertwines `ρ` with its conjugate.
pub fn automorphism_from(
    model: &CanonicalModel,
    a: usize,
    b: &CxMatrix,
) -> Result<EquivariantAutomorphism, ModelError> {
    if a >= model.coset_count() {
        return Err(ModelError::BadCoset(a));
    }
    let f = model.f_dim();
    if b.rows() != f || b.cols() != f {
        return Err(ModelError::BadBlock { rows: b.rows(), cols: b.cols(), expected: f });
    }
    if b.inverse().is_none() {
        return Err(ModelError::SingularMatrix);
    }
    let c = lift_intertwiner(model, a)?.ok_or(ModelError::NotLiftable { a, rep: model.section().rep(a) })?;
    let g = model.group();
    let s = model.section();
    let a_rep = s.rep(a);
    let blocks = (0..model.coset_count())
        .map(|coset| {
            let x = s.rep(coset);
            let xa = g.mul(x, a_rep);
            let left = model.rho_at(g.mul(s.u(xa), g.inv(s.u(a_rep))));
            let right = model.rho_at(g.inv(s.u(x)));
            b.kron(&(&(left * &c) * right)).with_tol(model.tol())
        })
        .collect();
    let out = EquivariantAutomorphism { a, blocks };
    out.verify(model)?;
    Ok(out)
}

/// Intertwiner from `ρ` to `ρ_{g′(a)}`, with `g′(a)` the transversal representative.
fn lift_intertwiner(model: &CanonicalModel, a: usize) -> Result<Option<CxMatrix>, ModelError> {
    let rep = model.section().rep(a);
    let conj = conjugate_rep(model.rho(), model.embedded_subgroup(), model.group(), rep, None)?;
    Ok(intertwiner(model.rho(), &conj)?.map(|c| c.matrix))
}

/// Which elements of `G₀` lift to automorphisms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    pub liftable: Vec<bool>,
    /// Cosets whose representative conjugates `ρ` to an equivalent representation.
    pub image: Vec<usize>,
    pub image_is_subgroup: bool,
    pub surjective: bool,
}

pub fn lift_report(model: &CanonicalModel) -> Result<LiftReport, ModelError> {
    let mut liftable = Vec::with_capacity(model.coset_count());
    for a in 0..model.coset_count() {
        liftable.push(lift_intertwiner(model, a)?.is_some());
    }
    let image: Vec<usize> = (0..liftable.len()).filter(|&a| liftable[a]).collect();
    let q = &model.quotient().group;
    let image_is_subgroup = image.contains(&0)
        && image
            .iter()
            .all(|&x| image.iter().all(|&y| liftable[q.mul(x, y)]));
    let surjective = image.len() == liftable.len();
    Ok(LiftReport { liftable, image, image_is_subgroup, surjective })
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::groups::{cyclic, dihedral, Subgroup};
    use crate::model::build_model;
    use crate::reps::irreps;

    fn z4_model() -> CanonicalModel {
        let z4 = cyclic(4);
        let h = Subgroup::new(&z4, &[0, 2]).unwrap();
        let sign = irreps(&h.to_group(&z4).group).unwrap().remove(1);
        build_model(&z4, &h, &sign, 1).unwrap()
    }

    #[test]
    fn identity_coset_gives_kernel_form() {
        let m = z4_model();
        let b = CxMatrix::from_real(1, 1, &[3.0]);
        let aut = automorphism_from(&m, 0, &b).unwrap();
        assert_eq!(aut.project(), 0);
        let w = aut.kernel_witness(&m).unwrap();
        assert!(w.approx_eq(&b));
    }

    #[test]
    fn nontrivial_lift_on_z4() {
        let m = z4_model();
        let aut = automorphism_from(&m, 1, &CxMatrix::identity(1)).unwrap();
        assert_eq!(aut.project(), 1);
        for b in &aut.blocks {
            assert!((b.get(0, 0).norm() - 1.0).abs() < 1e-12);
        }
        let square = aut.then(&aut, &m);
        assert_eq!(square.project(), 0);
        square.verify(&m).unwrap();
        let rebuilt = EquivariantAutomorphism::reconstruct(&m, 1, &aut.blocks[0]);
        assert!(rebuilt.to_fiber_map(&m).distance(&aut.to_fiber_map(&m)) < 1e-12);
    }

    #[test]
    fn s3_over_a3_with_nontrivial_character_is_not_liftable() {
        let s3 = dihedral(3);
        let a3 = Subgroup::generated(&s3, &[1]);
        let omega = irreps(&a3.to_group(&s3).group).unwrap().remove(1);
        let m = build_model(&s3, &a3, &omega, 1).unwrap();
        assert!(matches!(
            automorphism_from(&m, 1, &CxMatrix::identity(1)),
            Err(ModelError::NotLiftable { a: 1, .. })
        ));
        let report = lift_report(&m).unwrap();
        assert_eq!(report.image, vec![0]);
        assert!(report.image_is_subgroup && !report.surjective);
    }

    #[test]
    fn scalar_automorphism_witness() {
        let m = z4_model();
        let lambda = Complex64::new(0.0, 2.0);
        let aut = EquivariantAutomorphism::from_blocks(&m, 0, vec![CxMatrix::scalar(1, lambda); 2]).unwrap();
        aut.verify(&m).unwrap();
        let w = aut.kernel_witness(&m).unwrap();
        assert!((w.get(0, 0) - lambda).norm() < 1e-12);
    }

    #[test]
    fn inconsistent_kernel_blocks_are_not_pure_tensors() {
        let m = z4_model();
        let blocks = vec![CxMatrix::identity(1), CxMatrix::from_real(1, 1, &[2.0])];
        let aut = EquivariantAutomorphism::from_blocks(&m, 0, blocks).unwrap();
        assert!(matches!(aut.kernel_witness(&m), Err(ModelError::NotPureTensor { coset: 1, .. })));
        assert!(aut.verify(&m).is_err());
    }
}
