//! Exhaustive checks of the canonical model and of the intertwiner solver
//! over a list of groups.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exactmath::CxMatrix;
use crate::groups::{FiniteGroup, HSection, Subgroup};
use crate::model::{automorphism_from, lift_report, model_isomorphism, CanonicalModel, ModelError, Violation};
use crate::reps::{conjugate_rep, intertwiner, irreps, RepError, UnitaryRep};

/// Results of the model checks for one `(G, H, ρ, f)`.
#[derive(Debug, Clone, Serialize)]
pub struct ModelCheck {
    pub group: String,
    pub subgroup: Vec<usize>,
    pub rep: String,
    pub f_dim: usize,
    pub cosets: usize,
    pub triples_checked: usize,
    pub representatives_checked: usize,
    pub action_violations: Vec<Violation>,
    /// Largest-element transversal compared against the model's own.
    pub second_transversal: Vec<usize>,
    pub transversal_deviation: f64,
    /// `|B - B'|` for a seeded random `B` and the factor recovered from `B ⊗ id`.
    pub kernel_deviation: f64,
    /// Products `A_a · A_{a⁻¹}` that factor as `B ⊗ id`, out of those formed.
    pub kernel_products: (usize, usize),
    pub commutation_deviation: f64,
    pub liftable: Vec<bool>,
    /// Liftability predicted by comparing characters of `ρ` and its conjugates.
    pub character_oracle: Vec<bool>,
    pub surjective: bool,
    pub tol: f64,
}

impl ModelCheck {
    pub fn passed(&self) -> bool {
        self.action_violations.is_empty()
            && self.transversal_deviation <= self.tol
            && self.kernel_deviation <= self.tol
            && self.kernel_products.0 == self.kernel_products.1
            && self.commutation_deviation <= self.tol
            && self.liftable == self.character_oracle
            && self.surjective == self.liftable.iter().all(|&b| b)
    }
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> CxMatrix {
    loop {
        let rows = (0..n)
            .map(|_| (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
            .collect();
        let m = CxMatrix::from_rows(rows);
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// The transversal taking the largest element of every coset except the
/// identity coset.
pub fn largest_transversal(group: &FiniteGroup, subgroup: &Subgroup) -> Vec<usize> {
    subgroup
        .left_cosets(group)
        .iter()
        .enumerate()
        .map(|(i, coset)| if i == 0 { 0 } else { *coset.iter().max().expect("nonempty coset") })
        .collect()
}

/// Run every model check on a built model. `seed` drives the random fiber factors.
pub fn check_model(model: &CanonicalModel, seed: u64) -> Result<ModelCheck, ModelError> {
    let tol = model.tol();
    let group = model.group();
    let subgroup = model.subgroup();
    let action = model.verify_action();

    let second_transversal = largest_transversal(group, subgroup);
    let section = HSection::new(group, subgroup, Some(&second_transversal))?;
    let other = CanonicalModel::build_unchecked(group, &section, model.rho(), model.f_dim())?;
    let iso = model_isomorphism(model, &other)?;
    let transversal_deviation = iso.representative_deviation.max(iso.square_deviation);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = model.f_dim();
    let b = random_invertible(&mut rng, f);
    let kernel = automorphism_from(model, 0, &b)?;
    let kernel_deviation = kernel.kernel_witness(model)?.distance(&b);
    let mut commutation_deviation = kernel.commutation_deviation(model).0;

    let lift = lift_report(model)?;
    let embedded = model.embedded_subgroup();
    let character_oracle = (0..model.coset_count())
        .map(|a| {
            let conj = conjugate_rep(model.rho(), embedded, group, model.section().rep(a), None)?;
            Ok(model.rho().characters_match(&conj))
        })
        .collect::<Result<Vec<bool>, RepError>>()?;

    let quotient = &model.quotient().group;
    let mut formed = 0;
    let mut factored = 0;
    for a in lift.image.iter().copied() {
        let there = automorphism_from(model, a, &random_invertible(&mut rng, f))?;
        let back = automorphism_from(model, quotient.inv(a), &random_invertible(&mut rng, f))?;
        commutation_deviation = commutation_deviation.max(there.commutation_deviation(model).0);
        let product = there.then(&back, model);
        formed += 1;
        if product.kernel_witness(model).is_ok() {
            factored += 1;
        }
    }

    Ok(ModelCheck {
        group: group.name().to_string(),
        subgroup: subgroup.elements().to_vec(),
        rep: model.rho().name().to_string(),
        f_dim: f,
        cosets: model.coset_count(),
        triples_checked: action.triples_checked,
        representatives_checked: action.representatives_checked,
        action_violations: action.violations,
        second_transversal,
        transversal_deviation,
        kernel_deviation,
        kernel_products: (factored, formed),
        commutation_deviation,
        liftable: lift.liftable,
        character_oracle,
        surjective: lift.surjective,
        tol,
    })
}

/// Model checks for every normal subgroup of every group and every
/// irreducible representation of the subgroup, with fiber factor dimension 2.
pub fn model_suite(groups: &[FiniteGroup], tol: f64, seed: u64) -> Result<Vec<ModelCheck>, ModelError> {
    let mut out = Vec::new();
    for (gi, group) in groups.iter().enumerate() {
        for (hi, h) in group.normal_subgroups().iter().enumerate() {
            let local = h.to_group(group).group;
            for rho in irreps(&local)? {
                let rho = rho.with_tol(tol);
                let section = HSection::new(group, h, None)?;
                let model = CanonicalModel::build_unchecked(group, &section, &rho, 2)?;
                let seed = seed ^ ((gi as u64) << 32) ^ ((hi as u64) << 16) ^ out.len() as u64;
                out.push(check_model(&model, seed)?);
            }
        }
    }
    Ok(out)
}

/// One intertwiner problem between two representations of the same group.
#[derive(Debug, Clone, Serialize)]
pub struct IntertwinerCheck {
    pub group: String,
    pub source: String,
    pub target: String,
    pub characters_match: bool,
    pub found: bool,
    pub residual: Option<f64>,
    pub unitary: Option<bool>,
    pub tol: f64,
}

impl IntertwinerCheck {
    pub fn passed(&self) -> bool {
        self.characters_match == self.found
            && self.residual.is_none_or(|r| r <= self.tol)
            && self.unitary.unwrap_or(true)
    }
}

fn intertwiner_check(group: &FiniteGroup, rho: &UnitaryRep, sigma: &UnitaryRep, tol: f64) -> Result<IntertwinerCheck, RepError> {
    let found = intertwiner(rho, sigma)?;
    Ok(IntertwinerCheck {
        group: group.name().to_string(),
        source: rho.name().to_string(),
        target: sigma.name().to_string(),
        characters_match: rho.characters_match(sigma),
        found: found.is_some(),
        residual: found.as_ref().map(|c| c.residual(rho, sigma)),
        unitary: found.as_ref().map(|c| c.matrix.clone().with_tol(tol).is_unitary()),
        tol,
    })
}

/// Every ordered pair of irreducible representations of every group, plus
/// each irreducible representation of each normal subgroup against all of
/// its conjugates.
pub fn intertwiner_suite(groups: &[FiniteGroup], tol: f64) -> Result<Vec<IntertwinerCheck>, RepError> {
    let mut out = Vec::new();
    for group in groups {
        let reps: Vec<UnitaryRep> = irreps(group)?.into_iter().map(|r| r.with_tol(tol)).collect();
        for rho in &reps {
            for sigma in &reps {
                out.push(intertwiner_check(group, rho, sigma, tol)?);
            }
        }
        for h in group.normal_subgroups() {
            let emb = h.to_group(group);
            for rho in irreps(&emb.group)? {
                let rho = rho.with_tol(tol);
                for g in group.elements() {
                    let conj = conjugate_rep(&rho, &emb, group, g, None)?;
                    out.push(intertwiner_check(group, &rho, &conj, tol)?);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, dicyclic, dihedral};
    use crate::reps::linear_characters;

    #[test]
    fn sign_character_of_rotations_does_not_lift() {
        let s3 = dihedral(3);
        let a3 = Subgroup::generated(&s3, &[1]);
        let rho = linear_characters(&a3.to_group(&s3).group).remove(1);
        let section = HSection::new(&s3, &a3, None).unwrap();
        let model = CanonicalModel::build(&s3, &section, &rho, 2).unwrap();
        let check = check_model(&model, 7).unwrap();
        assert!(check.passed(), "{check:?}");
        assert!(!check.surjective);
        assert_eq!(check.liftable, vec![true, false]);
    }

    #[test]
    fn suite_passes_on_small_groups() {
        let checks = model_suite(&[cyclic(4), dihedral(4), dicyclic(2)], 1e-9, 1).unwrap();
        assert!(!checks.is_empty());
        for c in &checks {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn intertwiners_exist_exactly_for_equal_characters() {
        let checks = intertwiner_suite(&[dihedral(3), dicyclic(2)], 1e-9).unwrap();
        assert!(checks.iter().all(IntertwinerCheck::passed));
        assert!(checks.iter().any(|c| !c.found));
    }
}
