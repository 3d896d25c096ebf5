use super::{FiniteGroup, GroupError, Subgroup};

/// Coset representatives for `G / H` together with the induced map `u: G → H`,
/// `u(g) = r([g])⁻¹ g`, so that `g = r([g]) u(g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HSection {
    subgroup: Subgroup,
    cosets: Vec<Vec<usize>>,
    coset_of: Vec<usize>,
    reps: Vec<usize>,
    u: Vec<usize>,
}

impl HSection {
    /// Build a section for a normal subgroup. Without an explicit transversal
    /// the smallest element of each coset is used, which is the identity for `[1]`.
    pub fn new(group: &FiniteGroup, subgroup: &Subgroup, transversal: Option<&[usize]>) -> Result<Self, GroupError> {
        if !subgroup.is_normal_in(group) {
            let (g, h) = group
                .elements()
                .flat_map(|g| subgroup.elements().iter().map(move |&h| (g, h)))
                .find(|&(g, h)| !subgroup.contains(group.conj(g, h)))
                .expect("non-normal subgroup has a witness");
            return Err(GroupError::NotNormal { g, h });
        }
        let cosets = subgroup.left_cosets(group);
        let mut coset_of = vec![0; group.order()];
        for (i, c) in cosets.iter().enumerate() {
            for &g in c {
                coset_of[g] = i;
            }
        }
        let reps = match transversal {
            None => cosets.iter().map(|c| c[0]).collect(),
            Some(t) => {
                let mut reps: Vec<Option<usize>> = vec![None; cosets.len()];
                for &r in t {
                    group.check_element(r)?;
                    let c = coset_of[r];
                    if let Some(prev) = reps[c] {
                        return Err(GroupError::BadTransversal {
                            reason: format!("{prev} and {r} lie in the same coset"),
                        });
                    }
                    reps[c] = Some(r);
                }
                if let Some(c) = reps.iter().position(Option::is_none) {
                    return Err(GroupError::BadTransversal {
                        reason: format!("coset containing {} has no representative", cosets[c][0]),
                    });
                }
                let reps: Vec<usize> = reps.into_iter().flatten().collect();
                if reps[0] != 0 {
                    return Err(GroupError::BadTransversal {
                        reason: format!("representative of the identity coset is {}, not the identity", reps[0]),
                    });
                }
                reps
            }
        };
        let u: Vec<usize> = group.elements().map(|g| group.mul(group.inv(reps[coset_of[g]]), g)).collect();
        let section = HSection {
            subgroup: subgroup.clone(),
            cosets,
            coset_of,
            reps,
            u,
        };
        debug_assert!(section.verify(group));
        Ok(section)
    }

    /// Exhaustive check of `g = r([g]) u(g)`, `u(g) ∈ H`, `u(gh) = u(g) h` and `u(1) = 1`.
    pub fn verify(&self, group: &FiniteGroup) -> bool {
        let factorises = group
            .elements()
            .all(|g| self.subgroup.contains(self.u[g]) && group.mul(self.rep_of(g), self.u[g]) == g);
        let equivariant = group.elements().all(|g| {
            self.subgroup
                .elements()
                .iter()
                .all(|&h| self.u[group.mul(g, h)] == group.mul(self.u[g], h))
        });
        factorises && equivariant && self.u[0] == 0
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn cosets(&self) -> &[Vec<usize>] {
        &self.cosets
    }

    pub fn coset_count(&self) -> usize {
        self.cosets.len()
    }

    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    /// The chosen representative of coset `c`.
    pub fn rep(&self, c: usize) -> usize {
        self.reps[c]
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    /// `r([g])`.
    pub fn rep_of(&self, g: usize) -> usize {
        self.reps[self.coset_of[g]]
    }

    /// `u(g) = r([g])⁻¹ g ∈ H`.
    pub fn u(&self, g: usize) -> usize {
        self.u[g]
    }
}

#[cfg(test)]
mod tests {
    use super::super::{cyclic, dicyclic, dihedral};
    use super::*;

    #[test]
    fn z4_mod_two() {
        let z4 = cyclic(4);
        let h = Subgroup::new(&z4, &[0, 2]).unwrap();
        let s = HSection::new(&z4, &h, Some(&[0, 1])).unwrap();
        assert_eq!(s.u(2), 2);
        assert_eq!(s.u(3), 2);
        assert_eq!(s.u(1), 0);
    }

    #[test]
    fn extreme_subgroups() {
        let g = dihedral(3);
        let whole = HSection::new(&g, &Subgroup::whole(&g), None).unwrap();
        assert!(g.elements().all(|x| whole.u(x) == x));
        let trivial = HSection::new(&g, &Subgroup::trivial(), None).unwrap();
        assert!(g.elements().all(|x| trivial.u(x) == 0));
    }

    #[test]
    fn bad_transversals() {
        let z4 = cyclic(4);
        let h = Subgroup::new(&z4, &[0, 2]).unwrap();
        for t in [&[0, 2][..], &[0][..], &[2, 1][..]] {
            assert!(matches!(
                HSection::new(&z4, &h, Some(t)),
                Err(GroupError::BadTransversal { .. })
            ));
        }
    }

    #[test]
    fn non_normal_rejected() {
        let g = dihedral(3);
        let h = Subgroup::generated(&g, &[3]);
        assert!(matches!(HSection::new(&g, &h, None), Err(GroupError::NotNormal { .. })));
    }

    #[test]
    fn every_transversal_of_q8_centre_verifies() {
        let q8 = dicyclic(2);
        let z = q8.center();
        let cosets = z.left_cosets(&q8);
        for mask in 0..8u32 {
            let t: Vec<usize> = cosets
                .iter()
                .enumerate()
                .map(|(i, c)| if i > 0 && mask & (1 << (i - 1)) != 0 { c[1] } else { c[0] })
                .collect();
            let s = HSection::new(&q8, &z, Some(&t)).unwrap();
            assert!(s.verify(&q8));
        }
    }
}
