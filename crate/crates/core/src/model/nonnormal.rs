use serde::Serialize;

use super::{CanonicalModel, EquivariantAutomorphism, FiberMap, ModelError};
use crate::exactmath::CxMatrix;
use crate::groups::{EmbeddedGroup, FiniteGroup, HSection, Subgroup};
use crate::reps::UnitaryRep;

/// One component `X(ρ_g)` of the orbit model, living over `N(gHg⁻¹)`.
#[derive(Debug, Clone)]
pub struct Component {
    /// The class representative `g`.
    pub representative: usize,
    /// `gHg⁻¹` as a subgroup of the ambient group.
    pub conjugate: Subgroup,
    /// `N(gHg⁻¹)` with local indexing.
    pub normalizer: EmbeddedGroup,
    /// Canonical model of `N(gHg⁻¹)` over `gHg⁻¹` with `ρ_g` and the conjugated section.
    pub model: CanonicalModel,
}

/// `GX(ρ) = ⊔_{[g] ∈ G/N(H)} X(ρ_g)` for an arbitrary subgroup `H`.
///
/// The action of `x` on component `c` factors as `x g_c = g_{c'} n` with
/// `n ∈ N(H)`, and acts by `s_{g_{c'}} ∘ φ(n) ∘ s_{g_c}⁻¹` through the first
/// component.
#[derive(Debug, Clone)]
pub struct NonNormalModel {
    group: FiniteGroup,
    normalizer: Subgroup,
    class_of: Vec<usize>,
    components: Vec<Component>,
    offsets: Vec<usize>,
    tol: f64,
}

/// Outcome of the orbit-model checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonNormalReport {
    pub components: usize,
    pub homomorphism_deviation: f64,
    pub normalizer_stabilizes_first: bool,
    pub transitive: bool,
    pub fixed_set_identity: bool,
    pub component_deviation: f64,
}

impl NonNormalReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.homomorphism_deviation <= tol
            && self.normalizer_stabilizes_first
            && self.transitive
            && self.fixed_set_identity
            && self.component_deviation <= tol
    }
}

impl NonNormalModel {
    /// `rho` is a representation of `subgroup.to_group(group).group`.
    pub fn build(group: &FiniteGroup, subgroup: &Subgroup, rho: &UnitaryRep, f_dim: usize) -> Result<Self, ModelError> {
        let h_emb = subgroup.to_group(group);
        if rho.group() != &h_emb.group {
            return Err(ModelError::RepOnWrongGroup);
        }
        let normalizer = subgroup.normalizer(group);
        let classes = normalizer.left_cosets(group);
        let mut class_of = vec![0; group.order()];
        for (c, coset) in classes.iter().enumerate() {
            for &g in coset {
                class_of[g] = c;
            }
        }
        let base_section_reps: Vec<usize> = {
            let n_emb = normalizer.to_group(group);
            let h_local = local_subgroup(&n_emb, subgroup)?;
            let s = HSection::new(&n_emb.group, &h_local, None)?;
            s.reps().iter().map(|&r| n_emb.parent(r)).collect()
        };
        let mut components = Vec::with_capacity(classes.len());
        for coset in &classes {
            let gc = coset[0];
            let gc_inv = group.inv(gc);
            let conjugate = subgroup.conjugate(group, gc);
            let n_emb = normalizer.conjugate(group, gc).to_group(group);
            let h_local = local_subgroup(&n_emb, &conjugate)?;
            let transversal: Vec<usize> = base_section_reps
                .iter()
                .map(|&r| n_emb.local(group.conj(gc, r)).expect("conjugate lies in the normalizer"))
                .collect();
            let section = HSection::new(&n_emb.group, &h_local, Some(&transversal))?;
            let h_local_emb = h_local.to_group(&n_emb.group);
            let matrices = h_local_emb
                .to_parent
                .iter()
                .map(|&i| {
                    let k = n_emb.parent(i);
                    let back = group.mul(group.mul(gc_inv, k), gc);
                    rho.matrix(h_emb.local(back).expect("conjugation lands in H")).clone()
                })
                .collect();
            let rho_c = UnitaryRep::new(format!("{}^{}", rho.name(), gc), &h_local_emb.group, matrices, rho.tol())?;
            let model = CanonicalModel::build(&n_emb.group, &section, &rho_c, f_dim)?;
            components.push(Component {
                representative: gc,
                conjugate,
                normalizer: n_emb,
                model,
            });
        }
        let mut offsets = Vec::with_capacity(components.len());
        let mut total = 0;
        for c in &components {
            offsets.push(total);
            total += c.model.coset_count();
        }
        Ok(NonNormalModel {
            group: group.clone(),
            normalizer,
            class_of,
            components,
            offsets,
            tol: rho.tol(),
        })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn normalizer(&self) -> &Subgroup {
        &self.normalizer
    }

    pub fn point_count(&self) -> usize {
        self.offsets.last().map_or(0, |&o| o) + self.components.last().map_or(0, |c| c.model.coset_count())
    }

    /// Component index and coset within it for a global point.
    pub fn locate(&self, point: usize) -> (usize, usize) {
        let c = self.offsets.partition_point(|&o| o <= point) - 1;
        (c, point - self.offsets[c])
    }

    /// Ambient element representing the base point `(c, k)`.
    fn base_element(&self, c: usize, k: usize) -> usize {
        let comp = &self.components[c];
        comp.normalizer.parent(comp.model.section().rep(k))
    }

    /// Coset of component `c` containing the ambient element `x ∈ N_c`.
    fn coset_in(&self, c: usize, x: usize) -> usize {
        let comp = &self.components[c];
        comp.model.section().coset_of(comp.normalizer.local(x).expect("element of the component normalizer"))
    }

    /// The action of `x` on all of `GX(ρ)`.
    pub fn action_map(&self, x: usize) -> FiberMap {
        let g = &self.group;
        let first = &self.components[0];
        let mut targets = Vec::with_capacity(self.point_count());
        let mut blocks = Vec::with_capacity(self.point_count());
        for (c, comp) in self.components.iter().enumerate() {
            let gc = comp.representative;
            let xc = g.mul(x, gc);
            let c2 = self.class_of[xc];
            let gc2 = self.components[c2].representative;
            let n = g.mul(g.inv(gc2), xc);
            let n_local = first.normalizer.local(n).expect("factor lies in the normalizer");
            for k in 0..comp.model.coset_count() {
                let m = g.conj(g.inv(gc), self.base_element(c, k));
                let entry = first.model.phi(self.coset_in(0, m), n_local);
                let m2 = self.base_element(0, entry.target);
                let k2 = self.coset_in(c2, g.conj(gc2, m2));
                targets.push(self.offsets[c2] + k2);
                blocks.push(entry.matrix.clone());
            }
        }
        FiberMap { targets, blocks }
    }

    pub fn verify(&self) -> NonNormalReport {
        let g = &self.group;
        let maps: Vec<FiberMap> = g.elements().map(|x| self.action_map(x)).collect();
        let mut homomorphism_deviation: f64 = 0.0;
        for x1 in g.elements() {
            for x2 in g.elements() {
                let lhs = maps[x1].then(&maps[x2]);
                homomorphism_deviation = homomorphism_deviation.max(lhs.distance(&maps[g.mul(x2, x1)]));
            }
        }
        let first_len = self.components[0].model.coset_count();
        let normalizer_stabilizes_first = self
            .normalizer
            .elements()
            .iter()
            .all(|&n| maps[n].targets[..first_len].iter().all(|&t| t < first_len));
        let mut reached = vec![false; self.components.len()];
        for map in &maps {
            reached[self.locate(map.targets[0]).0] = true;
        }
        let transitive = reached.iter().all(|&r| r);
        let fixed_set_identity = self.components.iter().enumerate().all(|(c, comp)| {
            (0..self.point_count()).all(|p| {
                let fixed = comp.conjugate.elements().iter().all(|&h| maps[h].targets[p] == p);
                fixed == (self.locate(p).0 == c)
            })
        });
        let mut component_deviation: f64 = 0.0;
        for (c, comp) in self.components.iter().enumerate() {
            let off = self.offsets[c];
            let len = comp.model.coset_count();
            for (local, &x) in comp.normalizer.to_parent.iter().enumerate() {
                let internal = comp.model.action_map(local);
                let global = &maps[x];
                for k in 0..len {
                    let dev = if global.targets[off + k] == off + internal.targets[k] {
                        global.blocks[off + k].distance(&internal.blocks[k])
                    } else {
                        f64::INFINITY
                    };
                    component_deviation = component_deviation.max(dev);
                }
            }
        }
        NonNormalReport {
            components: self.components.len(),
            homomorphism_deviation,
            normalizer_stabilizes_first,
            transitive,
            fixed_set_identity,
            component_deviation,
        }
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }
}

fn local_subgroup(emb: &EmbeddedGroup, sub: &Subgroup) -> Result<Subgroup, ModelError> {
    let local: Vec<usize> = sub
        .elements()
        .iter()
        .map(|&h| emb.local(h).expect("subgroup of its normalizer"))
        .collect();
    Ok(Subgroup::new(&emb.group, &local)?)
}

/// Extension of an automorphism of the first component to all of `GX(ρ)`.
#[derive(Debug, Clone)]
pub struct TransportReport {
    pub extension: FiberMap,
    /// Largest deviation of `E ∘ x = x ∘ E` over all `x`.
    pub equivariance_deviation: f64,
    /// Largest deviation between transports by different representatives of one class.
    pub representative_deviation: f64,
}

impl TransportReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.equivariance_deviation <= tol && self.representative_deviation <= tol
    }
}

/// Extend `aut` (an automorphism of the first component's model) to the whole
/// orbit model by `A_c = g_c A g_c⁻¹`, verify equivariance, and check that
/// every representative `l ∈ g_c N(H)` gives the same transport.
pub fn nonnormal_aut_iso(nn: &NonNormalModel, aut: &EquivariantAutomorphism) -> Result<TransportReport, ModelError> {
    let first = &nn.components[0].model;
    aut.verify(first)?;
    let g = &nn.group;
    let points = nn.point_count();
    let fiber = first.fiber_dim();
    let first_len = first.coset_count();
    let base = aut.to_fiber_map(first);
    let mut on_first = FiberMap::identity(points, fiber);
    for k in 0..first_len {
        on_first.targets[k] = base.targets[k];
        on_first.blocks[k] = base.blocks[k].clone();
    }
    let transport = |l: usize| nn.action_map(g.inv(l)).then(&on_first).then(&nn.action_map(l));
    let mut targets = vec![0; points];
    let mut blocks = vec![CxMatrix::zeros(fiber, fiber); points];
    let mut representative_deviation: f64 = 0.0;
    for (c, comp) in nn.components.iter().enumerate() {
        let range = nn.offsets[c]..nn.offsets[c] + comp.model.coset_count();
        let main = transport(comp.representative);
        for p in range.clone() {
            targets[p] = main.targets[p];
            blocks[p] = main.blocks[p].clone();
        }
        for l in g.elements().filter(|&l| nn.class_of[l] == c) {
            let other = transport(l);
            for p in range.clone() {
                let dev = if other.targets[p] == main.targets[p] {
                    other.blocks[p].distance(&main.blocks[p])
                } else {
                    f64::INFINITY
                };
                representative_deviation = representative_deviation.max(dev);
            }
        }
    }
    let extension = FiberMap { targets, blocks };
    let mut equivariance_deviation: f64 = 0.0;
    for x in g.elements() {
        let act = nn.action_map(x);
        equivariance_deviation = equivariance_deviation.max(extension.then(&act).distance(&act.then(&extension)));
    }
    Ok(TransportReport {
        extension,
        equivariance_deviation,
        representative_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{dihedral, Subgroup};
    use crate::model::automorphism_from;
    use crate::reps::irreps;

    fn s3_reflection() -> NonNormalModel {
        let s3 = dihedral(3);
        let h = Subgroup::generated(&s3, &[3]);
        let sign = irreps(&h.to_group(&s3).group).unwrap().remove(1);
        NonNormalModel::build(&s3, &h, &sign, 1).unwrap()
    }

    #[test]
    fn s3_reflection_has_three_components() {
        let nn = s3_reflection();
        assert_eq!(nn.components().len(), 3);
        let report = nn.verify();
        assert!(report.passed(1e-9), "{report:?}");
    }

    #[test]
    fn d4_reflection_has_two_components() {
        let d4 = dihedral(4);
        let h = Subgroup::generated(&d4, &[4]);
        let sign = irreps(&h.to_group(&d4).group).unwrap().remove(1);
        let nn = NonNormalModel::build(&d4, &h, &sign, 1).unwrap();
        assert_eq!(nn.components().len(), 2);
        assert!(nn.verify().passed(1e-9));
    }

    #[test]
    fn normal_subgroup_gives_one_component() {
        let s3 = dihedral(3);
        let a3 = Subgroup::generated(&s3, &[1]);
        let triv = irreps(&a3.to_group(&s3).group).unwrap().remove(0);
        let nn = NonNormalModel::build(&s3, &a3, &triv, 1).unwrap();
        assert_eq!(nn.components().len(), 1);
        assert!(nn.verify().passed(1e-9));
    }

    #[test]
    fn automorphisms_extend_equivariantly() {
        let nn = s3_reflection();
        let first = &nn.components()[0].model;
        let id = automorphism_from(first, 0, &CxMatrix::identity(1)).unwrap();
        let r = nonnormal_aut_iso(&nn, &id).unwrap();
        assert!(r.passed(1e-9));
        assert!(r.extension.distance(&FiberMap::identity(nn.point_count(), 1)) < 1e-12);
        let b = CxMatrix::from_real(1, 1, &[-2.0]);
        let k = automorphism_from(first, 0, &b).unwrap();
        let r = nonnormal_aut_iso(&nn, &k).unwrap();
        assert!(r.passed(1e-9));
        assert!(r.extension.blocks.iter().all(|x| x.approx_eq(&b)));
    }
}
