use std::collections::VecDeque;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::{RepError, UnitaryRep};
use crate::exactmath::{CxMatrix, DEFAULT_TOL};
use crate::groups::{alternating4, cyclic, dicyclic, dihedral, direct_product, find_isomorphism, FiniteGroup};

fn root_of_unity(k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

fn lcm(a: usize, b: usize) -> usize {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// All one-dimensional characters, trivial first, found by assigning roots of
/// unity to the generators and keeping the consistent assignments.
///
/// Values are tracked as exponents of a primitive root of order equal to the
/// group exponent, so consistency is decided exactly.
pub fn linear_characters(group: &FiniteGroup) -> Vec<UnitaryRep> {
    let exponent = group.elements().map(|g| group.element_order(g)).fold(1, lcm);
    let gens = group.generators().to_vec();
    let choices: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let step = exponent / group.element_order(g);
            (0..group.element_order(g)).map(|j| j * step).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; gens.len()];
    loop {
        let assignment: Vec<usize> = pick.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        if let Some(exps) = extend_exponents(group, &gens, &assignment, exponent) {
            let matrices = exps
                .iter()
                .map(|&e| CxMatrix::from_rows(vec![vec![root_of_unity(e, exponent)]]))
                .collect();
            let name = format!("chi{}", out.len());
            out.push(UnitaryRep::new(name, group, matrices, DEFAULT_TOL).expect("consistent character"));
        }
        // odometer over the generator choices
        let mut i = 0;
        while i < pick.len() {
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
        if i == pick.len() {
            break;
        }
    }
    out
}

fn extend_exponents(group: &FiniteGroup, gens: &[usize], assignment: &[usize], modulus: usize) -> Option<Vec<usize>> {
    let mut exps: Vec<Option<usize>> = vec![None; group.order()];
    exps[0] = Some(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let ex = exps[x].expect("visited");
        for (&g, &a) in gens.iter().zip(assignment) {
            let y = group.mul(x, g);
            let ey = (ex + a) % modulus;
            match exps[y] {
                Some(e) if e != ey => return None,
                Some(_) => {}
                None => {
                    exps[y] = Some(ey);
                    queue.push_back(y);
                }
            }
        }
    }
    let exps: Vec<usize> = exps.into_iter().collect::<Option<_>>()?;
    let hom = group
        .elements()
        .all(|a| group.elements().all(|b| exps[group.mul(a, b)] == (exps[a] + exps[b]) % modulus));
    hom.then_some(exps)
}

/// Sum-zero part of a permutation representation (the "standard" representation),
/// expressed in an orthonormal basis.
pub fn standard_rep(name: &str, group: &FiniteGroup, perms: &[Vec<usize>]) -> Result<UnitaryRep, RepError> {
    let n = perms.first().map_or(0, Vec::len);
    // orthonormal basis of the sum-zero subspace: normalised Helmert vectors
    let basis: Vec<Vec<f64>> = (1..n)
        .map(|k| {
            let scale = 1.0 / ((k * (k + 1)) as f64).sqrt();
            (0..n)
                .map(|i| match i.cmp(&k) {
                    std::cmp::Ordering::Less => scale,
                    std::cmp::Ordering::Equal => -(k as f64) * scale,
                    std::cmp::Ordering::Greater => 0.0,
                })
                .collect()
        })
        .collect();
    let matrices = perms
        .iter()
        .map(|p| {
            let mut m = CxMatrix::zeros(n - 1, n - 1);
            for (a, ba) in basis.iter().enumerate() {
                for (b, bb) in basis.iter().enumerate() {
                    // ⟨e_a, P e_b⟩ with (P v)[p[i]] = v[i]
                    let v: f64 = (0..n).map(|i| ba[p[i]] * bb[i]).sum();
                    m.set(a, b, Complex64::new(v, 0.0));
                }
            }
            m
        })
        .collect();
    UnitaryRep::new(name, group, matrices, DEFAULT_TOL)
}

fn dihedral_irreps(n: usize) -> Vec<UnitaryRep> {
    let g = dihedral(n);
    let mut out = linear_characters(&g);
    let swap = CxMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    for k in 1..n.div_ceil(2) {
        let w = root_of_unity(k, n);
        let r = CxMatrix::from_rows(vec![vec![w, Complex64::new(0.0, 0.0)], vec![Complex64::new(0.0, 0.0), w.conj()]]);
        let rep = UnitaryRep::from_generators(format!("rho{k}"), &g, &[r, swap.clone()], DEFAULT_TOL)
            .expect("dihedral irrep");
        out.push(rep);
    }
    out
}

fn dicyclic_irreps(n: usize) -> Vec<UnitaryRep> {
    let g = dicyclic(n);
    let mut out = linear_characters(&g);
    for k in 1..n {
        let z = root_of_unity(k, 2 * n);
        let zero = Complex64::new(0.0, 0.0);
        let a = CxMatrix::from_rows(vec![vec![z, zero], vec![zero, z.conj()]]);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let x = CxMatrix::from_real(2, 2, &[0.0, sign, 1.0, 0.0]);
        let rep = UnitaryRep::from_generators(format!("rho{k}"), &g, &[a, x], DEFAULT_TOL).expect("dicyclic irrep");
        out.push(rep);
    }
    out
}

fn alternating4_irreps() -> Vec<UnitaryRep> {
    let g = alternating4();
    let mut out = linear_characters(&g);
    let perms = g.permutations().expect("built from permutations").to_vec();
    out.push(standard_rep("rho3", &g, &perms).expect("standard rep of A4"));
    out
}

fn product_irreps(left: (&FiniteGroup, Vec<UnitaryRep>), right: (&FiniteGroup, Vec<UnitaryRep>)) -> (FiniteGroup, Vec<UnitaryRep>) {
    let product = direct_product(left.0, right.0);
    let mut out = Vec::new();
    for a in &left.1 {
        for b in &right.1 {
            out.push(a.outer_tensor(b, &product));
        }
    }
    out.sort_by_key(UnitaryRep::dim);
    (product, out)
}

/// Nonabelian groups whose irreducible representations are shipped, by order.
fn known_nonabelian(order: usize) -> Vec<(FiniteGroup, Vec<UnitaryRep>)> {
    let mut out = known_nonabelian_simple(order);
    // products of a small cyclic group with a dihedral, dicyclic or A4 group
    for c in [2usize, 3, 4] {
        if !order.is_multiple_of(c) {
            continue;
        }
        for (g, reps) in known_nonabelian_simple(order / c) {
            let z = cyclic(c);
            out.push(product_irreps((&z, linear_characters(&z)), (&g, reps)));
        }
    }
    out
}

fn known_nonabelian_simple(order: usize) -> Vec<(FiniteGroup, Vec<UnitaryRep>)> {
    let mut out = Vec::new();
    if order.is_multiple_of(2) && order / 2 >= 3 {
        out.push((dihedral(order / 2), dihedral_irreps(order / 2)));
    }
    if order.is_multiple_of(4) && order / 4 >= 2 {
        out.push((dicyclic(order / 4), dicyclic_irreps(order / 4)));
    }
    if order == 12 {
        out.push((alternating4(), alternating4_irreps()));
    }
    out
}

/// Complete list of irreducible unitary representations, one-dimensional first.
///
/// Abelian groups get their characters directly. Nonabelian groups are matched
/// by isomorphism against dihedral, dicyclic and `A4` groups and their products
/// with small cyclic groups, and the shipped irreps are pulled back.
pub fn irreps(group: &FiniteGroup) -> Result<Vec<UnitaryRep>, RepError> {
    let list = if group.is_abelian() {
        linear_characters(group)
    } else {
        known_nonabelian(group.order())
            .into_iter()
            .find_map(|(candidate, reps)| {
                let iso = find_isomorphism(group, &candidate)?;
                Some(reps.iter().map(|r| r.pull_back(group, &iso)).collect::<Vec<_>>())
            })
            .ok_or_else(|| RepError::NoIrrepCatalog {
                group: group.name().to_string(),
                order: group.order(),
            })?
    };
    let total: usize = list.iter().map(|r| r.dim() * r.dim()).sum();
    if total != group.order() {
        return Err(RepError::IncompleteIrrepList {
            covered: total,
            dim: group.order(),
        });
    }
    Ok(list)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{klein_four, symmetric4};

    fn check_orthogonality(list: &[UnitaryRep]) {
        for (i, a) in list.iter().enumerate() {
            for (j, b) in list.iter().enumerate() {
                let ip = a.inner_product(b);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip - Complex64::new(expect, 0.0)).norm() < 1e-9, "{i} {j} {ip}");
            }
        }
    }

    #[test]
    fn catalog_groups_have_complete_orthonormal_irreps() {
        let groups = [
            cyclic(1),
            cyclic(5),
            klein_four(),
            dihedral(3),
            dihedral(4),
            dihedral(5),
            dihedral(6),
            dihedral(8),
            dicyclic(2),
            dicyclic(3),
            dicyclic(4),
            alternating4(),
            direct_product(&cyclic(2), &dihedral(4)),
            direct_product(&cyclic(2), &dicyclic(2)),
        ];
        for g in groups {
            let list = irreps(&g).unwrap_or_else(|e| panic!("{}: {e}", g.name()));
            check_orthogonality(&list);
            assert_eq!(list.len(), g.conjugacy_classes().len());
        }
    }

    #[test]
    fn s4_is_not_in_the_catalog() {
        assert!(matches!(irreps(&symmetric4()), Err(RepError::NoIrrepCatalog { .. })));
    }

    #[test]
    fn standard_rep_of_s3_is_two_dimensional_irrep() {
        let s3 = FiniteGroup::from_permutations("S3", 3, &[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        let perms = s3.permutations().unwrap().to_vec();
        let std = standard_rep("std", &s3, &perms).unwrap();
        assert_eq!(std.dim(), 2);
        assert!(std.is_irreducible().unwrap());
    }
}
