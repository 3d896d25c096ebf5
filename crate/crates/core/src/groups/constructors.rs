use super::FiniteGroup;

/// Cyclic group `Z/n`; element `k` is the residue `k`.
pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    let gens = if n == 1 { vec![] } else { vec![1] };
    FiniteGroup::from_checked_table(format!("Z{n}"), table, Some(gens))
}

/// Dihedral group of order `2n`; element `k + n*e` is `r^k s^e` with `s r s = r⁻¹`.
pub fn dihedral(n: usize) -> FiniteGroup {
    assert!(n >= 2);
    let order = 2 * n;
    let table = (0..order)
        .map(|x| {
            let (a, e) = (x % n, x / n);
            (0..order)
                .map(|y| {
                    let (b, f) = (y % n, y / n);
                    let k = if e == 0 { (a + b) % n } else { (a + n - b) % n };
                    k + n * ((e + f) % 2)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_checked_table(format!("D{n}"), table, Some(vec![1 % n, n]))
}

/// Dicyclic group of order `4n`; element `k + 2n*e` is `a^k x^e` with
/// `a^{2n} = 1`, `x² = a^n`, `x a x⁻¹ = a⁻¹`. `dicyclic(2)` is the quaternion group.
pub fn dicyclic(n: usize) -> FiniteGroup {
    assert!(n >= 2);
    let m = 2 * n;
    let order = 2 * m;
    let table = (0..order)
        .map(|x| {
            let (k, e) = (x % m, x / m);
            (0..order)
                .map(|y| {
                    let (l, f) = (y % m, y / m);
                    match (e, f) {
                        (0, _) => (k + l) % m + m * f,
                        (_, 0) => (k + m - l) % m + m,
                        _ => (k + m - l + n) % m,
                    }
                })
                .collect()
        })
        .collect();
    let name = if n == 2 { "Q8".to_string() } else { format!("Dic{n}") };
    FiniteGroup::from_checked_table(name, table, Some(vec![1, m]))
}

/// `A × B` with element `(a, b)` stored at index `a * |B| + b`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let (na, nb) = (a.order(), b.order());
    let table = (0..na * nb)
        .map(|x| {
            (0..na * nb)
                .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                .collect()
        })
        .collect();
    let mut gens: Vec<usize> = a.generators().iter().map(|&g| g * nb).collect();
    gens.extend(b.generators().iter().copied());
    FiniteGroup::from_checked_table(format!("{}x{}", a.name(), b.name()), table, Some(gens))
}

pub fn klein_four() -> FiniteGroup {
    direct_product(&cyclic(2), &cyclic(2)).with_name("V4")
}

/// Alternating group on four points, generated by `(0 1 2)` and `(0 1)(2 3)`.
pub fn alternating4() -> FiniteGroup {
    FiniteGroup::from_permutations("A4", 4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])
        .expect("valid permutations")
}

/// Symmetric group on four points, generated by `(0 1 2 3)` and `(0 1)`.
pub fn symmetric4() -> FiniteGroup {
    FiniteGroup::from_permutations("S4", 4, &[vec![1, 2, 3, 0], vec![1, 0, 2, 3]])
        .expect("valid permutations")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_group(g: &FiniteGroup) {
        FiniteGroup::from_table(g.name(), g.table().to_vec()).expect("group axioms");
        assert_eq!(g.closure(g.generators()).len(), g.order());
    }

    #[test]
    fn constructors_satisfy_axioms() {
        for g in [
            cyclic(1),
            cyclic(6),
            dihedral(2),
            dihedral(3),
            dihedral(4),
            dicyclic(2),
            dicyclic(3),
            dicyclic(4),
            klein_four(),
            alternating4(),
            symmetric4(),
            direct_product(&dihedral(3), &cyclic(2)),
        ] {
            assert_group(&g);
        }
    }

    #[test]
    fn quaternion_has_single_involution() {
        let q = dicyclic(2);
        let involutions = q.elements().filter(|&g| q.element_order(g) == 2).count();
        assert_eq!(involutions, 1);
        assert_eq!(q.conjugacy_classes().len(), 5);
    }

    #[test]
    fn dihedral_relations() {
        let d = dihedral(4);
        let (r, s) = (1, 4);
        assert_eq!(d.element_order(r), 4);
        assert_eq!(d.element_order(s), 2);
        assert_eq!(d.mul(d.mul(s, r), s), d.inv(r));
    }
}
