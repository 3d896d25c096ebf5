use super::FiniteGroup;

/// An isomorphism `a → b` as an image table, found by backtracking over
/// images of the generators of `a` with matching element orders.
pub fn find_isomorphism(a: &FiniteGroup, b: &FiniteGroup) -> Option<Vec<usize>> {
    if a.order() != b.order() {
        return None;
    }
    let gens = a.generators().to_vec();
    let mut images = Vec::with_capacity(gens.len());
    search(a, b, &gens, &mut images)
}

fn search(a: &FiniteGroup, b: &FiniteGroup, gens: &[usize], images: &mut Vec<usize>) -> Option<Vec<usize>> {
    if images.len() == gens.len() {
        return extend(a, b, gens, images);
    }
    let want = a.element_order(gens[images.len()]);
    for candidate in b.elements().filter(|&y| b.element_order(y) == want) {
        images.push(candidate);
        if let Some(map) = search(a, b, gens, images) {
            return Some(map);
        }
        images.pop();
    }
    None
}

/// Extend generator images to a bijective homomorphism, if they define one.
fn extend(a: &FiniteGroup, b: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let n = a.order();
    let mut map: Vec<Option<usize>> = vec![None; n];
    map[0] = Some(0);
    let mut queue = vec![0usize];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        let fx = map[x].expect("queued elements are mapped");
        for (&g, &img) in gens.iter().zip(images) {
            let y = a.mul(x, g);
            let fy = b.mul(fx, img);
            match map[y] {
                Some(existing) if existing != fy => return None,
                Some(_) => {}
                None => {
                    map[y] = Some(fy);
                    queue.push(y);
                }
            }
        }
        i += 1;
    }
    let map: Vec<usize> = map.into_iter().collect::<Option<_>>()?;
    let mut hit = vec![false; n];
    for &y in &map {
        if std::mem::replace(&mut hit[y], true) {
            return None;
        }
    }
    a.is_homomorphism(b, &map).then_some(map)
}

#[cfg(test)]
mod tests {
    use super::super::{alternating4, cyclic, dicyclic, dihedral, direct_product, klein_four};
    use super::*;

    #[test]
    fn finds_known_isomorphisms() {
        let s3 = dihedral(3);
        let s3_perm = FiniteGroup::from_permutations("S3", 3, &[vec![1, 2, 0], vec![0, 2, 1]]).unwrap();
        assert!(find_isomorphism(&s3_perm, &s3).is_some());
        assert!(find_isomorphism(&direct_product(&cyclic(2), &cyclic(3)), &cyclic(6)).is_some());
        assert!(find_isomorphism(&klein_four(), &dihedral(2)).is_some());
    }

    #[test]
    fn rejects_non_isomorphic_groups() {
        assert!(find_isomorphism(&dihedral(4), &dicyclic(2)).is_none());
        assert!(find_isomorphism(&cyclic(4), &klein_four()).is_none());
        assert!(find_isomorphism(&alternating4(), &dihedral(6)).is_none());
    }
}
