use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Sparse integer matrix whose rank is taken over the rationals.
///
/// Boundary matrices of large subdivided complexes go through here; the
/// elimination is fraction-free with row-content normalisation, so the result
/// is exact. Arithmetic runs in `i64` and restarts in `BigInt` on overflow.
#[derive(Debug, Clone, Default)]
pub struct SparseIntMatrix {
    cols: usize,
    rows: Vec<Vec<(usize, i64)>>,
}

impl SparseIntMatrix {
    pub fn new(cols: usize) -> Self {
        SparseIntMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    /// Append a row given as `(column, value)` pairs in any order.
    pub fn push_row(&mut self, mut entries: Vec<(usize, i64)>) {
        entries.sort_unstable_by_key(|e| e.0);
        let mut merged: Vec<(usize, i64)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            assert!(c < self.cols, "column {c} out of range");
            match merged.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|e| e.1 != 0);
        self.rows.push(merged);
    }

    pub fn rank(&self) -> usize {
        let small: Vec<Vec<(usize, i64)>> = self.rows.clone();
        match eliminate(small) {
            Some(r) => r,
            None => {
                let big = self
                    .rows
                    .iter()
                    .map(|row| row.iter().map(|&(c, v)| (c, BigInt::from(v))).collect())
                    .collect();
                eliminate(big).expect("bigint elimination cannot overflow")
            }
        }
    }
}

trait Entry: Clone + PartialEq + Sized {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn gcd(&self, other: &Self) -> Self;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Self;
    fn div(&self, d: &Self) -> Self;
    fn is_one(&self) -> bool;
    /// `a * x - b * y`, `None` on overflow.
    fn combine(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
}

impl Entry for i64 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn div(&self, d: &Self) -> Self {
        self / d
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
    fn combine(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        let l = a.checked_mul(*x)?;
        let r = b.checked_mul(*y)?;
        let out = l.checked_sub(r)?;
        // keep headroom so negation and gcd never overflow
        (out.unsigned_abs() < (1u64 << 62)).then_some(out)
    }
}

impl Entry for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, d: &Self) -> Self {
        self / d
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn combine(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
}

fn normalize<T: Entry>(row: &mut [(usize, T)]) {
    let Some(first) = row.first() else { return };
    let mut g = first.1.clone();
    for (_, v) in row.iter().skip(1) {
        if g.is_one() {
            break;
        }
        g = g.gcd(v);
    }
    let flip = first.1.is_negative();
    let g = if flip { g.neg() } else { g };
    if g.is_one() {
        return;
    }
    for (_, v) in row.iter_mut() {
        *v = v.div(&g);
    }
}

/// Reduce `row` by `pivot`, both starting at the same column.
fn reduce<T: Entry>(row: &[(usize, T)], pivot: &[(usize, T)]) -> Option<Vec<(usize, T)>> {
    let pl = &pivot[0].1;
    let rl = &row[0].1;
    let g = pl.gcd(rl);
    let a = pl.div(&g);
    let b = rl.div(&g);
    let zero = T::zero();
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        let (col, v) = if ci < cj {
            let v = T::combine(&a, &row[i].1, &b, &zero)?;
            i += 1;
            (ci, v)
        } else if cj < ci {
            let v = T::combine(&a, &zero, &b, &pivot[j].1)?;
            j += 1;
            (cj, v)
        } else {
            let v = T::combine(&a, &row[i].1, &b, &pivot[j].1)?;
            i += 1;
            j += 1;
            (ci, v)
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    normalize(&mut out);
    Some(out)
}

fn eliminate<T: Entry>(rows: Vec<Vec<(usize, T)>>) -> Option<usize> {
    let mut pivots: HashMap<usize, Vec<(usize, T)>> = HashMap::new();
    for mut row in rows {
        normalize(&mut row);
        while let Some(&(lead, _)) = row.first() {
            match pivots.get(&lead) {
                Some(p) => row = reduce(&row, p)?,
                None => {
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    Some(pivots.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_triangle_boundary() {
        // edges 01, 02, 12 against vertices 0, 1, 2
        let mut m = SparseIntMatrix::new(3);
        m.push_row(vec![(0, -1), (1, 1)]);
        m.push_row(vec![(0, -1), (2, 1)]);
        m.push_row(vec![(1, -1), (2, 1)]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn duplicate_entries_merge() {
        let mut m = SparseIntMatrix::new(2);
        m.push_row(vec![(0, 1), (0, -1), (1, 2)]);
        m.push_row(vec![(1, 3)]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = 1i64 << 40;
        let mut m = SparseIntMatrix::new(3);
        m.push_row(vec![(0, big), (1, 1)]);
        m.push_row(vec![(0, big + 1), (1, big - 1), (2, 1)]);
        m.push_row(vec![(0, 1), (2, big)]);
        assert_eq!(m.rank(), 3);
    }
}
