use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{ExactError, RatMatrix, Rational};

/// Inertia `(p, q, z)` of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SignatureTriple {
    pub positive: usize,
    pub negative: usize,
    pub null: usize,
}

impl SignatureTriple {
    pub fn new(positive: usize, negative: usize, null: usize) -> Self {
        SignatureTriple {
            positive,
            negative,
            null,
        }
    }

    pub fn dimension(&self) -> usize {
        self.positive + self.negative + self.null
    }

    /// The classical signature `p - q`.
    pub fn value(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }

    /// Inertia of the negated form.
    pub fn reversed(&self) -> Self {
        SignatureTriple::new(self.negative, self.positive, self.null)
    }

    /// Inertia of an orthogonal direct sum.
    pub fn direct_sum(&self, other: &SignatureTriple) -> Self {
        SignatureTriple::new(
            self.positive + other.positive,
            self.negative + other.negative,
            self.null + other.null,
        )
    }
}

/// Inertia of a symmetric rational form by congruence reduction.
///
/// Diagonal pivots are used when available; otherwise a `[[0, b], [b, 0]]`
/// block is split off, which contributes one positive and one negative square.
pub fn symmetric_signature(form: &RatMatrix) -> Result<SignatureTriple, ExactError> {
    if !form.is_square() {
        return Err(ExactError::NotSquare {
            rows: form.rows(),
            cols: form.cols(),
        });
    }
    if let Some((row, col)) = form.first_asymmetry() {
        return Err(ExactError::NonSymmetric { row, col });
    }
    let mut a: Vec<Vec<Rational>> = (0..form.rows()).map(|r| form.row(r).to_vec()).collect();
    let mut out = SignatureTriple::default();

    while !a.is_empty() {
        let n = a.len();
        if let Some(i) = (0..n).find(|&i| !a[i][i].is_zero()) {
            let pivot = a[i][i].clone();
            if pivot.is_positive() {
                out.positive += 1;
            } else {
                out.negative += 1;
            }
            let col: Vec<Rational> = (0..n).map(|r| a[r][i].clone()).collect();
            let rest: Vec<usize> = (0..n).filter(|&r| r != i).collect();
            a = rest
                .iter()
                .map(|&r| {
                    rest.iter()
                        .map(|&c| {
                            if col[r].is_zero() || col[c].is_zero() {
                                a[r][c].clone()
                            } else {
                                &a[r][c] - &col[r] * &col[c] / &pivot
                            }
                        })
                        .collect()
                })
                .collect();
            continue;
        }
        let Some((i, j)) = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero())
        else {
            out.null += n;
            break;
        };
        // hyperbolic block [[0, b], [b, 0]], inverse [[0, 1/b], [1/b, 0]]
        out.positive += 1;
        out.negative += 1;
        let b = a[i][j].clone();
        let ci: Vec<Rational> = (0..n).map(|r| a[r][i].clone()).collect();
        let cj: Vec<Rational> = (0..n).map(|r| a[r][j].clone()).collect();
        let rest: Vec<usize> = (0..n).filter(|&r| r != i && r != j).collect();
        a = rest
            .iter()
            .map(|&r| {
                rest.iter()
                    .map(|&c| {
                        let corr = (&ci[r] * &cj[c] + &cj[r] * &ci[c]) / &b;
                        &a[r][c] - corr
                    })
                    .collect()
            })
            .collect();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_forms() {
        let pos = RatMatrix::from_i64(2, 2, &[1, 0, 0, 1]);
        assert_eq!(symmetric_signature(&pos).unwrap(), SignatureTriple::new(2, 0, 0));
        let mixed = RatMatrix::from_i64(2, 2, &[1, 0, 0, -1]);
        assert_eq!(symmetric_signature(&mixed).unwrap(), SignatureTriple::new(1, 1, 0));
    }

    #[test]
    fn hyperbolic_plane() {
        let h = RatMatrix::from_i64(2, 2, &[0, 1, 1, 0]);
        assert_eq!(symmetric_signature(&h).unwrap(), SignatureTriple::new(1, 1, 0));
    }

    #[test]
    fn degenerate_directions_are_counted() {
        let m = RatMatrix::from_i64(3, 3, &[1, 1, 0, 1, 1, 0, 0, 0, 0]);
        assert_eq!(symmetric_signature(&m).unwrap(), SignatureTriple::new(1, 0, 2));
    }

    #[test]
    fn rejects_asymmetric_input() {
        let m = RatMatrix::from_i64(2, 2, &[0, 1, 2, 0]);
        assert_eq!(
            symmetric_signature(&m),
            Err(ExactError::NonSymmetric { row: 0, col: 1 })
        );
    }
}
