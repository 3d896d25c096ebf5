use num_complex::Complex64;

use super::{CxMatrix, SignatureTriple};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending order not guaranteed) and unitary eigenvector matrix
/// of a Hermitian matrix by cyclic complex Jacobi rotations.
pub(crate) fn hermitian_eigen(m: &CxMatrix) -> (Vec<f64>, CxMatrix) {
    assert!(m.is_square(), "Hermitian eigen-solve needs a square matrix");
    let n = m.rows();
    // symmetrise to wash out rounding asymmetry
    let mut a = (m + &m.adjoint()).scale(Complex64::new(0.5, 0.0));
    let mut v = CxMatrix::identity(n);
    let total = a.frobenius().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a.get(p, q).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // phase that makes a[p][q] real, followed by a real rotation
                let phase = (apq / mag).conj();
                let upp = Complex64::new(c, 0.0);
                let upq = Complex64::new(s, 0.0);
                let uqp = phase * (-s);
                let uqq = phase * c;
                rotate(&mut a, &mut v, p, q, [upp, upq, uqp, uqq]);
            }
        }
    }
    ((0..n).map(|i| a.get(i, i).re).collect(), v)
}

/// Apply `A ← Uᴴ A U`, `V ← V U` for a unitary acting on coordinates `p, q`.
fn rotate(a: &mut CxMatrix, v: &mut CxMatrix, p: usize, q: usize, u: [Complex64; 4]) {
    let [upp, upq, uqp, uqq] = u;
    let n = a.rows();
    for r in 0..n {
        let (x, y) = (a.get(r, p), a.get(r, q));
        a.set(r, p, x * upp + y * uqp);
        a.set(r, q, x * upq + y * uqq);
        let (x, y) = (v.get(r, p), v.get(r, q));
        v.set(r, p, x * upp + y * uqp);
        v.set(r, q, x * upq + y * uqq);
    }
    for c in 0..n {
        let (x, y) = (a.get(p, c), a.get(q, c));
        a.set(p, c, upp.conj() * x + uqp.conj() * y);
        a.set(q, c, upq.conj() * x + uqq.conj() * y);
    }
}

/// Inertia of a Hermitian matrix; eigenvalues within `tol` of zero count as null.
pub fn hermitian_inertia(m: &CxMatrix, tol: f64) -> SignatureTriple {
    let (values, _) = hermitian_eigen(m);
    let mut out = SignatureTriple::default();
    for x in values {
        if x > tol {
            out.positive += 1;
        } else if x < -tol {
            out.negative += 1;
        } else {
            out.null += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonalises_complex_hermitian() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let m = CxMatrix::from_rows(vec![
            vec![one * 2.0, i, zero],
            vec![-i, one * 2.0, zero],
            vec![zero, zero, -one],
        ]);
        let (vals, vecs) = hermitian_eigen(&m);
        assert!(vecs.is_unitary());
        let mut sorted = vals.clone();
        sorted.sort_by(f64::total_cmp);
        let expect = [-1.0, 1.0, 3.0];
        for (a, b) in sorted.iter().zip(expect) {
            assert!((a - b).abs() < 1e-10, "{sorted:?}");
        }
        let d = &(&vecs.adjoint() * &m) * &vecs;
        for r in 0..3 {
            for c in 0..3 {
                if r != c {
                    assert!(d.get(r, c).norm() < 1e-10);
                }
            }
        }
        assert_eq!(hermitian_inertia(&m, 1e-9), SignatureTriple::new(2, 1, 0));
    }

    #[test]
    fn zero_matrix_is_all_null() {
        assert_eq!(
            hermitian_inertia(&CxMatrix::zeros(3, 3), 1e-9),
            SignatureTriple::new(0, 0, 3)
        );
    }
}
