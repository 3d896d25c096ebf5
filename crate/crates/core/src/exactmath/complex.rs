use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::hermitian::hermitian_eigen;

/// Comparison tolerance used when a matrix is built without an explicit one.
pub const DEFAULT_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix carrying the tolerance used by its approximate checks.
#[derive(Clone)]
pub struct CxMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
    tol: f64,
}

impl fmt::Debug for CxMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CxMatrix {}x{} (tol {:e}) [", self.rows, self.cols, self.tol)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| {
                    let z = self.get(r, c);
                    format!("{:.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl CxMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CxMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
            tol: DEFAULT_TOL,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, ONE)
    }

    pub fn scalar(n: usize, z: Complex64) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = z;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        CxMatrix {
            rows: r,
            cols: c,
            data,
            tol: DEFAULT_TOL,
        }
    }

    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        CxMatrix {
            rows,
            cols,
            data: entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            tol: DEFAULT_TOL,
        }
    }

    /// Column-major reshaping of a vector of length `rows * cols`.
    pub fn from_column_major(rows: usize, cols: usize, v: &[Complex64]) -> Self {
        assert_eq!(v.len(), rows * cols);
        let mut m = Self::zeros(rows, cols);
        for c in 0..cols {
            for r in 0..rows {
                m.set(r, c, v[c * rows + r]);
            }
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Complex64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, z) in col.iter().enumerate() {
                m.set(r, c, *z);
            }
        }
        m
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, z: Complex64) {
        self.data[r * self.cols + c] = z;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// Column-major flattening, inverse of [`CxMatrix::from_column_major`].
    pub fn vectorize(&self) -> Vec<Complex64> {
        (0..self.cols)
            .flat_map(|c| (0..self.rows).map(move |r| (r, c)))
            .map(|(r, c)| self.get(r, c))
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows).with_tol(self.tol);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).conj());
            }
        }
        t
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows).with_tol(self.tol);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn scale(&self, z: Complex64) -> Self {
        CxMatrix {
            data: self.data.iter().map(|x| x * z).collect(),
            ..self.clone()
        }
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CxMatrix) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols).with_tol(self.tol);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a == ZERO {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        out.set(r1 * other.rows + r2, c1 * other.cols + c2, a * other.get(r2, c2));
                    }
                }
            }
        }
        out
    }

    pub fn block_diag(blocks: &[CxMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols).with_tol(self.tol);
        for r in 0..rows {
            for c in 0..cols {
                out.set(r, c, self.get(r0 + r, c0 + c));
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &CxMatrix) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.set(r0 + r, c0 + c, b.get(r, c));
            }
        }
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from `other`.
    pub fn distance(&self, other: &CxMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &CxMatrix) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols) && self.distance(other) <= self.tol
    }

    pub fn is_zero(&self) -> bool {
        self.max_abs() <= self.tol
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && self.approx_eq(&Self::identity(self.rows))
    }

    pub fn is_unitary(&self) -> bool {
        self.is_square() && (&self.adjoint() * self).is_identity()
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im.abs() <= self.tol)
    }

    /// Inverse by Gauss-Jordan with partial pivoting; `None` if numerically singular.
    pub fn inverse(&self) -> Option<CxMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n).with_tol(self.tol);
        let scale = self.max_abs().max(1.0);
        for col in 0..n {
            let p = (col..n).max_by(|&i, &j| a.get(i, col).norm().total_cmp(&a.get(j, col).norm()))?;
            if a.get(p, col).norm() <= 1e-13 * scale {
                return None;
            }
            a.swap_rows(col, p);
            inv.swap_rows(col, p);
            let piv = a.get(col, col).inv();
            for c in 0..n {
                a.set(col, c, a.get(col, c) * piv);
                inv.set(col, c, inv.get(col, c) * piv);
            }
            for r in 0..n {
                let f = a.get(r, col);
                if r == col || f == ZERO {
                    continue;
                }
                for c in 0..n {
                    a.set(r, c, a.get(r, c) - f * a.get(col, c));
                    inv.set(r, c, inv.get(r, c) - f * inv.get(col, c));
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Multiply by a unit scalar so the first entry of non-negligible size is real positive.
    pub fn normalize_phase(&self) -> CxMatrix {
        let cutoff = self.max_abs() * 1e-6;
        match self.data.iter().find(|z| z.norm() > cutoff) {
            Some(z) => self.scale(z.conj() / z.norm()),
            None => self.clone(),
        }
    }
}

impl Mul for &CxMatrix {
    type Output = CxMatrix;

    fn mul(self, rhs: &CxMatrix) -> CxMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = CxMatrix::zeros(self.rows, rhs.cols).with_tol(self.tol);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }
}

impl Add for &CxMatrix {
    type Output = CxMatrix;

    fn add(self, rhs: &CxMatrix) -> CxMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CxMatrix {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
            ..self.clone()
        }
    }
}

impl Sub for &CxMatrix {
    type Output = CxMatrix;

    fn sub(self, rhs: &CxMatrix) -> CxMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CxMatrix {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
            ..self.clone()
        }
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormal basis of the span of `vectors` by twice-applied modified
/// Gram-Schmidt; vectors that fall below `tol` after projection are dropped.
pub fn orthonormalize(vectors: &[Vec<Complex64>], tol: f64) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                for (x, y) in w.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let n = norm(&w);
        if n > tol {
            basis.push(w.into_iter().map(|x| x / n).collect());
        }
    }
    basis
}

/// Orthonormal basis of the common kernel of the given constraint matrices.
///
/// All constraints must have the same number of columns. The kernel is read
/// off the eigenvectors of the Gram matrix `Σ MᴴM` with eigenvalue below
/// `tol²` (relative to the largest eigenvalue), which keeps the basis
/// orthonormal and the choice deterministic.
pub fn cx_solve_homogeneous(constraints: &[CxMatrix], n: usize, tol: f64) -> Vec<Vec<Complex64>> {
    let mut gram = CxMatrix::zeros(n, n);
    for m in constraints {
        assert_eq!(m.cols(), n, "constraint width mismatch");
        gram = &gram + &(&m.adjoint() * m);
    }
    let (values, vectors) = hermitian_eigen(&gram);
    let scale = values.iter().fold(1.0f64, |a, &b| a.max(b.abs()));
    let cutoff = tol * tol * scale;
    let mut idx: Vec<usize> = (0..n).filter(|&i| values[i] <= cutoff).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let raw: Vec<Vec<Complex64>> = idx.into_iter().map(|i| vectors.column(i)).collect();
    orthonormalize(&raw, 1e-8)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let k = CxMatrix::identity(2).kron(&CxMatrix::identity(3));
        assert!(k.is_identity());
        assert_eq!(k.rows(), 6);
    }

    #[test]
    fn inverse_of_unitary_is_adjoint() {
        let s = 0.5f64.sqrt();
        let u = CxMatrix::from_rows(vec![vec![c(s, 0.0), c(0.0, s)], vec![c(0.0, s), c(s, 0.0)]]);
        assert!(u.is_unitary());
        assert!(u.inverse().unwrap().approx_eq(&u.adjoint()));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = CxMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(m.inverse().is_none());
    }

    #[test]
    fn homogeneous_solve_finds_kernel() {
        let m = CxMatrix::from_real(1, 3, &[1.0, 1.0, 0.0]);
        let basis = cx_solve_homogeneous(std::slice::from_ref(&m), 3, 1e-9);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(m.mul_vec(v).iter().all(|z| z.norm() < 1e-9));
        }
    }

    #[test]
    fn column_major_round_trip() {
        let m = CxMatrix::from_real(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let back = CxMatrix::from_column_major(2, 3, &m.vectorize());
        assert!(back.approx_eq(&m));
    }
}
