//! Small dense matrices for the low-dimensional parameter spaces used here
//! (p <= 2 in practice, but nothing below assumes that).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Square matrix in row-major storage. The J/K/Σ sandwich matrices are
/// symmetric; symmetry is checked where it matters rather than encoded in
/// the type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(order: usize) -> Self {
        SquareMatrix {
            order,
            entries: vec![0.0; order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let order = rows.len();
        let mut entries = Vec::with_capacity(order * order);
        for r in rows {
            assert_eq!(r.len(), order, "rows must form a square matrix");
            entries.extend_from_slice(r);
        }
        SquareMatrix { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.order + j] = v;
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|v| v.is_finite())
    }

    /// Relative symmetry check: |a_ij - a_ji| below `tol` times the scale.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let scale = self
            .entries
            .iter()
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
            .max(1e-300);
        for i in 0..self.order {
            for j in (i + 1)..self.order {
                if (self.get(i, j) - self.get(j, i)).abs() > tol * scale {
                    return false;
                }
            }
        }
        true
    }

    pub fn scaled(&self, c: f64) -> Self {
        SquareMatrix {
            order: self.order,
            entries: self.entries.iter().map(|v| c * v).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        SquareMatrix {
            order: self.order,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        SquareMatrix {
            order: self.order,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let n = self.order;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += aik * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.order);
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// v^T A v
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        let av = self.mul_vec(v);
        v.iter().zip(av).map(|(a, b)| a * b).sum()
    }

    /// Outer product v v^T.
    pub fn outer(v: &[f64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, v[i] * v[j]);
            }
        }
        m
    }

    /// Solve A x = b by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        assert_eq!(b.len(), self.order);
        let n = self.order;
        let mut a = self.entries.clone();
        let mut x = b.to_vec();
        for col in 0..n {
            let mut piv = col;
            for r in (col + 1)..n {
                if a[r * n + col].abs() > a[piv * n + col].abs() {
                    piv = r;
                }
            }
            if a[piv * n + col].abs() < 1e-300 {
                return Err(Error::Singular(format!(
                    "pivot {} vanished during elimination",
                    col
                )));
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                x.swap(col, piv);
            }
            let d = a[col * n + col];
            for r in (col + 1)..n {
                let factor = a[r * n + col] / d;
                if factor == 0.0 {
                    continue;
                }
                for j in col..n {
                    a[r * n + j] -= factor * a[col * n + j];
                }
                x[r] -= factor * x[col];
            }
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in (i + 1)..n {
                s -= a[i * n + j] * x[j];
            }
            x[i] = s / a[i * n + i];
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Singular("non-finite solution".into()));
        }
        Ok(x)
    }

    /// Matrix inverse via column-wise solves.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.order;
        let mut out = Self::zeros(n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let col = self.solve(&e)?;
            for (i, v) in col.iter().enumerate() {
                out.set(i, j, *v);
            }
        }
        Ok(out)
    }

    /// Eigenvalues of a symmetric matrix by the cyclic Jacobi method,
    /// ascending order.
    pub fn sym_eigenvalues(&self) -> Vec<f64> {
        let n = self.order;
        if n == 1 {
            return vec![self.get(0, 0)];
        }
        let mut a = self.clone();
        for _ in 0..100 {
            let mut off = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    off += a.get(i, j).powi(2);
                }
            }
            if off.sqrt() < 1e-14 * (1.0 + a.entries.iter().fold(0.0_f64, |m, v| m.max(v.abs()))) {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    if apq.abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        a.set(k, p, c * akp - s * akq);
                        a.set(k, q, s * akp + c * akq);
                    }
                    for k in 0..n {
                        let apk = a.get(p, k);
                        let aqk = a.get(q, k);
                        a.set(p, k, c * apk - s * aqk);
                        a.set(q, k, s * apk + c * aqk);
                    }
                }
            }
        }
        let mut eig: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
        eig.sort_by(f64::total_cmp);
        eig
    }

    /// Inverse of a symmetric positive definite matrix, warning through the
    /// `log` facade when the condition number exceeds 1e12.
    pub fn spd_inverse_guarded(&self, context: &str) -> Result<Self> {
        if !self.is_symmetric(1e-9) {
            return Err(Error::Singular(format!("{context}: matrix not symmetric")));
        }
        let eig = self.sym_eigenvalues();
        let min = eig[0];
        let max = eig[eig.len() - 1];
        if !(min > 0.0) {
            return Err(Error::Singular(format!(
                "{context}: matrix not positive definite (min eigenvalue {min:e})"
            )));
        }
        let cond = max / min;
        if cond > 1e12 {
            log::warn!("{context}: condition number {cond:.3e} exceeds 1e12");
        }
        self.inverse()
    }
}

/// Rectangular matrix, row-major; used for the restriction Jacobian M (p x r).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend_from_slice(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    /// Column vector from a slice.
    pub fn column(v: &[f64]) -> Self {
        Matrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// self^T A self for square A of matching order; result is cols x cols.
    pub fn sandwich(&self, a: &SquareMatrix) -> SquareMatrix {
        assert_eq!(a.order(), self.rows);
        let r = self.cols;
        let mut out = SquareMatrix::zeros(r);
        for i in 0..r {
            for j in 0..r {
                let mut s = 0.0;
                for k in 0..self.rows {
                    for l in 0..self.rows {
                        s += self.get(k, i) * a.get(k, l) * self.get(l, j);
                    }
                }
                out.set(i, j, s);
            }
        }
        out
    }

    /// M^T v for a vector v of length `rows`.
    pub fn transpose_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j) * v[i]).sum())
            .collect()
    }

    /// Smallest singular value, from the eigenvalues of M^T M.
    pub fn smallest_singular_value(&self) -> f64 {
        let gram = self.sandwich(&SquareMatrix::identity(self.rows));
        let eig = gram.sym_eigenvalues();
        eig[0].max(0.0).sqrt()
    }
}

pub fn vec_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn vec_sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_and_inverse() {
        let a = SquareMatrix::from_rows(&[&[4.0, 1.0], &[1.0, 3.0]]);
        let x = a.solve(&[1.0, 2.0]).unwrap();
        assert!((4.0 * x[0] + x[1] - 1.0).abs() < 1e-12);
        assert!((x[0] + 3.0 * x[1] - 2.0).abs() < 1e-12);
        let inv = a.inverse().unwrap();
        let prod = a.mul(&inv);
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod.get(i, j) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eigenvalues_2x2() {
        let a = SquareMatrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let e = a.sym_eigenvalues();
        assert!((e[0] - 1.0).abs() < 1e-10);
        assert!((e[1] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn spd_guard_rejects_indefinite() {
        let a = SquareMatrix::from_rows(&[&[1.0, 2.0], &[2.0, 1.0]]);
        assert!(a.spd_inverse_guarded("test").is_err());
        let s = SquareMatrix::from_rows(&[&[0.0, 1e-4], &[0.0, 1.0]]);
        assert!(s.spd_inverse_guarded("test").is_err());
    }

    #[test]
    fn sandwich_and_singular_values() {
        let m = Matrix::column(&[1.0, 0.0]);
        let a = SquareMatrix::from_rows(&[&[2.0, 0.5], &[0.5, 1.0]]);
        let s = m.sandwich(&a);
        assert_eq!(s.order(), 1);
        assert!((s.get(0, 0) - 2.0).abs() < 1e-14);
        assert!((m.smallest_singular_value() - 1.0).abs() < 1e-12);
        let rank_deficient = Matrix::from_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(rank_deficient.smallest_singular_value() < 1e-12);
    }
}
