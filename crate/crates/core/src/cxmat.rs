//! Dense complex matrices and vector helpers.
//!
//! The matrices in this problem are small (tens of rows at most), so a plain
//! row-major `Vec<Complex64>` with straightforward O(n^3) kernels is all that
//! is needed. Inversion uses Gauss-Jordan elimination with partial pivoting.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    /// Build from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let nr = rows.len();
        let nc = if nr == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|r| r.len() == nc), "ragged rows");
        let mut data = Vec::with_capacity(nr * nc);
        for r in rows {
            data.extend_from_slice(r);
        }
        CMat { rows: nr, cols: nc, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn col(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self.at(r, c)).collect()
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.at(i, j) + a * rhs.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |r, c| self.at(c, r).conj())
    }

    pub fn scale(&self, s: C64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows).map(|i| self.at(i, i)).sum()
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sq().sqrt()
    }

    /// Matrix-vector product `self * x`.
    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, x.len(), "vector length must match columns");
        (0..self.rows)
            .map(|r| {
                let mut acc = C64::new(0.0, 0.0);
                for c in 0..self.cols {
                    acc += self.at(r, c) * x[c];
                }
                acc
            })
            .collect()
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<CMat> {
        assert!(self.is_square(), "inverse requires a square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = CMat::identity(n);

        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_mag = a.at(col, col).norm_sqr();
            for r in (col + 1)..n {
                let mag = a.at(r, col).norm_sqr();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = r;
                }
            }
            if pivot_mag < 1e-280 || !pivot_mag.is_finite() {
                return Err(Error::SingularChannel(format!(
                    "pivot magnitude {pivot_mag:.3e} in column {col}"
                )));
            }
            if pivot_row != col {
                for c in 0..n {
                    let tmp = a.at(col, c);
                    a.set(col, c, a.at(pivot_row, c));
                    a.set(pivot_row, c, tmp);
                    let tmp = inv.at(col, c);
                    inv.set(col, c, inv.at(pivot_row, c));
                    inv.set(pivot_row, c, tmp);
                }
            }

            let pinv = C64::new(1.0, 0.0) / a.at(col, col);
            for c in 0..n {
                a.set(col, c, a.at(col, c) * pinv);
                inv.set(col, c, inv.at(col, c) * pinv);
            }

            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.at(r, col);
                if factor == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    let v = a.at(r, c) - factor * a.at(col, c);
                    a.set(r, c, v);
                    let v = inv.at(r, c) - factor * inv.at(col, c);
                    inv.set(r, c, v);
                }
            }
        }
        Ok(inv)
    }
}

/// Row vector times matrix: `x * m`.
pub fn vecmat(x: &[C64], m: &CMat) -> Vec<C64> {
    assert_eq!(x.len(), m.rows(), "vector length must match rows");
    (0..m.cols())
        .map(|c| {
            let mut acc = C64::new(0.0, 0.0);
            for r in 0..m.rows() {
                acc += x[r] * m.at(r, c);
            }
            acc
        })
        .collect()
}

/// Hermitian inner product `sum(conj(a_i) * b_i)`.
pub fn dot_conj(a: &[C64], b: &[C64]) -> C64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Plain (unconjugated) inner product.
pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vec_norm_sq(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    vec_norm_sq(v).sqrt()
}
