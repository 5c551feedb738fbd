//! Exact dense matrices over the Gaussian rationals.
//!
//! Rank and determinant run fraction-free (Bareiss) after clearing row
//! denominators, so intermediate entries stay Gaussian integers of
//! polynomially bounded size. The Pfaffian uses skew-symmetric elimination
//! with sign-tracked pivot swaps and is cross-checked by Pf(A)^2 = det(A).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not skew-symmetric at ({i},{j})")]
    NotSkewSymmetric { i: usize, j: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// Row-major dense matrix of [`Scalar`]s.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        Matrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix::new(rows, cols, vec![Scalar::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix::new(rows, cols, entries)
    }

    /// Builds a matrix from integer rows; handy in tests and fixtures.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Matrix::from_fn(r, c, |i, j| Scalar::from_int(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * c)
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                if !self.at(i, k).is_zero() && !rhs.at(k, j).is_zero() {
                    acc += &(self.at(i, k) * rhs.at(k, j));
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for k in 0..self.cols {
                    if !self.at(i, k).is_zero() && !v[k].is_zero() {
                        acc += &(self.at(i, k) * &v[k]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn kronecker(&self, rhs: &Matrix) -> Matrix {
        Matrix::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            let a = self.at(i / rhs.rows, j / rhs.cols);
            let b = rhs.at(i % rhs.rows, j % rhs.cols);
            a * b
        })
    }

    /// n-fold Kronecker power; n = 0 gives the 1x1 identity.
    pub fn kronecker_power(&self, n: usize) -> Matrix {
        let mut acc = Matrix::identity(1);
        for _ in 0..n {
            acc = acc.kronecker(self);
        }
        acc
    }

    /// Scales every row by the lcm of its entry denominators so all entries
    /// become Gaussian integers. Rank is unchanged.
    fn cleared_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows)
            .map(|i| {
                let mut l = BigInt::one();
                for e in self.row(i) {
                    l = l.lcm(e.re.denom());
                    l = l.lcm(e.im.denom());
                }
                let f = Scalar::new(BigRational::from_integer(l), BigRational::zero());
                self.row(i).iter().map(|e| e * &f).collect()
            })
            .collect()
    }

    /// Exact rank via fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.cleared_rows();
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = Scalar::one();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, piv);
            for i in r + 1..rows {
                for j in c + 1..cols {
                    let num = &(&m[r][c] * &m[i][j]) - &(&m[i][c] * &m[r][j]);
                    m[i][j] = &num / &prev;
                }
                m[i][c] = Scalar::zero();
            }
            prev = m[r][c].clone();
            r += 1;
        }
        r
    }

    /// Exact determinant, fraction-free on the integerized matrix with the
    /// row scaling divided back out.
    pub fn determinant(&self) -> Result<Scalar, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Scalar::one());
        }
        let mut scale = Scalar::one();
        let mut m: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut l = BigInt::one();
                for e in self.row(i) {
                    l = l.lcm(e.re.denom());
                    l = l.lcm(e.im.denom());
                }
                let f = Scalar::new(BigRational::from_integer(l), BigRational::zero());
                scale *= &f;
                self.row(i).iter().map(|e| e * &f).collect()
            })
            .collect();
        let mut prev = Scalar::one();
        let mut sign = Scalar::one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&i| !m[i][c].is_zero()) else {
                return Ok(Scalar::zero());
            };
            if piv != c {
                m.swap(c, piv);
                sign = -sign;
            }
            for i in c + 1..n {
                for j in c + 1..n {
                    let num = &(&m[c][c] * &m[i][j]) - &(&m[i][c] * &m[c][j]);
                    m[i][j] = &num / &prev;
                }
                m[i][c] = Scalar::zero();
            }
            prev = m[c][c].clone();
        }
        Ok(&(&sign * &m[n - 1][n - 1]) / &scale)
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Matrix, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for c in 0..n {
            let Some(piv) = (c..n).find(|&i| !a.at(i, c).is_zero()) else {
                return Err(MatrixError::SingularMatrix);
            };
            if piv != c {
                for j in 0..n {
                    let tmp = a.at(c, j).clone();
                    *a.at_mut(c, j) = a.at(piv, j).clone();
                    *a.at_mut(piv, j) = tmp;
                    let tmp = inv.at(c, j).clone();
                    *inv.at_mut(c, j) = inv.at(piv, j).clone();
                    *inv.at_mut(piv, j) = tmp;
                }
            }
            let d = a.at(c, c).clone();
            for j in 0..n {
                *a.at_mut(c, j) = a.at(c, j) / &d;
                *inv.at_mut(c, j) = inv.at(c, j) / &d;
            }
            for i in 0..n {
                if i == c || a.at(i, c).is_zero() {
                    continue;
                }
                let f = a.at(i, c).clone();
                for j in 0..n {
                    let av = &f * a.at(c, j);
                    *a.at_mut(i, j) = a.at(i, j) - &av;
                    let iv = &f * inv.at(c, j);
                    *inv.at_mut(i, j) = inv.at(i, j) - &iv;
                }
            }
        }
        Ok(inv)
    }

    /// Exact Pfaffian of a skew-symmetric matrix via elimination, with pivot
    /// swaps tracked by sign. Odd dimension gives 0 by convention.
    pub fn pfaffian(&self) -> Result<Scalar, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        for i in 0..n {
            for j in 0..n {
                if *self.at(i, j) != -self.at(j, i) {
                    return Err(MatrixError::NotSkewSymmetric { i, j });
                }
            }
        }
        if n % 2 == 1 {
            return Ok(Scalar::zero());
        }
        let mut a = self.clone();
        let mut pf = Scalar::one();
        for k in (0..n).step_by(2) {
            let Some(piv) = (k + 1..n).find(|&m| !a.at(k, m).is_zero()) else {
                return Ok(Scalar::zero());
            };
            if piv != k + 1 {
                // swap rows and columns piv <-> k+1; Pf(P A P^T) = det(P) Pf(A)
                for j in 0..n {
                    let tmp = a.at(k + 1, j).clone();
                    *a.at_mut(k + 1, j) = a.at(piv, j).clone();
                    *a.at_mut(piv, j) = tmp;
                }
                for i in 0..n {
                    let tmp = a.at(i, k + 1).clone();
                    *a.at_mut(i, k + 1) = a.at(i, piv).clone();
                    *a.at_mut(i, piv) = tmp;
                }
                pf = -pf;
            }
            let c = a.at(k, k + 1).clone();
            pf *= &c;
            for i in k + 2..n {
                if a.at(k, i).is_zero() {
                    continue;
                }
                let f = a.at(k, i) / &c;
                // row/col update keeps the trailing block skew-symmetric
                for j in 0..n {
                    let sub = &f * a.at(k + 1, j);
                    *a.at_mut(i, j) = a.at(i, j) - &sub;
                }
                for j in 0..n {
                    let sub = &f * a.at(j, k + 1);
                    *a.at_mut(j, i) = a.at(j, i) - &sub;
                }
            }
        }
        Ok(pf)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}{}", self.at(i, j), if j + 1 < self.cols { " " } else { "" })?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
