//! Dense exact matrices over ℤ and ℚ.
//!
//! Everything here is exact: entries are arbitrary-precision integers or
//! reduced rationals, and there is no floating point anywhere.

mod smith;

pub use smith::{
    cokernel_invariants, kernel_saturated, smith_normal_form, CokernelInvariants,
    LatticeCoordinates, SmithDecomposition,
};

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<Int>;
pub type RatMatrix = Matrix<Rat>;

impl<T> Matrix<T> {
    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }
}

impl<T: Clone> Matrix<T> {
    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        for col in columns {
            assert_eq!(col.len(), rows, "column has wrong length");
        }
        Matrix::from_fn(rows, columns.len(), |r, c| columns[c][r].clone())
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Matrix::from_fn(r1 - r0, c1 - c0, |r, c| self[(r0 + r, c0 + c)].clone())
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_vec(rows, cols, vec![T::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let n = entries.len();
        Matrix::from_fn(n, n, |r, c| if r == c { entries[r].clone() } else { T::zero() })
    }

    /// Block-diagonal matrix with the given square or rectangular blocks.
    pub fn block_diagonal(blocks: &[Matrix<T>]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out[(r0 + r, c0 + c)] = b[(r, c)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Panics on incompatible shapes.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        let prod = a.clone() * b.clone();
                        let slot: &mut T = &mut out[(r, c)];
                        *slot = slot.clone() + prod;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

impl<T: Clone + Zero + One + std::ops::Neg<Output = T>> Matrix<T> {
    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| {
            self[(r, c)].clone() + other[(r, c)].clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[r * self.cols + c])?;
            }
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| Rat::from_integer(x.clone()))
    }

    /// Determinant by fraction-free (Bareiss) elimination. Panics if not square.
    pub fn determinant(&self) -> Int {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                    return Int::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().abs().is_one()
    }

    /// Adjugate matrix, so that `adj(M)·M = det(M)·I`.
    pub fn adjugate(&self) -> IntMatrix {
        assert!(self.is_square());
        let n = self.rows;
        if n == 1 {
            return IntMatrix::identity(1);
        }
        Matrix::from_fn(n, n, |r, c| {
            // cofactor (c, r)
            let minor = Matrix::from_fn(n - 1, n - 1, |i, j| {
                let ii = if i < c { i } else { i + 1 };
                let jj = if j < r { j } else { j + 1 };
                self[(ii, jj)].clone()
            });
            let d = minor.determinant();
            if (r + c) % 2 == 0 {
                d
            } else {
                -d
            }
        })
    }
}

impl RatMatrix {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        IntMatrix::from_i64_rows(rows).to_rational()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    /// Integer matrix if every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if self.data.iter().all(Rat::is_integer) {
            Some(self.map(Rat::to_integer))
        } else {
            None
        }
    }

    /// Returns `(N, d)` with `self = N / d`, `d > 0` the lcm of all denominators.
    pub fn clear_denominators(&self) -> (IntMatrix, Int) {
        let d = self
            .data
            .iter()
            .fold(Int::one(), |acc, x| acc.lcm(x.denom()));
        let n = self.map(|x| (x * Rat::from_integer(d.clone())).to_integer());
        (n, d)
    }

    /// Each row multiplied by the lcm of its own denominators; same kernel.
    pub fn clear_row_denominators(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            let d = self.row(r).iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
            let dr = Rat::from_integer(d);
            for c in 0..self.cols {
                out[(r, c)] = (&self[(r, c)] * &dr).to_integer();
            }
        }
        out
    }

    pub fn determinant(&self) -> Rat {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rat::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[(r, k)].is_zero()) else {
                return Rat::zero();
            };
            if p != k {
                a.swap_rows(k, p);
                det = -det;
            }
            let pivot = a[(k, k)].clone();
            det *= &pivot;
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = &a[(i, k)] / &pivot;
                for j in k..n {
                    let v = &a[(i, j)] - &f * &a[(k, j)];
                    a[(i, j)] = v;
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse; `None` if singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for k in 0..n {
            let p = (k..n).find(|&r| !a[(r, k)].is_zero())?;
            a.swap_rows(k, p);
            inv.swap_rows(k, p);
            let pivot = a[(k, k)].clone();
            for j in 0..n {
                a[(k, j)] = &a[(k, j)] / &pivot;
                inv[(k, j)] = &inv[(k, j)] / &pivot;
            }
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone();
                for j in 0..n {
                    let v = &a[(i, j)] - &f * &a[(k, j)];
                    a[(i, j)] = v;
                    let w = &inv[(i, j)] - &f * &inv[(k, j)];
                    inv[(i, j)] = w;
                }
            }
        }
        Some(inv)
    }
}

/// Exact positive-definiteness test via leading principal minors.
pub fn is_positive_definite(s: &RatMatrix) -> Result<bool> {
    if !s.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    for k in 1..=s.rows() {
        if !s.submatrix(0, k, 0, k).determinant().is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}
