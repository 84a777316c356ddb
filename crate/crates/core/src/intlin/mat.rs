use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row-major, with arbitrary-precision entries.
///
/// Zero rows or columns are legal; a `0 x n` times `n x 0` product is
/// the `0 x 0` matrix.  Dimension mismatches in arithmetic are
/// programmer errors and panic.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMat { rows, cols, data }
    }

    /// Convenience constructor for literals in tests and builders.
    /// Panics if the rows are ragged.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMat::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    /// Column vector from integer entries.
    pub fn col_vec(entries: &[i64]) -> Self {
        IntMat::from_fn(entries.len(), 1, |i, _| BigInt::from(entries[i]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.at(i, j).is_one()
                    } else {
                        self.at(i, j).is_zero()
                    }
                })
            })
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        IntMat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self.at(i, j).clone()).collect()
    }

    /// Copies `src` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, src: &IntMat) {
        assert!(r0 + src.rows <= self.rows && c0 + src.cols <= self.cols, "paste out of range");
        for i in 0..src.rows {
            for j in 0..src.cols {
                self.set(r0 + i, c0 + j, src.at(i, j).clone());
            }
        }
    }

    /// Matrix with the selected columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        IntMat::from_fn(self.rows, idx.len(), |i, j| self.at(i, idx[j]).clone())
    }

    /// Horizontal concatenation `[self | right]`.
    pub fn hstack(&self, right: &IntMat) -> Self {
        assert_eq!(self.rows, right.rows, "hstack row mismatch");
        let mut m = IntMat::zero(self.rows, self.cols + right.cols);
        m.paste(0, 0, self);
        m.paste(0, self.cols, right);
        m
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * k)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "apply length mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    /// Gcd of all entries; zero for the zero matrix.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for e in &self.data {
            g = num_integer::Integer::gcd(&g, e);
        }
        g
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    /// Panics on non-square input.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.at(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.at(i, k).is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            let a = m.at(k, j).clone();
                            let b = m.at(i, j).clone();
                            m.set(k, j, b);
                            m.set(i, j, a);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                    m.set(i, j, num / &prev);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.at(k, k).clone();
        }
        sign * m.at(n - 1, n - 1)
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().abs().is_one()
    }

    /// Entries as `i64` row vectors, `None` if any entry overflows.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| i64::try_from(self.at(i, j)).ok()).collect())
            .collect()
    }
}

impl Add for &IntMat {
    type Output = IntMat;
    fn add(self, rhs: &IntMat) -> IntMat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "add shape mismatch");
        IntMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + rhs.at(i, j))
    }
}

impl Sub for &IntMat {
    type Output = IntMat;
    fn sub(self, rhs: &IntMat) -> IntMat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "sub shape mismatch");
        IntMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - rhs.at(i, j))
    }
}

impl Mul for &IntMat {
    type Output = IntMat;
    fn mul(self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.cols, rhs.rows, "mul shape mismatch");
        IntMat::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| self.at(i, k) * rhs.at(k, j)).sum()
        })
    }
}

impl Neg for &IntMat {
    type Output = IntMat;
    fn neg(self) -> IntMat {
        IntMat::from_fn(self.rows, self.cols, |i, j| -self.at(i, j))
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_identity() {
        let a = IntMat::from_i64_rows(&[&[1, 2], &[3, 4]]);
        let id = IntMat::identity(2);
        assert_eq!(&a * &id, a);
        let b = IntMat::from_i64_rows(&[&[0, 1], &[1, 0]]);
        let ab = &a * &b;
        assert_eq!(ab, IntMat::from_i64_rows(&[&[2, 1], &[4, 3]]));
    }

    #[test]
    fn empty_shapes_multiply() {
        let a = IntMat::zero(0, 3);
        let b = IntMat::zero(3, 2);
        let ab = &a * &b;
        assert_eq!((ab.rows(), ab.cols()), (0, 2));
        let c = IntMat::zero(2, 0);
        let d = IntMat::zero(0, 4);
        assert!((&c * &d).is_zero());
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(IntMat::identity(4).determinant(), BigInt::from(1));
        let m = IntMat::from_i64_rows(&[&[2, 0], &[0, 3]]);
        assert_eq!(m.determinant(), BigInt::from(6));
        let s = IntMat::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(s.determinant(), BigInt::from(-1));
        let sing = IntMat::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(sing.determinant(), BigInt::from(0));
        let m3 = IntMat::from_i64_rows(&[&[2, -3, 1], &[2, 0, -1], &[1, 4, 5]]);
        assert_eq!(m3.determinant(), BigInt::from(49));
    }

    #[test]
    fn content_is_entry_gcd() {
        let m = IntMat::from_i64_rows(&[&[6, -9], &[12, 0]]);
        assert_eq!(m.content(), BigInt::from(3));
        assert_eq!(IntMat::zero(2, 2).content(), BigInt::from(0));
    }
}
