//! Dense matrices over an exact integer ring.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use crate::scalar::{gcd_all, Int};

/// A dense row-major matrix. Zero-sized dimensions are allowed so that
/// restrictions to trivial subgroups stay representable.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Int> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from rows. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Self { rows: r, cols: c, data }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| T::from_i64_exact(x)).collect())
                .collect(),
        )
    }

    /// Column matrix holding `v`.
    pub fn column(v: &[T]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    /// Row matrix holding `v`.
    pub fn row_matrix(v: &[T]) -> Self {
        Self {
            rows: 1,
            cols: v.len(),
            data: v.to_vec(),
        }
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x.clone()).collect(),
        }
    }

    pub fn map<U: Int>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// `v * self` for a row vector `v`.
    pub fn vec_mul(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.rows, v.len(), "dimension mismatch");
        (0..self.cols)
            .map(|j| {
                (0..self.rows).fold(T::zero(), |acc, i| {
                    acc + v[i].clone() * self[(i, j)].clone()
                })
            })
            .collect()
    }

    pub fn pow(&self, mut n: u32) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Submatrix with rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut b = Self::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                b[(i - r0, j - c0)] = self[(i, j)].clone();
            }
        }
        b
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: &T) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self[(src, j)].clone() * c.clone();
            self[(dst, j)] = self[(dst, j)].clone() + v;
        }
    }

    /// col[dst] += c * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &T) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self[(i, src)].clone() * c.clone();
            self[(i, dst)] = self[(i, dst)].clone() + v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)].clone();
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self[(i, j)] = -self[(i, j)].clone();
        }
    }

    /// Rank over the rationals, by fraction-free elimination with
    /// content removal on each reduced row.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let Some(p) = (rank..a.rows).find(|&i| !a[(i, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(rank, p);
            let pivot = a[(rank, col)].clone();
            for i in rank + 1..a.rows {
                let f = a[(i, col)].clone();
                if f.is_zero() {
                    continue;
                }
                for j in col..a.cols {
                    a[(i, j)] = a[(i, j)].clone() * pivot.clone() - a[(rank, j)].clone() * f.clone();
                }
                let g = gcd_all(a.row(i));
                if !g.is_zero() && !g.is_one() {
                    for j in col..a.cols {
                        a[(i, j)] = a[(i, j)].clone() / g.clone();
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Determinant by Bareiss elimination (exact divisions only).
    pub fn determinant(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        let mut a = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return T::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[(i, j)].clone() * a[(k, k)].clone() - a[(i, k)].clone() * a[(k, j)].clone();
                    a[(i, j)] = v / prev.clone();
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    /// Characteristic polynomial `det(xI - A)`, coefficients from the
    /// leading one down to the constant term (Faddeev-LeVerrier).
    pub fn charpoly(&self) -> Vec<T> {
        assert!(self.is_square(), "charpoly of a non-square matrix");
        let n = self.rows;
        let mut coeffs = vec![T::one()];
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{k-1} I
            m = self * &m;
            for i in 0..n {
                m[(i, i)] = m[(i, i)].clone() + coeffs[k - 1].clone();
            }
            let am = self * &m;
            let trace = (0..n).fold(T::zero(), |acc, i| acc + am[(i, i)].clone());
            let k_t = T::from_usize_exact(k);
            debug_assert!((trace.clone() % k_t.clone()).is_zero());
            coeffs.push(-(trace / k_t));
        }
        coeffs
    }
}

impl<T: Int> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T: Int> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Int> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = a.clone() * rhs[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + v;
                }
            }
        }
        out
    }
}

impl<T: Int> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<T: Int> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn m(rows: &[&[i64]]) -> Matrix<i64> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn product_and_power() {
        let a = m(&[&[2, 1], &[1, 2]]);
        assert_eq!(a.pow(2), m(&[&[5, 4], &[4, 5]]));
        assert_eq!(a.pow(0), Matrix::identity(2));
        assert_eq!(&a * &a, a.pow(2));
    }

    #[test]
    fn rank_cases() {
        assert_eq!(m(&[&[2, 1], &[1, 2]]).rank(), 2);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(Matrix::<i64>::zeros(3, 2).rank(), 0);
        assert_eq!(m(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]).rank(), 2);
    }

    #[test]
    fn determinant_cases() {
        assert_eq!(m(&[&[2, 1], &[1, 2]]).determinant(), 3);
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), -1);
        assert_eq!(m(&[&[0, 2, 1], &[3, 0, 0], &[1, 1, 1]]).determinant(), -3);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant(), 0);
    }

    #[test]
    fn charpoly_cases() {
        assert_eq!(m(&[&[2, 1], &[1, 2]]).charpoly(), vec![1, -4, 3]);
        assert_eq!(m(&[&[-2, -1], &[-1, -2]]).charpoly(), vec![1, 4, 3]);
        assert_eq!(m(&[&[3]]).charpoly(), vec![1, -3]);
        assert_eq!(Matrix::<i64>::zeros(0, 0).charpoly(), vec![1]);
        // companion matrix of x^3 - 2x + 5
        let c = m(&[&[0, 0, -5], &[1, 0, 2], &[0, 1, 0]]);
        assert_eq!(c.charpoly(), vec![1, 0, -2, 5]);
    }

    #[test]
    fn bigint_power_does_not_overflow() {
        let a: Matrix<BigInt> = Matrix::from_i64_rows(&[&[2, 1], &[1, 2]]);
        let p = a.pow(80);
        // (3^80 + 1) / 2 on the diagonal
        let expected = (BigInt::from(3).pow(80) + 1) / 2;
        assert_eq!(p[(0, 0)], expected);
    }
}
