//! Stationary inductive limits `lim(Z^m, A)`.
//!
//! The limit only sees the eventual image of `A`. Writing `L` for the
//! saturation of the column space of `A^m`, `A` maps `L` injectively into
//! itself and `lim(Z^m, A) = lim(L, A|L)`, which is realised inside `Q^r` as
//! the union of `A_r^{-n} Z^r`, `A_r` being `A|L` in the Hermite basis of `L`.
//! The class `[v, n]` corresponds to `A_r^{-n} A^m v` read in that basis,
//! shifted by `m` stages.

use num_traits::Zero;
use num_rational::Ratio;

use crate::abelian::normal_form::{hermite_rows, lattice_coordinates, smith_normal_form};
use crate::error::Error;
use crate::matrix::Matrix;
use crate::scalar::{bit_length, Int};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StationaryLimit<T: Int> {
    matrix: Matrix<T>,
    /// Rows form the Hermite basis of the eventual lattice `L`.
    basis: Matrix<T>,
    reduced: Matrix<T>,
    charpoly: Vec<T>,
    abs_det: T,
}

impl<T: Int> StationaryLimit<T> {
    pub fn new(a: &Matrix<T>) -> Result<Self, Error> {
        if !a.is_square() {
            return Err(Error::Dimension(format!(
                "stationary limit needs a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let m = a.rows();
        let eventual = a.pow(m as u32);
        let r = eventual.rank();
        let next = &eventual * a;
        if next.rank() != r {
            return Err(Error::Inconsistent(format!(
                "rank of A^k not stable at k = m (m = {m}, ranks {r} and {})",
                next.rank()
            )));
        }
        let basis = saturated_column_basis(&eventual);
        debug_assert_eq!(basis.rows(), r);
        let mut reduced = Matrix::zeros(r, r);
        for k in 0..r {
            let image = a.mul_vec(basis.row(k));
            let coords = lattice_coordinates(&basis, &image).ok_or_else(|| {
                Error::Inconsistent("eventual lattice is not invariant".into())
            })?;
            for (i, c) in coords.into_iter().enumerate() {
                reduced[(i, k)] = c;
            }
        }
        let det = reduced.determinant();
        if r > 0 && det.is_zero() {
            return Err(Error::Inconsistent("restriction to the eventual lattice is singular".into()));
        }
        Ok(Self {
            matrix: a.clone(),
            charpoly: reduced.charpoly(),
            abs_det: det.abs(),
            basis,
            reduced,
        })
    }

    pub fn ambient_rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    /// Eventual rank `rank(A^m)`.
    pub fn rank(&self) -> usize {
        self.reduced.rows()
    }

    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn reduced(&self) -> &Matrix<T> {
        &self.reduced
    }

    /// Characteristic polynomial of the reduced matrix, leading coefficient
    /// first.
    pub fn charpoly(&self) -> &[T] {
        &self.charpoly
    }

    pub fn abs_det(&self) -> &T {
        &self.abs_det
    }

    /// `|det A_r| = 1`: the limit is free of rank `r`.
    pub fn is_free(&self) -> bool {
        self.abs_det.is_one()
    }

    /// Membership of `v` (coordinates in the reduced basis) in
    /// `∪ A_r^{-n} Z^r`.
    ///
    /// With `D` the common denominator of `v`, membership means
    /// `A_r^n (Dv) ≡ 0 (mod D)` for some `n`. The kernels of `A_r^n` on
    /// `(Z/D)^r` form an increasing chain in a group of order `D^r`, so the
    /// chain is stable after `r·log2(D)` steps and the search below is exact.
    pub fn contains(&self, v: &[Ratio<T>]) -> bool {
        assert_eq!(v.len(), self.rank(), "vector length must equal the eventual rank");
        let denom = v.iter().fold(T::one(), |acc, x| acc.lcm(x.denom()));
        if denom.is_one() {
            return true;
        }
        let mut u: Vec<T> = v
            .iter()
            .map(|x| (x.numer().clone() * (denom.clone() / x.denom().clone())).mod_floor(&denom))
            .collect();
        let bound = self.rank() * bit_length(&denom) + 1;
        for _ in 0..=bound {
            if u.iter().all(|x| x.is_zero()) {
                return true;
            }
            u = self
                .reduced
                .mul_vec(&u)
                .into_iter()
                .map(|x| x.mod_floor(&denom))
                .collect();
        }
        false
    }

    /// Coordinates in the reduced basis of the class `[v, n]`, `v ∈ Z^m`,
    /// `n >= 1`.
    pub fn class_coordinates(&self, v: &[T], stage: u32) -> Vec<Ratio<T>> {
        assert!(stage >= 1, "stages start at 1");
        let m = self.ambient_rank() as u32;
        let pushed = self.matrix.pow(m).mul_vec(v);
        let coords = lattice_coordinates(&self.basis, &pushed).expect("A^m v lies in the eventual lattice");
        let mut x: Vec<Ratio<T>> = coords.into_iter().map(Ratio::from_integer).collect();
        for _ in 0..(stage - 1 + m) {
            x = solve_rational(&self.reduced, &x);
        }
        x
    }
}

/// Hermite basis (as rows) of `Q·colspace(b) ∩ Z^m`.
pub fn saturated_column_basis<T: Int>(b: &Matrix<T>) -> Matrix<T> {
    let s = smith_normal_form(b);
    let r = s.rank();
    hermite_rows(&s.u.block(0, b.rows(), 0, r).transpose())
}

/// Solves `A x = y` over the rationals for invertible `A` (Cramer-free
/// Gauss-Jordan).
pub fn solve_rational<T: Int>(a: &Matrix<T>, y: &[Ratio<T>]) -> Vec<Ratio<T>> {
    let n = a.rows();
    let mut aug: Vec<Vec<Ratio<T>>> = (0..n)
        .map(|i| {
            let mut row: Vec<Ratio<T>> = a.row(i).iter().cloned().map(Ratio::from_integer).collect();
            row.push(y[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .find(|&i| !aug[i][col].is_zero())
            .expect("matrix must be invertible");
        aug.swap(col, p);
        let pivot = aug[col][col].clone();
        for x in aug[col].iter_mut() {
            *x = x.clone() / pivot.clone();
        }
        for i in 0..n {
            if i != col && !aug[i][col].is_zero() {
                let f = aug[i][col].clone();
                for j in 0..=n {
                    let v = aug[col][j].clone() * f.clone();
                    aug[i][j] = aug[i][j].clone() - v;
                }
            }
        }
    }
    aug.into_iter().map(|row| row[n].clone()).collect()
}

/// A fixed sample set in `Q^r`: `e_i / p` and `(1, ..., 1) / p` for
/// `p in {2, 3, 5, 9}`, plus `0`.
pub fn standard_samples<T: Int>(r: usize) -> Vec<Vec<Ratio<T>>> {
    let mut out = vec![vec![Ratio::zero(); r]];
    for p in [2, 3, 5, 9] {
        let q = Ratio::new(T::one(), T::from_i64_exact(p));
        for i in 0..r {
            let mut v = vec![Ratio::zero(); r];
            v[i] = q.clone();
            out.push(v);
        }
        out.push(vec![q; r]);
    }
    out
}

/// Whether two limits presented on the same eventual lattice agree as
/// subgroups of `Q^r` on every sample.
pub fn limits_agree_on_samples<T: Int>(
    g1: &StationaryLimit<T>,
    g2: &StationaryLimit<T>,
    samples: &[Vec<Ratio<T>>],
) -> Result<bool, Error> {
    if g1.rank() != g2.rank() {
        return Err(Error::Dimension(format!(
            "rank mismatch: {} vs {}",
            g1.rank(),
            g2.rank()
        )));
    }
    if g1.basis() != g2.basis() {
        return Err(Error::Precondition("limits are presented on different lattices".into()));
    }
    Ok(samples.iter().all(|v| g1.contains(v) == g2.contains(v)))
}
