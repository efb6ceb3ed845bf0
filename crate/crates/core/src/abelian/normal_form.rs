//! Smith and Hermite normal forms over the integers.

use crate::matrix::Matrix;
use crate::scalar::Int;

/// `M = U · D · V` with `U`, `V` unimodular and `D` diagonal with
/// `d_1 | d_2 | ...`, all `d_i >= 0`. The inverses of both transforms are
/// carried along so callers can change basis without a separate inversion.
#[derive(Clone, Debug)]
pub struct Smith<T: Int> {
    pub u: Matrix<T>,
    pub u_inv: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
    pub v_inv: Matrix<T>,
}

impl<T: Int> Smith<T> {
    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<T> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn smith_normal_form<T: Int>(m: &Matrix<T>) -> Smith<T> {
    let (r, c) = (m.rows(), m.cols());
    let mut d = m.clone();
    // invariants: original = u · d · v, u · u_inv = 1, v · v_inv = 1
    let mut u = Matrix::identity(r);
    let mut u_inv = Matrix::identity(r);
    let mut v = Matrix::identity(c);
    let mut v_inv = Matrix::identity(c);

    // d <- E d with E: row[dst] += k row[src]
    let row_add = |d: &mut Matrix<T>, u: &mut Matrix<T>, u_inv: &mut Matrix<T>, dst, src, k: &T| {
        d.add_row_multiple(dst, src, k);
        u.add_col_multiple(src, dst, &-k.clone());
        u_inv.add_row_multiple(dst, src, k);
    };
    let col_add = |d: &mut Matrix<T>, v: &mut Matrix<T>, v_inv: &mut Matrix<T>, dst, src, k: &T| {
        d.add_col_multiple(dst, src, k);
        v.add_row_multiple(src, dst, &-k.clone());
        v_inv.add_col_multiple(dst, src, k);
    };

    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &d[(i, j)];
                    if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, u_inv, d, v, v_inv);
            };
            d.swap_rows(t, pi);
            u.swap_cols(t, pi);
            u_inv.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_rows(t, pj);
            v_inv.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                row_add(&mut d, &mut u, &mut u_inv, i, t, &-q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..c {
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                col_add(&mut d, &mut v, &mut v_inv, j, t, &-q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let pivot = d[(t, t)].clone();
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(d[(i, j)].clone() % pivot.clone()).is_zero()));
            match offender {
                Some(i) => row_add(&mut d, &mut u, &mut u_inv, t, i, &T::one()),
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_col(t);
            u_inv.negate_row(t);
        }
    }
    finish(u, u_inv, d, v, v_inv)
}

fn finish<T: Int>(u: Matrix<T>, u_inv: Matrix<T>, d: Matrix<T>, v: Matrix<T>, v_inv: Matrix<T>) -> Smith<T> {
    Smith { u, u_inv, d, v, v_inv }
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `m`:
/// echelon rows with positive pivots and entries above each pivot reduced
/// into `[0, pivot)`. Zero rows are dropped, so the result is the canonical
/// basis of the row lattice.
pub fn hermite_rows<T: Int>(m: &Matrix<T>) -> Matrix<T> {
    let mut a = m.clone();
    let (r, c) = (a.rows(), a.cols());
    let mut row = 0;
    for col in 0..c {
        if row == r {
            break;
        }
        loop {
            let best = (row..r)
                .filter(|&i| !a[(i, col)].is_zero())
                .min_by(|&x, &y| a[(x, col)].abs().cmp(&a[(y, col)].abs()));
            let Some(p) = best else { break };
            a.swap_rows(row, p);
            let mut done = true;
            for i in row + 1..r {
                let q = a[(i, col)].div_floor(&a[(row, col)]);
                a.add_row_multiple(i, row, &-q);
                done &= a[(i, col)].is_zero();
            }
            if done {
                break;
            }
        }
        if a[(row, col)].is_zero() {
            continue;
        }
        if a[(row, col)].is_negative() {
            a.negate_row(row);
        }
        for i in 0..row {
            let q = a[(i, col)].div_floor(&a[(row, col)]);
            a.add_row_multiple(i, row, &-q);
        }
        row += 1;
    }
    a.block(0, row, 0, c)
}

/// Coordinates of `x` in the lattice basis given by the rows of a Hermite
/// form `h`, or `None` if `x` is not in the lattice.
pub fn lattice_coordinates<T: Int>(h: &Matrix<T>, x: &[T]) -> Option<Vec<T>> {
    assert_eq!(h.cols(), x.len(), "dimension mismatch");
    let mut rest = x.to_vec();
    let mut coords = Vec::with_capacity(h.rows());
    for k in 0..h.rows() {
        let pivot_col = (0..h.cols()).find(|&j| !h[(k, j)].is_zero())?;
        let (q, rem) = rest[pivot_col].div_rem(&h[(k, pivot_col)]);
        if !rem.is_zero() {
            return None;
        }
        for j in 0..h.cols() {
            rest[j] = rest[j].clone() - q.clone() * h[(k, j)].clone();
        }
        coords.push(q);
    }
    rest.iter().all(|x| x.is_zero()).then_some(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Matrix<i64> {
        Matrix::from_i64_rows(rows)
    }

    fn check_smith(a: &Matrix<i64>) -> Smith<i64> {
        let s = smith_normal_form(a);
        assert_eq!(&(&s.u * &s.d) * &s.v, *a, "reconstruction");
        assert_eq!(&s.u * &s.u_inv, Matrix::identity(a.rows()));
        assert_eq!(&s.v * &s.v_inv, Matrix::identity(a.cols()));
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert_eq!(s.d[(i, j)], 0);
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert_eq!(w[1] % w[0], 0, "divisibility chain {f:?}");
        }
        assert!(f.iter().all(|&x| x > 0));
        s
    }

    #[test]
    fn smith_examples() {
        assert_eq!(check_smith(&m(&[&[2, 1], &[1, 2]])).invariant_factors(), vec![1, 3]);
        assert!(check_smith(&Matrix::zeros(2, 3)).invariant_factors().is_empty());
        assert_eq!(check_smith(&Matrix::identity(3)).d, Matrix::identity(3));
        assert_eq!(check_smith(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])).invariant_factors(), vec![2, 6, 12]);
        assert_eq!(check_smith(&m(&[&[1, -1]])).invariant_factors(), vec![1]);
        assert_eq!(check_smith(&m(&[&[1], &[-1]])).invariant_factors(), vec![1]);
    }

    #[test]
    fn smith_on_bigint() {
        let a: Matrix<BigInt> = Matrix::from_i64_rows(&[&[5, 4], &[4, 5]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(9)]);
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite_rows(&m(&[&[2, 1], &[1, 2]])), m(&[&[1, 2], &[0, 3]]));
        assert_eq!(hermite_rows(&m(&[&[-1, -1], &[2, 2]])), m(&[&[1, 1]]));
        assert_eq!(hermite_rows(&m(&[&[0, 0]])).rows(), 0);
        let h = hermite_rows(&m(&[&[1, 2], &[0, 3]]));
        assert_eq!(lattice_coordinates(&h, &[2, 7]), Some(vec![2, 1]));
        assert_eq!(lattice_coordinates(&h, &[0, 1]), None);
    }

    fn small_matrix() -> impl Strategy<Value = Matrix<i64>> {
        (1usize..4, 1usize..4).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-6i64..7, r * c).prop_map(move |v| {
                Matrix::from_rows(v.chunks(c).map(<[i64]>::to_vec).collect())
            })
        })
    }

    proptest! {
        #[test]
        fn smith_reconstructs(a in small_matrix()) {
            let s = check_smith(&a);
            prop_assert_eq!(s.rank(), a.rank());
        }

        #[test]
        fn hermite_is_canonical(a in small_matrix(), k in -3i64..4) {
            // adding a multiple of one row to another does not change the lattice
            let h = hermite_rows(&a);
            let mut b = a.clone();
            if b.rows() > 1 {
                b.add_row_multiple(1, 0, &k);
                b.swap_rows(0, 1);
            }
            prop_assert_eq!(hermite_rows(&b), h.clone());
            for i in 0..a.rows() {
                prop_assert!(lattice_coordinates(&h, a.row(i)).is_some());
            }
        }
    }
}
