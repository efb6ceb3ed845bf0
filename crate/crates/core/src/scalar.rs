//! Exact integer scalars.
//!
//! Every matrix routine in this crate is written against [`Int`], which is
//! satisfied by `i64`, `i128` and `BigInt`. The command-line tool always
//! runs on `BigInt`; the machine-word instantiations suit small rules where
//! overflow is known not to happen.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact, signed Euclidean ring of integers.
pub trait Int:
    Clone + Debug + Display + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_usize_exact(n: usize) -> Self {
        Self::from_usize(n).expect("integer type too narrow")
    }

    fn from_i64_exact(n: i64) -> Self {
        Self::from_i64(n).expect("integer type too narrow")
    }
}

impl<T> Int for T where
    T: Clone + Debug + Display + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// gcd of a slice; zero for an empty or all-zero slice.
pub fn gcd_all<T: Int>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |acc, v| acc.gcd(v))
}

/// Number of bits needed to write `|n|`.
pub fn bit_length<T: Int>(n: &T) -> usize {
    let two = T::one() + T::one();
    let mut n = n.abs();
    let mut bits = 0;
    while !n.is_zero() {
        n = n / two.clone();
        bits += 1;
    }
    bits
}
