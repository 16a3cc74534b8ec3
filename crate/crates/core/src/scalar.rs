//! Scalar abstraction shared by the linear algebra kernel.
//!
//! Structural computations run over exact rationals; the same elimination
//! code also runs over `f64`/`f32` with a pivot threshold, which the
//! kinetics layer uses for sanity checks.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{Num, One, Signed, Zero};

use crate::linalg::{self, Matrix};

/// A field element usable by [`Matrix`] elimination routines.
pub trait Scalar: Clone + Debug + PartialEq + PartialOrd + Num + Signed {
    /// `true` when the value must be treated as zero during elimination.
    fn is_negligible(&self) -> bool;

    /// Lossy conversion used for reporting and for float kinetics.
    fn to_f64(&self) -> f64;

    fn from_i64(v: i64) -> Self;

    /// Rank of a matrix over this scalar.
    fn rank(m: &Matrix<Self>) -> usize {
        linalg::rank_by_elimination(m)
    }
}

impl Scalar for BigRational {
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn rank(m: &Matrix<Self>) -> usize {
        bareiss_rank(m)
    }
}

impl Scalar for Rational64 {
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }

    fn from_i64(v: i64) -> Self {
        Rational64::from_integer(v)
    }
}

impl Scalar for f64 {
    fn is_negligible(&self) -> bool {
        self.abs() < 1e-10
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for f32 {
    fn is_negligible(&self) -> bool {
        self.abs() < 1e-5
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }

    fn from_i64(v: i64) -> Self {
        v as f32
    }
}

/// Fraction-free (Bareiss) rank of a rational matrix.
///
/// Each row is first scaled by the lcm of its denominators so the
/// elimination runs over integers; every intermediate entry is then a minor
/// of the scaled matrix and the divisions below are exact.
pub fn bareiss_rank(m: &Matrix<BigRational>) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();

    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][col].clone();
        let (top, bottom) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in bottom.iter_mut() {
            let factor = row[col].clone();
            for (x, p) in row[col + 1..cols].iter_mut().zip(&pivot_row[col + 1..cols]) {
                *x = (&*x * &pivot - &factor * p) / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Rational from a small integer fraction; panics on a zero denominator.
pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}
