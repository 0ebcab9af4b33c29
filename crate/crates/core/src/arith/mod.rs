//! Exact integer/rational scalars and matrices.

mod linear;
mod matrix;
mod normal_form;

pub use linear::{det_q, det_z, inverse_q, rank_q, solve_linear, solve_unique, ExactDet, Solution};
pub use matrix::{MatQ, MatZ, Matrix, Scalar};
pub use normal_form::{hnf, integer_kernel, row_lattice_basis, snf, Hnf, Snf};

pub use num_bigint::BigInt as Int;
pub use num_rational::BigRational as Rat;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("underdetermined linear system (solution space of dimension {nullity})")]
    Underdetermined { nullity: usize },
    #[error("singular matrix")]
    Singular,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn to_rat_vec(v: &[BigInt]) -> Vec<BigRational> {
    v.iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect()
}

/// Integer vector if every entry is integral.
pub fn to_int_vec(v: &[BigRational]) -> Option<Vec<BigInt>> {
    v.iter()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect()
}

/// Representative of `x` modulo `m` in `[0, m)` (`m > 0`).
pub fn rat_mod(x: &BigRational, m: &BigRational) -> BigRational {
    let q = (x / m).floor();
    x - q * m
}

/// Nonnegative residue of an integer.
pub fn int_mod(x: &BigInt, m: &BigInt) -> BigInt {
    x.mod_floor(m)
}

/// Integer square root when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    if n.is_zero() {
        return Some(BigInt::zero());
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Dot product of integer vectors.
pub fn dot(u: &[BigInt], v: &[BigInt]) -> BigInt {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_reduction() {
        let x = rat(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
    }

    #[test]
    fn mod_representatives() {
        assert_eq!(rat_mod(&rat(-2, 3), &rat(2, 1)), rat(4, 3));
        assert_eq!(rat_mod(&rat(8, 3), &rat(2, 1)), rat(2, 3));
        assert_eq!(
            int_mod(&BigInt::from(-7), &BigInt::from(3)),
            BigInt::from(2)
        );
    }

    #[test]
    fn square_roots() {
        assert_eq!(exact_sqrt(&BigInt::from(81)), Some(BigInt::from(9)));
        assert_eq!(exact_sqrt(&BigInt::from(80)), None);
        assert_eq!(exact_sqrt(&BigInt::from(-4)), None);
    }
}
