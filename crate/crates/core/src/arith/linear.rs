use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::{MatQ, MatZ};
use super::ArithError;

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn det_z(m: &MatZ) -> BigInt {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let akk = a.get(k, k).clone();
        for i in k + 1..n {
            let aik = a.get(i, k).clone();
            for j in k + 1..n {
                let v = (a.get(i, j) * &akk - &aik * a.get(k, j)) / &prev;
                a.set(i, j, v);
            }
            a.set(i, k, BigInt::zero());
        }
        prev = akk;
    }
    let d = a.get(n - 1, n - 1).clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Determinant over the rationals by Gaussian elimination.
pub fn det_q(m: &MatQ) -> BigRational {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a.get(i, k).is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            a.swap_rows(k, p);
            det = -det;
        }
        let pivot = a.get(k, k).clone();
        det *= &pivot;
        for i in k + 1..n {
            if a.get(i, k).is_zero() {
                continue;
            }
            let f = a.get(i, k) / &pivot;
            for j in k..n {
                let v = a.get(i, j) - &f * a.get(k, j);
                a.set(i, j, v);
            }
        }
    }
    det
}

/// Exact determinant for integer or rational matrices.
pub trait ExactDet {
    fn det_exact(&self) -> BigRational;
}

impl ExactDet for MatZ {
    fn det_exact(&self) -> BigRational {
        BigRational::from_integer(det_z(self))
    }
}

impl ExactDet for MatQ {
    fn det_exact(&self) -> BigRational {
        det_q(self)
    }
}

/// Reduced row echelon form; returns the pivot columns.
fn rref(a: &mut MatQ) -> Vec<usize> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a.get(r, c).recip();
        for j in 0..cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).clone();
            for j in 0..cols {
                let v = a.get(i, j) - &f * a.get(r, j);
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_q(m: &MatQ) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// One exact solution of `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub x: Vec<BigRational>,
    /// Dimension of the solution space; zero means the solution is unique.
    pub nullity: usize,
}

pub fn solve_linear(a: &MatQ, b: &[BigRational]) -> Result<Solution, ArithError> {
    if b.len() != a.rows() {
        return Err(ArithError::Shape(format!(
            "right-hand side of length {} for {} equations",
            b.len(),
            a.rows()
        )));
    }
    let (rows, cols) = (a.rows(), a.cols());
    let mut aug = MatQ::from_fn(rows, cols + 1, |i, j| {
        if j < cols {
            a.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return Err(ArithError::Inconsistent);
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug.get(r, cols).clone();
    }
    Ok(Solution {
        x,
        nullity: cols - pivots.len(),
    })
}

/// Like [`solve_linear`] but insists on a unique solution.
pub fn solve_unique(a: &MatQ, b: &[BigRational]) -> Result<Vec<BigRational>, ArithError> {
    let s = solve_linear(a, b)?;
    if s.nullity > 0 {
        return Err(ArithError::Underdetermined { nullity: s.nullity });
    }
    Ok(s.x)
}

pub fn inverse_q(m: &MatQ) -> Result<MatQ, ArithError> {
    if !m.is_square() {
        return Err(ArithError::Shape("inverse of a non-square matrix".into()));
    }
    let n = m.rows();
    let mut aug = MatQ::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m.get(i, j).clone()
        } else if j - n == i {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    });
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(ArithError::Singular);
    }
    Ok(MatQ::from_fn(n, n, |i, j| aug.get(i, n + j).clone()))
}
