//! Hermite and Smith normal forms over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::MatZ;

/// Row Hermite normal form together with the transform.
#[derive(Clone, Debug)]
pub struct Hnf {
    /// `U * M`, nonzero rows first, zero rows at the bottom.
    pub h: MatZ,
    /// Unimodular row transform.
    pub u: MatZ,
    /// Number of nonzero rows of `h`.
    pub rank: usize,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
}

impl Hnf {
    /// The nonzero rows of `h`, i.e. a basis of the row lattice.
    pub fn basis(&self) -> MatZ {
        let idx: Vec<usize> = (0..self.rank).collect();
        self.h.select_rows(&idx)
    }
}

/// Smith normal form `U * M * V = D`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: MatZ,
    pub u: MatZ,
    pub v: MatZ,
}

impl Snf {
    /// The diagonal entries `d_1 | d_2 | ...` (including trailing zeros).
    pub fn invariants(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d.get(i, i).clone()).collect()
    }
}

fn row_axpy(m: &mut MatZ, target: usize, q: &BigInt, source: usize) {
    // row_target -= q * row_source
    for j in 0..m.cols() {
        let s = m.get(source, j);
        if s.is_zero() {
            continue;
        }
        let v = m.get(target, j) - q * s;
        m.set(target, j, v);
    }
}

fn col_axpy(m: &mut MatZ, target: usize, q: &BigInt, source: usize) {
    for i in 0..m.rows() {
        let s = m.get(i, source);
        if s.is_zero() {
            continue;
        }
        let v = m.get(i, target) - q * s;
        m.set(i, target, v);
    }
}

fn negate_row(m: &mut MatZ, i: usize) {
    for j in 0..m.cols() {
        let v = -m.get(i, j);
        m.set(i, j, v);
    }
}

/// Row-style Hermite normal form: positive pivots, entries above each pivot
/// reduced into `[0, pivot)`, zero rows last.
pub fn hnf(m: &MatZ) -> Hnf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = MatZ::identity(rows);
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| !h.get(i, col).is_zero())
                .min_by(|&a, &b| h.get(a, col).abs().cmp(&h.get(b, col).abs()));
            let Some(i) = best else { break };
            h.swap_rows(r, i);
            u.swap_rows(r, i);
            let pivot = h.get(r, col).clone();
            let mut clean = true;
            for i in r + 1..rows {
                if h.get(i, col).is_zero() {
                    continue;
                }
                let q = h.get(i, col).div_floor(&pivot);
                row_axpy(&mut h, i, &q, r);
                row_axpy(&mut u, i, &q, r);
                if !h.get(i, col).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(r, col).is_zero() {
            continue;
        }
        if h.get(r, col).is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        let pivot = h.get(r, col).clone();
        for i in 0..r {
            let q = h.get(i, col).div_floor(&pivot);
            if !q.is_zero() {
                row_axpy(&mut h, i, &q, r);
                row_axpy(&mut u, i, &q, r);
            }
        }
        pivots.push(col);
        r += 1;
    }
    Hnf {
        h,
        u,
        rank: r,
        pivots,
    }
}

/// Smith normal form with `d_i | d_{i+1}` and `d_i >= 0`.
pub fn snf(m: &MatZ) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = MatZ::identity(rows);
    let mut v = MatZ::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((i, j)) = best else {
                return Snf { d, u, v };
            };
            d.swap_rows(t, i);
            u.swap_rows(t, i);
            d.swap_cols(t, j);
            v.swap_cols(t, j);
            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).div_floor(&pivot);
                row_axpy(&mut d, i, &q, t);
                row_axpy(&mut u, i, &q, t);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).div_floor(&pivot);
                col_axpy(&mut d, j, &q, t);
                col_axpy(&mut v, j, &q, t);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let offending =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    let minus_one = BigInt::from(-1);
                    row_axpy(&mut d, t, &minus_one, i);
                    row_axpy(&mut u, t, &minus_one, i);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    Snf { d, u, v }
}

/// Basis (as rows) of the integer kernel `{x : A x = 0}`. The result is
/// saturated and in Hermite normal form.
pub fn integer_kernel(a: &MatZ) -> MatZ {
    let n = a.cols();
    let t = hnf(&a.transpose());
    let idx: Vec<usize> = (t.rank..n).collect();
    let k = t.u.select_rows(&idx);
    hnf(&k).basis()
}

/// Basis of the row lattice spanned by the rows of `m`.
pub fn row_lattice_basis(m: &MatZ) -> MatZ {
    hnf(m).basis()
}
