//! Short vectors of definite lattices by Fincke-Pohst enumeration.
//!
//! Bounds come from an exact rational Cholesky decomposition. The search
//! itself runs in `f64` with a small slack and every candidate is checked
//! with exact integer arithmetic, so counts are exact.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::{det_z, hnf, MatZ};
use crate::lattice::Lattice;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShortVecError {
    #[error("lattice is not definite")]
    IndefiniteLattice,
    #[error("norm bound must be positive")]
    BadBound,
    #[error("Gram entries exceed the enumeration range")]
    Overflow,
}

/// A lattice vector in basis coordinates with its norm.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ShortVector {
    pub coords: Vec<i64>,
    pub norm: i64,
}

impl ShortVector {
    pub fn coords_big(&self) -> Vec<BigInt> {
        self.coords.iter().map(|&x| BigInt::from(x)).collect()
    }
}

/// Counts of nonzero vectors by norm, with signs as in the lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumReport {
    pub lattice: String,
    pub bound: u64,
    pub counts: BTreeMap<i64, u64>,
    pub min: Option<i64>,
    /// Lexicographically sorted, present when requested.
    pub vectors: Option<Vec<ShortVector>>,
}

impl EnumReport {
    pub fn count(&self, norm: i64) -> u64 {
        self.counts.get(&norm).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

struct Counts<'a>(&'a BTreeMap<i64, u64>);

impl Serialize for Counts<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(&k.to_string(), v)?;
        }
        map.end()
    }
}

impl Serialize for EnumReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("lattice", &self.lattice)?;
        map.serialize_entry("counts", &Counts(&self.counts))?;
        map.serialize_entry("min", &self.min)?;
        map.end()
    }
}

/// Positive definite form prepared for enumeration.
struct Enumerator {
    gram: Vec<Vec<i64>>,
    diag: Vec<f64>,
    mu: Vec<Vec<f64>>,
}

impl Enumerator {
    fn new(gram: &MatZ) -> Result<Self, ShortVecError> {
        let n = gram.rows();
        let a = gram.to_rational();
        let mut q = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            let mut d = a.get(i, i).clone();
            for k in 0..i {
                d -= &q[k][k] * &q[k][i] * &q[k][i];
            }
            if !d.is_positive() {
                return Err(ShortVecError::IndefiniteLattice);
            }
            q[i][i] = d;
            for j in i + 1..n {
                let mut s = a.get(i, j).clone();
                for k in 0..i {
                    s -= &q[k][k] * &q[k][i] * &q[k][j];
                }
                q[i][j] = s / &q[i][i];
            }
        }
        let to_f = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
        let gram = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| gram.get(i, j).to_i64().ok_or(ShortVecError::Overflow))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Enumerator {
            gram,
            diag: (0..n).map(|i| to_f(&q[i][i])).collect(),
            mu: q.iter().map(|row| row.iter().map(to_f).collect()).collect(),
        })
    }

    fn exact_norm(&self, x: &[i64]) -> i128 {
        let n = x.len();
        let mut acc: i128 = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let mut row: i128 = 0;
            for j in 0..n {
                row += self.gram[i][j] as i128 * x[j] as i128;
            }
            acc += x[i] as i128 * row;
        }
        acc
    }

    /// Calls `visit` on every nonzero `x` with `0 < Q(x) <= bound`.
    fn run(&self, bound: u64, mut visit: impl FnMut(&[i64], i128)) {
        let n = self.diag.len();
        if n == 0 {
            return;
        }
        let mut x = vec![0i64; n];
        let slack = 1e-7 * (bound as f64 + 1.0);
        self.descend(n - 1, bound as f64 + slack, bound, &mut x, &mut visit);
    }

    fn descend(
        &self,
        i: usize,
        remaining: f64,
        bound: u64,
        x: &mut [i64],
        visit: &mut impl FnMut(&[i64], i128),
    ) {
        let n = x.len();
        let center: f64 = -(i + 1..n).map(|j| self.mu[i][j] * x[j] as f64).sum::<f64>();
        let radius = (remaining.max(0.0) / self.diag[i]).sqrt();
        let lo = (center - radius - 1e-9).ceil() as i64;
        let hi = (center + radius + 1e-9).floor() as i64;
        for v in lo..=hi {
            x[i] = v;
            let t = v as f64 - center;
            let used = self.diag[i] * t * t;
            let rest = remaining - used;
            if rest < -1e-7 * (bound as f64 + 1.0) {
                continue;
            }
            if i == 0 {
                if x.iter().all(|&c| c == 0) {
                    continue;
                }
                let norm = self.exact_norm(x);
                if norm > 0 && norm <= bound as i128 {
                    visit(x, norm);
                }
            } else {
                self.descend(i - 1, rest, bound, x, visit);
            }
        }
        x[i] = 0;
    }
}

/// Returns the positive definite Gram to enumerate and the sign of the
/// original lattice.
fn positive_form(lattice: &Lattice) -> Result<(MatZ, i64), ShortVecError> {
    match lattice.definiteness() {
        Some(true) => Ok((lattice.gram().clone(), 1)),
        Some(false) => Ok((-lattice.gram(), -1)),
        None => Err(ShortVecError::IndefiniteLattice),
    }
}

/// Enumerates every nonzero vector with `|norm| <= bound`.
pub fn short_vectors(
    lattice: &Lattice,
    bound: u64,
    keep_vectors: bool,
) -> Result<EnumReport, ShortVecError> {
    if bound == 0 {
        return Err(ShortVecError::BadBound);
    }
    let (gram, sign) = positive_form(lattice)?;
    let e = Enumerator::new(&gram)?;
    let mut counts = BTreeMap::new();
    let mut vectors = Vec::new();
    e.run(bound, |x, norm| {
        let norm = sign * norm as i64;
        *counts.entry(norm).or_insert(0u64) += 1;
        if keep_vectors {
            vectors.push(ShortVector {
                coords: x.to_vec(),
                norm,
            });
        }
    });
    vectors.sort();
    let min = if sign > 0 {
        counts.keys().next().copied()
    } else {
        counts.keys().next_back().copied()
    };
    Ok(EnumReport {
        lattice: lattice.label().unwrap_or("").to_string(),
        bound,
        counts,
        min,
        vectors: keep_vectors.then_some(vectors),
    })
}

/// Norm of a shortest nonzero vector (negative for negative definite input).
pub fn min_norm(lattice: &Lattice) -> Result<i64, ShortVecError> {
    let (gram, _) = positive_form(lattice)?;
    if gram.rows() == 0 {
        return Err(ShortVecError::BadBound);
    }
    let bound = (0..gram.rows())
        .map(|i| gram.get(i, i).to_u64().ok_or(ShortVecError::Overflow))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .min()
        .unwrap();
    let report = short_vectors(lattice, bound, false)?;
    Ok(report.min.expect("a basis vector attains the bound"))
}

/// Whether the vectors of exactly the given norm span the whole lattice.
pub fn spans_at_norm(lattice: &Lattice, norm: i64) -> Result<bool, ShortVecError> {
    let report = short_vectors(lattice, norm.unsigned_abs().max(1), true)?;
    let rows: Vec<Vec<BigInt>> = report
        .vectors
        .unwrap_or_default()
        .iter()
        .filter(|v| v.norm == norm)
        .map(ShortVector::coords_big)
        .collect();
    if rows.is_empty() {
        return Ok(false);
    }
    let basis = hnf(&MatZ::from_rows(rows).expect("equal lengths")).basis();
    Ok(basis.rows() == lattice.rank() && det_z(&basis).abs() == BigInt::from(1))
}

/// `Gamma(n/2 + 1)`.
fn gamma_half_plus_one(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        (1..=n / 2).map(|k| k as f64).product()
    } else {
        // Gamma(k + 1/2) with k = (n + 1) / 2
        let k = n.div_ceil(2);
        (0..k).fold(PI.sqrt(), |acc, j| acc * (j as f64 + 0.5))
    }
}

/// Center density-style packing density `V_n r^n / sqrt|det|` with
/// `r = sqrt(|min|) / 2`. Approximate.
pub fn density(lattice: &Lattice) -> Result<f64, ShortVecError> {
    let mu = min_norm(lattice)?.unsigned_abs() as f64;
    let n = lattice.rank();
    let r = mu.sqrt() / 2.0;
    let volume = r.powi(n as i32) * PI.powf(n as f64 / 2.0) / gamma_half_plus_one(n);
    let det = lattice
        .det()
        .abs()
        .to_f64()
        .ok_or(ShortVecError::Overflow)?;
    Ok(volume / det.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::inverse_q;
    use crate::lattice::standard_lattice;

    fn lat(name: &str) -> Lattice {
        standard_lattice(name).unwrap()
    }

    /// Brute force over the box `|x_i| <= sqrt(bound * (G^-1)_ii)`.
    fn box_counts(lattice: &Lattice, bound: u64) -> BTreeMap<i64, u64> {
        let (g, sign) = positive_form(lattice).unwrap();
        let inv = inverse_q(&g.to_rational()).unwrap();
        let n = g.rows();
        let radii: Vec<i64> = (0..n)
            .map(|i| {
                (bound as f64 * inv.get(i, i).to_f64().unwrap())
                    .sqrt()
                    .floor() as i64
                    + 1
            })
            .collect();
        let mut counts = BTreeMap::new();
        let mut x: Vec<i64> = radii.iter().map(|r| -r).collect();
        loop {
            let v: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
            let norm = g.pair(&v, &v).to_i64().unwrap();
            if norm > 0 && norm as u64 <= bound {
                *counts.entry(sign * norm).or_insert(0) += 1;
            }
            let mut k = 0;
            loop {
                if k == n {
                    return counts;
                }
                if x[k] < radii[k] {
                    x[k] += 1;
                    break;
                }
                x[k] = -radii[k];
                k += 1;
            }
        }
    }

    #[test]
    fn hexagonal_lattice() {
        let r = short_vectors(&lat("A(2)"), 2, true).unwrap();
        assert_eq!(r.count(-2), 6);
        assert_eq!(r.total(), 6);
        assert_eq!(box_counts(&lat("A(2)"), 2), r.counts);
    }

    #[test]
    fn rank_one() {
        let r = short_vectors(&lat("rank1(-2)"), 2, true).unwrap();
        assert_eq!(r.total(), 2);
        let v = r.vectors.unwrap();
        assert_eq!(v[0].coords, vec![-1]);
        assert_eq!(v[1].coords, vec![1]);
    }

    #[test]
    fn small_catalog_lattices_match_box_search() {
        for name in ["A(1)", "A(2)", "A(3)", "A(4)", "Upsilon", "rank1(6)"] {
            let l = lat(name);
            for bound in [2, 4, 6, 10] {
                let r = short_vectors(&l, bound, false).unwrap();
                assert_eq!(r.counts, box_counts(&l, bound), "{name} bound {bound}");
            }
        }
    }

    #[test]
    fn indefinite_rejected() {
        assert_eq!(
            min_norm(&lat("U(3)")),
            Err(ShortVecError::IndefiniteLattice)
        );
        assert_eq!(
            short_vectors(&lat("A(2)"), 0, false),
            Err(ShortVecError::BadBound)
        );
    }

    #[test]
    fn spanning_sets() {
        assert!(spans_at_norm(&lat("A(3)"), -2).unwrap());
        assert!(!spans_at_norm(&lat("rank1(-8)"), -2).unwrap());
        // Upsilon has norm 2 vectors only along one line
        assert!(!spans_at_norm(&lat("Upsilon"), 2).unwrap());
    }

    #[test]
    fn min_norms_and_scaling() {
        assert_eq!(min_norm(&lat("A(4)")).unwrap(), -2);
        assert_eq!(min_norm(&lat("Upsilon")).unwrap(), 2);
        let scaled = lat("A(4)").rescale(&BigInt::from(3)).unwrap();
        assert_eq!(min_norm(&scaled).unwrap(), -6);
    }

    #[test]
    fn gamma_values() {
        assert!((gamma_half_plus_one(2) - 1.0).abs() < 1e-12);
        assert!((gamma_half_plus_one(12) - 720.0).abs() < 1e-9);
        assert!((gamma_half_plus_one(1) - PI.sqrt() / 2.0).abs() < 1e-12);
        assert!((gamma_half_plus_one(3) - 3.0 * PI.sqrt() / 4.0).abs() < 1e-12);
    }

    #[test]
    fn report_json() {
        let r = short_vectors(&lat("A(2)"), 2, false).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"lattice":"A(2)","counts":{"-2":6},"min":-2}"#);
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn counts_are_even_and_match_box(a in 2i64..6, b in -2i64..=2, c in 2i64..6) {
            prop_assume!(a * c - b * b > 0);
            let l = Lattice::from_i64(&[&[a, b], &[b, c]]).unwrap();
            let r = short_vectors(&l, 12, false).unwrap();
            prop_assert!(r.counts.values().all(|n| n % 2 == 0));
            prop_assert_eq!(r.counts, box_counts(&l, 12));
        }
    }
}
