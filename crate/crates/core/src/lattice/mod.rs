//! Integer quadratic lattices given by a symmetric Gram matrix.

mod catalog;
mod discriminant;
mod glue;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{det_z, exact_sqrt, hnf, integer_kernel, ArithError, MatQ, MatZ};

pub use catalog::{listed_generators, standard_lattice, CatalogKey};
pub use discriminant::{
    discriminant_form, discriminant_group, finite_form_normal, is_isomorphic, is_opposite,
    DiscriminantGroup, FiniteQuadraticForm, FormNormal, SquareClass, EXHAUSTIVE_BOUND,
};
pub use glue::{
    count_admissible, glue_conditions, glue_host, overlattice_from_glue, search_glue, GlueSearch,
    GlueVector, Overlattice,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("Gram matrix is not square and symmetric")]
    NotSymmetric,
    #[error("unknown lattice name `{0}`")]
    UnknownName(String),
    #[error("bad catalog parameter: {0}")]
    BadParam(String),
    #[error("rescaling by zero")]
    ZeroScale,
    #[error("Gram matrix is degenerate")]
    DegenerateGram,
    #[error("lattice is odd, the discriminant quadratic form is undefined")]
    OddLattice,
    #[error("finite form is not homogeneous of odd prime exponent")]
    NotHomogeneousOddPrime,
    #[error("group of order {order} is beyond the exhaustive search bound {bound}")]
    TooLarge { order: BigInt, bound: u64 },
    #[error("sublattice does not have finite index")]
    NotFiniteIndex,
    #[error("prime {0} is not one of 3, 5, 7")]
    BadPrime(i64),
    #[error("v/p does not lie in the dual lattice")]
    NotInDual,
    #[error("overlattice is not even")]
    OddResult,
    #[error("glue conditions fail")]
    ConditionsFail,
    #[error("lattice file: {0}")]
    Format(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A free Z-module with a symmetric integral bilinear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: MatZ,
    label: Option<String>,
}

/// Numbers of positive and negative eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.positive, self.negative)
    }
}

/// A sublattice given by basis rows in ambient coordinates.
#[derive(Clone, Debug)]
pub struct Sublattice {
    pub basis: MatZ,
    pub lattice: Lattice,
}

#[derive(Serialize, Deserialize)]
struct LatticeFile {
    label: String,
    rank: usize,
    gram: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn new(gram: MatZ) -> Result<Self, LatticeError> {
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        Ok(Lattice { gram, label: None })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, LatticeError> {
        let ragged = rows.iter().any(|r| r.len() != rows.len());
        if ragged {
            return Err(LatticeError::NotSymmetric);
        }
        Lattice::new(MatZ::from_i64(rows))
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &MatZ {
        &self.gram
    }

    pub fn det(&self) -> BigInt {
        det_z(&self.gram)
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram.get(i, i).is_even())
    }

    pub fn inner(&self, u: &[BigInt], v: &[BigInt]) -> BigInt {
        self.gram.pair(u, v)
    }

    pub fn norm(&self, v: &[BigInt]) -> BigInt {
        self.gram.pair(v, v)
    }

    /// Inner product of rational coordinate vectors.
    pub fn inner_q(&self, u: &[BigRational], v: &[BigRational]) -> BigRational {
        self.gram.to_rational().pair(u, v)
    }

    /// Gram matrix of the rows of `vectors`.
    pub fn gram_of_vectors(&self, vectors: &MatZ) -> MatZ {
        self.gram.congruent(vectors)
    }

    pub fn rescale(&self, n: &BigInt) -> Result<Lattice, LatticeError> {
        if n.is_zero() {
            return Err(LatticeError::ZeroScale);
        }
        let mut out = Lattice::new(self.gram.scale(n))?;
        if let Some(l) = &self.label {
            out.label = Some(format!("{l}({n})"));
        }
        Ok(out)
    }

    /// Exact signature by symmetric Gaussian elimination over Q.
    pub fn signature(&self) -> Result<Signature, LatticeError> {
        let n = self.rank();
        let mut a = self.gram.to_rational();
        let mut sig = Signature {
            positive: 0,
            negative: 0,
        };
        for k in 0..n {
            if let Some(i) = (k..n).find(|&i| !a.get(i, i).is_zero()) {
                sym_swap(&mut a, k, i);
            } else {
                let off = (k..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a.get(i, j).is_zero());
                let Some((i, j)) = off else {
                    return Err(LatticeError::DegenerateGram);
                };
                // e_i += e_j makes the diagonal entry 2 a_ij
                sym_add(&mut a, i, j);
                sym_swap(&mut a, k, i);
            }
            let pivot = a.get(k, k).clone();
            if pivot.is_positive() {
                sig.positive += 1;
            } else {
                sig.negative += 1;
            }
            for i in k + 1..n {
                if a.get(i, k).is_zero() {
                    continue;
                }
                let f = a.get(i, k) / &pivot;
                for j in k..n {
                    let v = a.get(i, j) - &f * a.get(k, j);
                    a.set(i, j, v);
                }
                for j in k..n {
                    let v = a.get(j, i) - &f * a.get(j, k);
                    a.set(j, i, v);
                }
            }
        }
        Ok(sig)
    }

    /// `Some(true)` for positive definite, `Some(false)` for negative definite.
    pub fn definiteness(&self) -> Option<bool> {
        let sig = self.signature().ok()?;
        if sig.negative == 0 {
            Some(true)
        } else if sig.positive == 0 {
            Some(false)
        } else {
            None
        }
    }

    /// Sublattice spanned by the rows of `generators`, with an HNF basis.
    pub fn span(&self, generators: &MatZ) -> Result<Sublattice, LatticeError> {
        let basis = hnf(generators).basis();
        let lattice = Lattice::new(self.gram_of_vectors(&basis))?;
        Ok(Sublattice { basis, lattice })
    }

    /// The primitive sublattice of vectors orthogonal to every row of `vectors`.
    pub fn orthogonal_complement(&self, vectors: &MatZ) -> Result<Sublattice, LatticeError> {
        if vectors.rows() == 0 {
            return Ok(Sublattice {
                basis: MatZ::identity(self.rank()),
                lattice: self.clone(),
            });
        }
        let constraints = vectors * &self.gram;
        let basis = integer_kernel(&constraints);
        let lattice = Lattice::new(self.gram_of_vectors(&basis))?;
        Ok(Sublattice { basis, lattice })
    }

    /// Index of the span of `vectors`, which must have full rank.
    pub fn span_index(&self, vectors: &MatZ) -> Result<BigInt, LatticeError> {
        let basis = hnf(vectors).basis();
        if basis.rows() != self.rank() {
            return Err(LatticeError::NotFiniteIndex);
        }
        Ok(det_z(&basis).abs())
    }

    pub fn to_json(&self) -> Result<String, LatticeError> {
        let gram = self
            .gram
            .to_i64()
            .ok_or_else(|| LatticeError::Format("entry exceeds 64 bits".into()))?;
        let file = LatticeFile {
            label: self.label.clone().unwrap_or_default(),
            rank: self.rank(),
            gram: (0..self.rank()).map(|i| gram.row(i).to_vec()).collect(),
        };
        serde_json::to_string(&file).map_err(|e| LatticeError::Format(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, LatticeError> {
        let file: LatticeFile =
            serde_json::from_str(text).map_err(|e| LatticeError::Format(e.to_string()))?;
        if file.gram.len() != file.rank || file.gram.iter().any(|r| r.len() != file.rank) {
            return Err(LatticeError::Format(format!(
                "gram is not {0}x{0}",
                file.rank
            )));
        }
        let rows: Vec<&[i64]> = file.gram.iter().map(Vec::as_slice).collect();
        let mut l = Lattice::from_i64(&rows)?;
        if !file.label.is_empty() {
            l.label = Some(file.label);
        }
        Ok(l)
    }
}

fn sym_swap(a: &mut MatQ, i: usize, j: usize) {
    a.swap_rows(i, j);
    a.swap_cols(i, j);
}

fn sym_add(a: &mut MatQ, i: usize, j: usize) {
    let n = a.rows();
    for c in 0..n {
        let v = a.get(i, c) + a.get(j, c);
        a.set(i, c, v);
    }
    for r in 0..n {
        let v = a.get(r, i) + a.get(r, j);
        a.set(r, i, v);
    }
}

/// Orthogonal direct sum.
pub fn direct_sum(parts: &[Lattice]) -> Lattice {
    let blocks: Vec<&MatZ> = parts.iter().map(|l| &l.gram).collect();
    let labels: Vec<&str> = parts.iter().filter_map(|l| l.label()).collect();
    let mut out = Lattice {
        gram: MatZ::block_diag(&blocks),
        label: None,
    };
    if labels.len() == parts.len() && !parts.is_empty() {
        out.label = Some(labels.join("+"));
    }
    out
}

/// `sqrt(det(sub) / det(lattice))` for a sublattice of equal rank.
pub fn sublattice_index(lattice: &Lattice, sub: &Lattice) -> Result<BigInt, LatticeError> {
    if lattice.rank() != sub.rank() {
        return Err(LatticeError::NotFiniteIndex);
    }
    let (d, ds) = (lattice.det(), sub.det());
    if d.is_zero() || ds.is_zero() {
        return Err(LatticeError::DegenerateGram);
    }
    let (q, r) = ds.div_rem(&d);
    if !r.is_zero() || q.is_negative() {
        return Err(LatticeError::NotFiniteIndex);
    }
    exact_sqrt(&q).ok_or(LatticeError::NotFiniteIndex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int_vec;
    use num_traits::One;

    fn lat(name: &str) -> Lattice {
        standard_lattice(name).unwrap()
    }

    #[test]
    fn direct_sums() {
        let s = direct_sum(&[lat("U"), lat("U(5)"), lat("U(5)")]);
        assert_eq!(s.rank(), 6);
        assert_eq!(s.det(), BigInt::from(-625));
        let empty = direct_sum(&[]);
        assert_eq!(empty.rank(), 0);
        assert_eq!(empty.det(), BigInt::from(1));
        let s = direct_sum(&[lat("U"), lat("U(3)"), lat("U(3)"), lat("A(2)"), lat("A(2)")]);
        assert_eq!(s.rank(), 10);
        assert_eq!(s.det(), BigInt::from(-729));
    }

    #[test]
    fn rescaling() {
        assert_eq!(
            lat("U").rescale(&BigInt::from(3)).unwrap().gram(),
            &MatZ::from_i64(&[&[0, 3], &[3, 0]])
        );
        assert_eq!(
            lat("rank1(2)").rescale(&BigInt::from(-1)).unwrap().gram(),
            &MatZ::from_i64(&[&[-2]])
        );
        assert_eq!(
            lat("U").rescale(&BigInt::zero()),
            Err(LatticeError::ZeroScale)
        );
    }

    #[test]
    fn signatures() {
        let sig = |l: &Lattice| {
            let s = l.signature().unwrap();
            (s.positive, s.negative)
        };
        assert_eq!(sig(&lat("U")), (1, 1));
        assert_eq!(sig(&lat("Lambda_K3")), (3, 19));
        let t = direct_sum(&[lat("U"), lat("U(3)"), lat("U(3)"), lat("A(2)"), lat("A(2)")]);
        assert_eq!(sig(&t), (3, 7));
        let degenerate = Lattice::from_i64(&[&[0, 0], &[0, 1]]).unwrap();
        assert_eq!(degenerate.signature(), Err(LatticeError::DegenerateGram));
    }

    #[test]
    fn signature_matches_sylvester_minors() {
        // oracle: for a Gram with all leading principal minors nonzero, the
        // number of sign changes in 1, D1, D2, ... counts negative eigenvalues
        let g = MatZ::from_i64(&[&[2, 1, 0], &[1, -3, 2], &[0, 2, 1]]);
        let mut changes = 0;
        let mut prev = BigInt::one();
        for k in 1..=3 {
            let idx: Vec<usize> = (0..k).collect();
            let minor = MatZ::from_fn(k, k, |i, j| g.get(idx[i], idx[j]).clone());
            let d = det_z(&minor);
            assert!(!d.is_zero());
            if d.is_negative() != prev.is_negative() {
                changes += 1;
            }
            prev = d;
        }
        let s = Lattice::new(g).unwrap().signature().unwrap();
        assert_eq!(s.negative, changes);
        assert_eq!(s.positive, 3 - changes);
    }

    #[test]
    fn complements() {
        let u = lat("U");
        let c = u
            .orthogonal_complement(&MatZ::from_i64(&[&[1, 0]]))
            .unwrap();
        assert_eq!(c.lattice.gram(), &MatZ::from_i64(&[&[0]]));
        let all = u.orthogonal_complement(&MatZ::zeros(0, 2)).unwrap();
        assert_eq!(all.lattice, u);
    }

    #[test]
    fn complement_is_primitive() {
        // (2, 0, 0) and (1, 1, 0) orthogonal in Z^3 with the standard form
        let l = Lattice::new(MatZ::identity(3)).unwrap();
        let c = l
            .orthogonal_complement(&MatZ::from_i64(&[&[1, 1, 0]]))
            .unwrap();
        assert_eq!(c.basis.rows(), 2);
        let snf = crate::arith::snf(&c.basis);
        assert!(snf.invariants().iter().all(|d| d.is_one()));
    }

    #[test]
    fn gram_of_basis_vectors() {
        let u = lat("U");
        assert_eq!(u.gram_of_vectors(&MatZ::identity(2)), *u.gram());
        assert_eq!(u.norm(&int_vec(&[1, 1])), BigInt::from(2));
    }

    #[test]
    fn index_from_determinants() {
        let l = lat("A(2)");
        let sub = l.span(&MatZ::from_i64(&[&[3, 0], &[0, 1]])).unwrap();
        assert_eq!(sublattice_index(&l, &sub.lattice).unwrap(), BigInt::from(3));
        assert_eq!(
            sublattice_index(&l, &lat("U")),
            Err(LatticeError::NotFiniteIndex)
        );
    }

    #[test]
    fn json_round_trip() {
        let l = lat("Upsilon");
        let text = l.to_json().unwrap();
        assert_eq!(text, r#"{"label":"Upsilon","rank":2,"gram":[[4,1],[1,2]]}"#);
        assert_eq!(Lattice::from_json(&text).unwrap(), l);
        assert!(Lattice::from_json(r#"{"label":"x","rank":2,"gram":[[1]]}"#).is_err());
        assert!(Lattice::from_json(r#"{"label":"x","rank":2,"gram":[[1,2],[3,1]]}"#).is_err());
    }
}
