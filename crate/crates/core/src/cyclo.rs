//! Arithmetic in `Z[w]` for a primitive `p`-th root of unity `w`, hermitian
//! `Z[w]`-lattices and their trace forms.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{hnf, MatQ, MatZ};
use crate::lattice::{Lattice, LatticeError};

#[derive(Debug, Error, PartialEq)]
pub enum CycloError {
    #[error("operands live in different cyclotomic rings")]
    MixedPrimes,
    #[error("p = {0} is not 3, 5 or 7")]
    BadPrime(u32),
    #[error("w -> w^{0} is not an automorphism")]
    BadAutomorphism(u32),
    #[error("not divisible")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("expected {expected} coordinates, found {found}")]
    BadLength { expected: usize, found: usize },
    #[error("the trace form is not integral on the span")]
    NonIntegralForm,
    #[error("vector is not in the span")]
    NotInSpan,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

fn check_prime(p: u32) -> Result<(), CycloError> {
    if [3, 5, 7].contains(&p) {
        Ok(())
    } else {
        Err(CycloError::BadPrime(p))
    }
}

/// An element of `Z[w_p]` in the power basis `1, w, ..., w^(p-2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CycIntFile", into = "CycIntFile")]
pub struct CycInt {
    p: u32,
    coeffs: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct CycIntFile {
    p: u32,
    coeffs: Vec<i64>,
}

impl TryFrom<CycIntFile> for CycInt {
    type Error = CycloError;

    fn try_from(f: CycIntFile) -> Result<Self, CycloError> {
        let c: Vec<BigInt> = f.coeffs.into_iter().map(BigInt::from).collect();
        CycInt::new(f.p, c)
    }
}

impl From<CycInt> for CycIntFile {
    fn from(c: CycInt) -> Self {
        CycIntFile {
            p: c.p,
            coeffs: c
                .coeffs
                .iter()
                .map(|x| x.to_i64().expect("coefficient fits in i64"))
                .collect(),
        }
    }
}

impl CycInt {
    pub fn new(p: u32, coeffs: Vec<BigInt>) -> Result<Self, CycloError> {
        check_prime(p)?;
        let n = p as usize - 1;
        if coeffs.len() != n {
            return Err(CycloError::BadLength {
                expected: n,
                found: coeffs.len(),
            });
        }
        Ok(CycInt { p, coeffs })
    }

    /// `sum c_i w^i` for any number of coefficients.
    pub fn from_powers(p: u32, coeffs: &[i64]) -> Self {
        let mut full = vec![BigInt::zero(); p as usize];
        for (i, &c) in coeffs.iter().enumerate() {
            full[i % p as usize] += c;
        }
        Self::reduce(p, full)
    }

    pub fn integer(p: u32, n: i64) -> Self {
        Self::from_powers(p, &[n])
    }

    pub fn zero(p: u32) -> Self {
        Self::integer(p, 0)
    }

    pub fn one(p: u32) -> Self {
        Self::integer(p, 1)
    }

    /// `w^k`.
    pub fn omega_pow(p: u32, k: u32) -> Self {
        let mut full = vec![BigInt::zero(); p as usize];
        full[(k % p) as usize] = BigInt::one();
        Self::reduce(p, full)
    }

    /// `1 - w`.
    pub fn uniformizer(p: u32) -> Self {
        Self::from_powers(p, &[1, -1])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Reduces a vector on `1, w, ..., w^(p-1)` with `w^(p-1) = -(1 + ... + w^(p-2))`.
    fn reduce(p: u32, mut full: Vec<BigInt>) -> Self {
        let top = full.pop().expect("p coefficients");
        for c in &mut full {
            *c -= &top;
        }
        CycInt { p, coeffs: full }
    }

    fn cyclic(&self) -> Vec<BigInt> {
        let mut v = self.coeffs.clone();
        v.push(BigInt::zero());
        v
    }

    pub fn try_add(&self, other: &CycInt) -> Result<CycInt, CycloError> {
        self.same_ring(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn try_mul(&self, other: &CycInt) -> Result<CycInt, CycloError> {
        self.same_ring(other)?;
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                full[(i + j) % p] += a * b;
            }
        }
        Ok(Self::reduce(self.p, full))
    }

    fn same_ring(&self, other: &CycInt) -> Result<(), CycloError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(CycloError::MixedPrimes)
        }
    }

    /// The automorphism `w -> w^k`.
    pub fn galois(&self, k: u32) -> Result<CycInt, CycloError> {
        if k == 0 || k >= self.p {
            return Err(CycloError::BadAutomorphism(k));
        }
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, c) in self.cyclic().into_iter().enumerate() {
            full[(i * k as usize) % p] += c;
        }
        Ok(Self::reduce(self.p, full))
    }

    pub fn conj(&self) -> CycInt {
        self.galois(self.p - 1).expect("p - 1 is a unit")
    }

    /// `Tr(sum c_i w^i) = (p-1) c_0 - sum_{i>0} c_i`.
    pub fn trace(&self) -> BigInt {
        let rest: BigInt = self.coeffs[1..].iter().sum();
        &self.coeffs[0] * BigInt::from(self.p - 1) - rest
    }

    /// Product of the conjugates other than `self`.
    fn cofactor(&self) -> CycInt {
        (2..self.p).fold(CycInt::one(self.p), |acc, k| {
            &acc * &self.galois(k).expect("k is a unit")
        })
    }

    pub fn norm(&self) -> BigInt {
        let n = self * &self.cofactor();
        debug_assert!(n.coeffs[1..].iter().all(Zero::is_zero));
        n.coeffs[0].clone()
    }

    pub fn divides(&self, z: &CycInt) -> bool {
        divide_exact(z, self).is_ok()
    }
}

/// `z / w` when it lies in `Z[w]`.
pub fn divide_exact(z: &CycInt, w: &CycInt) -> Result<CycInt, CycloError> {
    z.same_ring(w)?;
    if w.is_zero() {
        return Err(CycloError::DivisionByZero);
    }
    let num = z * &w.cofactor();
    let n = w.norm();
    let mut coeffs = Vec::with_capacity(num.coeffs.len());
    for c in &num.coeffs {
        let (q, r) = c.div_rem(&n);
        if !r.is_zero() {
            return Err(CycloError::NotDivisible);
        }
        coeffs.push(q);
    }
    Ok(CycInt { p: z.p, coeffs })
}

/// `-(1/p) Tr(h)`.
pub fn trace_form(h: &CycInt) -> BigRational {
    -BigRational::new(h.trace(), BigInt::from(h.p))
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.try_add(rhs).expect("same cyclotomic ring")
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.try_add(&-rhs).expect("same cyclotomic ring")
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.try_mul(rhs).expect("same cyclotomic ring")
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.sign() == num_bigint::Sign::Minus {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.magnitude();
            let body = match (i, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "w".to_string(),
                (1, false) => format!("{mag}w"),
                (_, true) => format!("w^{i}"),
                (_, false) => format!("{mag}w^{i}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub type CycVec = Vec<CycInt>;

fn scale_vec(c: &CycInt, v: &[CycInt]) -> CycVec {
    v.iter().map(|x| c * x).collect()
}

/// `h(a, b) = sum scale_i a_i conj(b_i)` on `Z[w]^n`, with a list of module
/// generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermitianLattice {
    pub p: u32,
    pub scale: Vec<CycInt>,
    pub generators: Vec<CycVec>,
}

impl HermitianLattice {
    pub fn new(p: u32, scale: Vec<CycInt>, generators: Vec<CycVec>) -> Result<Self, CycloError> {
        check_prime(p)?;
        if scale.iter().any(|s| s.p != p) || generators.iter().flatten().any(|x| x.p != p) {
            return Err(CycloError::MixedPrimes);
        }
        if scale.iter().any(|s| s.conj() != *s) {
            return Err(CycloError::NonIntegralForm);
        }
        let n = scale.len();
        if let Some(g) = generators.iter().find(|g| g.len() != n) {
            return Err(CycloError::BadLength {
                expected: n,
                found: g.len(),
            });
        }
        Ok(HermitianLattice {
            p,
            scale,
            generators,
        })
    }

    pub fn rank(&self) -> usize {
        self.scale.len()
    }

    pub fn hermitian(&self, a: &[CycInt], b: &[CycInt]) -> CycInt {
        let mut acc = CycInt::zero(self.p);
        for ((s, x), y) in self.scale.iter().zip(a).zip(b) {
            acc = &acc + &(&(s * x) * &y.conj());
        }
        acc
    }

    pub fn bilinear(&self, a: &[CycInt], b: &[CycInt]) -> BigRational {
        trace_form(&self.hermitian(a, b))
    }

    /// Integer coordinates on `Z^((p-1) n)`, component-major.
    pub fn coordinates(&self, v: &[CycInt]) -> Result<Vec<BigInt>, CycloError> {
        if v.len() != self.rank() {
            return Err(CycloError::BadLength {
                expected: self.rank(),
                found: v.len(),
            });
        }
        Ok(v.iter().flat_map(|x| x.coeffs.iter().cloned()).collect())
    }

    pub fn from_coordinates(&self, c: &[BigInt]) -> CycVec {
        let m = self.p as usize - 1;
        c.chunks(m)
            .map(|ch| CycInt {
                p: self.p,
                coeffs: ch.to_vec(),
            })
            .collect()
    }

    /// Rational Gram of the trace form on the coordinate basis.
    fn coordinate_gram(&self) -> MatQ {
        let m = self.p as usize - 1;
        let n = m * self.rank();
        MatQ::from_fn(n, n, |a, b| {
            let (ca, ia) = (a / m, a % m);
            let (cb, ib) = (b / m, b % m);
            if ca != cb {
                return BigRational::zero();
            }
            let x = CycInt::omega_pow(self.p, ia as u32);
            let y = CycInt::omega_pow(self.p, ib as u32);
            trace_form(&(&(&self.scale[ca] * &x) * &y.conj()))
        })
    }

    /// Integral Gram of the trace form on the given vectors.
    pub fn trace_gram(&self, vectors: &[CycVec]) -> Result<MatZ, CycloError> {
        let rows = vectors
            .iter()
            .map(|v| self.coordinates(v))
            .collect::<Result<Vec<_>, _>>()?;
        let b = MatZ::from_rows(rows)
            .map_err(LatticeError::from)?
            .to_rational();
        self.coordinate_gram()
            .congruent(&b)
            .to_integer()
            .ok_or(CycloError::NonIntegralForm)
    }

    fn orbit_coordinates(&self) -> Result<MatZ, CycloError> {
        let mut rows = Vec::new();
        for g in &self.generators {
            for j in 0..self.p - 1 {
                rows.push(self.coordinates(&scale_vec(&CycInt::omega_pow(self.p, j), g))?);
            }
        }
        Ok(MatZ::from_rows(rows).map_err(LatticeError::from)?)
    }
}

/// The Z-lattice underlying a hermitian lattice.
#[derive(Clone, Debug)]
pub struct TraceLattice {
    /// HNF basis in coordinates.
    pub basis: MatZ,
    pub lattice: Lattice,
}

impl TraceLattice {
    /// Coordinates of `v` in the HNF basis.
    pub fn basis_coordinates(
        &self,
        h: &HermitianLattice,
        v: &[CycInt],
    ) -> Result<Vec<BigInt>, CycloError> {
        let x = h.coordinates(v)?;
        let bt = self.basis.to_rational().transpose();
        let xq: Vec<BigRational> = x.into_iter().map(BigRational::from_integer).collect();
        let sol = crate::arith::solve_unique(&bt, &xq).map_err(|_| CycloError::NotInSpan)?;
        crate::arith::to_int_vec(&sol).ok_or(CycloError::NotInSpan)
    }

    /// Whether `vectors` form a Z-basis of the lattice.
    pub fn is_basis(&self, h: &HermitianLattice, vectors: &[CycVec]) -> Result<bool, CycloError> {
        if vectors.len() != self.basis.rows() {
            return Ok(false);
        }
        let rows = vectors
            .iter()
            .map(|v| h.coordinates(v))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(hnf(&MatZ::from_rows(rows).map_err(LatticeError::from)?).basis() == self.basis)
    }
}

pub fn trace_lattice(h: &HermitianLattice) -> Result<TraceLattice, CycloError> {
    let basis = hnf(&h.orbit_coordinates()?).basis();
    let gram = h
        .coordinate_gram()
        .congruent(&basis.to_rational())
        .to_integer()
        .ok_or(CycloError::NonIntegralForm)?;
    let lattice = Lattice::new(gram)?;
    Ok(TraceLattice { basis, lattice })
}

fn vecs(p: u32, rows: &[&[&[i64]]]) -> Vec<CycVec> {
    rows.iter()
        .map(|r| r.iter().map(|c| CycInt::from_powers(p, c)).collect())
        .collect()
}

fn unit(p: u32, n: usize, j: usize, x: CycInt) -> CycVec {
    (0..n)
        .map(|i| if i == j { x.clone() } else { CycInt::zero(p) })
        .collect()
}

/// Scales of the hermitian forms: `1`, `tau = f conj(f)` and `f_i conj(f_i)`.
pub fn lp_scales(p: u32) -> Result<Vec<CycInt>, CycloError> {
    check_prime(p)?;
    let one = CycInt::one(p);
    let norm = |f: CycInt| &f * &f.conj();
    Ok(match p {
        3 => vec![one; 6],
        5 => {
            let tau = norm(CycInt::from_powers(5, &[1, 0, -1, -1]));
            vec![one.clone(), one, tau.clone(), tau]
        }
        _ => {
            let f1 = CycInt::from_powers(7, &[3, 2, 1, 0, 0, 1, 2]);
            let f2 = CycInt::from_powers(7, &[2, 1, 0, 0, 0, 0, 1]);
            vec![one, norm(f1), norm(f2)]
        }
    })
}

/// The explicit `Z`-bases `l_1, l_2, ...`.
pub fn lp_basis(p: u32) -> Result<Vec<CycVec>, CycloError> {
    check_prime(p)?;
    let w = |k: u32| CycInt::omega_pow(p, k);
    let pi = CycInt::uniformizer(p);
    let pi2 = &pi * &pi;
    let times = |c: &CycInt, v: &CycVec| scale_vec(c, v);
    let mut l: Vec<CycVec> = Vec::new();
    match p {
        3 => {
            let ones = vec![CycInt::one(3); 6];
            l.push(times(&CycInt::from_powers(3, &[0, -1]), &ones));
            l.push(times(&CycInt::from_powers(3, &[1, 1]), &ones));
            l.push(unit(3, 6, 4, &pi2 * &pi));
            for j in 0..5 {
                l.push(unit(3, 6, j, pi2.clone()));
                if j < 4 {
                    let mut d = unit(3, 6, j, pi.clone());
                    d[j + 1] = -&pi;
                    l.push(d);
                }
            }
        }
        5 => {
            let c = CycInt::from_powers(5, &[0, 2, -1, 2]);
            let l1 = vecs(5, &[&[&[1], &[1]]])
                .remove(0)
                .into_iter()
                .chain([c.clone(), c])
                .collect();
            for k in 0..4 {
                l.push(times(&w(k), &l1));
            }
            l.push(unit(5, 4, 2, &pi2 * &CycInt::from_powers(5, &[2, 4, 1, 3])));
            let l6 = unit(5, 4, 0, pi2.clone());
            for k in 0..3 {
                l.push(times(&w(k), &l6));
            }
            l.push(times(&pi, &vecs(5, &[&[&[1], &[-1], &[0], &[0]]])[0]));
            let l10 = unit(5, 4, 1, pi2.clone());
            for k in 0..3 {
                l.push(times(&w(k), &l10));
            }
            l.push(times(
                &pi,
                &vecs(5, &[&[&[0], &[1], &[-1, 0, 0, -1], &[0]]])[0],
            ));
            let l14 = unit(5, 4, 2, pi2.clone());
            for k in [0, 3, 1] {
                l.push(times(&w(k), &l14));
            }
        }
        _ => {
            let c = CycInt::from_powers(7, &[1, 3, 0, 0, 3, 1]);
            let k = CycInt::from_powers(7, &[-5, 1, -5, 0, -3, -3]);
            let l1 = vec![CycInt::one(7), c, k];
            for e in 0..6 {
                l.push(times(&w(e), &l1));
            }
            l.push(unit(
                7,
                3,
                1,
                &pi2 * &CycInt::from_powers(7, &[2, 4, 6, 1, 3, 5]),
            ));
            let l8 = unit(7, 3, 0, pi2.clone());
            for e in 0..5 {
                l.push(times(&w(e), &l8));
            }
            l.push(times(
                &pi,
                &vecs(7, &[&[&[0, 0, 0, 0, 0, 1], &[-1, 0, 0, 0, -1], &[0]]])[0],
            ));
            let l14 = unit(7, 3, 1, pi2.clone());
            for e in [0, 4, 1, 5, 2] {
                l.push(times(&w(e), &l14));
            }
        }
    }
    Ok(l)
}

pub fn build_lp(p: u32) -> Result<HermitianLattice, CycloError> {
    HermitianLattice::new(p, lp_scales(p)?, lp_basis(p)?)
}

/// `(1 - w)^2 Z[w]^n` with the scales of `L_p`.
pub fn build_gp(p: u32) -> Result<HermitianLattice, CycloError> {
    let scale = lp_scales(p)?;
    let n = scale.len();
    let pi = CycInt::uniformizer(p);
    let pi2 = &pi * &pi;
    let generators = (0..n).map(|j| unit(p, n, j, pi2.clone())).collect();
    HermitianLattice::new(p, scale, generators)
}

fn congruent_mod(a: &CycInt, b: &CycInt, m: &CycInt) -> bool {
    m.divides(&(a - b))
}

/// The two congruence conditions cutting out `L_p`.
pub fn membership_lp(p: u32, x: &[CycInt]) -> Result<bool, CycloError> {
    check_prime(p)?;
    let n = match p {
        3 => 6,
        5 => 4,
        _ => 3,
    };
    if x.len() != n {
        return Err(CycloError::BadLength {
            expected: n,
            found: x.len(),
        });
    }
    if x.iter().any(|c| c.p != p) {
        return Err(CycloError::MixedPrimes);
    }
    let pi = CycInt::uniformizer(p);
    let pi2 = &pi * &pi;
    let k = |n: i64| CycInt::integer(p, n);
    let (first, second) = match p {
        3 => {
            let same = x.windows(2).all(|w| congruent_mod(&w[0], &w[1], &pi));
            let sum = x.iter().fold(CycInt::zero(3), |a, b| &a + b);
            (same, pi2.divides(&sum))
        }
        5 => {
            let r = [x[0].clone(), x[1].clone(), &k(2) * &x[2], &k(2) * &x[3]];
            let same = r.windows(2).all(|w| congruent_mod(&w[0], &w[1], &pi));
            let lin = &(&CycInt::from_powers(5, &[3, -1]) * &(&x[0] + &x[1])) + &(&x[2] + &x[3]);
            (same, pi2.divides(&lin))
        }
        _ => {
            let r = [x[0].clone(), x[1].clone(), &k(6) * &x[2]];
            let same = r.windows(2).all(|w| congruent_mod(&w[0], &w[1], &pi));
            let lin = &(&(&CycInt::from_powers(7, &[1, 5]) * &x[0]) + &(&k(3) * &x[1]))
                + &(&k(2) * &x[2]);
            (same, pi2.divides(&lin))
        }
    };
    Ok(first && second)
}

/// The `p = 3` description with `theta = w - conj(w)` and the sum taken mod 3.
pub fn membership_theta(x: &[CycInt]) -> Result<bool, CycloError> {
    if x.len() != 6 {
        return Err(CycloError::BadLength {
            expected: 6,
            found: x.len(),
        });
    }
    if x.iter().any(|c| c.p != 3) {
        return Err(CycloError::MixedPrimes);
    }
    let w = CycInt::omega_pow(3, 1);
    let theta = &w - &w.conj();
    let same = x.windows(2).all(|v| congruent_mod(&v[0], &v[1], &theta));
    let sum = x.iter().fold(CycInt::zero(3), |a, b| &a + b);
    Ok(same && CycInt::integer(3, 3).divides(&sum))
}

/// Multiplication by `w` in the HNF basis of the trace lattice (row `i` is
/// the image of basis vector `i`).
pub fn omega_action(h: &HermitianLattice, t: &TraceLattice) -> Result<MatZ, CycloError> {
    let w = CycInt::omega_pow(h.p, 1);
    let rows = (0..t.basis.rows())
        .map(|i| {
            let v = h.from_coordinates(t.basis.row(i));
            t.basis_coordinates(h, &scale_vec(&w, &v))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MatZ::from_rows(rows).map_err(LatticeError::from)?)
}

/// Index of `G_p` in `L_p`, from the coordinate determinants.
pub fn gp_index(p: u32) -> Result<BigInt, CycloError> {
    let l = trace_lattice(&build_lp(p)?)?;
    let g = trace_lattice(&build_gp(p)?)?;
    let dl = crate::arith::det_z(&l.basis);
    let dg = crate::arith::det_z(&g.basis);
    let (q, r) = dg.div_rem(&dl);
    if !r.is_zero() {
        return Err(CycloError::NotInSpan);
    }
    Ok(num_traits::Signed::abs(&q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::lattice::standard_lattice;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(p: u32, k: u32) -> CycInt {
        CycInt::omega_pow(p, k)
    }

    #[test]
    fn ring_identities() {
        let pi = CycInt::uniformizer(3);
        assert_eq!(&pi * &pi.conj(), CycInt::integer(3, 3));
        assert_eq!(&pi * &pi, &CycInt::integer(3, -3) * &w(3, 1));
        let f = CycInt::from_powers(5, &[1, 0, -1, -1]);
        assert_eq!(&f * &f.conj(), CycInt::from_powers(5, &[2, 0, -3, -3]));
        assert_eq!(w(7, 7), CycInt::one(7));
        assert_eq!(
            CycInt::one(3).try_mul(&CycInt::one(5)),
            Err(CycloError::MixedPrimes)
        );
    }

    #[test]
    fn exact_division() {
        let pi = CycInt::uniformizer(3);
        let q = divide_exact(&CycInt::integer(3, 6), &(&pi * &pi)).unwrap();
        assert_eq!(&q * &(&pi * &pi), CycInt::integer(3, 6));
        assert_eq!(q, &CycInt::integer(3, -2) * &w(3, 2));
        assert_eq!(
            divide_exact(&CycInt::one(3), &pi),
            Err(CycloError::NotDivisible)
        );
        let pi5 = CycInt::uniformizer(5);
        let z = &(&pi5 * &pi5) * &w(5, 3);
        assert_eq!(divide_exact(&z, &pi5).unwrap(), &pi5 * &w(5, 3));
        assert_eq!(
            divide_exact(&z, &CycInt::zero(5)),
            Err(CycloError::DivisionByZero)
        );
    }

    #[test]
    fn trace_values() {
        assert_eq!(trace_form(&CycInt::integer(3, 9)), rat(-6, 1));
        assert_eq!(trace_form(&CycInt::one(3)), rat(-2, 3));
        let pi = CycInt::uniformizer(5);
        let pi2 = &pi * &pi;
        let h = &(&w(5, 1) * &pi2) * &pi2.conj();
        assert_eq!(trace_form(&h), rat(4, 1));
    }

    fn g_orbit(p: u32) -> (HermitianLattice, Vec<CycVec>) {
        let pi = CycInt::uniformizer(p);
        let pi2 = &pi * &pi;
        let h = HermitianLattice::new(p, vec![CycInt::one(p)], vec![vec![pi2.clone()]]).unwrap();
        let orbit = (0..p - 1).map(|k| vec![&w(p, k) * &pi2]).collect();
        (h, orbit)
    }

    #[test]
    fn rank_one_g_lattices() {
        let (h, orbit) = g_orbit(3);
        assert_eq!(
            h.trace_gram(&orbit).unwrap(),
            MatZ::from_i64(&[&[-6, 3], &[3, -6]])
        );
        let (h, orbit) = g_orbit(5);
        let g = h.trace_gram(&orbit).unwrap();
        for a in 0..4i64 {
            for b in 0..4i64 {
                let d = (a - b).rem_euclid(5).min((b - a).rem_euclid(5));
                let expect = [-6, 4, -1][d as usize];
                assert_eq!(g.get(a as usize, b as usize), &BigInt::from(expect));
            }
        }
        assert_eq!(trace_lattice(&h).unwrap().lattice.det(), BigInt::from(125));
    }

    #[test]
    fn explicit_bases_give_tables() {
        for p in [3, 5, 7] {
            let h = build_lp(p).unwrap();
            let t = trace_lattice(&h).unwrap();
            assert!(t.is_basis(&h, &h.generators).unwrap(), "p={p}");
            let m = standard_lattice(&format!("Omega{p}")).unwrap();
            assert_eq!(&h.trace_gram(&h.generators).unwrap(), m.gram(), "p={p}");
            assert_eq!(t.lattice.det(), m.det());
        }
    }

    #[test]
    fn first_generators() {
        let l3 = lp_basis(3).unwrap();
        assert_eq!(l3[0], vec![-&w(3, 1); 6]);
        let l5 = lp_basis(5).unwrap();
        let c = &w(5, 1) * &CycInt::from_powers(5, &[2, -1, 2]);
        assert_eq!(l5[0], vec![CycInt::one(5), CycInt::one(5), c.clone(), c]);
        let l7 = lp_basis(7).unwrap();
        assert_eq!(l7[0][1], CycInt::from_powers(7, &[1, 3, 0, 0, 3, 1]));
        assert!(matches!(build_lp(11), Err(CycloError::BadPrime(11))));
    }

    #[test]
    fn generators_satisfy_congruences() {
        for p in [3, 5, 7] {
            for g in build_lp(p).unwrap().generators {
                assert!(membership_lp(p, &g).unwrap(), "p={p}");
            }
        }
        assert!(membership_lp(3, &vec![CycInt::one(3); 6]).unwrap());
        let mut e1 = vec![CycInt::zero(3); 6];
        e1[0] = CycInt::one(3);
        assert!(!membership_lp(3, &e1).unwrap());
        let pi = CycInt::uniformizer(5);
        assert!(membership_lp(5, &unit(5, 4, 0, &pi * &pi)).unwrap());
        assert!(matches!(
            membership_lp(5, &e1),
            Err(CycloError::BadLength {
                expected: 4,
                found: 6
            })
        ));
    }

    fn random_cyc(rng: &mut ChaCha8Rng, p: u32, r: i64) -> CycInt {
        let c: Vec<i64> = (0..p - 1).map(|_| rng.gen_range(-r..=r)).collect();
        CycInt::from_powers(p, &c)
    }

    #[test]
    fn membership_closed_under_combinations() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [3, 5, 7] {
            let h = build_lp(p).unwrap();
            for _ in 0..40 {
                let mut acc = vec![CycInt::zero(p); h.rank()];
                for g in &h.generators {
                    if rng.gen_bool(0.3) {
                        let c = random_cyc(&mut rng, p, 2);
                        acc = acc
                            .iter()
                            .zip(scale_vec(&c, g))
                            .map(|(a, b)| a + &b)
                            .collect();
                    }
                }
                assert!(membership_lp(p, &acc).unwrap());
            }
        }
    }

    #[test]
    fn theta_description_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut hits = 0;
        for _ in 0..1000 {
            // bias towards members: start from a constant vector
            let base = random_cyc(&mut rng, 3, 2);
            let x: CycVec = (0..6)
                .map(|_| {
                    let pi = CycInt::uniformizer(3);
                    &base + &(&pi * &random_cyc(&mut rng, 3, 1))
                })
                .collect();
            let a = membership_lp(3, &x).unwrap();
            assert_eq!(a, membership_theta(&x).unwrap());
            hits += a as u32;
        }
        assert!(hits > 0);
    }

    #[test]
    fn omega_is_an_isometry() {
        for p in [3, 5, 7] {
            let h = build_lp(p).unwrap();
            let t = trace_lattice(&h).unwrap();
            let a = omega_action(&h, &t).unwrap();
            assert_eq!(t.lattice.gram().congruent(&a), *t.lattice.gram());
            assert_eq!(a.pow(p), MatZ::identity(a.rows()));
        }
    }

    #[test]
    fn negative_definite() {
        for p in [3, 5, 7] {
            let t = trace_lattice(&build_lp(p).unwrap()).unwrap();
            assert_eq!(t.lattice.definiteness(), Some(false));
        }
    }

    #[test]
    fn g_index() {
        let g = trace_lattice(&build_gp(3).unwrap()).unwrap();
        let m = standard_lattice("Omega3").unwrap();
        let ratio = g.lattice.det() / m.det();
        let idx = gp_index(3).unwrap();
        assert_eq!(&idx * &idx, ratio);
        for p in [5, 7] {
            let g = trace_lattice(&build_gp(p).unwrap()).unwrap();
            let l = trace_lattice(&build_lp(p).unwrap()).unwrap();
            let idx = gp_index(p).unwrap();
            assert_eq!(&idx * &idx * l.lattice.det(), g.lattice.det());
        }
    }

    #[test]
    fn json_round_trip() {
        let c = CycInt::from_powers(5, &[2, 0, -3, -3]);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"p":5,"coeffs":[2,0,-3,-3]}"#);
        assert_eq!(serde_json::from_str::<CycInt>(&s).unwrap(), c);
        assert!(serde_json::from_str::<CycInt>(r#"{"p":5,"coeffs":[1]}"#).is_err());
        let h = build_lp(7).unwrap();
        let back: HermitianLattice =
            serde_json::from_str(&serde_json::to_string(&h).unwrap()).unwrap();
        assert_eq!(back, h);
    }
}
