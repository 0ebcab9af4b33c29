//! Neron-Severi lattices of elliptic K3 surfaces with a `p`-torsion section,
//! and the translation isometry they carry.
//!
//! The ambient space has basis `s, F, C_i^(j)` (`i = 1..p-1`, `j = 1..h`),
//! with the zero components `C_0^(j) = F - sum_i C_i^(j)` eliminated.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{
    hnf, integer_kernel, inverse_q, rat, solve_unique, to_int_vec, to_rat_vec, ArithError, MatQ,
    MatZ,
};
use crate::lattice::{
    direct_sum, discriminant_group, standard_lattice, sublattice_index, CatalogKey, Lattice,
    LatticeError, Sublattice,
};

#[derive(Debug, Error, PartialEq)]
pub enum EllnsError {
    #[error("invalid fibration configuration: {0}")]
    BadConfig(String),
    #[error("torsion section system is inconsistent: {0}")]
    InconsistentSystem(String),
    #[error("basis vectors {0} and {1} have a non-integral pairing")]
    NonIntegralPairing(usize, usize),
    #[error("class is not an integral combination of the lattice basis")]
    NotInLattice,
    #[error("the translation does not preserve the lattice")]
    NonIntegralAction,
    #[error("the translation is not an isometry of order {0}")]
    NotAnIsometry(u32),
    #[error("explicit basis does not match the computed complement: {0}")]
    BasisMismatch(String),
    #[error("{0} is not an integer")]
    NotInteger(BigRational),
    #[error("no integral solution for p = {p} with {fixed_points} fixed points")]
    NoIntegerSolution { p: u32, fixed_points: u32 },
    #[error("configurations are not related by reversing fibres")]
    NotRelated,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Fibration with `h` fibres of type `I_p`, `i1` of type `I_1`, and a
/// section `t_1` meeting component `k_j` of fibre `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationConfig {
    pub p: u32,
    pub k: Vec<u32>,
    pub i1: u32,
}

impl FibrationConfig {
    pub fn standard(p: u32) -> Result<Self, EllnsError> {
        let (k, i1) = match p {
            3 => (vec![1; 6], 6),
            5 => (vec![1, 1, 2, 2], 4),
            7 => (vec![1, 2, 3], 3),
            _ => {
                return Err(EllnsError::BadConfig(format!(
                    "no standard fibration for p = {p}"
                )))
            }
        };
        Ok(FibrationConfig { p, k, i1 })
    }

    /// The other admissible pattern for `p = 5`.
    pub fn reoriented5() -> Self {
        FibrationConfig {
            p: 5,
            k: vec![1, 4, 2, 3],
            i1: 4,
        }
    }

    pub fn h(&self) -> usize {
        self.k.len()
    }

    pub fn validate(&self) -> Result<(), EllnsError> {
        if ![3, 5, 7].contains(&self.p) {
            return Err(EllnsError::BadConfig(format!(
                "p = {} is not 3, 5 or 7",
                self.p
            )));
        }
        if self.k.is_empty() {
            return Err(EllnsError::BadConfig("no reducible fibres".into()));
        }
        if let Some(k) = self.k.iter().find(|&&k| k == 0 || k >= self.p) {
            return Err(EllnsError::BadConfig(format!(
                "component {k} is not in 1..{}",
                self.p - 1
            )));
        }
        Ok(())
    }

    /// `p h + i1`, the Euler number of the surface.
    pub fn euler_sum(&self) -> u32 {
        self.p * self.h() as u32 + self.i1
    }

    fn ambient_rank(&self) -> usize {
        2 + self.h() * (self.p as usize - 1)
    }

    fn ambient_component(&self, i: usize, j: usize) -> usize {
        2 + (j - 1) * (self.p as usize - 1) + (i - 1)
    }
}

/// `sum_j k_j (1 - k_j / p) = 4`.
pub fn check_component_numbers(cfg: &FibrationConfig) -> bool {
    let p = BigInt::from(cfg.p);
    let sum: BigRational = cfg
        .k
        .iter()
        .map(|&k| {
            let k = BigInt::from(k);
            BigRational::new(&k * (&p - &k), p.clone())
        })
        .sum();
    sum == BigRational::from_integer(BigInt::from(4))
}

pub fn shioda_tate_rank(cfg: &FibrationConfig) -> usize {
    cfg.ambient_rank()
}

/// `|det NS| = p^h / p^2`.
pub fn ns_det_formula(cfg: &FibrationConfig) -> Result<BigInt, EllnsError> {
    let p = BigInt::from(cfg.p);
    let q = BigRational::new(num_traits::pow(p.clone(), cfg.h()), &p * &p);
    if q.is_integer() {
        Ok(q.to_integer())
    } else {
        Err(EllnsError::NotInteger(q))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzData {
    pub a: i64,
    pub b: i64,
    pub rho_min: i64,
    pub moduli_max: i64,
}

/// Solves `a - b = mu - 2`, `a + (p-1) b = 22`.
pub fn lefschetz_solve(p: u32, fixed_points: u32) -> Result<LefschetzData, EllnsError> {
    if ![3, 5, 7].contains(&p) {
        return Err(EllnsError::BadConfig(format!("p = {p} is not 3, 5 or 7")));
    }
    let none = EllnsError::NoIntegerSolution { p, fixed_points };
    let mu = fixed_points as i64;
    let num = 24 - mu;
    if num % p as i64 != 0 {
        return Err(none);
    }
    let b = num / p as i64;
    let a = mu - 2 + b;
    if b < 0 || a < 0 {
        return Err(none);
    }
    let rho_min = 23 - a;
    Ok(LefschetzData {
        a,
        b,
        rho_min,
        moduli_max: 20 - rho_min,
    })
}

pub fn fixed_points(p: u32) -> Option<u32> {
    match p {
        3 => Some(6),
        5 => Some(4),
        7 => Some(3),
        _ => None,
    }
}

pub fn ambient_gram(cfg: &FibrationConfig) -> Result<MatZ, EllnsError> {
    cfg.validate()?;
    let n = cfg.ambient_rank();
    let mut g = MatZ::zeros(n, n);
    g.set(0, 0, BigInt::from(-2));
    g.set(0, 1, BigInt::one());
    g.set(1, 0, BigInt::one());
    let m = cfg.p as usize - 1;
    for j in 1..=cfg.h() {
        for i in 1..=m {
            let a = cfg.ambient_component(i, j);
            g.set(a, a, BigInt::from(-2));
            if i < m {
                g.set(a, a + 1, BigInt::one());
                g.set(a + 1, a, BigInt::one());
            }
        }
    }
    Ok(g)
}

/// Ambient coordinates of `C_i^(j)` for any `i mod p`.
fn component_vector(cfg: &FibrationConfig, i: u32, j: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); cfg.ambient_rank()];
    let i = (i % cfg.p) as usize;
    if i == 0 {
        v[1] = BigRational::one();
        for c in 1..cfg.p as usize {
            v[cfg.ambient_component(c, j)] = -BigRational::one();
        }
    } else {
        v[cfg.ambient_component(i, j)] = BigRational::one();
    }
    v
}

/// The section `t_m` as a rational ambient vector, determined by
/// `t.s = 0`, `t.F = 1` and `t.C_i^(j) = [i = m k_j mod p]`.
pub fn solve_torsion_section(
    cfg: &FibrationConfig,
    m: u32,
) -> Result<Vec<BigRational>, EllnsError> {
    if m == 0 || m >= cfg.p {
        return Err(EllnsError::BadConfig(format!(
            "section index {m} is not in 1..{}",
            cfg.p - 1
        )));
    }
    let g = ambient_gram(cfg)?.to_rational();
    let mut rhs = vec![BigRational::zero(); cfg.ambient_rank()];
    rhs[1] = BigRational::one();
    for (j, &k) in cfg.k.iter().enumerate() {
        let hit = (m * k) % cfg.p;
        if hit != 0 {
            rhs[cfg.ambient_component(hit as usize, j + 1)] = BigRational::one();
        }
    }
    let t = solve_unique(&g, &rhs)?;
    let norm = g.pair(&t, &t);
    if norm != rat(-2, 1) {
        return Err(EllnsError::InconsistentSystem(format!("t_{m}^2 = {norm}")));
    }
    Ok(t)
}

/// Named generators of the Neron-Severi lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Divisor {
    ZeroSection,
    Section(u32),
    Fibre,
    Component(u32, usize),
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Divisor::ZeroSection => write!(f, "s"),
            Divisor::Section(m) => write!(f, "t{m}"),
            Divisor::Fibre => write!(f, "F"),
            Divisor::Component(i, j) => write!(f, "C{i}^({j})"),
        }
    }
}

/// The lattice spanned by `s, t_1..t_{p-1}, F` and the components of the
/// first `h - 1` reducible fibres.
#[derive(Clone, Debug)]
pub struct NsModel {
    pub config: FibrationConfig,
    pub ambient_gram: MatZ,
    pub sections: Vec<Vec<BigRational>>,
    /// Basis rows in ambient coordinates.
    pub basis: MatQ,
    basis_inverse: MatQ,
    pub gram: MatZ,
}

pub fn build_ns(cfg: &FibrationConfig) -> Result<NsModel, EllnsError> {
    let ambient = ambient_gram(cfg)?;
    let p = cfg.p;
    let sections = (1..p)
        .map(|m| solve_torsion_section(cfg, m))
        .collect::<Result<Vec<_>, _>>()?;
    let gq = ambient.to_rational();
    for a in 0..sections.len() {
        for b in a + 1..sections.len() {
            let x = gq.pair(&sections[a], &sections[b]);
            if !x.is_zero() {
                return Err(EllnsError::InconsistentSystem(format!(
                    "t_{}.t_{} = {x}",
                    a + 1,
                    b + 1
                )));
            }
        }
    }
    let n = cfg.ambient_rank();
    let unit = |i: usize| {
        let mut v = vec![BigRational::zero(); n];
        v[i] = BigRational::one();
        v
    };
    let mut rows = vec![unit(0)];
    rows.extend(sections.iter().cloned());
    rows.push(unit(1));
    for j in 1..cfg.h() {
        for i in 1..p as usize {
            rows.push(unit(cfg.ambient_component(i, j)));
        }
    }
    let basis = MatQ::from_rows(rows)?;
    let basis_inverse = inverse_q(&basis)?;
    let gram_q = gq.congruent(&basis);
    let mut gram = MatZ::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let x = gram_q.get(i, j);
            if !x.is_integer() {
                return Err(EllnsError::NonIntegralPairing(i, j));
            }
            gram.set(i, j, x.to_integer());
        }
    }
    Ok(NsModel {
        config: cfg.clone(),
        ambient_gram: ambient,
        sections,
        basis,
        basis_inverse,
        gram,
    })
}

impl NsModel {
    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::new(self.gram.clone())
            .expect("congruent Gram is symmetric")
            .labeled(format!("NS{}", self.config.p))
    }

    pub fn basis_labels(&self) -> Vec<Divisor> {
        let p = self.config.p;
        let mut out = vec![Divisor::ZeroSection];
        out.extend((1..p).map(Divisor::Section));
        out.push(Divisor::Fibre);
        for j in 1..self.config.h() {
            out.extend((1..p).map(|i| Divisor::Component(i, j)));
        }
        out
    }

    /// Ambient coordinates of a named divisor.
    pub fn ambient_vector(&self, d: Divisor) -> Result<Vec<BigRational>, EllnsError> {
        let cfg = &self.config;
        let n = cfg.ambient_rank();
        let mut v = vec![BigRational::zero(); n];
        match d {
            Divisor::ZeroSection => v[0] = BigRational::one(),
            Divisor::Fibre => v[1] = BigRational::one(),
            Divisor::Section(m) => {
                let m = m % cfg.p;
                if m == 0 {
                    v[0] = BigRational::one();
                } else {
                    v = self.sections[m as usize - 1].clone();
                }
            }
            Divisor::Component(i, j) => {
                if j == 0 || j > cfg.h() {
                    return Err(EllnsError::BadConfig(format!("no fibre {j}")));
                }
                v = component_vector(cfg, i, j);
            }
        }
        Ok(v)
    }

    /// Rational coordinates of an ambient vector in the lattice basis.
    pub fn coordinates(&self, ambient: &[BigRational]) -> Vec<BigRational> {
        self.basis_inverse.vec_mul(ambient)
    }

    /// Integral lattice coordinates of an integer combination of divisors.
    pub fn combination(&self, terms: &[(i64, Divisor)]) -> Result<Vec<BigInt>, EllnsError> {
        let mut acc = vec![BigRational::zero(); self.rank()];
        for &(c, d) in terms {
            let x = self.coordinates(&self.ambient_vector(d)?);
            let c = rat(c, 1);
            for (a, y) in acc.iter_mut().zip(x) {
                *a += &c * y;
            }
        }
        to_int_vec(&acc).ok_or(EllnsError::NotInLattice)
    }

    /// Rows: `s`, `F` and every `C_i^(j)`, including the last fibre.
    pub fn trivial_lattice_generators(&self) -> Result<MatZ, EllnsError> {
        let mut divisors = vec![Divisor::ZeroSection, Divisor::Fibre];
        for j in 1..=self.config.h() {
            divisors.extend((1..self.config.p).map(|i| Divisor::Component(i, j)));
        }
        let rows = divisors
            .into_iter()
            .map(|d| self.combination(&[(1, d)]))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MatZ::from_rows(rows)?)
    }

    /// Index of `U (+) A_{p-1}^h` inside the lattice.
    pub fn trivial_lattice_index(&self) -> Result<BigInt, EllnsError> {
        Ok(self
            .lattice()
            .span_index(&self.trivial_lattice_generators()?)?)
    }
}

/// `U (+) A(p-1)^h`, the lattice generated by the zero section, the fibre and
/// the fibre components away from the zero section.
pub fn trivial_lattice(cfg: &FibrationConfig) -> Result<Lattice, EllnsError> {
    let mut parts = vec![standard_lattice("U")?];
    let a = CatalogKey::RootA(cfg.p as usize - 1).lattice();
    parts.extend(std::iter::repeat_n(a, cfg.h()));
    Ok(direct_sum(&parts))
}

pub fn trivial_sublattice_index(model: &NsModel) -> Result<BigInt, EllnsError> {
    Ok(sublattice_index(
        &model.lattice(),
        &trivial_lattice(&model.config)?,
    )?)
}

/// The translation by `t_1` on lattice coordinates. Column `i` of `matrix`
/// is the image of basis vector `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaAction {
    pub matrix: MatZ,
    pub order: u32,
}

impl SigmaAction {
    pub fn identity(rank: usize) -> Self {
        SigmaAction {
            matrix: MatZ::identity(rank),
            order: 1,
        }
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(x)
    }

    pub fn apply_q(&self, x: &[BigRational]) -> Vec<BigRational> {
        self.matrix.to_rational().mul_vec(x)
    }

    pub fn is_isometry(&self, gram: &MatZ) -> bool {
        &(&self.matrix.transpose() * gram) * &self.matrix == *gram
    }

    pub fn has_exact_order(&self) -> bool {
        let id = MatZ::identity(self.matrix.rows());
        self.matrix.pow(self.order) == id && (self.order == 1 || self.matrix != id)
    }
}

pub fn sigma_matrix(model: &NsModel) -> Result<SigmaAction, EllnsError> {
    let cfg = &model.config;
    let n = cfg.ambient_rank();
    let mut fibre = vec![BigRational::zero(); n];
    fibre[1] = BigRational::one();
    let mut images = vec![model.sections[0].clone(), fibre];
    for (j, &k) in cfg.k.iter().enumerate() {
        for i in 1..cfg.p {
            images.push(component_vector(cfg, i + k, j + 1));
        }
    }
    let ambient = MatQ::from_rows(images)?;
    let row_form = &(&model.basis * &ambient) * &model.basis_inverse;
    let r = row_form.to_integer().ok_or(EllnsError::NonIntegralAction)?;
    let sigma = SigmaAction {
        matrix: r.transpose(),
        order: cfg.p,
    };
    if !sigma.is_isometry(&model.gram) || !sigma.has_exact_order() {
        return Err(EllnsError::NotAnIsometry(cfg.p));
    }
    Ok(sigma)
}

/// Vectors fixed by `sigma`, with an HNF basis.
pub fn invariant_sublattice(
    model: &NsModel,
    sigma: &SigmaAction,
) -> Result<Sublattice, EllnsError> {
    let shifted = &sigma.matrix - &MatZ::identity(model.rank());
    let basis = integer_kernel(&shifted);
    Ok(model.lattice().span(&basis)?)
}

/// `F` and `F + s + t_1 + ... + t_{p-1}`.
pub fn invariant_generators(model: &NsModel) -> Result<MatZ, EllnsError> {
    let f = model.combination(&[(1, Divisor::Fibre)])?;
    let mut terms = vec![(1, Divisor::Fibre), (1, Divisor::ZeroSection)];
    terms.extend((1..model.config.p).map(|m| (1, Divisor::Section(m))));
    let g = model.combination(&terms)?;
    Ok(MatZ::from_rows(vec![f, g])?)
}

/// The orthogonal complement of the invariant sublattice together with the
/// explicit basis used for the tabulated Gram matrices.
#[derive(Clone, Debug)]
pub struct OmegaLattice {
    /// HNF basis of the complement in lattice coordinates.
    pub complement: Sublattice,
    /// Explicit basis in lattice coordinates, when one is known.
    pub named_basis: Option<MatZ>,
    pub lattice: Lattice,
}

pub fn omega_lattice(model: &NsModel, sigma: &SigmaAction) -> Result<OmegaLattice, EllnsError> {
    let invariant = invariant_sublattice(model, sigma)?;
    let ns = model.lattice();
    let complement = ns.orthogonal_complement(&invariant.basis)?;
    let p = model.config.p;
    let standard = FibrationConfig::standard(p)?;
    if model.config != standard {
        let lattice = complement.lattice.clone().labeled(format!("Omega{p}"));
        return Ok(OmegaLattice {
            complement,
            named_basis: None,
            lattice,
        });
    }
    let rows = named_omega_basis(p)
        .iter()
        .map(|terms| model.combination(terms))
        .collect::<Result<Vec<_>, _>>()?;
    let named = MatZ::from_rows(rows)?;
    let gram = ns.gram_of_vectors(&named);
    let table = CatalogKey::Omega(p).lattice();
    if &gram != table.gram() {
        return Err(EllnsError::BasisMismatch(format!(
            "Gram of the explicit basis differs from the Omega{p} table"
        )));
    }
    if hnf(&named).basis() != complement.basis {
        return Err(EllnsError::BasisMismatch(
            "explicit basis does not span the complement".into(),
        ));
    }
    Ok(OmegaLattice {
        complement,
        named_basis: Some(named),
        lattice: table,
    })
}

type Terms = Vec<(i64, Divisor)>;

fn c(i: u32, j: usize) -> Divisor {
    Divisor::Component(i, j)
}

fn diff(a: Divisor, b: Divisor) -> Terms {
    vec![(1, a), (-1, b)]
}

/// The explicit basis `b_1, b_2, ...` of the anti-invariant lattice.
pub fn named_omega_basis(p: u32) -> Vec<Terms> {
    use Divisor::{Fibre as F, Section as T, ZeroSection as S};
    let mut b: Vec<Terms> = Vec::new();
    match p {
        3 => {
            b.push(diff(T(2), T(1)));
            b.push(diff(S, T(2)));
            b.push(vec![(1, F), (-3, c(2, 5))]);
            for i in 1..=5 {
                b.push(diff(c(1, i), c(2, i)));
                if i < 5 {
                    b.push(diff(c(1, i), c(1, i + 1)));
                }
            }
        }
        5 => {
            b.push(diff(S, T(1)));
            for m in 1..4 {
                b.push(diff(T(m), T(m + 1)));
            }
            b.push(vec![(1, F), (-5, c(4, 3))]);
            for j in 1..=3 {
                if j > 1 {
                    b.push(diff(c(1, j - 1), c(1, j)));
                }
                for i in 1..4 {
                    b.push(diff(c(i, j), c(i + 1, j)));
                }
            }
        }
        7 => {
            b.push(diff(S, T(1)));
            for m in 1..6 {
                b.push(diff(T(m), T(m + 1)));
            }
            b.push(vec![(1, F), (-7, c(6, 2))]);
            for i in 1..6 {
                b.push(diff(c(i, 1), c(i + 1, 1)));
            }
            b.push(diff(c(6, 1), c(1, 2)));
            for i in 1..6 {
                b.push(diff(c(i, 2), c(i + 1, 2)));
            }
        }
        _ => {}
    }
    b
}

/// Whether `sigma` acts trivially on `Omega^v / Omega` for a sublattice
/// `omega` preserved by it.
pub fn disc_group_action(sigma: &SigmaAction, omega: &Sublattice) -> Result<bool, EllnsError> {
    let dg = discriminant_group(&omega.lattice)?;
    let basis_q = omega.basis.to_rational();
    let basis_t = basis_q.transpose();
    for w in &dg.generators {
        let x = basis_q.vec_mul(w);
        let moved: Vec<BigRational> = sigma
            .apply_q(&x)
            .iter()
            .zip(&x)
            .map(|(a, b)| a - b)
            .collect();
        let coords = match solve_unique(&basis_t, &moved) {
            Ok(c) => c,
            Err(ArithError::Inconsistent) => return Ok(false),
            Err(e) => return Err(e.into()),
        };
        if coords.iter().any(|c| !c.is_integer()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `w_5 = (2 s - t_1 - t_2)/3` in lattice coordinates of the `p = 3` model.
pub fn w5_witness(model: &NsModel) -> Result<Vec<BigRational>, EllnsError> {
    if model.config.p != 3 {
        return Err(EllnsError::BadConfig("w5 lives in the p = 3 model".into()));
    }
    let num = model.combination(&[
        (2, Divisor::ZeroSection),
        (-1, Divisor::Section(1)),
        (-1, Divisor::Section(2)),
    ])?;
    Ok(to_rat_vec(&num)
        .into_iter()
        .map(|x| x / rat(3, 1))
        .collect())
}

/// Transcendental lattice expected for the standard fibration.
pub fn transcendental_candidate(p: u32) -> Result<Lattice, EllnsError> {
    let names: &[&str] = match p {
        3 => &["U", "U(3)", "A(2)", "A(2)"],
        5 => &["U", "U(5)"],
        7 => &["Upsilon"],
        _ => return Err(EllnsError::BadConfig(format!("p = {p} is not 3, 5 or 7"))),
    };
    let parts = names
        .iter()
        .map(|n| standard_lattice(n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(direct_sum(&parts))
}

/// Lattice isometry between two models whose configurations differ by
/// reversing the component order on some fibres. Row `i` holds the
/// coordinates in `target` of the image of basis vector `i` of `source`.
pub fn relabel_isometry(source: &NsModel, target: &NsModel) -> Result<MatZ, EllnsError> {
    let (a, b) = (&source.config, &target.config);
    if a.p != b.p || a.h() != b.h() {
        return Err(EllnsError::NotRelated);
    }
    let p = a.p;
    let n = a.ambient_rank();
    let mut phi = MatQ::identity(n);
    for (j, (&ka, &kb)) in a.k.iter().zip(&b.k).enumerate() {
        if ka == kb {
            continue;
        }
        if (ka + kb) % p != 0 {
            return Err(EllnsError::NotRelated);
        }
        for i in 1..p as usize {
            let row = a.ambient_component(i, j + 1);
            let to = a.ambient_component(p as usize - i, j + 1);
            for col in 0..n {
                phi.set(row, col, BigRational::zero());
            }
            phi.set(row, to, BigRational::one());
        }
    }
    let w = &(&source.basis * &phi) * &target.basis_inverse;
    let w = w.to_integer().ok_or(EllnsError::NonIntegralAction)?;
    if target.gram.congruent(&w) != source.gram {
        return Err(EllnsError::NotAnIsometry(1));
    }
    Ok(w)
}

/// Exports the model Gram in the lattice JSON format.
pub fn model_json(model: &NsModel) -> Result<String, EllnsError> {
    Ok(model.lattice().to_json()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::det_z;
    use num_traits::Signed;

    fn model(p: u32) -> NsModel {
        build_ns(&FibrationConfig::standard(p).unwrap()).unwrap()
    }

    #[test]
    fn component_numbers() {
        for p in [3, 5, 7] {
            let cfg = FibrationConfig::standard(p).unwrap();
            assert!(check_component_numbers(&cfg));
            assert_eq!(cfg.euler_sum(), 24);
        }
        assert!(check_component_numbers(&FibrationConfig::reoriented5()));
        let bad = FibrationConfig {
            p: 7,
            k: vec![1, 1, 1],
            i1: 3,
        };
        assert!(!check_component_numbers(&bad));
    }

    #[test]
    fn ambient_blocks() {
        let g = ambient_gram(&FibrationConfig::standard(3).unwrap()).unwrap();
        assert_eq!(g.rows(), 14);
        assert_eq!(g.row(0)[..2], [BigInt::from(-2), BigInt::from(1)]);
        assert!(g.row(0)[2..].iter().all(Zero::is_zero));
        let block = MatZ::from_fn(2, 2, |i, j| g.get(2 + i, 2 + j).clone());
        assert_eq!(block, MatZ::from_i64(&[&[-2, 1], &[1, -2]]));
        let g7 = ambient_gram(&FibrationConfig::standard(7).unwrap()).unwrap();
        assert_eq!(g7.rows(), 20);
        assert!(!det_z(&g7).is_zero());
    }

    #[test]
    fn section_coefficients() {
        let t = solve_torsion_section(&FibrationConfig::standard(3).unwrap(), 1).unwrap();
        assert_eq!(t[0], rat(1, 1));
        assert_eq!(t[1], rat(2, 1));
        for j in 0..6 {
            assert_eq!(t[2 + 2 * j], rat(-2, 3));
            assert_eq!(t[3 + 2 * j], rat(-1, 3));
        }
        let t = solve_torsion_section(&FibrationConfig::standard(5).unwrap(), 1).unwrap();
        let expect = [[4, 3, 2, 1], [4, 3, 2, 1], [3, 6, 4, 2], [3, 6, 4, 2]];
        for (j, row) in expect.iter().enumerate() {
            for (i, &x) in row.iter().enumerate() {
                assert_eq!(t[2 + 4 * j + i], rat(-x, 5));
            }
        }
    }

    #[test]
    fn bad_configuration_is_inconsistent() {
        let bad = FibrationConfig {
            p: 7,
            k: vec![1, 1, 1],
            i1: 3,
        };
        assert!(matches!(
            solve_torsion_section(&bad, 1),
            Err(EllnsError::InconsistentSystem(_))
        ));
        let out_of_range = FibrationConfig {
            p: 5,
            k: vec![1, 5],
            i1: 4,
        };
        assert!(matches!(
            build_ns(&out_of_range),
            Err(EllnsError::BadConfig(_))
        ));
    }

    #[test]
    fn determinants_and_indices() {
        for (p, det) in [(3, -81), (5, -25), (7, -7)] {
            let m = model(p);
            assert_eq!(m.lattice().det(), BigInt::from(det));
            assert_eq!(m.trivial_lattice_index().unwrap(), BigInt::from(p));
            assert_eq!(trivial_sublattice_index(&m).unwrap(), BigInt::from(p));
            assert_eq!(ns_det_formula(&m.config).unwrap(), BigInt::from(-det));
            assert_eq!(shioda_tate_rank(&m.config), m.rank());
        }
    }

    #[test]
    fn det_formula_rejects_fractions() {
        let cfg = FibrationConfig {
            p: 3,
            k: vec![1],
            i1: 21,
        };
        assert!(matches!(
            ns_det_formula(&cfg),
            Err(EllnsError::NotInteger(_))
        ));
    }

    #[test]
    fn sigma_properties() {
        for p in [3, 5, 7] {
            let m = model(p);
            let s = sigma_matrix(&m).unwrap();
            assert!(s.is_isometry(&m.gram));
            assert!(s.has_exact_order());
            // s -> t1 -> t2 -> ... -> s
            let labels = m.basis_labels();
            for (idx, d) in labels.iter().enumerate() {
                let image: Vec<BigInt> = s.matrix.column(idx);
                let expect = match *d {
                    Divisor::ZeroSection => m.combination(&[(1, Divisor::Section(1))]),
                    Divisor::Section(k) => m.combination(&[(1, Divisor::Section(k + 1))]),
                    _ => continue,
                }
                .unwrap();
                assert_eq!(image, expect, "p={p} {d}");
            }
        }
        let m3 = model(3);
        let s3 = sigma_matrix(&m3).unwrap();
        let mut e1 = vec![BigInt::zero(); 14];
        e1[1] = BigInt::one();
        assert_eq!(s3.matrix.column(0), e1);
    }

    #[test]
    fn fibre_three_rotation() {
        let m = model(5);
        let s = sigma_matrix(&m).unwrap();
        let c13 = m.combination(&[(1, c(1, 3))]).unwrap();
        let c33 = m.combination(&[(1, c(3, 3))]).unwrap();
        assert_eq!(s.apply(&c13), c33);
    }

    #[test]
    fn invariant_lattice_is_scaled_hyperbolic() {
        for p in [3, 5, 7] {
            let m = model(p);
            let s = sigma_matrix(&m).unwrap();
            let inv = invariant_sublattice(&m, &s).unwrap();
            let gens = invariant_generators(&m).unwrap();
            assert_eq!(hnf(&gens).basis(), inv.basis);
            let pb = p as i64;
            assert_eq!(
                m.lattice().gram_of_vectors(&gens),
                MatZ::from_i64(&[&[0, pb], &[pb, 0]])
            );
        }
    }

    #[test]
    fn omega_matches_tables() {
        for (p, rank, det) in [(3, 12, 729), (5, 16, 625), (7, 18, 343)] {
            let m = model(p);
            let s = sigma_matrix(&m).unwrap();
            let o = omega_lattice(&m, &s).unwrap();
            assert_eq!(o.lattice.rank(), rank);
            assert_eq!(o.lattice.det(), BigInt::from(det));
            let inv = invariant_sublattice(&m, &s).unwrap();
            assert_eq!(inv.lattice.rank() + o.lattice.rank(), m.rank());
            let q = inv.lattice.det() * o.lattice.det() / m.lattice().det();
            assert!(crate::arith::exact_sqrt(&q.abs()).is_some());
            assert!(disc_group_action(&s, &o.complement).unwrap());
        }
    }

    #[test]
    fn w5_moves_by_omega_vector() {
        let m = model(3);
        let s = sigma_matrix(&m).unwrap();
        let w5 = w5_witness(&m).unwrap();
        let moved: Vec<BigRational> = s.apply_q(&w5).iter().zip(&w5).map(|(a, b)| a - b).collect();
        let expect = m
            .combination(&[(1, Divisor::Section(1)), (-1, Divisor::ZeroSection)])
            .unwrap();
        assert_eq!(moved, to_rat_vec(&expect));
    }

    #[test]
    fn identity_acts_trivially() {
        let l = standard_lattice("A(2)").unwrap();
        let sub = l.span(&MatZ::identity(2)).unwrap();
        assert!(disc_group_action(&SigmaAction::identity(2), &sub).unwrap());
    }

    #[test]
    fn lefschetz_table() {
        let rows = [
            (3, 6, (10, 6, 13, 7)),
            (5, 4, (6, 4, 17, 3)),
            (7, 3, (4, 3, 19, 1)),
        ];
        for (p, mu, (a, b, rho, m)) in rows {
            let d = lefschetz_solve(p, mu).unwrap();
            assert_eq!((d.a, d.b, d.rho_min, d.moduli_max), (a, b, rho, m));
            assert_eq!(fixed_points(p), Some(mu));
        }
        assert!(matches!(
            lefschetz_solve(5, 5),
            Err(EllnsError::NoIntegerSolution { .. })
        ));
    }

    #[test]
    fn reoriented_fibration_is_isometric() {
        let std = model(5);
        let alt = build_ns(&FibrationConfig::reoriented5()).unwrap();
        assert_eq!(alt.lattice().det(), BigInt::from(-25));
        let w = relabel_isometry(&std, &alt).unwrap();
        assert_eq!(det_z(&w).abs(), BigInt::one());
        assert_eq!(alt.gram.congruent(&w), std.gram);
        assert!(matches!(
            relabel_isometry(&std, &model(3)),
            Err(EllnsError::NotRelated)
        ));
    }

    #[test]
    fn config_json() {
        let cfg: FibrationConfig = serde_json::from_str(r#"{"p":5,"k":[1,1,2,2],"i1":4}"#).unwrap();
        assert_eq!(cfg, FibrationConfig::standard(5).unwrap());
        assert_eq!(
            serde_json::to_string(&cfg).unwrap(),
            r#"{"p":5,"k":[1,1,2,2],"i1":4}"#
        );
        assert!(model_json(&model(7)).unwrap().contains("\"rank\":20"));
    }
}
