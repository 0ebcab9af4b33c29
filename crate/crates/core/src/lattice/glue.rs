//! Index-p overlattices of `<L^2> (+) Omega` generated by `(L + v)/p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::{direct_sum, discriminant_group, Lattice, LatticeError};
use crate::arith::{hnf, inverse_q, MatZ};
use crate::shortvec::short_vectors;

fn check_prime(p: i64) -> Result<(), LatticeError> {
    if [3, 5, 7].contains(&p) {
        Ok(())
    } else {
        Err(LatticeError::BadPrime(p))
    }
}

/// `L^2 = 0 mod 2p`, `v^2 = 0 mod 2p` and `L^2 + v^2 = 0 mod 2p^2`.
pub fn glue_conditions(l_sq: &BigInt, v_sq: &BigInt, p: i64) -> Result<bool, LatticeError> {
    check_prime(p)?;
    let two_p = BigInt::from(2 * p);
    let two_p2 = BigInt::from(2 * p * p);
    Ok(l_sq.mod_floor(&two_p).is_zero()
        && v_sq.mod_floor(&two_p).is_zero()
        && (l_sq + v_sq).mod_floor(&two_p2).is_zero())
}

/// The element `(L + v)/p` of `(<l_sq> (+) Omega) (x) Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueVector {
    pub l_sq: BigInt,
    pub v: Vec<BigInt>,
    pub p: i64,
}

/// An overlattice with its basis in host coordinates, scaled by `p`.
#[derive(Clone, Debug)]
pub struct Overlattice {
    pub lattice: Lattice,
    pub scaled_basis: MatZ,
    pub host_det: BigInt,
}

pub fn glue_host(l_sq: &BigInt, omega: &Lattice) -> Lattice {
    let line = Lattice::new(MatZ::from_rows(vec![vec![l_sq.clone()]]).unwrap())
        .unwrap()
        .labeled(format!("rank1({l_sq})"));
    direct_sum(&[line, omega.clone()])
}

pub fn overlattice_from_glue(
    omega: &Lattice,
    glue: &GlueVector,
) -> Result<Overlattice, LatticeError> {
    let p = glue.p;
    check_prime(p)?;
    if glue.v.len() != omega.rank() {
        return Err(LatticeError::BadParam(format!(
            "glue vector of length {} for a lattice of rank {}",
            glue.v.len(),
            omega.rank()
        )));
    }
    let pb = BigInt::from(p);
    if !glue.l_sq.mod_floor(&BigInt::from(2 * p)).is_zero() {
        return Err(LatticeError::ConditionsFail);
    }
    if omega
        .gram()
        .mul_vec(&glue.v)
        .iter()
        .any(|x| !x.mod_floor(&pb).is_zero())
    {
        return Err(LatticeError::NotInDual);
    }
    if !glue_conditions(&glue.l_sq, &omega.norm(&glue.v), p)? {
        return Err(LatticeError::ConditionsFail);
    }
    let host = glue_host(&glue.l_sq, omega);
    let n = host.rank();
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { pb.clone() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut g = vec![BigInt::from(1)];
    g.extend(glue.v.iter().cloned());
    rows.push(g);
    let scaled_basis = hnf(&MatZ::from_rows(rows).unwrap()).basis();
    let p2 = BigInt::from(p * p);
    let scaled = host.gram_of_vectors(&scaled_basis);
    if scaled.entries().iter().any(|x| !x.is_multiple_of(&p2)) {
        return Err(LatticeError::NotInDual);
    }
    let lattice = Lattice::new(scaled.map(|x| x / &p2))?;
    if !lattice.is_even() {
        return Err(LatticeError::OddResult);
    }
    Ok(Overlattice {
        lattice,
        scaled_basis,
        host_det: host.det(),
    })
}

/// Outcome of the search over all classes of `Omega^v / Omega`.
#[derive(Clone, Debug)]
pub struct GlueSearch {
    pub classes: u64,
    /// Classes `w` for which `(L + p w)/p` satisfies the glue conditions.
    pub admissible: u64,
    /// Shortest admissible `v` and its overlattice.
    pub witness: Option<(GlueVector, Overlattice)>,
}

struct ClassScan {
    classes: u64,
    admissible: u64,
    representative: Option<Vec<BigInt>>,
}

/// Runs through `Omega^v / Omega`, which must have exponent `p`.
fn scan_classes(l_sq: &BigInt, omega: &Lattice, p: i64) -> Result<ClassScan, LatticeError> {
    check_prime(p)?;
    let dg = discriminant_group(omega)?;
    let pb = BigInt::from(p);
    if dg.form.orders().iter().any(|d| d != &pb) {
        return Err(LatticeError::NotHomogeneousOddPrime);
    }
    let k = dg.form.orders().len() as u32;
    let classes = (p as u64).pow(k);
    let p2 = BigRational::from_integer(BigInt::from(p * p));
    let two_p2 = BigRational::from_integer(BigInt::from(2 * p * p));
    let target = BigRational::from_integer(l_sq.clone());
    let l_ok = l_sq.mod_floor(&BigInt::from(2 * p)).is_zero();
    let mut admissible = 0;
    let mut representative = None;
    for idx in 0..classes {
        let mut c = Vec::with_capacity(k as usize);
        let mut r = idx;
        for _ in 0..k {
            c.push(BigInt::from(r % p as u64));
            r /= p as u64;
        }
        // v^2 = p^2 q(w) mod 2p^2 for v = p w
        let v_sq = &p2 * dg.form.value(&c);
        let ok = l_ok && crate::arith::rat_mod(&(&target + &v_sq), &two_p2).is_zero();
        if ok {
            admissible += 1;
            if representative.is_none() {
                let w = dg.element(&c);
                let v: Vec<BigInt> = w
                    .iter()
                    .map(|x| (x * &p2 / BigRational::from_integer(pb.clone())).to_integer())
                    .collect();
                representative = Some(v);
            }
        }
    }
    Ok(ClassScan {
        classes,
        admissible,
        representative,
    })
}

/// Number of classes of `Omega^v / Omega` and how many of them glue to `L`.
pub fn count_admissible(
    l_sq: &BigInt,
    omega: &Lattice,
    p: i64,
) -> Result<(u64, u64), LatticeError> {
    let scan = scan_classes(l_sq, omega, p)?;
    Ok((scan.classes, scan.admissible))
}

/// Searches `Omega^v / Omega` and builds the overlattice for a shortest
/// admissible `v` when one exists.
pub fn search_glue(l_sq: &BigInt, omega: &Lattice, p: i64) -> Result<GlueSearch, LatticeError> {
    let ClassScan {
        classes,
        admissible,
        representative,
    } = scan_classes(l_sq, omega, p)?;
    let Some(fallback) = representative else {
        return Ok(GlueSearch {
            classes,
            admissible,
            witness: None,
        });
    };
    let v = shortest_admissible(l_sq, omega, p).unwrap_or(fallback);
    let glue = GlueVector {
        l_sq: l_sq.clone(),
        v,
        p,
    };
    let over = overlattice_from_glue(omega, &glue)?;
    Ok(GlueSearch {
        classes,
        admissible,
        witness: Some((glue, over)),
    })
}

/// Enumerates `p Omega^v` by increasing norm and returns the first vector
/// satisfying the glue conditions.
fn shortest_admissible(l_sq: &BigInt, omega: &Lattice, p: i64) -> Option<Vec<BigInt>> {
    omega.definiteness()?;
    let inv = inverse_q(&omega.gram().to_rational()).ok()?;
    let pq = BigRational::from_integer(BigInt::from(p));
    // rows of p G^-1 span p Omega^v in Omega coordinates
    let basis = inv.map(|x| x * &pq).to_integer()?;
    let dual = Lattice::new(omega.gram().congruent(&basis)).ok()?;
    let mut bound: u64 = 2 * (p * p) as u64;
    for _ in 0..6 {
        let report = short_vectors(&dual, bound, true).ok()?;
        let best = report
            .vectors
            .unwrap_or_default()
            .into_iter()
            .filter(|sv| glue_conditions(l_sq, &BigInt::from(sv.norm), p).unwrap_or(false))
            .min_by_key(|sv| sv.norm.abs());
        if let Some(sv) = best {
            return Some(basis.vec_mul(&sv.coords_big()));
        }
        bound *= 2;
    }
    None
}
