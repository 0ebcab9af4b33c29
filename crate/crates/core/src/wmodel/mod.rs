//! Weierstrass models over `Q(t)` of elliptic K3 surfaces with a torsion
//! section: group law, discriminant and semistable fibre types.

mod poly;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

pub use poly::{PolyQ, RatFunc};

#[derive(Debug, Error, PartialEq)]
pub enum WmodelError {
    #[error("discriminant vanishes identically")]
    DegenerateFamily,
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("fibre at {place} has ord(c4) > 0; only I_n fibres are classified")]
    NonMinimalOrNonIn { place: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial division is not exact")]
    NotDivisible,
    #[error("degree {degree} exceeds {bound}")]
    DegreeTooLarge { degree: usize, bound: usize },
    #[error("expected a polynomial, found {0}")]
    NotPolynomial(String),
    #[error("cannot parse `{0}` as a rational number")]
    Parse(String),
    #[error("no torsion family of order {0}")]
    BadOrder(u32),
}

/// `y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassCurve {
    pub a1: RatFunc,
    pub a2: RatFunc,
    pub a3: RatFunc,
    pub a4: RatFunc,
    pub a6: RatFunc,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurvePoint {
    Infinity,
    Affine { x: RatFunc, y: RatFunc },
}

impl CurvePoint {
    pub fn affine(x: RatFunc, y: RatFunc) -> Self {
        CurvePoint::Affine { x, y }
    }
}

/// Invariants `b2, b4, b6, b8`.
struct BInvariants {
    b2: RatFunc,
    b4: RatFunc,
    b6: RatFunc,
    b8: RatFunc,
}

impl WeierstrassCurve {
    /// `y^2 = x^3 + A x + B`.
    pub fn short(a: RatFunc, b: RatFunc) -> Self {
        WeierstrassCurve {
            a1: RatFunc::zero(),
            a2: RatFunc::zero(),
            a3: RatFunc::zero(),
            a4: a,
            a6: b,
        }
    }

    pub fn is_short(&self) -> bool {
        self.a1.is_zero() && self.a2.is_zero() && self.a3.is_zero()
    }

    fn b_invariants(&self) -> BInvariants {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let k = |n: i64| RatFunc::from_i64(n);
        BInvariants {
            b2: &(a1 * a1) + &(&k(4) * a2),
            b4: &(&k(2) * a4) + &(a1 * a3),
            b6: &(a3 * a3) + &(&k(4) * a6),
            b8: &(&(&(&(a1 * a1) * a6) + &(&(&k(4) * a2) * a6)) - &(&(a1 * a3) * a4))
                + &(&(a2 * &(a3 * a3)) - &(a4 * a4)),
        }
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                let lhs = &(&(y * y) + &(&(&self.a1 * x) * y)) + &(&self.a3 * y);
                let rhs =
                    &(&(&(&(x * x) * x) + &(&self.a2 * &(x * x))) + &(&self.a4 * x)) + &self.a6;
                lhs == rhs
            }
        }
    }

    pub fn negate(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                CurvePoint::affine(x.clone(), &(&-y - &(&self.a1 * x)) - &self.a3)
            }
        }
    }
}

/// Chord-and-tangent addition.
pub fn group_add(
    c: &WeierstrassCurve,
    p: &CurvePoint,
    q: &CurvePoint,
) -> Result<CurvePoint, WmodelError> {
    if !c.contains(p) || !c.contains(q) {
        return Err(WmodelError::PointNotOnCurve);
    }
    Ok(add_unchecked(c, p, q))
}

fn add_unchecked(c: &WeierstrassCurve, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
    let (x1, y1, x2, y2) = match (p, q) {
        (CurvePoint::Infinity, _) => return q.clone(),
        (_, CurvePoint::Infinity) => return p.clone(),
        (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
            (x1, y1, x2, y2)
        }
    };
    let k = |n: i64| RatFunc::from_i64(n);
    let (lambda, nu) = if x1 == x2 {
        let denom = &(&(&k(2) * y1) + &(&c.a1 * x1)) + &c.a3;
        if denom.is_zero() || &(y1 + y2) + &(&(&c.a1 * x2) + &c.a3) == RatFunc::zero() {
            return CurvePoint::Infinity;
        }
        let num_l = &(&(&(&k(3) * &(x1 * x1)) + &(&(&k(2) * &c.a2) * x1)) + &c.a4) - &(&c.a1 * y1);
        let num_n = &(&(&-&(&(x1 * x1) * x1) + &(&c.a4 * x1)) + &(&k(2) * &c.a6)) - &(&c.a3 * y1);
        (
            num_l.div(&denom).expect("nonzero"),
            num_n.div(&denom).expect("nonzero"),
        )
    } else {
        let dx = x2 - x1;
        (
            (y2 - y1).div(&dx).expect("nonzero"),
            (&(y1 * x2) - &(y2 * x1)).div(&dx).expect("nonzero"),
        )
    };
    let x3 = &(&(&(&(&lambda * &lambda) + &(&c.a1 * &lambda)) - &c.a2) - x1) - x2;
    let y3 = &(&-&(&(&lambda + &c.a1) * &x3) - &nu) - &c.a3;
    CurvePoint::affine(x3, y3)
}

pub fn scalar_mul(c: &WeierstrassCurve, n: u32, p: &CurvePoint) -> Result<CurvePoint, WmodelError> {
    if !c.contains(p) {
        return Err(WmodelError::PointNotOnCurve);
    }
    Ok((0..n).fold(CurvePoint::Infinity, |acc, _| add_unchecked(c, &acc, p)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointOrder {
    Finite(u32),
    /// No `n <= cap` kills the point.
    Infinite(u32),
}

pub fn point_order(
    c: &WeierstrassCurve,
    p: &CurvePoint,
    cap: u32,
) -> Result<PointOrder, WmodelError> {
    if !c.contains(p) {
        return Err(WmodelError::PointNotOnCurve);
    }
    let mut acc = p.clone();
    for n in 1..=cap {
        if acc == CurvePoint::Infinity {
            return Ok(PointOrder::Finite(n));
        }
        acc = add_unchecked(c, &acc, p);
    }
    Ok(PointOrder::Infinite(cap))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Discriminant {
    pub delta: RatFunc,
    pub c4: RatFunc,
}

/// `4A^3 + 27B^2` in short form, the usual `b`-invariant expression otherwise.
pub fn discriminant(c: &WeierstrassCurve) -> Discriminant {
    let k = |n: i64| RatFunc::from_i64(n);
    let b = c.b_invariants();
    let c4 = &(&b.b2 * &b.b2) - &(&k(24) * &b.b4);
    let delta = if c.is_short() {
        &(&k(4) * &c.a4.pow(3)) + &(&k(27) * &c.a6.pow(2))
    } else {
        let t1 = -&(&(&b.b2 * &b.b2) * &b.b8);
        let t2 = &k(8) * &b.b4.pow(3);
        let t3 = &k(27) * &(&b.b6 * &b.b6);
        let t4 = &k(9) * &(&(&b.b2 * &b.b4) * &b.b6);
        &(&(&t1 - &t2) - &t3) + &t4
    };
    Discriminant { delta, c4 }
}

/// Degree of `Delta` after homogenising to the K3 weight.
pub const DELTA_WEIGHT: usize = 24;
const C4_WEIGHT: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberPlace {
    /// Monic square-free factor whose roots carry the fibres, or `"inf"`.
    pub place: String,
    /// Number of fibres at this place over `C`.
    pub fibres: usize,
    pub delta_order: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberReport {
    pub places: Vec<FiberPlace>,
    /// Fibre types with multiplicities, e.g. `"I3" -> 6`.
    pub types: BTreeMap<String, usize>,
}

impl FiberReport {
    /// Sum of the vanishing orders of `Delta`, counted over `C`.
    pub fn euler_sum(&self) -> usize {
        self.places
            .iter()
            .map(|p| p.fibres * p.delta_order as usize)
            .sum()
    }

    pub fn count(&self, name: &str) -> usize {
        self.types.get(name).copied().unwrap_or(0)
    }
}

fn require_poly(r: &RatFunc, what: &str) -> Result<PolyQ, WmodelError> {
    r.as_poly()
        .cloned()
        .ok_or_else(|| WmodelError::NotPolynomial(format!("{what} = {r}")))
}

/// Singular fibres from the square-free factorisation of `Delta`, all of
/// which must be of type `I_n`.
pub fn fiber_analysis(c: &WeierstrassCurve) -> Result<FiberReport, WmodelError> {
    let d = discriminant(c);
    if d.delta.is_zero() {
        return Err(WmodelError::DegenerateFamily);
    }
    let delta = require_poly(&d.delta, "Delta")?;
    let c4 = require_poly(&d.c4, "c4")?;
    let mut places = Vec::new();
    for (factor, n) in delta.square_free() {
        if !factor.gcd(&c4).is_constant() {
            return Err(WmodelError::NonMinimalOrNonIn {
                place: factor.to_string(),
            });
        }
        places.push(FiberPlace {
            place: factor.to_string(),
            fibres: factor.degree().unwrap_or(0),
            delta_order: n,
        });
    }
    let deg = delta.degree().unwrap_or(0);
    if deg > DELTA_WEIGHT {
        return Err(WmodelError::DegreeTooLarge {
            degree: deg,
            bound: DELTA_WEIGHT,
        });
    }
    let at_infinity = (DELTA_WEIGHT - deg) as u32;
    if at_infinity > 0 {
        let c4_at_inf = c4.reversed(C4_WEIGHT)?;
        if c4_at_inf.coeff(0).is_zero() {
            return Err(WmodelError::NonMinimalOrNonIn {
                place: "inf".into(),
            });
        }
        places.push(FiberPlace {
            place: "inf".into(),
            fibres: 1,
            delta_order: at_infinity,
        });
    }
    let mut types = BTreeMap::new();
    for p in &places {
        *types.entry(format!("I{}", p.delta_order)).or_insert(0) += p.fibres;
    }
    Ok(FiberReport { places, types })
}

fn check_degree(p: &PolyQ, bound: usize) -> Result<(), WmodelError> {
    match p.degree() {
        Some(d) if d > bound => Err(WmodelError::DegreeTooLarge { degree: d, bound }),
        _ => Ok(()),
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The model with a flex section of order three: `A = 2lm + l^4/3`,
/// `B = m^2 - l^6/27`, `P = (l^2/3, l^3/3 + m)`.
pub fn family3(l: &PolyQ, m: &PolyQ) -> Result<(WeierstrassCurve, CurvePoint), WmodelError> {
    check_degree(l, 2)?;
    check_degree(m, 6)?;
    let l2 = l * l;
    let l3 = &l2 * l;
    let a = &(l * m).scale(&q(2, 1)) + &(&l2 * &l2).scale(&q(1, 3));
    let b = &(m * m) - &(&l3 * &l3).scale(&q(1, 27));
    let curve = WeierstrassCurve::short(RatFunc::poly(a), RatFunc::poly(b));
    let point = CurvePoint::affine(
        RatFunc::poly(l2.scale(&q(1, 3))),
        RatFunc::poly(&l3.scale(&q(1, 3)) + m),
    );
    finish_family(curve, point)
}

/// The model with a section of order five built from `a, b`.
pub fn family5(a: &PolyQ, b: &PolyQ) -> Result<(WeierstrassCurve, CurvePoint), WmodelError> {
    check_degree(a, 2)?;
    check_degree(b, 2)?;
    let (a2, b2) = (a * a, b * b);
    let (a3, b3) = (&a2 * a, &b2 * b);
    let ab3 = a * &b3;
    let a3b = &a3 * b;
    let big_a = (&(&(&(&-&(&b2 * &b2) + &(&b2 * &a2)) - &(&a2 * &a2)) - &ab3.scale(&q(3, 1)))
        + &a3b.scale(&q(3, 1)))
        .scale(&q(1, 3));
    let quartic = &(&(&(&(&b2 * &b2).scale(&q(19, 1)) - &(&b2 * &a2).scale(&q(34, 1)))
        + &(&a2 * &a2).scale(&q(19, 1)))
        + &ab3.scale(&q(18, 1)))
        - &a3b.scale(&q(18, 1));
    let big_b = (&(&b2 + &a2) * &quartic).scale(&q(1, 108));
    let curve = WeierstrassCurve::short(RatFunc::poly(big_a), RatFunc::poly(big_b));
    let amb = a - b;
    let x = (&b2.scale(&q(2, 1)) - &a2).scale(&q(1, 3));
    let y = (&(a + b) * &(&amb * &amb)).scale(&q(1, 2));
    finish_family(
        curve,
        CurvePoint::affine(RatFunc::poly(x), RatFunc::poly(y)),
    )
}

/// `y^2 + (1 + t - t^2) x y + (t^2 - t^3) y = x^3 + (t^2 - t^3) x^2`, with `(0, 0)`.
pub fn family7() -> (WeierstrassCurve, CurvePoint) {
    let c = RatFunc::poly(PolyQ::from_i64(&[0, 0, 1, -1]));
    let curve = WeierstrassCurve {
        a1: RatFunc::poly(PolyQ::from_i64(&[1, 1, -1])),
        a2: c.clone(),
        a3: c,
        a4: RatFunc::zero(),
        a6: RatFunc::zero(),
    };
    (curve, CurvePoint::affine(RatFunc::zero(), RatFunc::zero()))
}

fn finish_family(
    curve: WeierstrassCurve,
    point: CurvePoint,
) -> Result<(WeierstrassCurve, CurvePoint), WmodelError> {
    if discriminant(&curve).delta.is_zero() {
        return Err(WmodelError::DegenerateFamily);
    }
    if !curve.contains(&point) {
        return Err(WmodelError::PointNotOnCurve);
    }
    Ok((curve, point))
}

/// `(5l^3 + 27m)(l^3 + 3m)^3`, which should equal `27 Delta`.
pub fn family3_factored(l: &PolyQ, m: &PolyQ) -> PolyQ {
    let l3 = &(l * l) * l;
    let first = &l3.scale(&q(5, 1)) + &m.scale(&q(27, 1));
    let second = &l3 + &m.scale(&q(3, 1));
    &first * &second.pow(3)
}

/// `(b^2 - a^2)^5 (11(b^2 - a^2) + 4ab)`, which should equal `16 Delta`.
pub fn family5_factored(a: &PolyQ, b: &PolyQ) -> PolyQ {
    let d = &(b * b) - &(a * a);
    &d.pow(5) * &(&d.scale(&q(11, 1)) + &(a * b).scale(&q(4, 1)))
}

/// Seeded polynomials of degree at most `deg` with coefficients in `[-r, r]`.
pub fn random_poly<R: rand::Rng>(rng: &mut R, deg: usize, r: i64) -> PolyQ {
    let c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-r..=r)).collect();
    PolyQ::from_i64(&c)
}

/// A member of the family with a section of order `p`: random `l, m` or
/// `a, b` for `p = 3, 5`, the fixed curve for `p = 7`.
pub fn torsion_family<R: rand::Rng>(
    p: u32,
    rng: &mut R,
) -> Result<(WeierstrassCurve, CurvePoint), WmodelError> {
    match p {
        3 => {
            let (l, m) = (random_poly(rng, 2, 3), random_poly(rng, 6, 3));
            family3(&l, &m)
        }
        5 => {
            let (a, b) = (random_poly(rng, 2, 3), random_poly(rng, 2, 3));
            family5(&a, &b)
        }
        7 => Ok(family7()),
        _ => Err(WmodelError::BadOrder(p)),
    }
}

impl CurvePoint {
    pub fn is_infinity(&self) -> bool {
        *self == CurvePoint::Infinity
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cst(n: i64, d: i64) -> RatFunc {
        RatFunc::constant(rat(n, d))
    }

    fn p(c: &[i64]) -> PolyQ {
        PolyQ::from_i64(c)
    }

    #[test]
    fn short_discriminant() {
        let c = WeierstrassCurve::short(cst(1, 1), RatFunc::zero());
        assert_eq!(discriminant(&c).delta, cst(4, 1));
    }

    #[test]
    fn family3_at_one() {
        let (c, pt) = family3(&p(&[1]), &p(&[1])).unwrap();
        assert_eq!(c.a4, cst(7, 3));
        assert_eq!(c.a6, cst(26, 27));
        assert_eq!(pt, CurvePoint::affine(cst(1, 3), cst(4, 3)));
        assert_eq!(discriminant(&c).delta, cst(2048, 27));
    }

    #[test]
    fn family5_at_one_zero() {
        let (c, pt) = family5(&p(&[1]), &PolyQ::zero()).unwrap();
        assert_eq!(c.a4, cst(-1, 3));
        assert_eq!(c.a6, cst(19, 108));
        assert_eq!(pt, CurvePoint::affine(cst(-1, 3), cst(1, 2)));
        assert_eq!(discriminant(&c).delta, cst(11, 16));
        let two = group_add(&c, &pt, &pt).unwrap();
        assert_eq!(two, CurvePoint::affine(cst(2, 3), cst(-1, 2)));
        assert_eq!(point_order(&c, &pt, 10).unwrap(), PointOrder::Finite(5));
        assert_eq!(
            family5(&p(&[1, 1]), &p(&[1, 1])).unwrap_err(),
            WmodelError::DegenerateFamily
        );
    }

    #[test]
    fn family7_shape() {
        let (c, pt) = family7();
        assert!(c.a4.is_zero() && c.a6.is_zero());
        assert_eq!(pt, CurvePoint::affine(RatFunc::zero(), RatFunc::zero()));
        assert_eq!(point_order(&c, &pt, 20).unwrap(), PointOrder::Finite(7));
        let d = discriminant(&c).delta;
        let delta = d.as_poly().unwrap();
        // t^7 (t - 1)^7 (t^3 - 8t^2 + 5t + 1)
        let expect = &(&p(&[0, 1]).pow(7) * &p(&[-1, 1]).pow(7)) * &p(&[1, 5, -8, 1]);
        assert_eq!(delta.monic(), expect);
        let r = fiber_analysis(&c).unwrap();
        assert_eq!((r.count("I7"), r.count("I1")), (3, 3));
        assert_eq!(r.euler_sum(), 24);
    }

    #[test]
    fn identities_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let (l, m) = (random_poly(&mut rng, 2, 3), random_poly(&mut rng, 6, 3));
            if let Ok((c, pt)) = family3(&l, &m) {
                let delta = discriminant(&c).delta;
                assert_eq!(
                    delta.scale(&rat(27, 1)),
                    RatFunc::poly(family3_factored(&l, &m))
                );
                assert_eq!(point_order(&c, &pt, 10).unwrap(), PointOrder::Finite(3));
            }
            let (a, b) = (random_poly(&mut rng, 2, 3), random_poly(&mut rng, 2, 3));
            if let Ok((c, pt)) = family5(&a, &b) {
                let delta = discriminant(&c).delta;
                assert_eq!(
                    delta.scale(&rat(16, 1)),
                    RatFunc::poly(family5_factored(&a, &b))
                );
                assert!(c.contains(&pt));
            }
        }
    }

    #[test]
    fn generic_fibres() {
        let (c, _) = family3(&p(&[1, -2, 3]), &p(&[2, 0, -1, 3, 1, -2, 1])).unwrap();
        let r = fiber_analysis(&c).unwrap();
        assert_eq!((r.count("I3"), r.count("I1")), (6, 6));
        assert_eq!(r.euler_sum(), 24);
        let (c, _) = family5(&p(&[1, 2, -1]), &p(&[-2, 1, 3])).unwrap();
        let r = fiber_analysis(&c).unwrap();
        assert_eq!((r.count("I5"), r.count("I1")), (4, 4));
        assert_eq!(r.euler_sum(), 24);
    }

    #[test]
    fn additive_fibre_is_rejected() {
        // y^2 = x^3 + t^2 x + t^3: Delta and c4 both vanish at t = 0
        let c = WeierstrassCurve::short(
            RatFunc::poly(p(&[0, 0, 1])),
            RatFunc::poly(p(&[0, 0, 0, 1])),
        );
        assert!(matches!(
            fiber_analysis(&c),
            Err(WmodelError::NonMinimalOrNonIn { .. })
        ));
    }

    #[test]
    fn group_axioms() {
        let (c, pt) = family5(&p(&[1]), &PolyQ::zero()).unwrap();
        assert_eq!(group_add(&c, &pt, &CurvePoint::Infinity).unwrap(), pt);
        assert_eq!(
            group_add(&c, &pt, &c.negate(&pt)).unwrap(),
            CurvePoint::Infinity
        );
        let off = CurvePoint::affine(cst(0, 1), cst(0, 1));
        assert_eq!(group_add(&c, &off, &pt), Err(WmodelError::PointNotOnCurve));
    }
}
