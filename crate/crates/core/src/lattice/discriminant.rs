//! Discriminant groups of even lattices and finite quadratic forms.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{Lattice, LatticeError};
use crate::arith::{det_z, rat_mod, snf, MatQ, MatZ};

/// Largest group order handled by the exhaustive isomorphism search.
pub const EXHAUSTIVE_BOUND: u64 = 729;

/// A finite abelian group `(+) Z/d_i` with a quadratic form valued in Q/2Z
/// and its bilinear form valued in Q/Z, both stored on the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuadraticForm {
    orders: Vec<BigInt>,
    q: Vec<BigRational>,
    b: MatQ,
}

fn mod_two(x: &BigRational) -> BigRational {
    rat_mod(x, &BigRational::from_integer(BigInt::from(2)))
}

fn mod_one(x: &BigRational) -> BigRational {
    rat_mod(x, &BigRational::one())
}

fn int_rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

impl FiniteQuadraticForm {
    pub fn new(orders: Vec<BigInt>, q: Vec<BigRational>, b: MatQ) -> Result<Self, LatticeError> {
        let n = orders.len();
        if q.len() != n || b.rows() != n || b.cols() != n {
            return Err(LatticeError::BadParam(
                "generator data of different lengths".into(),
            ));
        }
        if orders.iter().any(|d| d < &BigInt::from(2)) {
            return Err(LatticeError::BadParam(
                "generator orders must be >= 2".into(),
            ));
        }
        let q: Vec<BigRational> = q.iter().map(mod_two).collect();
        let b = b.map(mod_one);
        if !b.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        for i in 0..n {
            let d = int_rat(&orders[i]);
            if mod_one(&q[i]) != *b.get(i, i) {
                return Err(LatticeError::BadParam(format!(
                    "q and b disagree on generator {i}"
                )));
            }
            if !mod_two(&(&d * &d * &q[i])).is_zero() {
                return Err(LatticeError::BadParam(format!(
                    "generator {i} has q-value incompatible with its order"
                )));
            }
            for j in 0..n {
                if !(&d * b.get(i, j)).is_integer() {
                    return Err(LatticeError::BadParam(format!(
                        "b({i},{j}) incompatible with the order of generator {i}"
                    )));
                }
            }
        }
        Ok(FiniteQuadraticForm { orders, q, b })
    }

    pub fn trivial() -> Self {
        FiniteQuadraticForm {
            orders: Vec::new(),
            q: Vec::new(),
            b: MatQ::zeros(0, 0),
        }
    }

    /// The cyclic form `Z/order` with generator value `q`.
    pub fn cyclic(order: i64, q: BigRational) -> Result<Self, LatticeError> {
        let b = MatQ::from_fn(1, 1, |_, _| q.clone());
        FiniteQuadraticForm::new(vec![BigInt::from(order)], vec![q], b)
    }

    pub fn orthogonal_sum(parts: &[FiniteQuadraticForm]) -> Self {
        let blocks: Vec<&MatQ> = parts.iter().map(|f| &f.b).collect();
        FiniteQuadraticForm {
            orders: parts.iter().flat_map(|f| f.orders.clone()).collect(),
            q: parts.iter().flat_map(|f| f.q.clone()).collect(),
            b: MatQ::block_diag(&blocks),
        }
    }

    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn q_values(&self) -> &[BigRational] {
        &self.q
    }

    pub fn bilinear(&self) -> &MatQ {
        &self.b
    }

    pub fn order(&self) -> BigInt {
        self.orders.iter().product()
    }

    /// Number of nontrivial invariant factors.
    pub fn min_generators(&self) -> usize {
        self.invariant_factors().len()
    }

    fn invariant_factors(&self) -> Vec<BigInt> {
        let d = MatZ::diagonal(&self.orders);
        snf(&d)
            .invariants()
            .into_iter()
            .filter(|x| x > &BigInt::one())
            .collect()
    }

    pub fn negated(&self) -> Self {
        FiniteQuadraticForm {
            orders: self.orders.clone(),
            q: self.q.iter().map(|x| mod_two(&-x)).collect(),
            b: self.b.map(|x| mod_one(&-x)),
        }
    }

    /// `q(sum c_i g_i)` in `[0, 2)`.
    pub fn value(&self, coeffs: &[BigInt]) -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..self.orders.len() {
            if coeffs[i].is_zero() {
                continue;
            }
            let ci = int_rat(&coeffs[i]);
            acc += &ci * &ci * &self.q[i];
            for j in i + 1..self.orders.len() {
                if coeffs[j].is_zero() {
                    continue;
                }
                acc += BigRational::from_integer(BigInt::from(2))
                    * &ci
                    * int_rat(&coeffs[j])
                    * self.b.get(i, j);
            }
        }
        mod_two(&acc)
    }

    /// `b(x, y)` in `[0, 1)` for coefficient vectors.
    pub fn pairing(&self, x: &[BigInt], y: &[BigInt]) -> BigRational {
        let xq: Vec<BigRational> = x.iter().map(int_rat).collect();
        let yq: Vec<BigRational> = y.iter().map(int_rat).collect();
        mod_one(&self.b.pair(&xq, &yq))
    }

    /// Re-presents a homogeneous `(Z/p)^n` form on the generators given by
    /// the rows of `t`, which must be invertible mod `p`.
    pub fn transformed(&self, t: &MatZ) -> Result<Self, LatticeError> {
        let p = self.homogeneous_prime()?;
        let n = self.orders.len();
        if t.rows() != n || t.cols() != n {
            return Err(LatticeError::BadParam(
                "transform has the wrong shape".into(),
            ));
        }
        if det_z(t).mod_floor(&p).is_zero() {
            return Err(LatticeError::BadParam("transform is singular mod p".into()));
        }
        let rows = t.row_vecs();
        let q = rows.iter().map(|r| self.value(r)).collect();
        let b = MatQ::from_fn(n, n, |i, j| self.pairing(&rows[i], &rows[j]));
        FiniteQuadraticForm::new(vec![p; n], q, b)
    }

    fn homogeneous_prime(&self) -> Result<BigInt, LatticeError> {
        let p = self
            .orders
            .first()
            .ok_or(LatticeError::NotHomogeneousOddPrime)?
            .clone();
        if self.orders.iter().any(|d| d != &p) || p.is_even() || !is_prime(&p) {
            return Err(LatticeError::NotHomogeneousOddPrime);
        }
        Ok(p)
    }
}

fn is_prime(n: &BigInt) -> bool {
    let Some(n) = n.to_u64() else { return false };
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// The discriminant group `L^v / L` together with rational generator vectors
/// in the coordinates of `L`.
#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    pub form: FiniteQuadraticForm,
    pub generators: Vec<Vec<BigRational>>,
}

impl DiscriminantGroup {
    /// The dual vector `sum c_i g_i`.
    pub fn element(&self, coeffs: &[BigInt]) -> Vec<BigRational> {
        let n = self.generators.first().map_or(0, Vec::len);
        let mut out = vec![BigRational::zero(); n];
        for (c, g) in coeffs.iter().zip(&self.generators) {
            if c.is_zero() {
                continue;
            }
            let c = int_rat(c);
            for (o, x) in out.iter_mut().zip(g) {
                *o += &c * x;
            }
        }
        out
    }
}

pub fn discriminant_group(lattice: &Lattice) -> Result<DiscriminantGroup, LatticeError> {
    if lattice.det().is_zero() {
        return Err(LatticeError::DegenerateGram);
    }
    if !lattice.is_even() {
        return Err(LatticeError::OddLattice);
    }
    let g = lattice.gram();
    let s = snf(g);
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    for (i, d) in s.invariants().into_iter().enumerate() {
        if d <= BigInt::one() {
            continue;
        }
        let dq = int_rat(&d);
        generators.push(
            s.v.column(i)
                .iter()
                .map(|x| int_rat(x) / &dq)
                .collect::<Vec<_>>(),
        );
        orders.push(d);
    }
    let gq = g.to_rational();
    let n = generators.len();
    let q = generators.iter().map(|x| gq.pair(x, x)).collect();
    let b = MatQ::from_fn(n, n, |i, j| gq.pair(&generators[i], &generators[j]));
    let form = FiniteQuadraticForm::new(orders, q, b)?;
    Ok(DiscriminantGroup { form, generators })
}

pub fn discriminant_form(lattice: &Lattice) -> Result<FiniteQuadraticForm, LatticeError> {
    Ok(discriminant_group(lattice)?.form)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SquareClass {
    Square,
    Nonsquare,
}

/// Complete invariant of a nondegenerate form on `(Z/p)^n`, `p` odd.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormNormal {
    pub prime: u64,
    pub rank: usize,
    pub class: SquareClass,
}

fn legendre(a: &BigInt, p: &BigInt) -> i32 {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return 0;
    }
    let e = (p - 1u32) / 2u32;
    if a.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

/// Writes `q(g_i) = 2 u_i / p` after diagonalisation and returns the square
/// class of the product of the `u_i`.
pub fn finite_form_normal(form: &FiniteQuadraticForm) -> Result<FormNormal, LatticeError> {
    let p = form.homogeneous_prime()?;
    let n = form.orders.len();
    let pq = int_rat(&p);
    // p * b over F_p; its determinant is 2^n times the product of the u_i
    let s = MatZ::from_fn(n, n, |i, j| {
        let x = if i == j {
            &pq * &form.q[i]
        } else {
            &pq * form.b.get(i, j)
        };
        x.to_integer().mod_floor(&p)
    });
    let det = det_z(&s).mod_floor(&p);
    if det.is_zero() {
        return Err(LatticeError::DegenerateGram);
    }
    let two_n = BigInt::from(2).modpow(&BigInt::from(n), &p);
    let inv = two_n.modpow(&(&p - 2u32), &p);
    let class = match legendre(&(det * inv), &p) {
        1 => SquareClass::Square,
        _ => SquareClass::Nonsquare,
    };
    Ok(FormNormal {
        prime: p.to_u64().ok_or(LatticeError::NotHomogeneousOddPrime)?,
        rank: n,
        class,
    })
}

/// Decides `f1 = f2` up to isomorphism.
pub fn is_isomorphic(
    f1: &FiniteQuadraticForm,
    f2: &FiniteQuadraticForm,
) -> Result<bool, LatticeError> {
    if f1.invariant_factors() != f2.invariant_factors() {
        return Ok(false);
    }
    if f1.order().is_one() {
        return Ok(true);
    }
    if let (Ok(n1), Ok(n2)) = (finite_form_normal(f1), finite_form_normal(f2)) {
        return Ok(n1 == n2);
    }
    let order = f2.order();
    if order > BigInt::from(EXHAUSTIVE_BOUND) {
        return Err(LatticeError::TooLarge {
            order,
            bound: EXHAUSTIVE_BOUND,
        });
    }
    Ok(IsoSearch::new(f1, f2).run())
}

/// Decides whether `f1` is isomorphic to `-f2`.
pub fn is_opposite(
    f1: &FiniteQuadraticForm,
    f2: &FiniteQuadraticForm,
) -> Result<bool, LatticeError> {
    is_isomorphic(f1, &f2.negated())
}

struct IsoSearch<'a> {
    source: &'a FiniteQuadraticForm,
    target: &'a FiniteQuadraticForm,
    moduli: Vec<u64>,
    elements: Vec<Vec<BigInt>>,
    element_order: Vec<BigInt>,
    element_q: Vec<BigRational>,
}

impl<'a> IsoSearch<'a> {
    fn new(source: &'a FiniteQuadraticForm, target: &'a FiniteQuadraticForm) -> Self {
        let moduli: Vec<u64> = target
            .orders
            .iter()
            .map(|d| d.to_u64().expect("bounded order"))
            .collect();
        let total: u64 = moduli.iter().product();
        let mut elements = Vec::with_capacity(total as usize);
        for mut k in 0..total {
            let mut c = Vec::with_capacity(moduli.len());
            for &m in &moduli {
                c.push(BigInt::from(k % m));
                k /= m;
            }
            elements.push(c);
        }
        let element_order = elements
            .iter()
            .map(|c| {
                c.iter()
                    .zip(&target.orders)
                    .fold(BigInt::one(), |acc, (x, d)| acc.lcm(&(d / x.gcd(d))))
            })
            .collect();
        let element_q = elements.iter().map(|c| target.value(c)).collect();
        IsoSearch {
            source,
            target,
            moduli,
            elements,
            element_order,
            element_q,
        }
    }

    fn run(&self) -> bool {
        let mut images = Vec::new();
        self.extend(&mut images)
    }

    fn extend(&self, images: &mut Vec<usize>) -> bool {
        let i = images.len();
        if i == self.source.orders.len() {
            return self.generates(images);
        }
        for (e, c) in self.elements.iter().enumerate() {
            if self.element_order[e] != self.source.orders[i]
                || self.element_q[e] != self.source.q[i]
            {
                continue;
            }
            let compatible = images.iter().enumerate().all(|(j, &h)| {
                self.target.pairing(c, &self.elements[h]) == *self.source.b.get(i, j)
            });
            if !compatible {
                continue;
            }
            images.push(e);
            if self.extend(images) {
                return true;
            }
            images.pop();
        }
        false
    }

    fn generates(&self, images: &[usize]) -> bool {
        let key = |c: &[BigInt]| -> Vec<u64> { c.iter().map(|x| x.to_u64().unwrap()).collect() };
        let gens: Vec<Vec<u64>> = images.iter().map(|&h| key(&self.elements[h])).collect();
        let start = vec![0u64; self.moduli.len()];
        let mut seen: HashSet<Vec<u64>> = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y: Vec<u64> = x
                    .iter()
                    .zip(g)
                    .zip(&self.moduli)
                    .map(|((a, b), m)| (a + b) % m)
                    .collect();
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        seen.len() as u64 == self.moduli.iter().product::<u64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::lattice::{direct_sum, standard_lattice};

    fn cyc(d: i64, n: i64, den: i64) -> FiniteQuadraticForm {
        FiniteQuadraticForm::cyclic(d, rat(n, den)).unwrap()
    }

    fn sum(parts: &[FiniteQuadraticForm]) -> FiniteQuadraticForm {
        FiniteQuadraticForm::orthogonal_sum(parts)
    }

    #[test]
    fn scaled_hyperbolic_plane() {
        let f = discriminant_form(&standard_lattice("U(3)").unwrap()).unwrap();
        assert_eq!(f.orders(), &[BigInt::from(3), BigInt::from(3)]);
        // the classes of (e - f)/3 and (e + f)/3 have values -2/3 and 2/3
        let expected = sum(&[cyc(3, 2, 3), cyc(3, -2, 3)]);
        assert!(is_isomorphic(&f, &expected).unwrap());
    }

    #[test]
    fn root_lattice_a2() {
        // oracle: (A - B)/3 pairs integrally with A and B; its norm under
        // [[-2,1],[1,-2]] is (-2 - 2 - 2)/9 = -2/3
        let g = MatZ::from_i64(&[&[-2, 1], &[1, -2]]).to_rational();
        let w = vec![rat(1, 3), rat(-1, 3)];
        assert!(g.mul_vec(&w).iter().all(|x| x.is_integer()));
        assert_eq!(g.pair(&w, &w), rat(-2, 3));
        let f = discriminant_form(&standard_lattice("A(2)").unwrap()).unwrap();
        assert_eq!(f.orders(), &[BigInt::from(3)]);
        assert_eq!(f.q_values(), &[rat(4, 3)]);
        assert!(is_isomorphic(&f, &cyc(3, -2, 3)).unwrap());
    }

    #[test]
    fn odd_and_degenerate_rejected() {
        let odd = Lattice::from_i64(&[&[1]]).unwrap();
        assert!(matches!(
            discriminant_group(&odd),
            Err(LatticeError::OddLattice)
        ));
        let deg = Lattice::from_i64(&[&[0, 0], &[0, 2]]).unwrap();
        assert!(matches!(
            discriminant_group(&deg),
            Err(LatticeError::DegenerateGram)
        ));
    }

    #[test]
    fn normal_forms() {
        let f = sum(&[cyc(3, 2, 3), cyc(3, 2, 3), cyc(3, 2, 3), cyc(3, -2, 3)]);
        let n = finite_form_normal(&f).unwrap();
        assert_eq!((n.prime, n.rank, n.class), (3, 4, SquareClass::Nonsquare));
        let f = sum(&[cyc(5, 2, 5), cyc(5, 2, 5), cyc(5, 2, 5), cyc(5, 2, 5)]);
        assert_eq!(finite_form_normal(&f).unwrap().class, SquareClass::Square);
        let f = sum(&[cyc(7, 4, 7), cyc(7, 4, 7), cyc(7, 4, 7)]);
        let n = finite_form_normal(&f).unwrap();
        assert_eq!((n.rank, n.class), (3, SquareClass::Square));
        let mixed = sum(&[cyc(3, 2, 3), cyc(9, 2, 9)]);
        assert_eq!(
            finite_form_normal(&mixed),
            Err(LatticeError::NotHomogeneousOddPrime)
        );
    }

    #[test]
    fn opposition() {
        let t = direct_sum(&[
            standard_lattice("U(3)").unwrap(),
            standard_lattice("A(2)").unwrap(),
            standard_lattice("A(2)").unwrap(),
        ]);
        let ft = discriminant_form(&t).unwrap();
        let ns = sum(&[cyc(3, 2, 3), cyc(3, 2, 3), cyc(3, 2, 3), cyc(3, -2, 3)]);
        assert!(is_opposite(&ft, &ns).unwrap());
        assert!(!is_opposite(&cyc(3, 2, 3), &cyc(3, 2, 3)).unwrap());
        let triv = FiniteQuadraticForm::trivial();
        assert!(is_opposite(&triv, &triv).unwrap());
    }

    #[test]
    fn exhaustive_search_agrees_with_normal_form() {
        let a = sum(&[cyc(3, 2, 3), cyc(3, 2, 3), cyc(3, 2, 3)]);
        let b = sum(&[cyc(3, 2, 3), cyc(3, 4, 3), cyc(3, 4, 3)]);
        let c = sum(&[cyc(3, 4, 3), cyc(3, 4, 3), cyc(3, 4, 3)]);
        for (x, y) in [(&a, &b), (&a, &c), (&b, &c), (&a, &a)] {
            let by_normal = finite_form_normal(x).unwrap() == finite_form_normal(y).unwrap();
            assert_eq!(IsoSearch::new(x, y).run(), by_normal);
        }
    }

    #[test]
    fn mixed_orders_use_search() {
        // <6>^v/<6> is generated by 1/6 with q = 1/6; its elements 3/6 and
        // 2/6 have q = 3/2 and 2/3
        let g = discriminant_form(&Lattice::from_i64(&[&[6]]).unwrap()).unwrap();
        assert_eq!(g.orders(), &[BigInt::from(6)]);
        let h = sum(&[cyc(2, 3, 2), cyc(3, 2, 3)]);
        assert!(is_isomorphic(&h, &g).unwrap());
        // k^2/6 = 7/6 mod 2 has no solution, so this one differs
        let f = sum(&[cyc(2, 1, 2), cyc(3, 2, 3)]);
        assert_eq!(f.value(&[BigInt::from(1), BigInt::from(1)]), rat(7, 6));
        assert!(!is_isomorphic(&f, &g).unwrap());
        assert_eq!(g.min_generators(), 1);
        assert_eq!(f.min_generators(), 1);
    }

    #[test]
    fn large_groups_refused() {
        let big = sum(&(0..4).map(|_| cyc(9, 2, 9)).collect::<Vec<_>>());
        assert!(matches!(
            is_isomorphic(&big, &big),
            Err(LatticeError::TooLarge { .. })
        ));
    }

    #[test]
    fn generator_counts() {
        let f = sum(&[cyc(3, 2, 3), cyc(3, 2, 3), cyc(3, 2, 3), cyc(3, 2, 3)]);
        assert_eq!(f.min_generators(), 4);
        assert_eq!(FiniteQuadraticForm::trivial().min_generators(), 0);
    }

    #[test]
    fn invalid_data_rejected() {
        let b = MatQ::from_fn(1, 1, |_, _| rat(1, 2));
        assert!(FiniteQuadraticForm::new(vec![BigInt::from(3)], vec![rat(2, 3)], b).is_err());
    }
}
