//! Named certificates. Each piece records exact checks and a JSON payload.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::time::Duration;

use k3lat::arith::{det_z, hnf, inverse_q, rat, snf, MatZ};
use k3lat::cyclo::{build_lp, trace_lattice, CycloError};
use k3lat::ellns::{
    build_ns, check_component_numbers, disc_group_action, fixed_points, invariant_generators,
    invariant_sublattice, lefschetz_solve, ns_det_formula, omega_lattice, shioda_tate_rank,
    sigma_matrix, transcendental_candidate, trivial_sublattice_index, w5_witness, Divisor,
    EllnsError, FibrationConfig, NsModel,
};
use k3lat::lattice::{
    direct_sum, discriminant_form, finite_form_normal, glue_conditions, is_opposite,
    listed_generators, search_glue, standard_lattice, FiniteQuadraticForm, Lattice, LatticeError,
};
use k3lat::shortvec::{density, min_norm, short_vectors, spans_at_norm, ShortVecError};
use k3lat::wmodel::{
    discriminant, family3, family3_factored, family5, family5_factored, fiber_analysis, group_add,
    point_order, random_poly, torsion_family, CurvePoint, PointOrder, RatFunc, WeierstrassCurve,
    WmodelError,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Ellns(#[from] EllnsError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    ShortVec(#[from] ShortVecError),
    #[error(transparent)]
    Wmodel(#[from] WmodelError),
    #[error("p = {0} is not 3, 5 or 7")]
    BadPrime(u32),
    #[error("{0}")]
    Missing(String),
}

pub type Piece = Result<(), CertifyError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct Certificate {
    pub checks: Vec<Check>,
    pub payload: Map<String, Value>,
}

impl Certificate {
    pub fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push(Check {
            name: name.into(),
            ok,
            note: None,
        });
    }

    pub fn eq<T: PartialEq + Debug>(&mut self, name: impl Into<String>, found: T, expected: T) {
        let ok = found == expected;
        let note = (!ok).then(|| format!("found {found:?}, expected {expected:?}"));
        self.checks.push(Check {
            name: name.into(),
            ok,
            note,
        });
    }

    pub fn record(&mut self, key: impl Into<String>, value: Value) {
        self.payload.insert(key.into(), value);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok)
    }
}

pub const PRIMES: [u32; 3] = [3, 5, 7];
pub const DEFAULT_SEED: u64 = 20;

fn b(x: i64) -> BigInt {
    BigInt::from(x)
}

fn lat(name: &str) -> Result<Lattice, CertifyError> {
    Ok(standard_lattice(name)?)
}

fn model(p: u32) -> Result<NsModel, CertifyError> {
    Ok(build_ns(&FibrationConfig::standard(p)?)?)
}

fn check_prime(p: u32) -> Piece {
    if PRIMES.contains(&p) {
        Ok(())
    } else {
        Err(CertifyError::BadPrime(p))
    }
}

pub fn matrix_json(m: &MatZ) -> Value {
    Value::Array(
        m.row_vecs()
            .iter()
            .map(|r| Value::Array(r.iter().map(int_json).collect()))
            .collect(),
    )
}

pub fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn counts_json(counts: &BTreeMap<i64, u64>) -> Value {
    Value::Object(
        counts
            .iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect(),
    )
}

/// `Omega3` from the fibration and from the trace form.
pub fn omega3(c: &mut Certificate) -> Piece {
    let m = model(3)?;
    let s = sigma_matrix(&m)?;
    let omega = omega_lattice(&m, &s)?;
    let table = lat("Omega3")?;
    let named = omega
        .named_basis
        .clone()
        .ok_or_else(|| CertifyError::Missing("explicit basis for p = 3".into()))?;
    c.eq(
        "NS Gram of b-basis = table",
        m.lattice().gram_of_vectors(&named),
        table.gram().clone(),
    );
    c.eq("complement det", omega.complement.lattice.det(), b(729));
    let h = build_lp(3)?;
    let t = trace_lattice(&h)?;
    c.check("l-vectors form a basis", t.is_basis(&h, &h.generators)?);
    c.eq(
        "trace Gram of l-basis = table",
        h.trace_gram(&h.generators)?,
        table.gram().clone(),
    );
    c.eq("trace lattice det", t.lattice.det(), b(729));
    c.eq("table det", table.det(), b(729));
    c.record("rank", json!(table.rank()));
    c.record("det", int_json(&table.det()));
    Ok(())
}

/// Short-vector census of `Omega3`.
pub fn k12(c: &mut Certificate) -> Piece {
    let omega = lat("Omega3")?;
    let r = short_vectors(&omega, 8, false)?;
    let expected: BTreeMap<i64, u64> = [(-4, 756), (-6, 4032), (-8, 20412)].into();
    c.eq("no vectors of norm -2", r.count(-2), 0);
    c.eq("counts to norm -8", r.counts.clone(), expected);
    let spans = spans_at_norm(&omega, -4)?;
    c.check("norm -4 vectors span", spans);
    c.record("counts", counts_json(&r.counts));
    c.record("spans_at_norm_-4", json!(spans));
    Ok(())
}

/// `Omega5` or `Omega7`: determinant, discriminant form, trace form and minimum.
pub fn omega_analogue(c: &mut Certificate, p: u32) -> Piece {
    let (det, rank, u) = match p {
        5 => (625, 4, 2),
        7 => (343, 3, 4),
        _ => return Err(CertifyError::BadPrime(p)),
    };
    let omega = lat(&format!("Omega{p}"))?;
    c.eq(format!("det Omega{p}"), omega.det(), b(det));
    let found = finite_form_normal(&discriminant_form(&omega)?)?;
    let q = FiniteQuadraticForm::cyclic(p as i64, rat(u, p as i64))?;
    let expected = finite_form_normal(&FiniteQuadraticForm::orthogonal_sum(&vec![q; rank]))?;
    c.eq(format!("normal form Omega{p}"), found.clone(), expected);
    let h = build_lp(p)?;
    let t = trace_lattice(&h)?;
    c.check(format!("l-basis p={p}"), t.is_basis(&h, &h.generators)?);
    c.eq(
        format!("trace Gram p={p} = table"),
        h.trace_gram(&h.generators)?,
        omega.gram().clone(),
    );
    let min = min_norm(&omega)?;
    c.eq(format!("min norm Omega{p}"), min, -4);
    let listed = listed_generators(p)
        .ok_or_else(|| CertifyError::Missing(format!("listed generators for p = {p}")))?;
    let gram = omega.gram_of_vectors(&listed);
    c.eq(format!("listed Gram det p={p}"), det_z(&gram), b(det));
    c.check(
        format!("norm -4 vectors span Omega{p}"),
        spans_at_norm(&omega, -4)?,
    );
    c.record("rank", json!(omega.rank()));
    c.record("det", int_json(&omega.det()));
    c.record(
        "normal_form",
        serde_json::to_value(&found).unwrap_or(Value::Null),
    );
    c.record("min_norm", json!(min));
    Ok(())
}

pub fn omega(c: &mut Certificate, p: u32) -> Piece {
    match p {
        3 => {
            omega3(c)?;
            k12(c)
        }
        _ => omega_analogue(c, p),
    }
}

/// Determinant and signature of the expected transcendental lattice.
pub fn main_theorem(c: &mut Certificate, p: u32) -> Piece {
    let (names, det, sig): (&[&str], i64, (usize, usize)) = match p {
        3 => (&["U", "U(3)", "U(3)", "A(2)", "A(2)"], -729, (3, 7)),
        5 => (&["U", "U(5)", "U(5)"], -625, (3, 3)),
        7 => (&["U(7)", "Upsilon"], -343, (1, 3)),
        _ => return Err(CertifyError::BadPrime(p)),
    };
    let parts = names
        .iter()
        .map(|n| lat(n))
        .collect::<Result<Vec<_>, _>>()?;
    let l = direct_sum(&parts);
    let label = names.join("+");
    c.eq(format!("det {label}"), l.det(), b(det));
    c.eq(
        format!("det {label} = -det Omega{p}"),
        l.det(),
        -lat(&format!("Omega{p}"))?.det(),
    );
    let s = l.signature()?;
    c.eq(format!("signature {label}"), (s.positive, s.negative), sig);
    c.record("lattice", json!(label));
    c.record("det", int_json(&l.det()));
    c.record("signature", json!([s.positive, s.negative]));
    Ok(())
}

/// Determinant, index and discriminant-form certificates of the NS model.
pub fn ns(c: &mut Certificate, p: u32) -> Piece {
    let (det, st_rank) = match p {
        3 => (-81, 14),
        5 => (-25, 18),
        7 => (-7, 20),
        _ => return Err(CertifyError::BadPrime(p)),
    };
    let m = model(p)?;
    let cfg = &m.config;
    let ns = m.lattice();
    c.eq(format!("NS det p={p}"), ns.det(), b(det));
    c.eq(
        format!("trivial lattice index p={p}"),
        trivial_sublattice_index(&m)?,
        b(p as i64),
    );
    c.eq(
        format!("Shioda-Tate rank p={p}"),
        shioda_tate_rank(cfg),
        st_rank,
    );
    c.eq(format!("model rank p={p}"), m.rank(), st_rank);
    c.eq(format!("det formula p={p}"), ns_det_formula(cfg)?, b(-det));
    c.eq(format!("Euler sum p={p}"), cfg.euler_sum(), 24);
    c.check(
        format!("component numbers p={p}"),
        check_component_numbers(cfg),
    );
    let qt = discriminant_form(&transcendental_candidate(p)?)?;
    let qns = discriminant_form(&ns)?;
    c.check(format!("q_T = -q_NS p={p}"), is_opposite(&qt, &qns)?);
    c.record("config", serde_json::to_value(cfg).unwrap_or(Value::Null));
    c.record("rank", json!(m.rank()));
    c.record("det", int_json(&ns.det()));
    c.record("gram", matrix_json(&m.gram));
    Ok(())
}

/// The translation by the torsion section acting on the NS model.
pub fn sigma(c: &mut Certificate, p: u32) -> Piece {
    check_prime(p)?;
    let m = model(p)?;
    let s = sigma_matrix(&m)?;
    c.check(
        format!("sigma is an isometry p={p}"),
        s.is_isometry(&m.gram),
    );
    let id = MatZ::identity(m.rank());
    c.check(format!("sigma^p = id p={p}"), s.matrix.pow(p) == id);
    c.check(format!("sigma != id p={p}"), s.matrix != id);
    let inv = invariant_sublattice(&m, &s)?;
    let gens = invariant_generators(&m)?;
    let pb = p as i64;
    c.check(
        format!("invariant lattice basis p={p}"),
        hnf(&gens).basis() == inv.basis,
    );
    c.eq(
        format!("invariant Gram = U({p})"),
        m.lattice().gram_of_vectors(&gens),
        MatZ::from_i64(&[&[0, pb], &[pb, 0]]),
    );
    let omega = omega_lattice(&m, &s)?;
    c.check(
        format!("trivial on the discriminant group p={p}"),
        disc_group_action(&s, &omega.complement)?,
    );
    c.record("sigma", matrix_json(&s.matrix));
    Ok(())
}

pub fn w5(c: &mut Certificate) -> Piece {
    let m = model(3)?;
    let s = sigma_matrix(&m)?;
    let w5 = w5_witness(&m)?;
    let moved: Vec<BigRational> = s.apply_q(&w5).iter().zip(&w5).map(|(x, y)| x - y).collect();
    let target = m.combination(&[(1, Divisor::Section(1)), (-1, Divisor::ZeroSection)])?;
    let target: Vec<BigRational> = target.into_iter().map(BigRational::from_integer).collect();
    c.check("sigma(w5) - w5 = t1 - s", moved == target);
    Ok(())
}

pub fn lefschetz(c: &mut Certificate) -> Piece {
    let rows = [(3, (10, 6, 13, 7)), (5, (6, 4, 17, 3)), (7, (4, 3, 19, 1))];
    let mut table = Map::new();
    for (p, row) in rows {
        let mu = fixed_points(p).ok_or(CertifyError::BadPrime(p))?;
        let d = lefschetz_solve(p, mu)?;
        c.eq(format!("p={p}"), (d.a, d.b, d.rho_min, d.moduli_max), row);
        table.insert(
            p.to_string(),
            serde_json::to_value(d).unwrap_or(Value::Null),
        );
    }
    c.record("table", Value::Object(table));
    Ok(())
}

pub fn glue(c: &mut Certificate) -> Piece {
    for l_sq in [2i64, 4] {
        let mut any = false;
        for k in 1..=60 {
            any |= glue_conditions(&b(l_sq), &b(-2 * k), 3)?;
        }
        c.check(format!("L^2 = {l_sq} admits no glue"), !any);
    }
    c.check(
        "L^2 = 6 glues with v^2 = -6",
        glue_conditions(&b(6), &b(-6), 3)?,
    );
    c.check(
        "L^2 = 6 rejects v^2 = -4",
        !glue_conditions(&b(6), &b(-4), 3)?,
    );
    let search = search_glue(&b(6), &lat("Omega3")?, 3)?;
    c.eq("classes of Omega3 dual / Omega3", search.classes, 729);
    c.record("classes", json!(search.classes));
    c.record("admissible", json!(search.admissible));
    match &search.witness {
        Some((g, over)) => {
            c.check("overlattice is even", over.lattice.is_even());
            c.eq("overlattice rank", over.lattice.rank(), 13);
            c.eq(
                "det * 9 = host det",
                over.lattice.det() * 9,
                over.host_det.clone(),
            );
            c.eq("overlattice det", over.lattice.det(), b(-486));
            c.record("v", Value::Array(g.v.iter().map(int_json).collect()));
            c.record("det", int_json(&over.lattice.det()));
        }
        None => c.check("search certifies no glue", search.admissible == 0),
    }
    let host = direct_sum(&[lat("rank1(14)")?, lat("Omega7")?]);
    let gens = discriminant_form(&host)?.min_generators();
    c.eq("generators of disc(<14> + Omega7)", gens, 4);
    c.check("more generators than transcendental rank 3", gens > 3);
    c.record("min_generators", json!(gens));
    Ok(())
}

/// Torsion order and fibre types of one family member.
pub fn fibration(c: &mut Certificate, p: u32, seed: u64) -> Piece {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (curve, point) = torsion_family(p, &mut rng)?;
    let (n, fibres) = match p {
        3 => (6, 6),
        5 => (4, 4),
        _ => (3, 3),
    };
    let order = point_order(&curve, &point, 12)?;
    c.eq(format!("section order p={p}"), order, PointOrder::Finite(p));
    let report = fiber_analysis(&curve)?;
    let expected: BTreeMap<String, usize> =
        [(format!("I{p}"), n), ("I1".to_string(), fibres)].into();
    c.eq(format!("fibres p={p}"), report.types.clone(), expected);
    c.eq(format!("Euler sum p={p}"), report.euler_sum(), 24);
    c.record("delta", json!(discriminant(&curve).delta.to_string()));
    c.record(
        "fibres",
        serde_json::to_value(&report.types).unwrap_or(Value::Null),
    );
    c.record(
        "torsion_order",
        serde_json::to_value(order).unwrap_or(Value::Null),
    );
    Ok(())
}

pub fn weierstrass(c: &mut Certificate, seed: u64) -> Piece {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = |n: i64| BigRational::from_integer(b(n));
    let mut samples = 0;
    for i in 0..20 {
        let (l, m) = (random_poly(&mut rng, 2, 3), random_poly(&mut rng, 6, 3));
        let factored = family3_factored(&l, &m);
        let ok = match family3(&l, &m) {
            Ok((curve, _)) => {
                discriminant(&curve)
                    .delta
                    .as_poly()
                    .map(|d| d.scale(&k(27)))
                    == Some(factored)
            }
            Err(WmodelError::DegenerateFamily) => factored.degree().is_none(),
            Err(e) => return Err(e.into()),
        };
        c.check(format!("27 Delta identity, sample {i}"), ok);
        let (a, bb) = (random_poly(&mut rng, 2, 3), random_poly(&mut rng, 2, 3));
        let factored = family5_factored(&a, &bb);
        let ok = match family5(&a, &bb) {
            Ok((curve, _)) => {
                discriminant(&curve)
                    .delta
                    .as_poly()
                    .map(|d| d.scale(&k(16)))
                    == Some(factored)
            }
            Err(WmodelError::DegenerateFamily) => factored.degree().is_none(),
            Err(e) => return Err(e.into()),
        };
        c.check(format!("16 Delta identity, sample {i}"), ok);
        samples += 1;
    }
    c.record("samples", json!(samples));
    let mut families = Map::new();
    for p in PRIMES {
        let mut sub = Certificate::default();
        fibration(&mut sub, p, seed.wrapping_add(p as u64))?;
        c.checks.extend(sub.checks);
        families.insert(p.to_string(), Value::Object(sub.payload));
    }
    c.record("families", Value::Object(families));
    Ok(())
}

pub fn densities(c: &mut Certificate) -> Piece {
    for (name, target) in [("Omega5", 0.0094), ("Omega7", 0.0044)] {
        let d = density(&lat(name)?)?;
        c.check(
            format!("{name} density {d:.5} within 5e-4 of {target}"),
            (d - target).abs() <= 5e-4,
        );
        c.record(name, json!(d));
    }
    Ok(())
}

fn positive_gram(l: &Lattice) -> Option<Vec<Vec<i64>>> {
    let sign = if l.definiteness()? { 1 } else { -1 };
    let g = l.gram();
    (0..g.rows())
        .map(|i| {
            (0..g.cols())
                .map(|j| g.get(i, j).to_i64().map(|x| sign * x))
                .collect()
        })
        .collect()
}

/// Counts vectors of norm `1..=bound` by scanning a box that contains them.
fn box_counts(g: &[Vec<i64>], bound: i64) -> Option<BTreeMap<i64, u64>> {
    let n = g.len();
    let inv = inverse_q(&MatZ::from_fn(n, n, |i, j| b(g[i][j])).to_rational()).ok()?;
    let radii = (0..n)
        .map(|i| Some((bound as f64 * inv.get(i, i).to_f64()?).sqrt() as i64 + 1))
        .collect::<Option<Vec<i64>>>()?;
    let mut counts = BTreeMap::new();
    let mut x: Vec<i64> = radii.iter().map(|r| -r).collect();
    loop {
        let norm: i64 = (0..n)
            .map(|i| (0..n).map(|j| x[i] * g[i][j] * x[j]).sum::<i64>())
            .sum();
        if norm > 0 && norm <= bound {
            *counts.entry(norm).or_insert(0) += 1;
        }
        let mut k = 0;
        loop {
            if k == n {
                return Some(counts);
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

pub fn properties(c: &mut Certificate, seed: u64) -> Piece {
    let names = [
        "A(1)",
        "A(2)",
        "A(3)",
        "A(4)",
        "rank1(2)",
        "rank1(-6)",
        "Upsilon",
        "U",
        "U(3)",
    ];
    for name in names {
        let l = lat(name)?;
        match positive_gram(&l) {
            Some(g) => {
                let sign = if l.definiteness() == Some(true) {
                    1
                } else {
                    -1
                };
                let found: BTreeMap<i64, u64> = short_vectors(&l, 10, false)?
                    .counts
                    .into_iter()
                    .map(|(n, k)| (sign * n, k))
                    .collect();
                c.eq(
                    format!("box oracle {name}"),
                    Some(found),
                    box_counts(&g, 10),
                );
            }
            None => c.check(
                format!("{name} rejected as indefinite"),
                short_vectors(&l, 4, false).is_err(),
            ),
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..30 {
        let (rows, cols) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let m = MatZ::from_fn(rows, cols, |_, _| b(rng.gen_range(-6..=6)));
        let h = hnf(&m);
        c.check(
            format!("HNF transform {i}"),
            &h.u * &m == h.h && det_z(&h.u).abs().is_one(),
        );
        let s = snf(&m);
        let unimodular = det_z(&s.u).abs().is_one() && det_z(&s.v).abs().is_one();
        c.check(
            format!("SNF transform {i}"),
            &(&s.u * &m) * &s.v == s.d && unimodular,
        );
        let divides = s.invariants().windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            }
        });
        c.check(format!("SNF divisibility {i}"), divides);
    }

    for p in PRIMES {
        let form = discriminant_form(&lat(&format!("Omega{p}"))?)?;
        let normal = finite_form_normal(&form)?;
        let n = form.orders().len();
        let pb = b(p as i64);
        let mut done = 0;
        while done < 50 {
            let t = MatZ::from_fn(n, n, |_, _| b(rng.gen_range(0..p as i64)));
            if (det_z(&t) % &pb).is_zero() {
                continue;
            }
            done += 1;
            let moved = finite_form_normal(&form.transformed(&t)?)?;
            c.eq(
                format!("normal form p={p}, re-presentation {done}"),
                moved,
                normal.clone(),
            );
        }
    }

    // y^2 = x^3 + 17 over the constants
    let curve = WeierstrassCurve::short(RatFunc::from_i64(0), RatFunc::from_i64(17));
    let pts: Vec<CurvePoint> = [(-2, 3), (-1, 4), (2, 5), (4, 9), (8, 23)]
        .iter()
        .map(|&(x, y)| CurvePoint::affine(RatFunc::from_i64(x), RatFunc::from_i64(y)))
        .collect();
    let mut triples = 0;
    for p in &pts {
        for q in &pts {
            for r in &pts {
                let left = group_add(&curve, &group_add(&curve, p, q)?, r)?;
                let right = group_add(&curve, p, &group_add(&curve, q, r)?)?;
                c.check("associativity", left == right);
                triples += 1;
            }
        }
    }
    c.record("associativity_triples", json!(triples));
    Ok(())
}

pub type Run = fn(&mut Certificate, u64) -> Piece;

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub run: Run,
    pub budget: Option<Duration>,
}

fn each_prime(c: &mut Certificate, primes: &[u32], f: fn(&mut Certificate, u32) -> Piece) -> Piece {
    for &p in primes {
        let mut sub = Certificate::default();
        f(&mut sub, p)?;
        c.checks.extend(sub.checks);
        c.record(format!("p{p}"), Value::Object(sub.payload));
    }
    Ok(())
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            title: "Omega3 from the fibration and from the trace form",
            run: |c, _| omega3(c),
            budget: None,
        },
        Criterion {
            id: 2,
            title: "Omega3 short vectors",
            run: |c, _| k12(c),
            budget: Some(Duration::from_secs(60)),
        },
        Criterion {
            id: 3,
            title: "Omega5 and Omega7",
            run: |c, _| each_prime(c, &[5, 7], omega_analogue),
            budget: None,
        },
        Criterion {
            id: 4,
            title: "transcendental determinants and signatures",
            run: |c, _| each_prime(c, &PRIMES, main_theorem),
            budget: None,
        },
        Criterion {
            id: 5,
            title: "Neron-Severi certificates",
            run: |c, _| each_prime(c, &PRIMES, ns),
            budget: None,
        },
        Criterion {
            id: 6,
            title: "automorphism certificates",
            run: |c, _| {
                each_prime(c, &PRIMES, sigma)?;
                w5(c)
            },
            budget: None,
        },
        Criterion {
            id: 7,
            title: "Lefschetz table",
            run: |c, _| lefschetz(c),
            budget: None,
        },
        Criterion {
            id: 8,
            title: "glue machinery",
            run: |c, _| glue(c),
            budget: None,
        },
        Criterion {
            id: 9,
            title: "Weierstrass families",
            run: weierstrass,
            budget: Some(Duration::from_secs(30)),
        },
        Criterion {
            id: 10,
            title: "densities",
            run: |c, _| densities(c),
            budget: None,
        },
        Criterion {
            id: 11,
            title: "property suites",
            run: properties,
            budget: None,
        },
    ]
}
