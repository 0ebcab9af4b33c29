use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{direct_sum, Lattice, LatticeError};
use crate::arith::MatZ;
use crate::ellns::{build_ns, FibrationConfig};

const OMEGA3: &str = include_str!("../../data/omega3.txt");
const OMEGA5: &str = include_str!("../../data/omega5.txt");
const OMEGA7: &str = include_str!("../../data/omega7.txt");

/// Names accepted by [`standard_lattice`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogKey {
    Hyperbolic,
    ScaledHyperbolic(BigInt),
    /// Negative definite root lattice of type A.
    RootA(usize),
    /// Negative definite E8.
    E8,
    K3,
    /// The rank-one lattice with the given generator norm.
    RankOne(BigInt),
    Upsilon,
    /// Anti-invariant lattice for the prime.
    Omega(u32),
    /// Neron-Severi lattice of the elliptic model for the prime.
    NeronSeveri(u32),
}

fn strip_call<'a>(s: &'a str, head: &str) -> Option<&'a str> {
    s.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')
}

fn parse_int(s: &str, name: &str) -> Result<BigInt, LatticeError> {
    s.trim()
        .replace('\u{2212}', "-")
        .parse()
        .map_err(|_| LatticeError::BadParam(format!("{name}: `{s}` is not an integer")))
}

impl FromStr for CatalogKey {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let name = s.trim();
        let key = match name {
            "U" => CatalogKey::Hyperbolic,
            "E8(-1)" | "E8(\u{2212}1)" | "E8" => CatalogKey::E8,
            "Lambda_K3" | "K3" => CatalogKey::K3,
            "Upsilon" => CatalogKey::Upsilon,
            "Omega3" => CatalogKey::Omega(3),
            "Omega5" => CatalogKey::Omega(5),
            "Omega7" => CatalogKey::Omega(7),
            "M_NS3" => CatalogKey::NeronSeveri(3),
            "M_NS5" => CatalogKey::NeronSeveri(5),
            "M_NS7" => CatalogKey::NeronSeveri(7),
            _ => {
                if let Some(arg) = strip_call(name, "U") {
                    let n = parse_int(arg, "U(n)")?;
                    if n < BigInt::from(1) {
                        return Err(LatticeError::BadParam(format!("U({n}) needs n >= 1")));
                    }
                    CatalogKey::ScaledHyperbolic(n)
                } else if let Some(arg) = strip_call(name, "A") {
                    let n: usize = arg.trim().parse().map_err(|_| {
                        LatticeError::BadParam(format!("A(n): `{arg}` is not a count"))
                    })?;
                    if n < 1 {
                        return Err(LatticeError::BadParam("A(n) needs n >= 1".into()));
                    }
                    CatalogKey::RootA(n)
                } else if let Some(arg) = strip_call(name, "rank1") {
                    let d = parse_int(arg, "rank1(x)")?;
                    if d.is_zero() {
                        return Err(LatticeError::BadParam("rank1(0) is degenerate".into()));
                    }
                    CatalogKey::RankOne(d)
                } else {
                    return Err(LatticeError::UnknownName(name.to_string()));
                }
            }
        };
        Ok(key)
    }
}

impl fmt::Display for CatalogKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogKey::Hyperbolic => write!(f, "U"),
            CatalogKey::ScaledHyperbolic(n) => write!(f, "U({n})"),
            CatalogKey::RootA(n) => write!(f, "A({n})"),
            CatalogKey::E8 => write!(f, "E8(-1)"),
            CatalogKey::K3 => write!(f, "Lambda_K3"),
            CatalogKey::RankOne(d) => write!(f, "rank1({d})"),
            CatalogKey::Upsilon => write!(f, "Upsilon"),
            CatalogKey::Omega(p) => write!(f, "Omega{p}"),
            CatalogKey::NeronSeveri(p) => write!(f, "M_NS{p}"),
        }
    }
}

fn parse_table(text: &str) -> MatZ {
    let rows: Vec<Vec<BigInt>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split_whitespace()
                .map(|x| x.parse().expect("catalog table entry"))
                .collect()
        })
        .collect();
    MatZ::from_rows(rows).expect("catalog table shape")
}

fn negative_cartan(n: usize, edges: &[(usize, usize)]) -> MatZ {
    let mut g = MatZ::diagonal(&vec![BigInt::from(-2); n]);
    for &(a, b) in edges {
        g.set(a, b, BigInt::from(1));
        g.set(b, a, BigInt::from(1));
    }
    g
}

impl CatalogKey {
    pub fn lattice(&self) -> Lattice {
        let gram = match self {
            CatalogKey::Hyperbolic => MatZ::from_i64(&[&[0, 1], &[1, 0]]),
            CatalogKey::ScaledHyperbolic(n) => MatZ::from_i64(&[&[0, 1], &[1, 0]]).scale(n),
            CatalogKey::RootA(n) => {
                let edges: Vec<(usize, usize)> = (1..*n).map(|i| (i - 1, i)).collect();
                negative_cartan(*n, &edges)
            }
            CatalogKey::E8 => {
                // Bourbaki numbering: chain 1-3-4-5-6-7-8 with 2 attached to 4
                negative_cartan(8, &[(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)])
            }
            CatalogKey::K3 => {
                let u = CatalogKey::Hyperbolic.lattice();
                let e8 = CatalogKey::E8.lattice();
                let l = direct_sum(&[u.clone(), u.clone(), u, e8.clone(), e8]);
                return l.labeled(self.to_string());
            }
            CatalogKey::RankOne(d) => MatZ::from_rows(vec![vec![d.clone()]]).unwrap(),
            CatalogKey::Upsilon => MatZ::from_i64(&[&[4, 1], &[1, 2]]),
            CatalogKey::Omega(3) => parse_table(OMEGA3),
            CatalogKey::Omega(5) => parse_table(OMEGA5),
            CatalogKey::Omega(7) => parse_table(OMEGA7),
            CatalogKey::Omega(p) => unreachable!("no anti-invariant table for {p}"),
            CatalogKey::NeronSeveri(p) => {
                let cfg = FibrationConfig::standard(*p).expect("catalog prime");
                let model = build_ns(&cfg).expect("standard configuration");
                return model.lattice().labeled(self.to_string());
            }
        };
        Lattice::new(gram)
            .expect("catalog Gram matrices are symmetric")
            .labeled(self.to_string())
    }
}

/// Looks up a named lattice.
pub fn standard_lattice(name: &str) -> Result<Lattice, LatticeError> {
    Ok(name.parse::<CatalogKey>()?.lattice())
}

const LISTED5: &str = "b1, b2, b3, b4, b5-b13-2b14-3b15-4b16, b6, b7, b8, b9, b10+b11, \
    b11+b12, b10+b11+b12, b13, b14+b15, b15+b16, b14+b15+b16";
const LISTED7: &str = "b1, b2, b3, b4, b5, b6, b7-b13-2b14-3b15-4b16-5b17-6b18, b8+b9, \
    b9+b10, b10+b11, b11+b12, b10+b11+b12, b13, b14+b15, b15+b16, b16+b17, b17+b18, \
    b16+b17+b18";

/// Parses a sum such as `b5-b13-2b14` into a coefficient row.
fn parse_combination(text: &str, rank: usize) -> Result<Vec<BigInt>, LatticeError> {
    let bad = || LatticeError::Format(format!("bad combination `{text}`"));
    let mut row = vec![BigInt::zero(); rank];
    let normalized = text.replace(' ', "").replace('-', "+-");
    for term in normalized.split('+').filter(|t| !t.is_empty()) {
        let (coef, idx) = term.split_once('b').ok_or_else(bad)?;
        let coef: i64 = match coef {
            "" => 1,
            "-" => -1,
            c => c.parse().map_err(|_| bad())?,
        };
        let idx: usize = idx.parse().map_err(|_| bad())?;
        if idx == 0 || idx > rank {
            return Err(bad());
        }
        row[idx - 1] += coef;
    }
    Ok(row)
}

/// Norm -4 vectors listed as generating the anti-invariant lattice, as rows in
/// the coordinates of its tabulated basis.
pub fn listed_generators(p: u32) -> Option<MatZ> {
    let (text, rank) = match p {
        5 => (LISTED5, 16),
        7 => (LISTED7, 18),
        _ => return None,
    };
    let rows = text
        .split(',')
        .map(|t| parse_combination(t.trim(), rank).expect("listed combination"))
        .collect();
    Some(MatZ::from_rows(rows).expect("listed generator shape"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_entries() {
        assert_eq!(
            standard_lattice("U").unwrap().gram(),
            &MatZ::from_i64(&[&[0, 1], &[1, 0]])
        );
        assert_eq!(
            standard_lattice("Upsilon").unwrap().gram(),
            &MatZ::from_i64(&[&[4, 1], &[1, 2]])
        );
        let a2 = standard_lattice("A(2)").unwrap();
        assert_eq!(a2.gram(), &MatZ::from_i64(&[&[-2, 1], &[1, -2]]));
        assert_eq!(a2.det(), BigInt::from(3));
    }

    #[test]
    fn bad_names() {
        assert!(matches!(
            standard_lattice("Omega11"),
            Err(LatticeError::UnknownName(_))
        ));
        assert!(matches!(
            standard_lattice("U(0)"),
            Err(LatticeError::BadParam(_))
        ));
        assert!(matches!(
            standard_lattice("rank1(0)"),
            Err(LatticeError::BadParam(_))
        ));
        assert!(matches!(
            standard_lattice("A(0)"),
            Err(LatticeError::BadParam(_))
        ));
    }

    #[test]
    fn k3_lattice_is_even_unimodular() {
        let l = standard_lattice("Lambda_K3").unwrap();
        assert_eq!(l.rank(), 22);
        assert!(l.is_even());
        assert_eq!(l.det(), BigInt::from(-1));
        let e8 = standard_lattice("E8(-1)").unwrap();
        assert_eq!(e8.det(), BigInt::from(1));
    }

    #[test]
    fn anti_invariant_tables() {
        for (name, rank, det) in [
            ("Omega3", 12, 729),
            ("Omega5", 16, 625),
            ("Omega7", 18, 343),
        ] {
            let l = standard_lattice(name).unwrap();
            assert_eq!(l.rank(), rank);
            assert!(l.is_even());
            assert_eq!(l.det(), BigInt::from(det));
        }
    }

    #[test]
    fn combinations() {
        let row = parse_combination("b2-b3-2b4", 4).unwrap();
        assert_eq!(row, crate::arith::int_vec(&[0, 1, -1, -2]));
        assert!(parse_combination("b5", 4).is_err());
        assert!(parse_combination("x1", 4).is_err());
    }

    #[test]
    fn listed_sets_have_full_rank() {
        for (p, det) in [(5, 625), (7, 343)] {
            let rows = listed_generators(p).unwrap();
            let omega = CatalogKey::Omega(p).lattice();
            assert_eq!(rows.rows(), omega.rank());
            assert_eq!(
                crate::arith::det_z(&omega.gram_of_vectors(&rows)),
                BigInt::from(det)
            );
        }
        assert!(listed_generators(3).is_none());
    }

    #[test]
    fn names_round_trip() {
        for name in [
            "U",
            "U(7)",
            "A(4)",
            "E8(-1)",
            "Lambda_K3",
            "rank1(-6)",
            "Omega5",
            "M_NS7",
        ] {
            let key: CatalogKey = name.parse().unwrap();
            assert_eq!(key.to_string(), name);
        }
    }
}
