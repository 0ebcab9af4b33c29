use k3lat::arith::{det_z, hnf, snf, MatZ};
use k3lat::cyclo::{divide_exact, CycInt};
use k3lat::lattice::{
    discriminant_form, finite_form_normal, glue_conditions, standard_lattice, Lattice,
};
use k3lat::shortvec::short_vectors;
use k3lat::wmodel::PolyQ;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = MatZ> {
    prop::collection::vec(-9i64..=9, rows * cols)
        .prop_map(move |v| MatZ::from_fn(rows, cols, |i, j| BigInt::from(v[i * cols + j])))
}

fn shaped_matrix() -> impl Strategy<Value = MatZ> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| matrix(r, c))
}

fn cyc(p: u32) -> impl Strategy<Value = CycInt> {
    prop::collection::vec(-4i64..=4, (p - 1) as usize).prop_map(move |c| CycInt::from_powers(p, &c))
}

fn poly() -> impl Strategy<Value = PolyQ> {
    prop::collection::vec(-5i64..=5, 0..6).prop_map(|c| PolyQ::from_i64(&c))
}

proptest! {
    #[test]
    fn hnf_transform_is_unimodular(m in shaped_matrix()) {
        let h = hnf(&m);
        prop_assert_eq!(&h.u * &m, h.h.clone());
        prop_assert!(det_z(&h.u).abs().is_one());
        for (row, &col) in h.pivots.iter().enumerate() {
            prop_assert!(h.h.get(row, col).is_positive());
            for above in 0..row {
                let x = h.h.get(above, col);
                prop_assert!(!x.is_negative() && x < h.h.get(row, col));
            }
        }
    }

    #[test]
    fn snf_is_diagonal_with_divisibility(m in shaped_matrix()) {
        let s = snf(&m);
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.d.clone());
        prop_assert!(det_z(&s.u).abs().is_one());
        prop_assert!(det_z(&s.v).abs().is_one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                prop_assert!(i == j || s.d.get(i, j).is_zero());
            }
        }
        for w in s.invariants().windows(2) {
            prop_assert!(!w[0].is_negative());
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
    }

    #[test]
    fn square_det_matches_snf(m in matrix(4, 4)) {
        let product: BigInt = snf(&m).invariants().iter().product();
        prop_assert_eq!(product, det_z(&m).abs());
    }

    #[test]
    fn normal_form_ignores_generators(seed in prop::collection::vec(0i64..5, 16)) {
        let form = discriminant_form(&standard_lattice("Omega5").unwrap()).unwrap();
        let t = MatZ::from_fn(4, 4, |i, j| BigInt::from(seed[4 * i + j]));
        prop_assume!(!(det_z(&t) % BigInt::from(5)).is_zero());
        let moved = form.transformed(&t).unwrap();
        prop_assert_eq!(finite_form_normal(&moved).unwrap(), finite_form_normal(&form).unwrap());
    }

    #[test]
    fn glue_conditions_imply_congruences(l in 1i64..60, v in -60i64..0, p in prop::sample::select(vec![3i64, 5, 7])) {
        let (l_sq, v_sq) = (2 * l, 2 * v);
        let ok = glue_conditions(&BigInt::from(l_sq), &BigInt::from(v_sq), p).unwrap();
        let expected = l_sq % (2 * p) == 0 && v_sq % (2 * p) == 0 && (l_sq + v_sq) % (2 * p * p) == 0;
        prop_assert_eq!(ok, expected);
    }

    #[test]
    fn short_vector_counts_are_symmetric(a in 2i64..8, b in -3i64..=3, c in 2i64..8, d in 2i64..8) {
        let gram = [[a, b, 0], [b, c, 1], [0, 1, d]];
        let l = Lattice::from_i64(&[&gram[0], &gram[1], &gram[2]]).unwrap();
        prop_assume!(l.definiteness() == Some(true));
        let r = short_vectors(&l, 16, true).unwrap();
        prop_assert!(r.counts.values().all(|n| n % 2 == 0));
        for sv in r.vectors.unwrap() {
            prop_assert_eq!(l.norm(&sv.coords_big()), BigInt::from(sv.norm));
        }
    }

    #[test]
    fn norm_is_multiplicative(x in cyc(7), y in cyc(7)) {
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert!(!(&x * &x.conj()).trace().is_negative());
    }

    #[test]
    fn division_undoes_multiplication(x in cyc(5), y in cyc(5)) {
        prop_assume!(!y.is_zero());
        prop_assert_eq!(divide_exact(&(&x * &y), &y).unwrap(), x);
    }

    #[test]
    fn polynomial_division(a in poly(), d in poly()) {
        prop_assume!(d.degree().is_some());
        let (q, r) = a.div_rem(&d).unwrap();
        prop_assert_eq!(&(&q * &d) + &r, a);
        prop_assert!(r.degree().is_none() || r.degree() < d.degree());
    }

    #[test]
    fn lattice_json_round_trip(a in -6i64..6, b in -6i64..6, c in -6i64..6) {
        let l = Lattice::from_i64(&[&[2 * a, b], &[b, 2 * c]]).unwrap();
        let back = Lattice::from_json(&l.to_json().unwrap()).unwrap();
        prop_assert_eq!(back.gram(), l.gram());
    }
}
