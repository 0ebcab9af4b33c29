use k3lat_web::{counts, family, glue_table, MAX_BOUND};

#[test]
fn families_have_expected_fibres() {
    for (p, n, ones) in [(3, 6, 6), (5, 4, 4), (7, 3, 3)] {
        let v = family(p, 1).unwrap();
        assert_eq!(v.torsion_order, Some(p));
        assert_eq!(v.fibres[&format!("I{p}")], n);
        assert_eq!(v.fibres["I1"], ones);
        assert_eq!(v.euler_sum, 24);
    }
    assert!(family(11, 1).is_err());
}

#[test]
fn family_json_is_stable() {
    let a = serde_json::to_string(&family(5, 9).unwrap()).unwrap();
    let b = serde_json::to_string(&family(5, 9).unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(a.contains("\"torsion_order\":5"));
}

#[test]
fn omega3_counts() {
    let v = counts("Omega3", 6).unwrap();
    assert_eq!(v.rank, 12);
    assert_eq!(v.det, "729");
    assert_eq!(v.counts["-4"], 756);
    assert_eq!(v.counts["-6"], 4032);
    assert!(counts("Omega3", MAX_BOUND + 1).is_err());
    assert!(counts("U", 2).is_err());
    assert!(counts("nope", 2).is_err());
}

#[test]
fn glue_rows() {
    let v = glue_table(3, 3).unwrap();
    assert_eq!(v.l_sq, vec![2, 4, 6]);
    assert_eq!(v.v_sq, vec![-6, -12, -18]);
    assert_eq!(v.table[2], vec![true, false, false]);
    assert!(v.table[..2].iter().flatten().all(|x| !x));
    assert_eq!(v.classes, 729);
    assert_eq!(v.admissible, vec![0, 0, 252]);
    assert!(glue_table(4, 3).is_err());
}
