mod common;

use arrhom::arrangement::Arrangement;
use arrhom::exactlin::q;
use arrhom::homology::BettiTable;
use arrhom::theorems::*;
use arrhom::Error;
use common::*;
use proptest::prelude::*;

fn tables_match(pred: &Prediction, tables: &[BettiTable]) -> bool {
    let imax = tables.iter().map(|t| t.betti.len()).max().unwrap_or(0).max(pred.rank + 1);
    tables.iter().enumerate().all(|(j, t)| (0..imax).all(|i| pred.get(i, j) == t.get(i)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn predictions_equal_computation(arr in arrangement_strategy(5, 2..=4)) {
        let l = arr.build_lattice().unwrap();
        prop_assume!(l.rank() >= 2);
        let d = l.ambient_dim();
        let r = l.rank();
        let cell = predict_cellular(&l).unwrap();
        let sheaf = predict_sheaf(&l).unwrap();
        for c in &cell.cells {
            prop_assert!(c.i < r && r <= c.i + c.j && c.i + c.j <= d);
        }
        for c in &sheaf.cells {
            prop_assert!(c.i + 1 < r || (c.i == 0 && r == 1));
            prop_assert!(c.j <= d);
        }
        prop_assert!(tables_match(&cell, &cellular_tables(&l, d).unwrap()));
        prop_assert!(tables_match(&sheaf, &sheaf_tables(&l, d, 1_000_000).unwrap()));
        if l.is_essential() {
            let e = expected_cellular_graded_euler(&l);
            for j in 1..=r {
                let s = if (r - j) % 2 == 0 { 1 } else { -1 };
                prop_assert_eq!(q(s * cell.get(r - j, j) as i64), e.coeff(j));
            }
        }
    }
}

#[test]
fn derivative_examples() {
    use arrhom::charpoly::CharPoly;
    for n in 1..6usize {
        let fact: i64 = (1..=n as i64).product();
        assert_eq!(derivative_at_one(&CharPoly::from_roots(&vec![1; n]), n), q(fact));
    }
    let p = CharPoly::from_roots(&[1, 2]);
    assert_eq!(derivative_at_one(&p, 1), q(-1));
    assert_eq!(derivative_at_one(&p, 2), q(2));
}

#[test]
fn essential_examples() {
    let pi3 = lattice("pi3");
    let c = predict_cellular_essential(&pi3).unwrap();
    assert_eq!(c.support(), vec![(0, 2), (1, 1)]);
    let s = predict_sheaf_essential(&pi3).unwrap();
    assert_eq!((s.get(0, 0), s.get(0, 1)), (1, 3));
    assert_eq!(s.support(), vec![(0, 0), (0, 1)]);

    let g = lattice("generic-4-2");
    let c = predict_cellular_essential(&g).unwrap();
    assert_eq!((c.get(1, 1), c.get(0, 2)), (2, 1));

    let b3 = lattice("boolean-3");
    let s = predict_sheaf_essential(&b3).unwrap();
    assert_eq!((s.get(0, 0), s.get(0, 1), s.get(0, 2)), (1, 3, 3));
    assert_eq!(predict_cellular_essential(&b3).unwrap().support(), vec![(0, 3)]);
}

#[test]
fn preconditions() {
    assert!(matches!(predict_cellular_essential(&lattice("braid-3")), Err(Error::NotEssential)));
    assert!(matches!(predict_sheaf_essential(&lattice("braid-4")), Err(Error::NotEssential)));
    let l = lattice("boolean-1");
    assert!(matches!(predict_cellular_nonessential(&l), Err(Error::RankTooSmall(1))));
    assert!(matches!(predict_sheaf_nonessential(&l), Err(Error::RankTooSmall(1))));
    let empty = Arrangement::new(3, vec![]).unwrap().build_lattice().unwrap();
    assert!(matches!(predict_cellular(&empty), Err(Error::RankTooSmall(0))));
}

#[test]
fn nonessential_examples() {
    let br3 = lattice("braid-3");
    let c = predict_cellular_nonessential(&br3).unwrap();
    assert_eq!(c.support(), vec![(0, 2), (0, 3), (1, 1), (1, 2)]);
    let s = predict_sheaf_nonessential(&br3).unwrap();
    assert_eq!(s.get(0, 0), 1);
    // C(3,1) - χ'_L(1) with χ_L = t(t-1)(t-2)
    assert_eq!(s.get(0, 1), 4);
    assert_eq!(sheaf_tables(&br3, 1, 1000).unwrap()[1].get(0), 4);

    let p = lattice("pi3-q4");
    let c = predict_cellular_nonessential(&p).unwrap();
    assert!(c.cells.iter().all(|c| c.i < 2 && (2..=4).contains(&(c.i + c.j))));
    assert!(tables_match(&c, &cellular_tables(&p, 4).unwrap()));
}

/// With `dim U > 0` and rank at least 3, the `i = 0, j = rk - 1` sheaf entry
/// needs the characteristic polynomial of `(L, F⊥)`; using `χ_L` there
/// disagrees with the computed homology.
#[test]
fn rank_minus_one_entry_uses_perp_polynomial() {
    let l = lattice("braid-4");
    let computed = sheaf_tables(&l, 2, 1_000_000).unwrap()[2].get(0);
    assert_eq!(computed, 9);
    assert_eq!(predict_sheaf_nonessential(&l).unwrap().get(0, 2), 9);
    assert_eq!(sheaf_nonessential_chi_l_variant(&l).unwrap(), q(7));
    // the two readings agree when the arrangement is essential or of rank 2
    for name in ["braid-4-ess", "braid-3", "pi3-q4"] {
        let l = lattice(name);
        let r = l.rank();
        assert_eq!(q(predict_sheaf(&l).unwrap().get(0, r - 1) as i64), sheaf_nonessential_chi_l_variant(&l).unwrap(), "{name}");
    }
}

#[test]
fn graded_euler_examples() {
    use arrhom::charpoly::CharPoly;
    let pi3 = lattice("pi3");
    assert_eq!(expected_cellular_graded_euler(&pi3), CharPoly::from_i64(&[0, -1, 1]));
    assert_eq!(expected_sheaf_graded_euler(&pi3), CharPoly::from_i64(&[1, 3]));
    for n in 1..=4 {
        assert_eq!(expected_cellular_graded_euler(&lattice(&format!("boolean-{n}"))), CharPoly::monomial(n));
    }
}

#[test]
fn verify_presets() {
    for name in ["boolean-1", "boolean-2", "boolean-3", "boolean-4", "braid-3", "braid-4", "pi3"] {
        let r = verify(&Arrangement::preset(name).unwrap(), &VerifyOptions::default()).unwrap();
        assert!(r.passed, "{name}: {:#?}", r.failed_checks().collect::<Vec<_>>());
        assert!(r.checks.iter().any(|c| c.name.contains("cover invariance")));
    }
    let r = verify(&Arrangement::preset("boolean-3").unwrap(), &VerifyOptions::default()).unwrap();
    assert_eq!(r.cellular.as_ref().unwrap().support(), vec![(0, 3)]);
    assert_eq!(r.cellular.unwrap().prediction.unwrap().support(), vec![(0, 3)]);
    let r = verify(&Arrangement::preset("pi3").unwrap(), &VerifyOptions::default()).unwrap();
    assert_eq!(r.cellular.unwrap().support(), vec![(0, 2), (1, 1)]);
}

#[test]
fn verify_reports_faults_and_skips() {
    let arr = Arrangement::preset("pi3").unwrap();
    let bad = verify(&arr, &VerifyOptions { sign_fault: Some((0b001, 0b011)), ..Default::default() }).unwrap();
    assert!(!bad.passed);
    assert!(bad.cellular.as_ref().unwrap().mismatches > 0 || bad.failed_checks().count() > 0);
    let guarded = verify(&arr, &VerifyOptions { max_chains: 2, ..Default::default() }).unwrap();
    assert!(guarded.passed);
    assert!(guarded.skips.iter().any(|s| s.contains("skipped")));
}

#[test]
fn report_json_round_trip() {
    let mut r = verify(&Arrangement::preset("braid-3").unwrap(), &VerifyOptions::default()).unwrap();
    r.elapsed_ms = None;
    let text = serde_json::to_string(&r).unwrap();
    let back: VerificationReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
    let b = BettiTable::new(vec![1, 0, 2]);
    assert_eq!(serde_json::from_str::<BettiTable>(&serde_json::to_string(&b).unwrap()).unwrap(), b);
}
