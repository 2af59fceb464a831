mod common;

use common::{all_weight_lists, det, r};
use num_rational::BigRational;
use proptest::prelude::*;
use qhpp_core::curve::{
    equation_one, equation_two, infer_from_curve, pair_scan_23719, Classification, CurveHypothesis,
    InferenceOptions,
};
use qhpp_core::graph::contraction_identities;
use qhpp_core::Chain;

fn ends(w: &[u32]) -> (i128, i128, i128) {
    (det(w), det(&w[1..]), det(&w[..w.len() - 1]))
}

#[test]
fn cycle_pattern_gives_end_end_values() {
    for w in all_weight_lists(8, 5) {
        let l = w.len();
        let chain = Chain::new(w.clone()).unwrap();
        // A (-1)-curve closing the chain into a cycle; for l = 1 it meets
        // the single component twice.
        let e = if l == 1 {
            CurveHypothesis::minus_one("E").hit(0, 1, 2)
        } else {
            CurveHypothesis::minus_one("E").hit(0, 1, 1).hit(0, l, 1)
        };
        let res = infer_from_curve(&e, &[chain], &InferenceOptions::default()).unwrap();
        let (q, q1, ql) = ends(&w);
        let expected_alpha = r(1, 1) - r(q1 + ql + 2, q);
        assert_eq!(res.alpha, expected_alpha, "{w:?}");
        assert_eq!(res.beta, Some(-expected_alpha.clone()), "{w:?}");
        assert_ne!(res.classification, Classification::KAmple, "{w:?}");
    }
}

#[test]
fn rdp_hits_only_give_alpha_equal_to_kc() {
    for l in 1..=8usize {
        let chains = vec![Chain::a_n(l), Chain::a_n(1)];
        for j in 1..=l {
            let e = CurveHypothesis::minus_one("E").hit(0, j, 1).hit(1, 1, 1);
            assert_eq!(equation_one(&e, &chains).unwrap(), r(-1, 1));
            let c = CurveHypothesis::rational("C", 0).with_kc(3).hit(0, j, 2);
            assert_eq!(equation_one(&c, &chains).unwrap(), r(3, 1));
        }
    }
}

#[test]
fn double_end_hit_gives_four_q1_over_q_minus_one() {
    for w in all_weight_lists(7, 5) {
        let e = CurveHypothesis::minus_one("E").hit(0, 1, 2);
        let beta = equation_two(&e, &[Chain::new(w.clone()).unwrap()]).unwrap();
        let (q, q1, _) = ends(&w);
        assert_eq!(beta, r(4 * q1, q) - r(1, 1), "{w:?}");
    }
}

#[test]
fn contraction_identities_hold_exhaustively() {
    let mut checked = 0;
    for w in all_weight_lists(8, 5) {
        if w.len() < 2 || w[0] != 2 {
            continue;
        }
        let report = contraction_identities(&Chain::new(w.clone()).unwrap()).unwrap();
        let (q, q1, ql) = ends(&w);
        let bar = &w[1..];
        let (bq, bq1, bql) = ends(bar);
        let bq_inner = if bar.len() == 1 { 0 } else { det(&bar[1..bar.len() - 1]) };
        assert_eq!(q1, bq);
        assert_eq!(ql, 2 * bql - bq_inner);
        assert_eq!(q, 2 * bq - bq1);
        let difference = r(q1 + ql + 2, q) - r(bq1 + bql + 2, bq);
        assert_eq!(difference.clone() * r(bq * (2 * bq - bq1), 1), r((bq - bq1 - 1).pow(2), 1), "{w:?}");
        assert_eq!(report.difference, difference);
        assert!(report.holds(), "{w:?}");
        assert_eq!(report.difference == r(0, 1), w.iter().all(|&n| n == 2), "{w:?}");
        checked += 1;
    }
    assert_eq!(checked, (1..=7).map(|k| 4usize.pow(k)).sum::<usize>());
}

#[test]
fn table_one_pair_scan_stays_below_one() {
    let scan = pair_scan_23719();
    assert_eq!(scan.cases.len(), 45);
    assert_eq!((scan.max_distinct.j, scan.max_distinct.k, &scan.max_distinct.sum), (1, 2, &r(17, 19)));
    assert_eq!((scan.max_any.j, scan.max_any.k, &scan.max_any.sum), (1, 1, &r(18, 19)));
    assert!(scan.all_below_one);
    let c = |j: i128| r(10 - j, 19);
    for case in &scan.cases {
        assert_eq!(case.sum, c(case.j as i128) + c(case.k as i128));
    }
}

fn n3_chain() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(2u32..=9, 0..=10).prop_map(|mut tail| {
        tail.insert(0, 3);
        tail
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rdp_case_n3_symbolic_values(w in n3_chain()) {
        let chain = Chain::new(w.clone()).unwrap();
        let inv = chain.invariants().unwrap();
        let q = BigRational::from_integer(inv.q);
        let q1 = BigRational::from_integer(inv.q1);
        let c = CurveHypothesis::rational("C", 1).with_kc(-1).hit(0, 1, 1);
        let res = infer_from_curve(&c, &[chain], &InferenceOptions::default()).unwrap();
        let one = r(1, 1);
        prop_assert_eq!(res.m, Some(-(&q + &q1) / (&q1 + &one)));
        prop_assert_eq!(res.k_squared, Some((&q1 + &one) * (&q1 + &one) / (&q * (&q1 + &q))));
        prop_assert_eq!(res.classification, Classification::MinusKAmple);
    }
}
