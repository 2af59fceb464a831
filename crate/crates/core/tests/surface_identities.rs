mod common;

use common::{det, r};
use num_rational::BigRational;
use proptest::prelude::*;
use qhpp_core::enumerate::{enumerate_chains, ChainConstraints};
use qhpp_core::surface::{
    bmy_gate, k_squared, k_squared_offset, k_squared_via_discrepancies, l13_chain, l13_polynomials,
    orbifold_euler, scan_corollary, ScanBounds, ScanCase, ScanVerdict,
};
use qhpp_core::{Basket, BmyVerdict, Chain, CyclicSingularity};

/// `9 - L + sum(tr - 2l - 2 + (q1 + ql + 2)/q)` from determinants alone.
fn oracle_k_squared(chains: &[Vec<u32>]) -> BigRational {
    let mut acc = r(9, 1);
    for w in chains {
        let l = w.len() as i128;
        let tr: i128 = w.iter().map(|&n| n as i128).sum();
        acc += r(tr - 3 * l - 2, 1) + r(det(&w[1..]) + det(&w[..w.len() - 1]) + 2, det(w));
    }
    acc
}

fn basket(chains: &[Vec<u32>]) -> Basket {
    Basket::from_chains(&chains.iter().map(|w| Chain::new(w.clone()).unwrap()).collect::<Vec<_>>()).unwrap()
}

#[test]
fn spot_values() {
    let b: Basket = "A1 + 1/3(1,1) + 1/5(1,1) + A8".parse().unwrap();
    assert_eq!(k_squared(&b), r(2, 15));
    assert_eq!(orbifold_euler(&b), r(13, 90));
    assert_eq!(bmy_gate(&b), BmyVerdict::Pass);
    assert_eq!(oracle_k_squared(&[vec![2], vec![3], vec![5], vec![2; 8]]), r(2, 15));

    let b: Basket = "A1 + 1/3(1,1) + A4 + [2,3,2,3]".parse().unwrap();
    assert_eq!(k_squared(&b), r(28, 57));
    assert_eq!(bmy_gate(&b), BmyVerdict::FailUpper);

    assert_eq!(k_squared(&Basket::empty()), r(9, 1));
    assert_eq!(bmy_gate(&Basket::empty()), BmyVerdict::Pass);
}

#[test]
fn k_squared_case_identities_hold_along_each_trace_relation() {
    let cases: [(&str, [(i64, BigRational); 2]); 3] = [
        ("A4", [(2, r(-2, 3)), (3, r(-5, 3))]),
        ("1/5(1,2)", [(4, r(-4, 15)), (5, r(-19, 15))]),
        ("1/5(1,1)", [(7, r(-13, 15)), (8, r(-28, 15))]),
    ];
    for (third, relations) in cases {
        let third: CyclicSingularity = third.parse().unwrap();
        for (k, constant) in relations {
            let mut count = 0;
            for chain in enumerate_chains(&ChainConstraints::lengths(1, 10).tr_offset(k)).unwrap() {
                let w = chain.weights();
                assert_eq!(w.iter().sum::<u32>() as i64, 3 * w.len() as i64 - k);
                for oriented in [chain.clone(), chain.reversed()] {
                    assert_eq!(k_squared_offset(&third, &oriented).unwrap(), constant, "{third} {oriented}");
                }
                let chains = [vec![2], vec![3], third.chain().weights().to_vec(), w.to_vec()];
                let ratio = r(det(&w[1..]) + det(&w[..w.len() - 1]) + 2, det(w));
                assert_eq!(oracle_k_squared(&chains) - ratio, constant, "{third} {chain}");
                count += 1;
            }
            assert!(count > 0, "{third} tr = 3l - {k}");
        }
    }
}

#[test]
fn l13_scan_excludes_every_triple() {
    let ten = scan_corollary(ScanCase::L13Sum10, &ScanBounds::default()).unwrap();
    let eleven = scan_corollary(ScanCase::L13Sum11, &ScanBounds::default()).unwrap();
    assert_eq!(ten.records.len(), 15);
    assert_eq!(eleven.records.len(), 21);
    assert!(ten.records.iter().all(|r| r.verdict == ScanVerdict::Bmy(BmyVerdict::FailPositive)));
    assert!(eleven.records.iter().all(|r| r.verdict.excludes()));
    assert!(ten.nonexistence_confirmed && eleven.nonexistence_confirmed);
    for a in 2..=7i64 {
        for b in 2..=7i64 {
            for c in 2..=7i64 {
                let s = a + b + c;
                if s != 10 && s != 11 {
                    continue;
                }
                let w = [2, a as u32, 2, b as u32, 2, c as u32, 2];
                let (q, q1, ql) = l13_polynomials(a, b, c);
                assert_eq!(q, det(&w).into());
                assert_eq!(q1, det(&w[1..]).into());
                assert_eq!(ql, det(&w[..6]).into());
                assert_eq!(l13_chain(a as u32, b as u32, c as u32).unwrap().weights(), &w);
                let qi = det(&w);
                assert_eq!(
                    r(det(&w[1..]) + det(&w[..6]) + 2, qi) - r(1, 1),
                    r(4 * (b as i128 - 1) * (a as i128 + c as i128 - 2), qi)
                );
            }
        }
    }
}

#[test]
fn odd_chain_scan_fails_the_gate_from_eight_on() {
    let out = scan_corollary(ScanCase::OddChain, &ScanBounds { odd_chain_l: (8, 100) }).unwrap();
    assert_eq!(out.records.len(), 93);
    for rec in &out.records {
        let l = rec.params[0].1;
        let expected = if l == 8 { BmyVerdict::FailUpper } else { BmyVerdict::FailPositive };
        assert_eq!(rec.verdict, ScanVerdict::Bmy(expected), "l = {l}");
        let l = l as i128;
        let closed = r(6 - l, 1) + r(32, 15) + r(l, 2 * l + 1);
        assert_eq!(rec.k_squared, closed, "l = {l}");
    }
    assert!(out.nonexistence_confirmed);
}

fn small_basket() -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(prop::collection::vec(2u32..=7, 1..=6), 0..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn k_squared_two_paths_agree(chains in small_basket()) {
        let b = basket(&chains);
        let closed = k_squared(&b);
        prop_assert_eq!(&closed, &k_squared_via_discrepancies(&b).unwrap());
        prop_assert_eq!(&closed, &oracle_k_squared(&chains));
        let e: BigRational = chains.iter().fold(r(3, 1), |acc, w| acc - r(1, 1) + r(1, det(w)));
        prop_assert_eq!(orbifold_euler(&b), e);
    }
}
