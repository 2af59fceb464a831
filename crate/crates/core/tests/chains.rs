mod common;

use common::{all_weight_lists, continued_fraction, det, gcd};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use qhpp_core::hj::{hj_expand, reverse_conjugate, uv_profile};
use qhpp_core::Chain;

fn big(n: i128) -> BigInt {
    BigInt::from(n)
}

#[test]
fn continuants_match_determinants_exhaustively() {
    let lists = all_weight_lists(8, 5);
    assert_eq!(lists.len(), (1..=8).map(|l| 4usize.pow(l)).sum::<usize>());
    for w in &lists {
        let chain = Chain::new(w.clone()).unwrap();
        let inv = chain.invariants().unwrap();
        let l = w.len();
        let q = det(w);
        let q1 = det(&w[1..]);
        let ql = det(&w[..l - 1]);
        let q_inner = if l == 1 { 0 } else { det(&w[1..l - 1]) };
        assert_eq!(inv.q, big(q), "{w:?}");
        assert_eq!(inv.q1, big(q1), "{w:?}");
        assert_eq!(inv.ql, big(ql), "{w:?}");
        assert_eq!(inv.q_inner, big(q_inner), "{w:?}");
        assert_eq!(q1 * ql - q * q_inner, 1, "{w:?}");
        assert_eq!(&inv.q1 * &inv.ql - &inv.q * &inv.q_inner, BigInt::from(1));
        assert_eq!(gcd(q, q1), 1, "{w:?}");
        assert!(inv.q.gcd(&inv.q1) == BigInt::from(1));
        assert_eq!(chain.reversed().continuant(), inv.q, "{w:?}");
        assert_eq!(inv.tr, w.iter().map(|&n| n as u64).sum::<u64>());
    }
}

#[test]
fn uv_profiles_are_monotone_with_vanishing_coefficients_only_on_rdps() {
    for w in all_weight_lists(8, 5) {
        let chain = Chain::new(w.clone()).unwrap();
        let p = uv_profile(&chain).unwrap();
        let l = w.len();
        for j in 0..l {
            assert_eq!(p.u[j], big(det(&w[..j])));
            assert_eq!(p.v[j], big(det(&w[j + 1..])));
            assert!(common::in_unit_interval(&p.coefficients[j]), "{w:?}");
        }
        assert_eq!(p.u[0], BigInt::from(1));
        assert_eq!(p.v[l - 1], BigInt::from(1));
        assert!(p.u.windows(2).all(|x| x[0] < x[1]));
        assert!(p.v.windows(2).all(|x| x[0] > x[1]));
        let all_two = w.iter().all(|&n| n == 2);
        assert_eq!(p.coefficients.iter().all(Zero::is_zero), all_two, "{w:?}");
    }
}

#[test]
fn hj_expand_round_trips_every_type_up_to_500() {
    for q in 2i128..=500 {
        for a in 1..q {
            if gcd(q, a) != 1 {
                continue;
            }
            let chain = hj_expand(&big(q), &big(a)).unwrap();
            assert!(chain.weights().iter().all(|&n| n >= 2));
            assert_eq!(continued_fraction(chain.weights()), common::r(q, a), "1/{q}(1,{a})");
            let (tq, ta) = chain.singularity_type().unwrap();
            assert_eq!((tq.to_i128().unwrap(), ta.to_i128().unwrap()), (q, a));
        }
    }
}

#[test]
fn hj_expand_rejects_bad_types() {
    assert!(hj_expand(&big(6), &big(2)).is_err());
    assert!(hj_expand(&big(5), &big(5)).is_err());
    assert!(hj_expand(&big(5), &big(0)).is_err());
}

#[test]
fn reversal_inverts_the_type_parameter() {
    for w in all_weight_lists(6, 4) {
        let chain = Chain::new(w.clone()).unwrap();
        let (q, a) = chain.singularity_type().unwrap();
        let (rev, s) = reverse_conjugate(&chain).unwrap();
        let mut expected = w.clone();
        expected.reverse();
        assert_eq!(rev.weights(), &expected[..]);
        assert_eq!(s.order(), &q);
        if q > BigInt::from(1) {
            assert_eq!((&a * s.a()).mod_floor(&q), BigInt::from(1) % &q, "{w:?}");
        }
    }
}
