mod common;

use common::{all_weight_lists, gauss_solve, in_unit_interval, intersection_matrix, r};
use num_rational::BigRational;
use num_traits::Zero;
use qhpp_core::hj::discrepancies;
use qhpp_core::Chain;

fn quadratic_form(m: &[Vec<BigRational>], x: &[BigRational]) -> BigRational {
    let mut acc = BigRational::zero();
    for i in 0..x.len() {
        for j in 0..x.len() {
            acc += &x[i] * &m[i][j] * &x[j];
        }
    }
    acc
}

#[test]
fn linear_system_agrees_with_closed_form_exhaustively() {
    for w in all_weight_lists(8, 5) {
        let l = w.len() as i128;
        let m = intersection_matrix(&w);
        let rhs: Vec<BigRational> = w.iter().map(|&n| r(2 - n as i128, 1)).collect();
        let a = gauss_solve(m.clone(), rhs);
        let oracle_square = quadratic_form(&m, &a);

        let q = common::det(&w);
        let q1 = common::det(&w[1..]);
        let ql = common::det(&w[..w.len() - 1]);
        let tr: i128 = w.iter().map(|&n| n as i128).sum();
        let closed = r(2 * l - tr + 2, 1) - r(q1 + ql + 2, q);
        assert_eq!(oracle_square, closed, "{w:?}");

        let data = discrepancies(&Chain::new(w.clone()).unwrap()).unwrap();
        assert_eq!(data.coefficients, a, "{w:?}");
        assert_eq!(data.d_squared, closed, "{w:?}");
        assert!(data.coefficients.iter().all(in_unit_interval), "{w:?}");
        assert_eq!(data.d_squared.is_zero(), w.iter().all(|&n| n == 2), "{w:?}");
    }
}
