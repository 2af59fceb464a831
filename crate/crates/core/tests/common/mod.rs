//! Oracles shared by the integration suites. Nothing here calls into the
//! library's arithmetic; they work on plain weight lists.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Every weight list of length `1..=max_len` with entries in `2..=max_weight`.
pub fn all_weight_lists(max_len: usize, max_weight: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for n in 2..=max_weight {
                let mut v = w.clone();
                v.push(n);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `-A` for the chain's intersection matrix `A`: `n_i` on the diagonal and
/// `-1` between neighbours.
fn negated_matrix(w: &[u32]) -> Vec<Vec<i128>> {
    let l = w.len();
    let mut m = vec![vec![0i128; l]; l];
    for i in 0..l {
        m[i][i] = w[i] as i128;
        if i + 1 < l {
            m[i][i + 1] = -1;
            m[i + 1][i] = -1;
        }
    }
    m
}

/// Determinant by fraction-free (Bareiss) elimination; `det([]) = 1`.
pub fn det(w: &[u32]) -> i128 {
    let mut m = negated_matrix(w);
    let n = m.len();
    let mut prev = 1i128;
    let mut sign = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| m[r][k] != 0) else { return 0 };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    if n == 0 { 1 } else { sign * m[n - 1][n - 1] }
}

pub fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

pub fn r(n: i128, d: i128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `n_1 - 1/(n_2 - 1/(... - 1/n_l))`.
pub fn continued_fraction(w: &[u32]) -> BigRational {
    let mut acc: Option<BigRational> = None;
    for &n in w.iter().rev() {
        let n = BigRational::from_integer(BigInt::from(n));
        acc = Some(match acc {
            None => n,
            Some(a) => n - a.recip(),
        });
    }
    acc.expect("nonempty")
}

/// Solves `M x = b` by dense Gauss-Jordan elimination with pivot search.
pub fn gauss_solve(mut m: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Vec<BigRational> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero()).expect("nonsingular");
        m.swap(col, p);
        b.swap(col, p);
        let inv = m[col][col].recip();
        for j in 0..n {
            m[col][j] = &m[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..n {
                    let t = &f * &m[col][j];
                    m[r][j] -= t;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    b
}

/// Intersection matrix of the chain's components.
pub fn intersection_matrix(w: &[u32]) -> Vec<Vec<BigRational>> {
    negated_matrix(w)
        .into_iter()
        .map(|row| row.into_iter().map(|x| r(-x, 1)).collect())
        .collect()
}

pub fn in_unit_interval(x: &BigRational) -> bool {
    !x.is_negative() && *x < BigRational::one()
}
