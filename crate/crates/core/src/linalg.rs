use alloc::vec::Vec;

use num_traits::Zero;

use crate::{Error, Rational};

/// Solves `m x = b` exactly by Gaussian elimination with row pivoting.
/// Zero entries are skipped, so banded systems stay cheap.
pub(crate) fn solve(mut m: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Result<Vec<Rational>, Error> {
    let n = b.len();
    debug_assert!(m.len() == n && m.iter().all(|row| row.len() == n));
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::SingularMatrix)?;
        m.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &m[col][col];
            for c in col..n {
                if !m[col][c].is_zero() {
                    let delta = &factor * &m[col][c];
                    m[r][c] -= delta;
                }
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    let mut x = alloc::vec![Rational::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            if !m[r][c].is_zero() {
                acc -= &m[r][c] * &x[c];
            }
        }
        x[r] = acc / &m[r][r];
    }
    Ok(x)
}

/// `x^T m x`.
pub(crate) fn quadratic_form(m: &[Vec<Rational>], x: &[Rational]) -> Rational {
    let mut total = Rational::zero();
    for (i, row) in m.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            if !entry.is_zero() {
                total += entry * &x[i] * &x[j];
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn solves_small_system() {
        // [[2,1],[1,3]] x = [3,5]  ->  x = (4/5, 7/5)
        let m = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let x = solve(m, vec![int(3), int(5)]).unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
    }

    #[test]
    fn needs_pivoting() {
        let m = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert_eq!(solve(m, vec![int(2), int(3)]).unwrap(), vec![int(3), int(2)]);
    }

    #[test]
    fn singular() {
        let m = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(solve(m, vec![int(1), int(1)]), Err(Error::SingularMatrix));
    }
}
