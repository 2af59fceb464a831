//! Hirzebruch-Jung chains of cyclic quotient singularities.
//!
//! A chain `[n_1, ..., n_l]` lists the negated self-intersections of the
//! exceptional curves of the minimal resolution, in order along the chain.
//! Every invariant here is a continuant of some slice of the weights:
//!
//! ```text
//! K(empty) = 1,   K(slice of length -1) = 0,
//! K(n_1..n_j) = n_j K(n_1..n_{j-1}) - K(n_1..n_{j-2})
//! ```

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{int, one};
use crate::{linalg, Error, Rational, Result};

/// Continuant of a weight list. Rejects any weight `<= 1`.
pub fn continuant(weights: &[i64]) -> Result<BigInt> {
    Ok(Chain::from_i64(weights)?.continuant())
}

fn cont(weights: &[u32]) -> BigInt {
    let mut prev = BigInt::zero();
    let mut cur = BigInt::one();
    for &w in weights {
        let next = &cur * w - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Continuants of every prefix: `out[k] = K(w[..k])`, `out.len() == w.len() + 1`.
fn prefix_continuants(weights: &[u32]) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(weights.len() + 1);
    let mut prev = BigInt::zero();
    let mut cur = BigInt::one();
    out.push(cur.clone());
    for &w in weights {
        let next = &cur * w - &prev;
        prev = core::mem::replace(&mut cur, next);
        out.push(cur.clone());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Chain {
    weights: Vec<u32>,
}

impl Chain {
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        if let Some((index, &w)) = weights.iter().enumerate().find(|(_, &w)| w < 2) {
            return Err(Error::InvalidWeight { index, weight: w as i64 });
        }
        Ok(Chain { weights })
    }

    pub fn from_i64(weights: &[i64]) -> Result<Self> {
        let mut out = Vec::with_capacity(weights.len());
        for (index, &w) in weights.iter().enumerate() {
            if !(2..=u32::MAX as i64).contains(&w) {
                return Err(Error::InvalidWeight { index, weight: w });
            }
            out.push(w as u32);
        }
        Ok(Chain { weights: out })
    }

    /// The `A_n` chain `[2; n]`.
    pub fn a_n(n: usize) -> Self {
        Chain { weights: alloc::vec![2; n] }
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `tr`: the sum of the weights.
    pub fn trace(&self) -> u64 {
        self.weights.iter().map(|&w| w as u64).sum()
    }

    /// All weights equal 2, i.e. a rational double point `A_l`.
    pub fn is_rdp(&self) -> bool {
        self.weights.iter().all(|&w| w == 2)
    }

    pub fn reversed(&self) -> Chain {
        let mut weights = self.weights.clone();
        weights.reverse();
        Chain { weights }
    }

    /// Order of the local fundamental group of the contracted point.
    pub fn continuant(&self) -> BigInt {
        cont(&self.weights)
    }

    /// `[n_2, ..., n_l]`: the chain with its first component removed.
    pub fn without_first(&self) -> Chain {
        Chain { weights: self.weights.get(1..).unwrap_or(&[]).to_vec() }
    }

    pub fn invariants(&self) -> Result<ChainInvariants> {
        ChainInvariants::of(self)
    }

    /// The type `(q, a)` with `1/q(1,a)` resolved by this chain, where
    /// `q/a = [[n_1, ..., n_l]]`.
    pub fn singularity_type(&self) -> Result<(BigInt, BigInt)> {
        if self.is_empty() {
            return Err(Error::EmptyChain);
        }
        Ok((self.continuant(), cont(&self.weights[1..])))
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for Chain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason| Error::Parse { input: s.to_string(), reason };
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| err("chain must be a bracketed weight list"))?;
        if inner.trim().is_empty() {
            return Ok(Chain::default());
        }
        let weights = inner
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| err("weight is not an integer")))
            .collect::<Result<Vec<_>>>()?;
        Chain::from_i64(&weights)
    }
}

/// Continuant invariants of a nonempty chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainInvariants {
    /// `K(n_1..n_l)`.
    pub q: BigInt,
    /// `K(n_2..n_l)`.
    pub q1: BigInt,
    /// `K(n_1..n_{l-1})`.
    pub ql: BigInt,
    /// `K(n_2..n_{l-1})`, zero for a single-component chain.
    pub q_inner: BigInt,
    pub tr: u64,
    /// `u_j = K(n_1..n_{j-1})`, for `j = 1..l`.
    pub u: Vec<BigInt>,
    /// `v_j = K(n_{j+1}..n_l)`, for `j = 1..l`.
    pub v: Vec<BigInt>,
}

impl ChainInvariants {
    pub fn of(chain: &Chain) -> Result<Self> {
        let w = chain.weights();
        let l = w.len();
        if l == 0 {
            return Err(Error::EmptyChain);
        }
        let prefix = prefix_continuants(w);
        let mut reversed = w.to_vec();
        reversed.reverse();
        let suffix = prefix_continuants(&reversed);
        let u: Vec<BigInt> = prefix[..l].to_vec();
        let v: Vec<BigInt> = (0..l).map(|j| suffix[l - 1 - j].clone()).collect();
        let q_inner = if l >= 2 { cont(&w[1..l - 1]) } else { BigInt::zero() };
        Ok(ChainInvariants {
            q: prefix[l].clone(),
            q1: v[0].clone(),
            ql: u[l - 1].clone(),
            q_inner,
            tr: chain.trace(),
            u,
            v,
        })
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// `(q_1 + q_l + 2) / q`, the term every K^2 formula is built from.
    pub fn end_ratio(&self) -> Rational {
        Rational::new(&self.q1 + &self.ql + 2, self.q.clone())
    }

    /// Closed form of the discrepancy divisor's self-intersection:
    /// `2l - tr + 2 - (q_1 + q_l + 2)/q`.
    pub fn closed_form_d_squared(&self) -> Rational {
        int(2 * self.len() as i64 - self.tr as i64 + 2) - self.end_ratio()
    }
}

/// A cyclic quotient singularity `1/q(1,a)` with its resolution chain,
/// stored in the orientation produced by [`hj_expand`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicSingularity {
    q: BigInt,
    a: BigInt,
    chain: Chain,
}

impl CyclicSingularity {
    pub fn from_type(q: u64, a: u64) -> Result<Self> {
        let (q, a) = (BigInt::from(q), BigInt::from(a));
        let chain = hj_expand(&q, &a)?;
        Ok(CyclicSingularity { q, a, chain })
    }

    pub fn from_chain(chain: Chain) -> Result<Self> {
        let (q, a) = chain.singularity_type()?;
        Ok(CyclicSingularity { q, a, chain })
    }

    pub fn a_n(n: usize) -> Result<Self> {
        Self::from_chain(Chain::a_n(n))
    }

    pub fn order(&self) -> &BigInt {
        &self.q
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    /// Same singularity up to reversing the chain (`a <-> a^{-1} mod q`).
    pub fn is_equivalent(&self, other: &CyclicSingularity) -> bool {
        self.chain == other.chain || self.chain == other.chain.reversed()
    }
}

impl fmt::Display for CyclicSingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.chain.is_rdp() {
            write!(f, "A{}", self.chain.len())
        } else {
            write!(f, "1/{}(1,{})", self.q, self.a)
        }
    }
}

impl FromStr for CyclicSingularity {
    type Err = Error;

    /// Accepts `A8`, `A_8`, `1/19(1,9)` or a bracketed chain `[3,2]`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let err = |reason| Error::Parse { input: s.to_string(), reason };
        if t.starts_with('[') {
            return Self::from_chain(t.parse()?);
        }
        if let Some(rest) = t.strip_prefix('A') {
            let n: usize = rest
                .trim_start_matches('_')
                .parse()
                .map_err(|_| err("A_n needs a positive integer n"))?;
            if n == 0 {
                return Err(err("A_n needs a positive integer n"));
            }
            return Self::a_n(n);
        }
        let (q, rest) = t
            .strip_prefix("1/")
            .and_then(|r| r.split_once('('))
            .ok_or_else(|| err("expected 1/q(1,a)"))?;
        let a = rest
            .strip_suffix(')')
            .and_then(|r| r.split_once(','))
            .filter(|(one, _)| one.trim() == "1")
            .map(|(_, a)| a.trim())
            .ok_or_else(|| err("expected 1/q(1,a)"))?;
        let q: BigInt = q.trim().parse().map_err(|_| err("q is not an integer"))?;
        let a: BigInt = a.parse().map_err(|_| err("a is not an integer"))?;
        let chain = hj_expand(&q, &a)?;
        Ok(CyclicSingularity { q, a, chain })
    }
}

/// Hirzebruch-Jung expansion `q/a = n_1 - 1/(n_2 - 1/(...))`.
pub fn hj_expand(q: &BigInt, a: &BigInt) -> Result<Chain> {
    let invalid = || Error::InvalidType { q: q.clone(), a: a.clone() };
    if *q < BigInt::from(2) || !a.is_positive() || a >= q || !q.gcd(a).is_one() {
        return Err(invalid());
    }
    let (mut num, mut den) = (q.clone(), a.clone());
    let mut weights = Vec::new();
    while !den.is_zero() {
        let n = num.div_ceil(&den);
        let next = &n * &den - &num;
        weights.push(n.to_u32().ok_or_else(invalid)?);
        num = core::mem::replace(&mut den, next);
    }
    Chain::new(weights)
}

/// Reverses a chain; the reversed chain resolves `1/q(1,a')` with
/// `a a' = 1 (mod q)`.
pub fn reverse_conjugate(chain: &Chain) -> Result<(Chain, CyclicSingularity)> {
    if chain.is_empty() {
        return Err(Error::EmptyChain);
    }
    let reversed = chain.reversed();
    let singularity = CyclicSingularity::from_chain(reversed.clone())?;
    Ok((reversed, singularity))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UvProfile {
    pub u: Vec<BigInt>,
    pub v: Vec<BigInt>,
    /// `c_j = 1 - (v_j + u_j)/q`.
    pub coefficients: Vec<Rational>,
}

pub fn uv_profile(chain: &Chain) -> Result<UvProfile> {
    let inv = chain.invariants()?;
    let coefficients = inv
        .u
        .iter()
        .zip(&inv.v)
        .map(|(u, v)| one() - Rational::new(u + v, inv.q.clone()))
        .collect();
    Ok(UvProfile { u: inv.u, v: inv.v, coefficients })
}

/// Coefficients of the discrepancy divisor `D_p = sum a_j A_j` with
/// `K_{S'} = f^*K_S - D_p` near the point, and `D_p^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyData {
    pub coefficients: Vec<Rational>,
    pub d_squared: Rational,
}

/// Intersection matrix of the chain's components: `-n_i` on the diagonal,
/// `1` between neighbours.
pub fn intersection_matrix(chain: &Chain) -> Vec<Vec<Rational>> {
    let l = chain.len();
    let mut m = alloc::vec![alloc::vec![Rational::zero(); l]; l];
    for (i, &w) in chain.weights().iter().enumerate() {
        m[i][i] = -int(w as i64);
        if i + 1 < l {
            m[i][i + 1] = one();
            m[i + 1][i] = one();
        }
    }
    m
}

/// Solves `(sum_j a_j A_j) . A_i = 2 - n_i` and evaluates `D_p^2` both as a
/// quadratic form and through the closed form; the two must agree.
pub fn discrepancies(chain: &Chain) -> Result<DiscrepancyData> {
    let inv = chain.invariants()?;
    let m = intersection_matrix(chain);
    let rhs = chain.weights().iter().map(|&w| int(2 - w as i64)).collect();
    let coefficients = linalg::solve(m.clone(), rhs)?;
    let d_squared = linalg::quadratic_form(&m, &coefficients);
    if d_squared != inv.closed_form_d_squared() {
        return Err(Error::Internal("discrepancy closed form disagrees with the linear solve"));
    }
    Ok(DiscrepancyData { coefficients, d_squared })
}

pub(crate) fn order_reciprocal(q: &BigInt) -> Rational {
    Rational::new(BigInt::one(), q.clone())
}
