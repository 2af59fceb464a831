//! Baskets of cyclic quotient singularities on a candidate Q-homology
//! projective plane, with `K^2`, the orbifold Euler number and the
//! Bogomolov-Miyaoka-Yau gate.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::hj::{order_reciprocal, Chain, CyclicSingularity};
use crate::rational::{int, is_square_integer, one};
use crate::{Error, Rational, Result};

pub const MAX_SINGULAR_POINTS: usize = 5;
pub const MAX_RATIONAL_SINGULAR_POINTS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Basket {
    singularities: Vec<CyclicSingularity>,
}

impl Basket {
    pub fn new(singularities: Vec<CyclicSingularity>) -> Result<Self> {
        if singularities.len() > MAX_SINGULAR_POINTS {
            return Err(Error::TooManySingularities(singularities.len()));
        }
        Ok(Basket { singularities })
    }

    pub fn empty() -> Self {
        Basket::default()
    }

    pub fn from_chains(chains: &[Chain]) -> Result<Self> {
        let sings = chains
            .iter()
            .cloned()
            .map(CyclicSingularity::from_chain)
            .collect::<Result<Vec<_>>>()?;
        Basket::new(sings)
    }

    /// A copy of this basket with one more point.
    pub fn with(&self, s: CyclicSingularity) -> Result<Self> {
        let mut sings = self.singularities.clone();
        sings.push(s);
        Basket::new(sings)
    }

    pub fn singularities(&self) -> &[CyclicSingularity] {
        &self.singularities
    }

    pub fn chains(&self) -> Vec<Chain> {
        self.singularities.iter().map(|s| s.chain().clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.singularities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.singularities.is_empty()
    }

    /// `L`, the total number of exceptional curves.
    pub fn total_length(&self) -> usize {
        self.singularities.iter().map(|s| s.chain().len()).sum()
    }

    pub fn orders(&self) -> Vec<BigInt> {
        self.singularities.iter().map(|s| s.order().clone()).collect()
    }

    /// Size rule for a Q-homology projective plane: at most four points on a
    /// rational surface, at most five otherwise, and five only for `3A1 + 2A3`.
    pub fn size_check(&self, rational: bool) -> SizeCheck {
        let n = self.len();
        if rational && n > MAX_RATIONAL_SINGULAR_POINTS {
            return SizeCheck::TooMany { count: n, max: MAX_RATIONAL_SINGULAR_POINTS };
        }
        if n == MAX_SINGULAR_POINTS && !self.is_enriques_type() {
            return SizeCheck::FivePointsNotEnriquesType;
        }
        SizeCheck::Ok
    }

    fn is_enriques_type(&self) -> bool {
        let mut lens: Vec<usize> = self
            .singularities
            .iter()
            .filter(|s| s.chain().is_rdp())
            .map(|s| s.chain().len())
            .collect();
        lens.sort_unstable();
        self.len() == 5 && lens == [1, 1, 1, 3, 3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeCheck {
    Ok,
    TooMany { count: usize, max: usize },
    FivePointsNotEnriquesType,
}

impl fmt::Display for Basket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("smooth");
        }
        for (i, s) in self.singularities.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Basket {
    type Err = Error;

    /// `"A1 + 1/3(1,1) + 1/5(1,2) + [2,3,2,3]"`; `""` or `"smooth"` is empty.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() || t == "smooth" {
            return Ok(Basket::empty());
        }
        let sings = t.split('+').map(str::parse).collect::<Result<Vec<_>>>()?;
        Basket::new(sings)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceInvariants {
    pub k_squared: Rational,
    pub e_orb: Rational,
    /// `K^2` of the minimal resolution, `9 - L`.
    pub k_squared_smooth: i64,
}

/// `K_S^2 = 9 - L + sum_p (tr_p - 2 l_p - 2 + (q_{1,p} + q_{l,p} + 2)/q_p)`.
pub fn k_squared(basket: &Basket) -> Rational {
    let mut total = int(9 - basket.total_length() as i64);
    for s in basket.singularities() {
        let inv = s.chain().invariants().expect("singularity chains are nonempty");
        total += int(inv.tr as i64 - 2 * inv.len() as i64 - 2) + inv.end_ratio();
    }
    total
}

/// `K_S^2 = K_{S'}^2 - sum_p D_p^2`, with each `D_p` from the linear solve.
pub fn k_squared_via_discrepancies(basket: &Basket) -> Result<Rational> {
    let mut total = int(9 - basket.total_length() as i64);
    for s in basket.singularities() {
        total -= crate::hj::discrepancies(s.chain())?.d_squared;
    }
    Ok(total)
}

/// `e_orb = 3 - sum_p (1 - 1/q_p)`.
pub fn orbifold_euler(basket: &Basket) -> Rational {
    basket
        .singularities()
        .iter()
        .fold(int(3), |acc, s| acc - (one() - order_reciprocal(s.order())))
}

pub fn invariants(basket: &Basket) -> SurfaceInvariants {
    SurfaceInvariants {
        k_squared: k_squared(basket),
        e_orb: orbifold_euler(basket),
        k_squared_smooth: 9 - basket.total_length() as i64,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BmyVerdict {
    Pass,
    /// `K^2 > 3 e_orb`.
    FailUpper,
    /// `K^2 <= 0`, impossible for ample `K`.
    FailPositive,
}

impl BmyVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            BmyVerdict::Pass => "pass",
            BmyVerdict::FailUpper => "fail_upper",
            BmyVerdict::FailPositive => "fail_positive",
        }
    }

    pub fn passes(self) -> bool {
        self == BmyVerdict::Pass
    }
}

impl fmt::Display for BmyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classifies `K^2` against `0 < K^2 <= bound`.
pub fn bmy_verdict(k_squared: &Rational, bound: &Rational) -> BmyVerdict {
    if !k_squared.is_positive() {
        BmyVerdict::FailPositive
    } else if k_squared > bound {
        BmyVerdict::FailUpper
    } else {
        BmyVerdict::Pass
    }
}

pub fn bmy_bound(basket: &Basket) -> Rational {
    int(3) * orbifold_euler(basket)
}

pub fn bmy_gate(basket: &Basket) -> BmyVerdict {
    bmy_verdict(&k_squared(basket), &bmy_bound(basket))
}

/// Shape of the local fundamental group orders of a four-point basket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderPattern {
    /// `(2, 3, 7, 19)`.
    Orders2_3_7_19,
    /// `(2, 3, 5, q)`.
    Orders2_3_5 { q: BigInt, gcd_with_30_is_one: bool },
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithmeticReport {
    pub pairwise_coprime: bool,
    pub pattern: OrderPattern,
    /// Whether `30 q K^2` is an integer square, `q` the largest order.
    pub thirty_q_k_squared_is_square: Option<bool>,
}

impl ArithmeticReport {
    /// Necessary conditions for trivial `H_1` of the smooth locus.
    pub fn passes(&self) -> bool {
        self.pairwise_coprime
            && match &self.pattern {
                OrderPattern::Orders2_3_7_19 => true,
                OrderPattern::Orders2_3_5 { gcd_with_30_is_one, .. } => *gcd_with_30_is_one,
                OrderPattern::Other => false,
            }
    }
}

pub fn pairwise_coprime(orders: &[BigInt]) -> bool {
    orders
        .iter()
        .enumerate()
        .all(|(i, a)| orders[i + 1..].iter().all(|b| a.gcd(b).is_one()))
}

pub fn gcd_with_30_is_one(q: &BigInt) -> bool {
    q.gcd(&BigInt::from(30)).is_one()
}

pub fn order_pattern(orders: &[BigInt]) -> OrderPattern {
    let mut sorted = orders.to_vec();
    sorted.sort();
    let small: Vec<BigInt> = [2, 3, 5].iter().map(|&n| BigInt::from(n)).collect();
    if sorted.len() == 4 && sorted == [2, 3, 7, 19].map(BigInt::from) {
        return OrderPattern::Orders2_3_7_19;
    }
    if sorted.len() == 4 {
        // the fourth order may itself be smaller than 5 only when it repeats one
        // of 2, 3, 5, which already breaks coprimality; still report the shape.
        let mut rest = sorted.clone();
        for s in &small {
            if let Some(pos) = rest.iter().position(|x| x == s) {
                rest.remove(pos);
            } else {
                return OrderPattern::Other;
            }
        }
        let q = rest.pop().expect("four orders minus three");
        let gcd_with_30_is_one = gcd_with_30_is_one(&q);
        return OrderPattern::Orders2_3_5 { q, gcd_with_30_is_one };
    }
    OrderPattern::Other
}

pub fn arithmetic_obstructions(basket: &Basket) -> ArithmeticReport {
    let orders = basket.orders();
    let thirty_q_k_squared_is_square = orders
        .iter()
        .max()
        .map(|q| thirty_q_k_squared_is_square(q, &k_squared(basket)));
    ArithmeticReport {
        pairwise_coprime: pairwise_coprime(&orders),
        pattern: order_pattern(&orders),
        thirty_q_k_squared_is_square,
    }
}

pub fn thirty_q_k_squared_is_square(q: &BigInt, k_squared: &Rational) -> bool {
    is_square_integer(&(k_squared * Rational::from_integer(q * 30)))
}

/// Square test for a log del Pezzo contraction with
/// `K^2 = (q_1+1)^2 / (q (q_1+q))`: `30 q K^2` is a square exactly when
/// `30 (q_1 + q)` is. Returns `true` when the test fails, i.e. the
/// configuration is obstructed.
pub fn square_obstruction(q: &BigInt, q1: &BigInt) -> bool {
    let n: BigInt = (q1 + q) * 30;
    let root = n.sqrt();
    &root * &root != n
}

/// Named nonexistence scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScanCase {
    /// `A1 + 1/3(1,1) + A4 + [2,a,2,b,2,c,2]` with `a + b + c = 10`.
    L13Sum10,
    /// Same basket with `a + b + c = 11`.
    L13Sum11,
    /// `A1 + 1/3(1,1) + 1/5(1,1) + 1/(2l+1)(1,l)`.
    OddChain,
}

impl ScanCase {
    pub fn id(self) -> &'static str {
        match self {
            ScanCase::L13Sum10 => "L13_sum10",
            ScanCase::L13Sum11 => "L13_sum11",
            ScanCase::OddChain => "odd_chain",
        }
    }
}

impl FromStr for ScanCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L13_sum10" => Ok(ScanCase::L13Sum10),
            "L13_sum11" => Ok(ScanCase::L13Sum11),
            "odd_chain" => Ok(ScanCase::OddChain),
            other => Err(Error::UnknownCase(other.to_string())),
        }
    }
}

impl fmt::Display for ScanCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Smallest `l` for the odd-chain family admitted by `L >= 11`.
pub const ODD_CHAIN_MIN_L: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanBounds {
    pub odd_chain_l: (u64, u64),
}

impl Default for ScanBounds {
    fn default() -> Self {
        ScanBounds { odd_chain_l: (1, 100) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScanVerdict {
    Bmy(BmyVerdict),
    /// Outside the range left open by the `L >= 11` classification.
    ExcludedByImport,
}

impl ScanVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanVerdict::Bmy(v) => v.as_str(),
            ScanVerdict::ExcludedByImport => "excluded_by_import",
        }
    }

    /// Whether this record rules the candidate out.
    pub fn excludes(self) -> bool {
        self != ScanVerdict::Bmy(BmyVerdict::Pass)
    }
}

impl fmt::Display for ScanVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Closed-form continuants of `[2,a,2,b,2,c,2]`, checked against the recurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialCheck {
    pub q: BigInt,
    pub q1: BigInt,
    pub ql: BigInt,
    pub agrees_with_continuant: bool,
    /// `(q_1 + q_l + 2)/q - 1 == 4(b-1)(a+c-2)/q`.
    pub end_ratio_identity: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRecord {
    pub case: ScanCase,
    pub params: Vec<(&'static str, u64)>,
    pub basket: Basket,
    pub k_squared: Rational,
    pub bound: Rational,
    pub verdict: ScanVerdict,
    pub polynomial: Option<PolynomialCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOutcome {
    pub case: ScanCase,
    pub records: Vec<ScanRecord>,
    pub nonexistence_confirmed: bool,
}

pub fn l13_chain(a: u32, b: u32, c: u32) -> Result<Chain> {
    Chain::new(alloc::vec![2, a, 2, b, 2, c, 2])
}

/// `(q, q_1, q_l)` of `[2,a,2,b,2,c,2]` as polynomials in `a, b, c`.
pub fn l13_polynomials(a: i64, b: i64, c: i64) -> (BigInt, BigInt, BigInt) {
    let abc = a * b * c;
    let q1 = 8 * abc - 8 * a * b - 4 * b * c - 8 * c * a + 6 * a + 4 * b + 2 * c - 1;
    let ql = 8 * abc - 4 * a * b - 8 * b * c - 8 * c * a + 2 * a + 4 * b + 6 * c - 1;
    let q = 16 * abc - 16 * a * b - 16 * b * c - 16 * c * a + 12 * a + 16 * b + 12 * c - 8;
    (BigInt::from(q), BigInt::from(q1), BigInt::from(ql))
}

fn base_basket(third: &str) -> Basket {
    let mut sings = Vec::new();
    for s in ["A1", "1/3(1,1)", third] {
        sings.push(s.parse().expect("fixed singularity types parse"));
    }
    Basket { singularities: sings }
}

fn record(case: ScanCase, params: Vec<(&'static str, u64)>, basket: Basket) -> ScanRecord {
    let k2 = k_squared(&basket);
    let bound = bmy_bound(&basket);
    let verdict = ScanVerdict::Bmy(bmy_verdict(&k2, &bound));
    ScanRecord { case, params, basket, k_squared: k2, bound, verdict, polynomial: None }
}

/// Runs one of the named scans. Every record must fail the BMY gate (or be
/// excluded outright) for the scan to confirm nonexistence.
pub fn scan_corollary(case: ScanCase, bounds: &ScanBounds) -> Result<ScanOutcome> {
    let mut records = Vec::new();
    match case {
        ScanCase::L13Sum10 | ScanCase::L13Sum11 => {
            let sum = if case == ScanCase::L13Sum10 { 10 } else { 11 };
            let base = base_basket("A4");
            for a in 2..=sum - 4 {
                for b in 2..=sum - a - 2 {
                    let c = sum - a - b;
                    let chain = l13_chain(a, b, c)?;
                    let inv = chain.invariants()?;
                    let basket = base.with(CyclicSingularity::from_chain(chain)?)?;
                    let mut rec = record(
                        case,
                        alloc::vec![("a", a as u64), ("b", b as u64), ("c", c as u64)],
                        basket,
                    );
                    let (q, q1, ql) = l13_polynomials(a as i64, b as i64, c as i64);
                    let lhs = inv.end_ratio() - one();
                    let rhs = Rational::new(
                        BigInt::from(4 * (b as i64 - 1) * (a as i64 + c as i64 - 2)),
                        q.clone(),
                    );
                    rec.polynomial = Some(PolynomialCheck {
                        agrees_with_continuant: q == inv.q && q1 == inv.q1 && ql == inv.ql,
                        end_ratio_identity: lhs == rhs,
                        q,
                        q1,
                        ql,
                    });
                    records.push(rec);
                }
            }
        }
        ScanCase::OddChain => {
            let (lo, hi) = bounds.odd_chain_l;
            if lo == 0 || hi < lo {
                return Err(Error::Unbounded("a nonempty range 1 <= l_min <= l_max"));
            }
            let base = base_basket("1/5(1,1)");
            for l in lo..=hi {
                let point = CyclicSingularity::from_type(2 * l + 1, l)?;
                let basket = base.with(point)?;
                let mut rec = record(case, alloc::vec![("l", l)], basket);
                if l < ODD_CHAIN_MIN_L {
                    rec.verdict = ScanVerdict::ExcludedByImport;
                }
                records.push(rec);
            }
        }
    }
    let nonexistence_confirmed = records.iter().all(|r| r.verdict.excludes());
    Ok(ScanOutcome { case, records, nonexistence_confirmed })
}

/// `K^2 - (q_1 + q_l + 2)/q` for the basket `A1 + 1/3(1,1) + third + chain`;
/// constant along each `tr = 3l - k` family.
pub fn k_squared_offset(third: &CyclicSingularity, chain: &Chain) -> Result<Rational> {
    let basket = Basket::new(alloc::vec![
        "A1".parse()?,
        "1/3(1,1)".parse()?,
        third.clone(),
        CyclicSingularity::from_chain(chain.clone())?,
    ])?;
    Ok(k_squared(&basket) - chain.invariants()?.end_ratio())
}

impl ScanRecord {
    pub fn params_string(&self) -> String {
        let mut out = String::new();
        for (i, (k, v)) in self.params.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(k);
            out.push('=');
            out.push_str(&v.to_string());
        }
        out
    }
}
