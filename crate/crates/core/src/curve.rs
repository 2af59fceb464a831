//! Numerical consequences of a curve on the minimal resolution.
//!
//! For an irreducible curve `C` not contracted to a point, write
//! `alpha = m_C K_S^2` and `beta = m_C^2 K_S^2`. Then
//!
//! ```text
//! alpha = C.K + sum_p sum_j (1 - (v_j + u_j)/q_p) C.A_j
//! beta  = C^2 + sum_p (v_s u_s (C.A_s)^2 + v_t u_t (C.A_t)^2 + 2 v_t u_s (C.A_s)(C.A_t)) / q_p
//! ```
//!
//! where the second line only holds when `C` meets at most two components
//! `A_s, A_t` (`s < t`) of each chain. The sign of `m_C` decides whether
//! `K_S`, `-K_S` or neither is ample.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::hj::{uv_profile, Chain};
use crate::rational::{int, rat, sign};
use crate::{Error, Rational, Result};

/// `C.A_j = multiplicity` for component `component` (1-based) of chain
/// `point` (0-based index into the chain list).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hit {
    pub point: usize,
    pub component: usize,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveHypothesis {
    pub label: String,
    /// `C.K_{S'}`.
    pub kc: i64,
    /// `C^2`.
    pub c2: i64,
    pub hits: Vec<Hit>,
}

impl CurveHypothesis {
    /// A smooth rational curve: `C.K = -2 - C^2`.
    pub fn rational(label: &str, c2: i64) -> Self {
        CurveHypothesis { label: label.to_string(), kc: -2 - c2, c2, hits: Vec::new() }
    }

    pub fn minus_one(label: &str) -> Self {
        Self::rational(label, -1)
    }

    pub fn with_kc(mut self, kc: i64) -> Self {
        self.kc = kc;
        self
    }

    pub fn hit(mut self, point: usize, component: usize, multiplicity: u32) -> Self {
        self.hits.push(Hit { point, component, multiplicity });
        self
    }

    /// Hits merged per `(point, component)`, sorted.
    fn merged_hits(&self) -> BTreeMap<(usize, usize), u64> {
        let mut out = BTreeMap::new();
        for h in &self.hits {
            *out.entry((h.point, h.component)).or_insert(0) += h.multiplicity as u64;
        }
        out
    }

    fn validate(&self, chains: &[Chain]) -> Result<()> {
        for h in &self.hits {
            let len = chains.get(h.point).map(Chain::len).unwrap_or(0);
            if h.component == 0 || h.component > len || h.multiplicity == 0 {
                return Err(Error::IndexOutOfRange {
                    singularity: h.point + 1,
                    component: h.component,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for CurveHypothesis {
    /// `E(-1): D4[1]*1, D4[9]*1`; `kc` is printed only when it differs from
    /// the smooth rational value, as `C(1,-1): ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kc == -2 - self.c2 {
            write!(f, "{}({}):", self.label, self.c2)?;
        } else {
            write!(f, "{}({},{}):", self.label, self.c2, self.kc)?;
        }
        for (i, h) in self.hits.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}D{}[{}]*{}", h.point + 1, h.component, h.multiplicity)?;
        }
        Ok(())
    }
}

impl FromStr for CurveHypothesis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason| Error::Parse { input: s.to_string(), reason };
        let (head, tail) = s.split_once(':').unwrap_or((s, ""));
        let (label, nums) = head
            .trim()
            .strip_suffix(')')
            .and_then(|h| h.split_once('('))
            .ok_or_else(|| err("expected Label(C^2) or Label(C^2,C.K)"))?;
        let mut parts = nums.split(',').map(|t| t.trim().parse::<i64>());
        let c2 = parts.next().and_then(|r| r.ok()).ok_or_else(|| err("bad C^2"))?;
        let kc = match parts.next() {
            None => -2 - c2,
            Some(Ok(kc)) => kc,
            Some(Err(_)) => return Err(err("bad C.K")),
        };
        if parts.next().is_some() {
            return Err(err("too many numbers in curve head"));
        }
        let mut curve = CurveHypothesis { label: label.trim().to_string(), kc, c2, hits: Vec::new() };
        for item in tail.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (target, mult) = item.split_once('*').unwrap_or((item, "1"));
            let (point, comp) = target
                .trim()
                .strip_prefix('D')
                .and_then(|t| t.strip_suffix(']'))
                .and_then(|t| t.split_once('['))
                .ok_or_else(|| err("expected Dk[j]*m"))?;
            let point: usize = point.parse().map_err(|_| err("bad point index"))?;
            let component: usize = comp.parse().map_err(|_| err("bad component index"))?;
            let multiplicity: u32 = mult.trim().parse().map_err(|_| err("bad multiplicity"))?;
            if point == 0 || component == 0 || multiplicity == 0 {
                return Err(err("indices and multiplicities start at 1"));
            }
            curve.hits.push(Hit { point: point - 1, component, multiplicity });
        }
        Ok(curve)
    }
}

/// `alpha = m_C K_S^2` from the first equation.
pub fn equation_one(curve: &CurveHypothesis, chains: &[Chain]) -> Result<Rational> {
    curve.validate(chains)?;
    let mut alpha = int(curve.kc);
    let mut profiles = BTreeMap::new();
    for ((point, component), mult) in curve.merged_hits() {
        if !profiles.contains_key(&point) {
            profiles.insert(point, uv_profile(&chains[point])?);
        }
        alpha += &profiles[&point].coefficients[component - 1] * int(mult as i64);
    }
    Ok(alpha)
}

/// `beta = m_C^2 K_S^2` from the second equation.
pub fn equation_two(curve: &CurveHypothesis, chains: &[Chain]) -> Result<Rational> {
    curve.validate(chains)?;
    let mut per_point: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
    for ((point, component), mult) in curve.merged_hits() {
        per_point.entry(point).or_default().push((component, mult));
    }
    let mut beta = int(curve.c2);
    for (point, hits) in per_point {
        if hits.len() > 2 {
            return Err(Error::Eq2Inapplicable { singularity: point + 1 });
        }
        let inv = chains[point].invariants()?;
        let term = |j: usize| &inv.v[j - 1] * &inv.u[j - 1];
        let (s, ms) = hits[0];
        let ms = BigInt::from(ms);
        let mut numer = term(s) * &ms * &ms;
        if let Some(&(t, mt)) = hits.get(1) {
            let mt = BigInt::from(mt);
            numer += term(t) * &mt * &mt;
            numer += &inv.v[t - 1] * &inv.u[s - 1] * 2 * &ms * &mt;
        }
        beta += Rational::new(numer, inv.q.clone());
    }
    Ok(beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Classification {
    KAmple,
    NumericallyTrivial,
    MinusKAmple,
    Inconsistent,
    Undetermined,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::KAmple => "K ample",
            Classification::NumericallyTrivial => "numerically trivial",
            Classification::MinusKAmple => "-K ample",
            Classification::Inconsistent => "inconsistent",
            Classification::Undetermined => "undetermined",
        }
    }

    fn from_sign(s: i8) -> Self {
        match s {
            1 => Classification::KAmple,
            -1 => Classification::MinusKAmple,
            _ => Classification::NumericallyTrivial,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What is known about `K_S^2` before applying the equations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum KnownKSquared {
    /// Solve for `m` and `K^2` from `(alpha, beta)`.
    #[default]
    Unknown,
    /// Only the sign is known (`K` or `-K` assumed ample).
    Positive,
    /// Fixed by the basket; both equations become constraints.
    Value(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InferenceOptions {
    pub k_squared: KnownKSquared,
    /// `3 e_orb`, when the basket is known.
    pub bmy_bound: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferenceResult {
    pub alpha: Rational,
    /// `None` when the second equation does not apply.
    pub beta: Option<Rational>,
    pub m: Option<Rational>,
    pub k_squared: Option<Rational>,
    pub classification: Classification,
    pub infeasible_for_log_general_type: bool,
}

fn opt_string(r: &Option<Rational>) -> String {
    r.as_ref().map_or_else(|| "undetermined".to_string(), ToString::to_string)
}

impl InferenceResult {
    /// `(alpha, beta, m, K^2)` as exact strings or `"undetermined"`.
    pub fn fields(&self) -> [String; 4] {
        [
            self.alpha.to_string(),
            opt_string(&self.beta),
            opt_string(&self.m),
            opt_string(&self.k_squared),
        ]
    }
}

pub fn infer_from_curve(
    curve: &CurveHypothesis,
    chains: &[Chain],
    options: &InferenceOptions,
) -> Result<InferenceResult> {
    use Classification::*;

    let alpha = equation_one(curve, chains)?;
    let beta = match equation_two(curve, chains) {
        Ok(b) => Some(b),
        Err(Error::Eq2Inapplicable { .. }) => None,
        Err(e) => return Err(e),
    };

    let (m, k_squared, classification) = match (&options.k_squared, &beta) {
        (KnownKSquared::Value(k), _) if k.is_zero() => {
            let trivial = alpha.is_zero() && beta.as_ref().is_none_or(Zero::is_zero);
            (None, Some(k.clone()), if trivial { Undetermined } else { Inconsistent })
        }
        (KnownKSquared::Value(k), _) => {
            let m = &alpha / k;
            let consistent = beta.as_ref().is_none_or(|b| *b == &m * &m * k);
            let class = if !consistent || m.is_zero() || k.is_negative() {
                Inconsistent
            } else {
                Classification::from_sign(sign(&m))
            };
            (Some(m), Some(k.clone()), class)
        }
        (known, Some(b)) => match (alpha.is_zero(), b.is_zero()) {
            (false, false) => {
                let m = b / &alpha;
                let k2 = &alpha * &alpha / b;
                let class = if k2.is_negative() { Inconsistent } else { Classification::from_sign(sign(&m)) };
                (Some(m), Some(k2), class)
            }
            (true, true) if *known == KnownKSquared::Unknown => {
                (Some(Rational::zero()), None, NumericallyTrivial)
            }
            _ => (None, None, Inconsistent),
        },
        (KnownKSquared::Positive, None) => {
            let class = if alpha.is_zero() { Inconsistent } else { Classification::from_sign(sign(&alpha)) };
            (None, None, class)
        }
        (KnownKSquared::Unknown, None) => (None, None, Undetermined),
    };

    let gate_fails = k_squared.as_ref().is_some_and(|k| {
        !k.is_positive() || options.bmy_bound.as_ref().is_some_and(|bound| k > bound)
    });
    let infeasible_for_log_general_type =
        matches!(classification, MinusKAmple | NumericallyTrivial | Inconsistent) || gate_fails;

    Ok(InferenceResult { alpha, beta, m, k_squared, classification, infeasible_for_log_general_type })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCase {
    pub j: usize,
    pub k: usize,
    pub sum: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairScan {
    pub chain: Chain,
    /// Every multiset `{j, k}`, `j <= k`, in lexicographic order.
    pub cases: Vec<PairCase>,
    /// Largest sum over two distinct components, the only admissible shape
    /// for a `(-1)`-curve meeting the chain twice at different points.
    pub max_distinct: PairCase,
    /// Largest sum including tangential double hits on one component.
    pub max_any: PairCase,
    pub all_below_one: bool,
}

/// Coefficient sums `c_j + c_k` over all ways a curve can meet `chain` with
/// total multiplicity two.
pub fn pair_scan(chain: &Chain) -> Result<PairScan> {
    let c = uv_profile(chain)?.coefficients;
    let l = c.len();
    let mut cases = Vec::new();
    for j in 1..=l {
        for k in j..=l {
            cases.push(PairCase { j, k, sum: &c[j - 1] + &c[k - 1] });
        }
    }
    let best = |it: &mut dyn Iterator<Item = &PairCase>| {
        it.fold(None::<&PairCase>, |acc, p| match acc {
            Some(a) if a.sum >= p.sum => Some(a),
            _ => Some(p),
        })
        .cloned()
    };
    let max_any = best(&mut cases.iter()).ok_or(Error::EmptyChain)?;
    let max_distinct = best(&mut cases.iter().filter(|p| p.j < p.k)).unwrap_or_else(|| max_any.clone());
    let all_below_one = cases.iter().all(|p| p.sum < rat(1, 1));
    Ok(PairScan { chain: chain.clone(), cases, max_distinct, max_any, all_below_one })
}

/// The pair scan on the `1/19(1,9)` chain `[3,2,2,2,2,2,2,2,2]`.
pub fn pair_scan_23719() -> PairScan {
    let chain = Chain::new(alloc::vec![3, 2, 2, 2, 2, 2, 2, 2, 2]).expect("valid chain");
    pair_scan(&chain).expect("nonempty chain")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn chain(w: &[u32]) -> Chain {
        Chain::new(w.to_vec()).unwrap()
    }

    fn t19() -> Chain {
        chain(&[3, 2, 2, 2, 2, 2, 2, 2, 2])
    }

    #[test]
    fn equation_one_examples() {
        let chains = [chain(&[2]), chain(&[2, 2])];
        let e = CurveHypothesis::minus_one("E").hit(0, 1, 1).hit(1, 2, 1);
        assert_eq!(equation_one(&e, &chains).unwrap(), rat(-1, 1));

        let e = CurveHypothesis::minus_one("E").hit(0, 1, 1).hit(0, 9, 1);
        assert_eq!(equation_one(&e, &[t19()]).unwrap(), rat(-9, 19));

        let c = CurveHypothesis::rational("C", -2).with_kc(0);
        assert_eq!(equation_one(&c, &[]).unwrap(), rat(0, 1));
    }

    #[test]
    fn equation_one_index_errors() {
        let e = CurveHypothesis::minus_one("E").hit(0, 10, 1);
        assert_eq!(
            equation_one(&e, &[t19()]),
            Err(Error::IndexOutOfRange { singularity: 1, component: 10 })
        );
        let e = CurveHypothesis::minus_one("E").hit(3, 1, 1);
        assert!(equation_one(&e, &[t19()]).is_err());
    }

    #[test]
    fn equation_two_examples() {
        let ch = chain(&[2, 3, 2, 3]);
        let inv = ch.invariants().unwrap();
        let e = CurveHypothesis::minus_one("E").hit(0, 1, 1).hit(0, 4, 1);
        assert_eq!(equation_two(&e, &[ch.clone()]).unwrap(), inv.end_ratio() - rat(1, 1));

        let e = CurveHypothesis::minus_one("E").hit(0, 1, 2);
        assert_eq!(
            equation_two(&e, &[ch.clone()]).unwrap(),
            Rational::new(inv.q1.clone() * 4, inv.q.clone()) - rat(1, 1)
        );

        let c = CurveHypothesis::rational("C", 0).with_kc(0);
        assert_eq!(equation_two(&c, &[]).unwrap(), rat(0, 1));

        let e = CurveHypothesis::minus_one("E").hit(0, 1, 1).hit(0, 2, 1).hit(0, 3, 1);
        assert_eq!(equation_two(&e, &[ch]), Err(Error::Eq2Inapplicable { singularity: 1 }));
    }

    #[test]
    fn cycle_pattern_is_never_k_ample() {
        let ch = chain(&[2, 3, 2, 3]);
        let e = CurveHypothesis::minus_one("E").hit(0, 1, 1).hit(0, 4, 1);
        let r = infer_from_curve(&e, &[ch], &InferenceOptions::default()).unwrap();
        assert_eq!(r.m, Some(rat(-1, 1)));
        assert_eq!(r.classification, Classification::MinusKAmple);
        assert!(r.infeasible_for_log_general_type);

        // [5]: (q1 + ql + 2)/q = 4/5 < 1 forces K^2 < 0
        let e = CurveHypothesis::minus_one("E").hit(0, 1, 2);
        let r = infer_from_curve(&e, &[chain(&[5])], &InferenceOptions::default()).unwrap();
        assert_ne!(r.classification, Classification::KAmple);
    }

    #[test]
    fn rdp_case_n3() {
        // bar chain [3,2]: q = 5, q1 = 2
        let c = CurveHypothesis::rational("C", 1).with_kc(-1).hit(0, 1, 1);
        let r = infer_from_curve(&c, &[chain(&[3, 2])], &InferenceOptions::default()).unwrap();
        assert_eq!(r.m, Some(rat(-7, 3)));
        assert_eq!(r.k_squared, Some(rat(9, 35)));
        assert_eq!(r.classification, Classification::MinusKAmple);
    }

    #[test]
    fn rdp_case_n4() {
        let ch = chain(&[3, 2, 2]);
        let inv = ch.invariants().unwrap();
        let c = CurveHypothesis::rational("C", 0).with_kc(0).hit(0, 1, 1);
        let r = infer_from_curve(&c, &[ch], &InferenceOptions::default()).unwrap();
        let q = Rational::from_integer(inv.q.clone());
        let q1 = Rational::from_integer(inv.q1.clone());
        assert_eq!(r.alpha, rat(1, 1) - (&q1 + rat(1, 1)) / &q);
        assert_eq!(r.beta, Some(&q1 / &q));
        assert_eq!(r.m, Some(&q1 / (&q - &q1 - rat(1, 1))));
        assert_eq!(r.classification, Classification::KAmple);
    }

    #[test]
    fn known_k_squared_checks_both_equations() {
        let ch = chain(&[3, 2]);
        let c = CurveHypothesis::rational("C", 1).with_kc(-1).hit(0, 1, 1);
        let opts = InferenceOptions { k_squared: KnownKSquared::Value(rat(9, 35)), bmy_bound: None };
        let r = infer_from_curve(&c, &[ch.clone()], &opts).unwrap();
        assert_eq!(r.classification, Classification::MinusKAmple);
        assert_eq!(r.m, Some(rat(-7, 3)));

        let opts = InferenceOptions { k_squared: KnownKSquared::Value(rat(1, 2)), bmy_bound: None };
        let r = infer_from_curve(&c, &[ch], &opts).unwrap();
        assert_eq!(r.classification, Classification::Inconsistent);
    }

    #[test]
    fn positive_k_squared_uses_sign_of_alpha() {
        // three components hit: only the first equation applies
        let e = CurveHypothesis::minus_one("E").hit(0, 1, 1).hit(0, 5, 1).hit(0, 9, 1);
        let opts = InferenceOptions { k_squared: KnownKSquared::Positive, bmy_bound: None };
        let r = infer_from_curve(&e, &[t19()], &opts).unwrap();
        assert_eq!(r.beta, None);
        assert_eq!(r.classification, Classification::MinusKAmple);
        let r = infer_from_curve(&e, &[t19()], &InferenceOptions::default()).unwrap();
        assert_eq!(r.classification, Classification::Undetermined);
        assert_eq!(r.fields()[1], "undetermined");
    }

    #[test]
    fn degenerate_branches() {
        let c = CurveHypothesis::rational("C", 0).with_kc(0);
        let r = infer_from_curve(&c, &[], &InferenceOptions::default()).unwrap();
        assert_eq!(r.classification, Classification::NumericallyTrivial);
        assert_eq!(r.m, Some(rat(0, 1)));

        let c = CurveHypothesis::rational("C", 1).with_kc(0);
        let r = infer_from_curve(&c, &[], &InferenceOptions::default()).unwrap();
        assert_eq!(r.classification, Classification::Inconsistent);
    }

    #[test]
    fn bmy_bound_flags_infeasible() {
        let ch = chain(&[3, 2, 2]);
        let c = CurveHypothesis::rational("C", 0).with_kc(0).hit(0, 1, 1);
        let opts = InferenceOptions { k_squared: KnownKSquared::Unknown, bmy_bound: Some(rat(1, 100)) };
        let r = infer_from_curve(&c, &[ch], &opts).unwrap();
        assert_eq!(r.classification, Classification::KAmple);
        assert!(r.infeasible_for_log_general_type);
    }

    #[test]
    fn pair_scan_examples() {
        let scan = pair_scan_23719();
        assert_eq!(scan.cases.len(), 45);
        assert_eq!((scan.max_distinct.j, scan.max_distinct.k), (1, 2));
        assert_eq!(scan.max_distinct.sum, rat(17, 19));
        assert_eq!(scan.max_any.sum, rat(18, 19));
        assert!(scan.all_below_one);
        let last = scan.cases.iter().find(|p| (p.j, p.k) == (8, 9)).unwrap();
        assert_eq!(last.sum, rat(3, 19));
    }

    #[test]
    fn string_form() {
        let e: CurveHypothesis = "E(-1): D4[1]*1, D4[9]*1".parse().unwrap();
        assert_eq!((e.kc, e.c2), (-1, -1));
        assert_eq!(e.hits, vec![Hit { point: 3, component: 1, multiplicity: 1 }, Hit {
            point: 3,
            component: 9,
            multiplicity: 1
        }]);
        assert_eq!(e.to_string(), "E(-1): D4[1]*1, D4[9]*1");
        let c: CurveHypothesis = "C(1,-1): D1[1]".parse().unwrap();
        assert_eq!((c.kc, c.c2, c.hits[0].multiplicity), (-1, 1, 1));
        assert_eq!(c.to_string(), "C(1,-1): D1[1]*1");
        assert_eq!("C(0):".parse::<CurveHypothesis>().unwrap().hits, vec![]);
        assert!("E: D1[1]".parse::<CurveHypothesis>().is_err());
        assert!("E(-1): D0[1]".parse::<CurveHypothesis>().is_err());
    }
}
