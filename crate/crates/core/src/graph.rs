//! Marked dual graphs of resolutions and the blow-up / blow-down calculus.
//!
//! A [`MarkedResolution`] is a finite configuration of curves on a smooth
//! surface: an integer intersection matrix, a marking of which curves belong
//! to the exceptional divisor `D` of the minimal resolution, and the Picard
//! rank. Blow-ups and contractions update the matrix by the usual rules and
//! [`qhpp_check`](MarkedResolution::qhpp_check) tests whether the marked
//! curves can be the exceptional divisor of a rational Q-homology projective
//! plane.
//!
//! The text form used by [`Display`](fmt::Display) and [`FromStr`] is
//!
//! ```text
//! picard 3
//! D s -3 : f*1
//! X f 0 : s*1
//! ```
//!
//! one curve per line (`D` exceptional, `X` extra), neighbours with their
//! intersection numbers, plus optional `nonsnc <label>` lines.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::curve::{infer_from_curve, Classification, CurveHypothesis, InferenceOptions, InferenceResult, KnownKSquared};
use crate::hj::Chain;
use crate::rational::from_big;
use crate::surface::{k_squared, Basket};
use crate::{Error, Rational, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveKind {
    /// A component of the exceptional divisor `D`.
    Exceptional,
    Extra,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Curve {
    pub label: String,
    pub kind: CurveKind,
}

/// Where to blow up: a general point of one curve, or a point common to
/// every listed curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Location {
    Free(String),
    Point(Vec<String>),
}

impl Location {
    pub fn free(label: &str) -> Self {
        Location::Free(label.to_string())
    }

    pub fn point(labels: &[&str]) -> Self {
        Location::Point(labels.iter().map(|s| s.to_string()).collect())
    }

    fn labels(&self) -> Vec<&str> {
        match self {
            Location::Free(l) => vec![l.as_str()],
            Location::Point(ls) => ls.iter().map(String::as_str).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkedResolution {
    curves: Vec<Curve>,
    /// Symmetric; the diagonal holds self-intersections.
    matrix: Vec<Vec<i64>>,
    picard_rank: i64,
    /// Curves whose image acquired a node or tangency in a contraction.
    non_snc: Vec<String>,
}

impl MarkedResolution {
    pub fn new(picard_rank: i64) -> Self {
        MarkedResolution { curves: Vec::new(), matrix: Vec::new(), picard_rank, non_snc: Vec::new() }
    }

    pub fn picard_rank(&self) -> i64 {
        self.picard_rank
    }

    pub fn set_picard_rank(&mut self, rank: i64) {
        self.picard_rank = rank;
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn non_snc_markers(&self) -> &[String] {
        &self.non_snc
    }

    /// `K^2` of the smooth surface, `10 - rho` for a rational one.
    pub fn smooth_k_squared(&self) -> i64 {
        10 - self.picard_rank
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.curves
            .iter()
            .position(|c| c.label == label)
            .ok_or_else(|| Error::UnknownCurve(label.to_string()))
    }

    pub fn add_curve(&mut self, label: &str, self_intersection: i64, kind: CurveKind) -> Result<usize> {
        if self.index_of(label).is_ok() {
            return Err(Error::DuplicateCurve(label.to_string()));
        }
        for row in &mut self.matrix {
            row.push(0);
        }
        let n = self.curves.len();
        let mut row = vec![0; n + 1];
        row[n] = self_intersection;
        self.matrix.push(row);
        self.curves.push(Curve { label: label.to_string(), kind });
        Ok(n)
    }

    /// Adds `chain` as exceptional curves `{prefix}1 .. {prefix}l`, each
    /// meeting the next once.
    pub fn add_chain(&mut self, prefix: &str, chain: &Chain) -> Result<Vec<String>> {
        let labels: Vec<String> = (1..=chain.len()).map(|i| format!("{prefix}{i}")).collect();
        for (label, &w) in labels.iter().zip(chain.weights()) {
            self.add_curve(label, -(w as i64), CurveKind::Exceptional)?;
        }
        for pair in labels.windows(2) {
            self.set_intersection(&pair[0], &pair[1], 1)?;
        }
        Ok(labels)
    }

    pub fn set_intersection(&mut self, a: &str, b: &str, value: i64) -> Result<()> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        if i != j && value < 0 {
            return Err(Error::NegativeIntersection(a.to_string(), b.to_string()));
        }
        self.matrix[i][j] = value;
        self.matrix[j][i] = value;
        Ok(())
    }

    pub fn set_self_intersection(&mut self, label: &str, value: i64) -> Result<()> {
        self.set_intersection(label, label, value)
    }

    pub fn intersection(&self, a: &str, b: &str) -> Result<i64> {
        Ok(self.matrix[self.index_of(a)?][self.index_of(b)?])
    }

    pub fn self_intersection(&self, label: &str) -> Result<i64> {
        self.intersection(label, label)
    }

    pub fn kind(&self, label: &str) -> Result<CurveKind> {
        Ok(self.curves[self.index_of(label)?].kind)
    }

    pub fn mark(&mut self, label: &str, kind: CurveKind) -> Result<()> {
        let i = self.index_of(label)?;
        self.curves[i].kind = kind;
        Ok(())
    }

    pub fn mark_non_snc(&mut self, label: &str) -> Result<()> {
        self.index_of(label)?;
        if !self.non_snc.iter().any(|l| l == label) {
            self.non_snc.push(label.to_string());
        }
        Ok(())
    }

    /// `C.D`, summed over exceptional curves other than `C` itself.
    pub fn d_intersection(&self, label: &str) -> Result<i64> {
        let i = self.index_of(label)?;
        Ok(self
            .curves
            .iter()
            .enumerate()
            .filter(|&(j, c)| j != i && c.kind == CurveKind::Exceptional)
            .map(|(j, _)| self.matrix[i][j])
            .sum())
    }

    fn fresh_label(&self) -> String {
        (1..)
            .map(|n| format!("F{n}"))
            .find(|l| self.index_of(l).is_err())
            .expect("unbounded label supply")
    }

    /// Blows up `location`; the new `(-1)`-curve gets the first unused label
    /// of the form `F<n>`, which is returned alongside the new state.
    pub fn blow_up(&self, location: &Location) -> Result<(Self, String)> {
        let label = self.fresh_label();
        Ok((self.blow_up_labelled(location, &label)?, label))
    }

    pub fn blow_up_labelled(&self, location: &Location, new_label: &str) -> Result<Self> {
        let labels = location.labels();
        if labels.is_empty() {
            return Err(Error::EmptyLocation);
        }
        let mut idx = Vec::with_capacity(labels.len());
        for l in &labels {
            let i = self.index_of(l)?;
            if idx.contains(&i) {
                return Err(Error::DuplicateCurve(l.to_string()));
            }
            idx.push(i);
        }
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                if self.matrix[i][j] <= 0 {
                    return Err(Error::ZeroIntersection(
                        self.curves[i].label.clone(),
                        self.curves[j].label.clone(),
                    ));
                }
            }
        }
        let mut out = self.clone();
        let f = out.add_curve(new_label, -1, CurveKind::Extra)?;
        for (a, &i) in idx.iter().enumerate() {
            out.matrix[i][i] -= 1;
            out.matrix[i][f] = 1;
            out.matrix[f][i] = 1;
            for &j in &idx[a + 1..] {
                out.matrix[i][j] -= 1;
                out.matrix[j][i] -= 1;
            }
        }
        out.picard_rank += 1;
        Ok(out)
    }

    /// Contracts the `(-1)`-curve `label`.
    ///
    /// Exceptional curves whose image has weight below 2 leave `D`. A curve
    /// met at least twice by the contracted curve gets a non-snc marker.
    pub fn contract(&self, label: &str) -> Result<Self> {
        let e = self.index_of(label)?;
        if self.matrix[e][e] != -1 {
            return Err(Error::NotMinusOneCurve(label.to_string()));
        }
        let keep: Vec<usize> = (0..self.len()).filter(|&i| i != e).collect();
        let mut out = MarkedResolution::new(self.picard_rank - 1);
        out.non_snc = self.non_snc.iter().filter(|l| *l != label).cloned().collect();
        for &i in &keep {
            out.curves.push(self.curves[i].clone());
            out.matrix.push(
                keep.iter().map(|&j| self.matrix[i][j] + self.matrix[i][e] * self.matrix[j][e]).collect(),
            );
            if self.matrix[i][e] >= 2 {
                let l = self.curves[i].label.clone();
                if !out.non_snc.contains(&l) {
                    out.non_snc.push(l);
                }
            }
        }
        for i in 0..out.len() {
            if out.curves[i].kind == CurveKind::Exceptional && out.matrix[i][i] > -2 {
                out.curves[i].kind = CurveKind::Extra;
            }
        }
        Ok(out)
    }

    /// Validity as the minimal resolution of a rational Q-homology
    /// projective plane (at most four singular points).
    pub fn qhpp_check(&self) -> QhppVerdict {
        self.qhpp_check_with(4)
    }

    pub fn qhpp_check_with(&self, max_points: usize) -> QhppVerdict {
        let mut violations: Vec<Violation> =
            self.non_snc.iter().map(|l| Violation::NonSnc(l.clone())).collect();
        let exc: Vec<usize> =
            (0..self.len()).filter(|&i| self.curves[i].kind == CurveKind::Exceptional).collect();
        let label = |i: usize| self.curves[i].label.clone();

        for &i in &exc {
            if -self.matrix[i][i] < 2 {
                violations.push(Violation::WeightBelowTwo { label: label(i), weight: -self.matrix[i][i] });
            }
        }
        let mut adj: BTreeMap<usize, Vec<usize>> = exc.iter().map(|&i| (i, Vec::new())).collect();
        for (a, &i) in exc.iter().enumerate() {
            for &j in &exc[a + 1..] {
                let m = self.matrix[i][j];
                if m >= 2 {
                    violations.push(Violation::MultipleIntersection { a: label(i), b: label(j), value: m });
                }
                if m > 0 {
                    adj.get_mut(&i).unwrap().push(j);
                    adj.get_mut(&j).unwrap().push(i);
                }
            }
        }

        let mut seen = vec![false; self.len()];
        let mut chains = Vec::new();
        for &start in &exc {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < comp.len() {
                for &n in &adj[&comp[k]] {
                    if !seen[n] {
                        seen[n] = true;
                        comp.push(n);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            let edges: usize = comp.iter().map(|i| adj[i].len()).sum::<usize>() / 2;
            if let Some(&b) = comp.iter().find(|i| adj[*i].len() >= 3) {
                violations.push(Violation::Branching(label(b)));
                continue;
            }
            if edges >= comp.len() {
                violations.push(Violation::Cycle(label(comp[0])));
                continue;
            }
            let mut order = vec![*comp.iter().find(|i| adj[*i].len() <= 1).unwrap()];
            while order.len() < comp.len() {
                let last = *order.last().unwrap();
                let prev = order.len().checked_sub(2).map(|p| order[p]);
                let next = adj[&last].iter().copied().find(|&n| Some(n) != prev).unwrap();
                order.push(next);
            }
            let weights: Vec<i64> = order.iter().map(|&i| -self.matrix[i][i]).collect();
            chains.push(MarkedChain {
                labels: order.iter().map(|&i| label(i)).collect(),
                chain: Chain::from_i64(&weights).ok(),
            });
        }

        if chains.len() > max_points {
            violations.push(Violation::TooManyChains { count: chains.len(), max: max_points });
        }
        let expected = 1 + exc.len() as i64;
        if self.picard_rank != expected {
            violations.push(Violation::PicardMismatch { picard: self.picard_rank, expected });
        }
        QhppVerdict { chains, violations }
    }

    /// The basket read off a valid state.
    pub fn basket(&self) -> Result<Basket> {
        let verdict = self.qhpp_check();
        if let Some(v) = verdict.violations.first() {
            return Err(Error::NotQhpp(v.to_string()));
        }
        let chains: Vec<Chain> = verdict.chains.into_iter().filter_map(|c| c.chain).collect();
        Basket::from_chains(&chains)
    }

    /// Exceptional label -> (0-based chain, 1-based component).
    fn chain_positions(chains: &[MarkedChain]) -> BTreeMap<&str, (usize, usize)> {
        let mut pos = BTreeMap::new();
        for (p, c) in chains.iter().enumerate() {
            for (j, l) in c.labels.iter().enumerate() {
                pos.insert(l.as_str(), (p, j + 1));
            }
        }
        pos
    }

    /// Each extra curve as a smooth rational curve hypothesis
    /// (`C.K = -2 - C^2`) with its hits on the chains of `verdict`.
    pub fn extra_curve_hypotheses(&self, verdict: &QhppVerdict) -> Vec<CurveHypothesis> {
        let pos = Self::chain_positions(&verdict.chains);
        let mut out = Vec::new();
        for (i, c) in self.curves.iter().enumerate() {
            if c.kind != CurveKind::Extra {
                continue;
            }
            let mut h = CurveHypothesis::rational(&c.label, self.matrix[i][i]);
            for (j, d) in self.curves.iter().enumerate() {
                if let (Some(&(p, comp)), true) = (pos.get(d.label.as_str()), self.matrix[i][j] > 0) {
                    h = h.hit(p, comp, self.matrix[i][j] as u32);
                }
            }
            out.push(h);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkedChain {
    /// Labels from one end to the other.
    pub labels: Vec<String>,
    /// `None` when some weight is below 2.
    pub chain: Option<Chain>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Violation {
    NonSnc(String),
    WeightBelowTwo { label: String, weight: i64 },
    MultipleIntersection { a: String, b: String, value: i64 },
    Branching(String),
    Cycle(String),
    TooManyChains { count: usize, max: usize },
    PicardMismatch { picard: i64, expected: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonSnc(l) => write!(f, "not a simple-normal-crossing resolution at {l}"),
            Violation::WeightBelowTwo { label, weight } => {
                write!(f, "exceptional curve {label} has weight {weight} < 2")
            }
            Violation::MultipleIntersection { a, b, value } => {
                write!(f, "exceptional curves {a} and {b} meet {value} times")
            }
            Violation::Branching(l) => write!(f, "exceptional divisor branches at {l}"),
            Violation::Cycle(l) => write!(f, "exceptional divisor has a cycle through {l}"),
            Violation::TooManyChains { count, max } => write!(f, "{count} chains exceeds {max}"),
            Violation::PicardMismatch { picard, expected } => {
                write!(f, "picard rank {picard} differs from 1 + L = {expected}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QhppVerdict {
    pub chains: Vec<MarkedChain>,
    pub violations: Vec<Violation>,
}

impl QhppVerdict {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn chain_count(&self) -> usize {
        self.chains.len()
    }
}

impl fmt::Display for MarkedResolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "picard {}", self.picard_rank)?;
        for (i, c) in self.curves.iter().enumerate() {
            let tag = match c.kind {
                CurveKind::Exceptional => 'D',
                CurveKind::Extra => 'X',
            };
            write!(f, "{tag} {} {} :", c.label, self.matrix[i][i])?;
            for (j, d) in self.curves.iter().enumerate() {
                if i != j && self.matrix[i][j] != 0 {
                    write!(f, " {}*{}", d.label, self.matrix[i][j])?;
                }
            }
            writeln!(f)?;
        }
        for l in &self.non_snc {
            writeln!(f, "nonsnc {l}")?;
        }
        Ok(())
    }
}

impl FromStr for MarkedResolution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |line: &str, reason| Error::Parse { input: line.to_string(), reason };
        let mut picard = None;
        let mut state = MarkedResolution::new(0);
        let mut edges = Vec::new();
        let mut markers = Vec::new();
        for raw in s.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (head, tail) = line.split_once(':').unwrap_or((line, ""));
            let words: Vec<&str> = head.split_whitespace().collect();
            match words.as_slice() {
                ["picard", n] => picard = Some(n.parse().map_err(|_| err(line, "bad picard rank"))?),
                ["nonsnc", l] => markers.push(l.to_string()),
                [tag @ ("D" | "X"), label, selfint] => {
                    let kind = if *tag == "D" { CurveKind::Exceptional } else { CurveKind::Extra };
                    let c2 = selfint.parse().map_err(|_| err(line, "bad self-intersection"))?;
                    state.add_curve(label, c2, kind)?;
                    for item in tail.split_whitespace() {
                        let (other, m) = item.split_once('*').unwrap_or((item, "1"));
                        let m: i64 = m.parse().map_err(|_| err(line, "bad intersection number"))?;
                        edges.push((label.to_string(), other.to_string(), m));
                    }
                }
                _ => return Err(err(line, "expected `picard N`, `nonsnc L` or `D|X label C^2 : nbr*m ...`")),
            }
        }
        for (a, b, m) in edges {
            if a == b {
                return Err(err(&a, "a curve cannot list itself as a neighbour"));
            }
            let current = state.intersection(&a, &b)?;
            if current != 0 && current != m {
                return Err(err(&a, "asymmetric intersection numbers"));
            }
            state.set_intersection(&a, &b, m)?;
        }
        for l in markers {
            state.mark_non_snc(&l)?;
        }
        state.picard_rank = picard.ok_or_else(|| err(s, "missing `picard N` line"))?;
        Ok(state)
    }
}

/// The identities relating a chain `[2, n_2, ..., n_l]` to the chain
/// `[n_2, ..., n_l]` left after the first component becomes a `(-1)`-curve
/// and is contracted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionIdentities {
    pub chain: Chain,
    pub bar: Chain,
    pub q: BigInt,
    pub q1: BigInt,
    pub ql: BigInt,
    pub bar_q: BigInt,
    pub bar_q1: BigInt,
    pub bar_ql: BigInt,
    pub bar_q_inner: BigInt,
    /// `q_1 = bar q`.
    pub q1_identity: bool,
    /// `q_l = 2 bar q_l - bar q_{1,l}`.
    pub ql_identity: bool,
    /// `q = 2 bar q - bar q_1`.
    pub q_identity: bool,
    /// `(q_1+q_l+2)/q - (bar q_1 + bar q_l + 2)/bar q`.
    pub difference: Rational,
    /// `difference * bar q * (2 bar q - bar q_1)`.
    pub lhs: Rational,
    /// `(bar q - bar q_1 - 1)^2`.
    pub rhs: Rational,
    pub rdp: bool,
}

impl ContractionIdentities {
    pub fn holds(&self) -> bool {
        self.q1_identity
            && self.ql_identity
            && self.q_identity
            && self.lhs == self.rhs
            && self.difference.is_zero() == self.rdp
    }
}

pub fn contraction_identities(chain: &Chain) -> Result<ContractionIdentities> {
    if chain.len() < 2 {
        return Err(Error::ChainTooShort);
    }
    if chain.weights()[0] != 2 {
        return Err(Error::FirstWeightNotTwo);
    }
    let inv = chain.invariants()?;
    let bar = chain.without_first();
    let b = bar.invariants()?;
    let ratio = |q1: &BigInt, ql: &BigInt, q: &BigInt| Rational::new(q1 + ql + 2, q.clone());
    let difference = ratio(&inv.q1, &inv.ql, &inv.q) - ratio(&b.q1, &b.ql, &b.q);
    let lhs = &difference * from_big(&(&b.q * (&b.q * 2 - &b.q1)));
    let root: BigInt = &b.q - &b.q1 - 1;
    let rhs = from_big(&(&root * &root));
    Ok(ContractionIdentities {
        q1_identity: inv.q1 == b.q,
        ql_identity: inv.ql == &b.ql * 2 - &b.q_inner,
        q_identity: inv.q == &b.q * 2 - &b.q1,
        chain: chain.clone(),
        rdp: chain.is_rdp(),
        bar,
        q: inv.q,
        q1: inv.q1,
        ql: inv.ql,
        bar_q: b.q,
        bar_q1: b.q1,
        bar_ql: b.ql,
        bar_q_inner: b.q_inner,
        difference,
        lhs,
        rhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateClass {
    LogDelPezzo,
    LogGeneralType,
    NumericallyTrivial,
    /// Valid state, but no extra curve decides the sign of `K`.
    Undetermined,
    NotQhpp,
}

impl StateClass {
    pub fn as_str(self) -> &'static str {
        match self {
            StateClass::LogDelPezzo => "log del Pezzo",
            StateClass::LogGeneralType => "log general type",
            StateClass::NumericallyTrivial => "numerically trivial",
            StateClass::Undetermined => "undetermined",
            StateClass::NotQhpp => "not_qhpp",
        }
    }
}

impl fmt::Display for StateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Runs the curve formula on every extra curve with `K_S^2` fixed by the
/// basket. Fails when the state is not valid.
pub fn curve_inferences(state: &MarkedResolution) -> Result<Vec<(String, InferenceResult)>> {
    let verdict = state.qhpp_check();
    if let Some(v) = verdict.violations.first() {
        return Err(Error::NotQhpp(v.to_string()));
    }
    let chains: Vec<Chain> = verdict.chains.iter().filter_map(|c| c.chain.clone()).collect();
    let options = InferenceOptions {
        k_squared: KnownKSquared::Value(k_squared(&Basket::from_chains(&chains)?)),
        bmy_bound: None,
    };
    state
        .extra_curve_hypotheses(&verdict)
        .into_iter()
        .map(|h| Ok((h.label.clone(), infer_from_curve(&h, &chains, &options)?)))
        .collect()
}

/// Sign of `K_S` on a state. A single extra curve consistent with
/// `-K` ample decides log del Pezzo; curves that are inconsistent with
/// the basket are ignored.
pub fn classify_state(state: &MarkedResolution) -> StateClass {
    let Ok(basket) = state.basket() else {
        return StateClass::NotQhpp;
    };
    let k2 = k_squared(&basket);
    if k2.is_negative() {
        return StateClass::NotQhpp;
    }
    if k2.is_zero() {
        return StateClass::NumericallyTrivial;
    }
    let Ok(results) = curve_inferences(state) else {
        return StateClass::NotQhpp;
    };
    let has = |c| results.iter().any(|(_, r)| r.classification == c);
    if has(Classification::MinusKAmple) {
        StateClass::LogDelPezzo
    } else if has(Classification::KAmple) {
        StateClass::LogGeneralType
    } else {
        StateClass::Undetermined
    }
}

/// Extra `(-1)`-curves `E` with `E.D <= 2`, in curve order.
pub fn admissible_steps(state: &MarkedResolution) -> Vec<String> {
    state
        .curves
        .iter()
        .enumerate()
        .filter(|&(i, c)| c.kind == CurveKind::Extra && state.matrix[i][i] == -1)
        .filter(|(_, c)| state.d_intersection(&c.label).is_ok_and(|d| d <= 2))
        .map(|(_, c)| c.label.clone())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CascadeStep {
    pub contracted: String,
    pub picard_rank: i64,
    pub class: StateClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CascadePath {
    pub initial_class: StateClass,
    pub steps: Vec<CascadeStep>,
    pub terminal_state: MarkedResolution,
    pub terminal_class: StateClass,
}

impl CascadePath {
    pub fn labels(&self) -> Vec<&str> {
        self.steps.iter().map(|s| s.contracted.as_str()).collect()
    }
}

/// Depth-first search for contractions ending in a log del Pezzo state.
/// Returns the first path in canonical order, or `None`.
pub fn cascade_search(state: &MarkedResolution, max_depth: usize) -> Result<Option<CascadePath>> {
    if let Some(v) = state.qhpp_check().violations.first() {
        return Err(Error::NotQhpp(v.to_string()));
    }
    let initial_class = classify_state(state);
    let mut steps = Vec::new();
    Ok(search(state, initial_class, max_depth, &mut steps).map(|(terminal_state, terminal_class)| {
        CascadePath { initial_class, steps, terminal_state, terminal_class }
    }))
}

fn search(
    state: &MarkedResolution,
    class: StateClass,
    depth: usize,
    steps: &mut Vec<CascadeStep>,
) -> Option<(MarkedResolution, StateClass)> {
    if class == StateClass::LogDelPezzo {
        return Some((state.clone(), class));
    }
    if depth == 0 {
        return None;
    }
    for label in admissible_steps(state) {
        let Ok(next) = state.contract(&label) else { continue };
        if !next.qhpp_check().is_valid() {
            continue;
        }
        let next_class = classify_state(&next);
        steps.push(CascadeStep { contracted: label, picard_rank: next.picard_rank, class: next_class });
        if let Some(found) = search(&next, next_class, depth - 1, steps) {
            return Some(found);
        }
        steps.pop();
    }
    None
}

/// A two-step toy for the search: `S_0` carries a `(-3)`-curve `s`, a fiber
/// `f` through it and a `(-1)`-curve `C` on `f`; `S_1` blows up `f` and `C`
/// at their common point and adds the proper transform of `C` to `D`.
/// The graphs are combinatorial and are not claimed to come from surfaces.
pub fn cascade_toy() -> (MarkedResolution, MarkedResolution) {
    let mut s0 = MarkedResolution::new(2);
    s0.add_curve("s", -3, CurveKind::Exceptional).unwrap();
    s0.add_curve("f", 0, CurveKind::Extra).unwrap();
    s0.add_curve("C", -1, CurveKind::Extra).unwrap();
    s0.set_intersection("s", "f", 1).unwrap();
    s0.set_intersection("f", "C", 1).unwrap();
    let mut s1 = s0.blow_up_labelled(&Location::point(&["f", "C"]), "F").unwrap();
    s1.mark("C", CurveKind::Exceptional).unwrap();
    (s0, s1)
}

/// How a `(-1)`-curve `E` with `E.D <= 2` meets `D`, for the argument that
/// every such curve has `E.D = 2` at two distinct points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdBranch {
    /// `E.D = 1`.
    SingleHit,
    /// `E.D = 2` at a point where two components of `D` meet.
    ThroughNode,
    /// `E` tangent to one component of `D`.
    Tangent,
}

impl EdBranch {
    pub const ALL: [EdBranch; 3] = [EdBranch::SingleHit, EdBranch::ThroughNode, EdBranch::Tangent];

    pub fn id(self) -> &'static str {
        match self {
            EdBranch::SingleHit => "single_hit",
            EdBranch::ThroughNode => "through_node",
            EdBranch::Tangent => "tangent",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdOutcome {
    pub branch: EdBranch,
    pub before: MarkedResolution,
    pub after: MarkedResolution,
    pub verdict: QhppVerdict,
}

/// Minimal resolution graph of the basket `A1 + A2 + 1/7(1,1) + 1/19(1,9)`.
pub fn ed_base() -> MarkedResolution {
    let mut s = MarkedResolution::new(14);
    for (prefix, w) in [("a", vec![2]), ("b", vec![2, 2]), ("c", vec![7]), ("d", vec![3, 2, 2, 2, 2, 2, 2, 2, 2])] {
        s.add_chain(prefix, &Chain::new(w).unwrap()).unwrap();
    }
    s
}

/// Adds `E` to `base` in the given configuration, then blows up the bad
/// point (twice for a tangency) and adds every new `(-2)`- or lower curve
/// that is not the last exceptional curve of the blow-up to `D`.
pub fn ed_branch(base: &MarkedResolution, branch: EdBranch, target: &[&str]) -> Result<EdOutcome> {
    let mut before = base.clone();
    before.add_curve("E", -1, CurveKind::Extra)?;
    let mut after = match (branch, target) {
        (EdBranch::SingleHit, [d]) => {
            before.set_intersection("E", d, 1)?;
            before.blow_up_labelled(&Location::point(&["E", d]), "F")?
        }
        (EdBranch::ThroughNode, [d1, d2]) => {
            before.set_intersection("E", d1, 1)?;
            before.set_intersection("E", d2, 1)?;
            before.blow_up_labelled(&Location::point(&["E", d1, d2]), "F")?
        }
        (EdBranch::Tangent, [d]) => {
            before.set_intersection("E", d, 2)?;
            let once = before.blow_up_labelled(&Location::point(&["E", d]), "F")?;
            let mut twice = once.blow_up_labelled(&Location::point(&["E", d, "F"]), "G")?;
            twice.mark("F", CurveKind::Exceptional)?;
            twice
        }
        _ => return Err(Error::EmptyLocation),
    };
    after.mark("E", CurveKind::Exceptional)?;
    let verdict = after.qhpp_check();
    Ok(EdOutcome { branch, before, after, verdict })
}

/// The three branches on [`ed_base`] with `E` meeting the `1/19(1,9)` chain.
pub fn ed_ge_2_branches() -> Result<Vec<EdOutcome>> {
    let base = ed_base();
    Ok(vec![
        ed_branch(&base, EdBranch::SingleHit, &["d1"])?,
        ed_branch(&base, EdBranch::ThroughNode, &["d2", "d3"])?,
        ed_branch(&base, EdBranch::Tangent, &["d5"])?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn two_curves(a2: i64, b2: i64, ab: i64) -> MarkedResolution {
        let mut s = MarkedResolution::new(2);
        s.add_curve("A", a2, CurveKind::Extra).unwrap();
        s.add_curve("B", b2, CurveKind::Extra).unwrap();
        s.set_intersection("A", "B", ab).unwrap();
        s
    }

    #[test]
    fn blow_up_node() {
        let s = two_curves(-1, -2, 1);
        let (t, f) = s.blow_up(&Location::point(&["A", "B"])).unwrap();
        assert_eq!(f, "F1");
        assert_eq!(t.self_intersection("A").unwrap(), -2);
        assert_eq!(t.self_intersection("B").unwrap(), -3);
        assert_eq!(t.intersection("A", "B").unwrap(), 0);
        assert_eq!(t.intersection("A", "F1").unwrap(), 1);
        assert_eq!(t.intersection("B", "F1").unwrap(), 1);
        assert_eq!(t.picard_rank(), 3);
    }

    #[test]
    fn blow_up_free_and_tangent_points() {
        let s = two_curves(-1, -2, 2);
        let (t, f) = s.blow_up(&Location::free("B")).unwrap();
        assert_eq!(t.self_intersection("B").unwrap(), -3);
        assert_eq!(t.self_intersection(&f).unwrap(), -1);
        assert_eq!(t.intersection("A", &f).unwrap(), 0);

        let (t, _) = s.blow_up(&Location::point(&["A", "B"])).unwrap();
        assert_eq!(t.intersection("A", "B").unwrap(), 1);
        assert_eq!(t.self_intersection("A").unwrap(), -2);
        assert_eq!(t.self_intersection("B").unwrap(), -3);
    }

    #[test]
    fn blow_up_errors() {
        let s = two_curves(-1, -2, 0);
        assert_eq!(
            s.blow_up(&Location::point(&["A", "B"])),
            Err(Error::ZeroIntersection("A".into(), "B".into()))
        );
        assert_eq!(s.blow_up(&Location::Point(vec![])), Err(Error::EmptyLocation));
        assert!(matches!(s.blow_up(&Location::free("Z")), Err(Error::UnknownCurve(_))));
    }

    #[test]
    fn contraction_updates() {
        let mut s = MarkedResolution::new(3);
        s.add_curve("A", -3, CurveKind::Exceptional).unwrap();
        s.add_curve("B", -2, CurveKind::Exceptional).unwrap();
        s.add_curve("E", -1, CurveKind::Extra).unwrap();
        s.set_intersection("E", "A", 1).unwrap();
        s.set_intersection("E", "B", 1).unwrap();
        let t = s.contract("E").unwrap();
        assert_eq!(t.self_intersection("A").unwrap(), -2);
        assert_eq!(t.self_intersection("B").unwrap(), -1);
        assert_eq!(t.intersection("A", "B").unwrap(), 1);
        assert_eq!(t.kind("B").unwrap(), CurveKind::Extra);
        assert_eq!(t.picard_rank(), 2);
        assert_eq!(t.smooth_k_squared(), s.smooth_k_squared() + 1);
        assert_eq!(s.contract("A"), Err(Error::NotMinusOneCurve("A".into())));
    }

    #[test]
    fn iterated_contraction_of_chain() {
        let mut s = MarkedResolution::new(4);
        s.add_chain("D", &Chain::new(vec![2, 3]).unwrap()).unwrap();
        s.add_curve("E", -1, CurveKind::Extra).unwrap();
        s.set_intersection("E", "D1", 1).unwrap();
        let t = s.contract("E").unwrap().contract("D1").unwrap();
        let v = t.qhpp_check_with(4);
        assert_eq!(v.chains.len(), 1);
        assert_eq!(v.chains[0].chain, Some(Chain::new(vec![2]).unwrap()));
    }

    #[test]
    fn tangential_contraction_is_marked() {
        let mut s = MarkedResolution::new(2);
        s.add_curve("D1", -2, CurveKind::Exceptional).unwrap();
        s.add_curve("E", -1, CurveKind::Extra).unwrap();
        s.set_intersection("E", "D1", 2).unwrap();
        let t = s.contract("E").unwrap();
        assert_eq!(t.self_intersection("D1").unwrap(), 2);
        assert_eq!(t.non_snc_markers(), ["D1".to_string()]);
        assert!(t.qhpp_check().violations.contains(&Violation::NonSnc("D1".into())));
    }

    #[test]
    fn round_trip() {
        let mut s = MarkedResolution::new(3);
        s.add_chain("D", &Chain::new(vec![2, 4]).unwrap()).unwrap();
        s.add_curve("X", 1, CurveKind::Extra).unwrap();
        s.set_intersection("X", "D2", 3).unwrap();
        for loc in [Location::free("D1"), Location::point(&["D1", "D2"]), Location::point(&["X", "D2"])] {
            let (t, f) = s.blow_up(&loc).unwrap();
            assert_eq!(t.contract(&f).unwrap(), s);
        }
    }

    #[test]
    fn qhpp_checks() {
        let mut s = MarkedResolution::new(1);
        for (i, w) in [2u32, 3, 5, 7, 11].iter().enumerate() {
            s.add_chain(&format!("P{i}_"), &Chain::new(vec![*w]).unwrap()).unwrap();
        }
        s.set_picard_rank(6);
        let v = s.qhpp_check();
        assert_eq!(v.violations, vec![Violation::TooManyChains { count: 5, max: 4 }]);
        assert_eq!(v.violations[0].to_string(), "5 chains exceeds 4");

        let base = ed_base();
        assert!(base.qhpp_check().is_valid());
        assert_eq!(base.qhpp_check().chain_count(), 4);
        assert_eq!(base.basket().unwrap().to_string(), "A1 + A2 + 1/7(1,1) + 1/19(1,9)");
        let mut off = base.clone();
        off.set_picard_rank(13);
        assert_eq!(off.qhpp_check().violations, vec![Violation::PicardMismatch { picard: 13, expected: 14 }]);
    }

    #[test]
    fn qhpp_rejects_non_chains() {
        let mut s = MarkedResolution::new(5);
        for l in ["a", "b", "c", "d"] {
            s.add_curve(l, -2, CurveKind::Exceptional).unwrap();
        }
        for l in ["b", "c", "d"] {
            s.set_intersection("a", l, 1).unwrap();
        }
        assert_eq!(s.qhpp_check().violations, vec![Violation::Branching("a".into())]);
        s.set_intersection("a", "d", 0).unwrap();
        s.set_intersection("b", "c", 1).unwrap();
        assert!(s.qhpp_check().violations.contains(&Violation::Cycle("a".into())));
    }

    #[test]
    fn ed_branches() {
        let out = ed_ge_2_branches().unwrap();
        let counts: Vec<usize> = out.iter().map(|o| o.verdict.chain_count()).collect();
        assert_eq!(counts, vec![5, 6, 6]);
        for o in &out {
            assert!(o.before.qhpp_check().is_valid());
            assert!(!o.verdict.is_valid());
            assert!(o.verdict.violations.iter().all(|v| matches!(v, Violation::TooManyChains { .. })));
        }
    }

    #[test]
    fn contraction_identity_examples() {
        let r = contraction_identities(&Chain::new(vec![2, 3]).unwrap()).unwrap();
        assert_eq!((r.q.clone(), r.q1.clone(), r.ql.clone()), (5.into(), 3.into(), 2.into()));
        assert_eq!((r.bar_q.clone(), r.bar_q1.clone()), (3.into(), 1.into()));
        assert_eq!(r.difference, rat(1, 15));
        assert_eq!(r.lhs, rat(1, 1));
        assert!(r.holds());

        let r = contraction_identities(&Chain::a_n(3)).unwrap();
        assert!(r.difference.is_zero() && r.holds());
        assert!(contraction_identities(&Chain::new(vec![2, 4, 3, 2]).unwrap()).unwrap().holds());
        assert_eq!(contraction_identities(&Chain::new(vec![3, 2]).unwrap()), Err(Error::FirstWeightNotTwo));
        assert_eq!(contraction_identities(&Chain::a_n(1)), Err(Error::ChainTooShort));
    }

    #[test]
    fn classification_of_weighted_plane() {
        // P(1,2,3): A1 + A2 and one (-1)-curve through both
        let mut s = MarkedResolution::new(4);
        s.add_chain("a", &Chain::a_n(1)).unwrap();
        s.add_chain("b", &Chain::a_n(2)).unwrap();
        s.add_curve("E", -1, CurveKind::Extra).unwrap();
        s.set_intersection("E", "a1", 1).unwrap();
        s.set_intersection("E", "b1", 1).unwrap();
        let inf = curve_inferences(&s).unwrap();
        assert_eq!(inf[0].1.m, Some(rat(-1, 6)));
        assert_eq!(inf[0].1.k_squared, Some(rat(6, 1)));
        assert_eq!(classify_state(&s), StateClass::LogDelPezzo);
        let path = cascade_search(&s, 3).unwrap().unwrap();
        assert!(path.steps.is_empty());
        assert_eq!(path.terminal_class, StateClass::LogDelPezzo);
    }

    #[test]
    fn toy_cascade_is_inverted() {
        let (s0, s1) = cascade_toy();
        assert!(s0.qhpp_check().is_valid() && s1.qhpp_check().is_valid());
        assert_eq!(classify_state(&s0), StateClass::LogDelPezzo);
        assert_ne!(classify_state(&s1), StateClass::LogDelPezzo);
        assert_eq!(admissible_steps(&s1), vec!["f".to_string(), "F".to_string()]);
        let path = cascade_search(&s1, 2).unwrap().unwrap();
        assert_eq!(path.labels(), vec!["F"]);
        assert_eq!(path.terminal_state, s0);
        assert_eq!(path.steps[0].picard_rank + 1, s1.picard_rank());
    }

    #[test]
    fn no_admissible_step() {
        let mut s = MarkedResolution::new(4);
        for (l, w) in [("a", 2), ("b", 3), ("c", 5)] {
            s.add_curve(l, -w, CurveKind::Exceptional).unwrap();
        }
        s.add_curve("E", -1, CurveKind::Extra).unwrap();
        for l in ["a", "b", "c"] {
            s.set_intersection("E", l, 1).unwrap();
        }
        assert!(admissible_steps(&s).is_empty());
        let class = classify_state(&s);
        if class != StateClass::LogDelPezzo {
            assert_eq!(cascade_search(&s, 5).unwrap(), None);
        }
        let mut bad = s.clone();
        bad.set_picard_rank(2);
        assert!(matches!(cascade_search(&bad, 1), Err(Error::NotQhpp(_))));
    }

    #[test]
    fn text_round_trip() {
        let (_, s1) = cascade_toy();
        let text = s1.to_string();
        assert_eq!(text.parse::<MarkedResolution>().unwrap(), s1);
        let t = "picard 2\nD s -3 : f\nX f 0 # fiber\nnonsnc s\n".parse::<MarkedResolution>().unwrap();
        assert_eq!(t.intersection("s", "f").unwrap(), 1);
        assert_eq!(t.non_snc_markers(), ["s".to_string()]);
        assert!("D s -3\n".parse::<MarkedResolution>().is_err());
        assert!("picard 1\nD s -3 : s*1\n".parse::<MarkedResolution>().is_err());
    }
}
