//! Bounded enumeration of Hirzebruch-Jung chains in canonical order:
//! by length, then lexicographically by weights.

use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::hj::{Chain, CyclicSingularity};
use crate::surface::{bmy_gate, Basket};
use crate::{Error, Result};

/// Filter on the basket obtained by adding each chain to `partial`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BmyWindow {
    pub partial: Basket,
    /// Only chains with `q >= min_order` are kept.
    pub min_order: Option<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChainConstraints {
    pub min_length: usize,
    pub max_length: Option<usize>,
    pub max_weight: Option<u32>,
    /// `tr = 3l - k` for the given `k`.
    pub tr_offset: Option<i64>,
    pub window: Option<BmyWindow>,
}

impl ChainConstraints {
    pub fn lengths(min: usize, max: usize) -> Self {
        ChainConstraints { min_length: min, max_length: Some(max), ..Default::default() }
    }

    pub fn max_weight(mut self, w: u32) -> Self {
        self.max_weight = Some(w);
        self
    }

    pub fn tr_offset(mut self, k: i64) -> Self {
        self.tr_offset = Some(k);
        self
    }

    pub fn window(mut self, partial: Basket, min_order: Option<BigInt>) -> Self {
        self.window = Some(BmyWindow { partial, min_order });
        self
    }

    fn accepts(&self, chain: &Chain) -> bool {
        if let Some(k) = self.tr_offset {
            if chain.trace() as i64 != 3 * chain.len() as i64 - k {
                return false;
            }
        }
        if let Some(window) = &self.window {
            if let Some(min) = &window.min_order {
                if chain.continuant() < *min {
                    return false;
                }
            }
            let Ok(point) = CyclicSingularity::from_chain(chain.clone()) else {
                return false;
            };
            let Ok(basket) = window.partial.with(point) else {
                return false;
            };
            if !bmy_gate(&basket).passes() {
                return false;
            }
        }
        true
    }
}

/// Chains satisfying a constraint set, in canonical order.
pub fn enumerate_chains(constraints: &ChainConstraints) -> Result<ChainStream> {
    let max_length = constraints.max_length.ok_or(Error::Unbounded("maximum chain length"))?;
    // A trace relation `tr = 3l - k` caps every weight at `l + 2 - k`.
    let implied = constraints.tr_offset.map(|k| (max_length as i64 + 2 - k).max(2) as u32);
    let max_weight = match (constraints.max_weight, implied) {
        (Some(w), Some(t)) => w.min(t),
        (Some(w), None) | (None, Some(w)) => w,
        (None, None) => return Err(Error::Unbounded("maximum chain weight")),
    };
    if max_weight < 2 {
        return Err(Error::InvalidWeight { index: 0, weight: max_weight as i64 });
    }
    Ok(ChainStream {
        constraints: constraints.clone(),
        max_length,
        max_weight,
        current: None,
        length: constraints.min_length,
    })
}

#[derive(Debug, Clone)]
pub struct ChainStream {
    constraints: ChainConstraints,
    max_length: usize,
    max_weight: u32,
    current: Option<Vec<u32>>,
    length: usize,
}

impl ChainStream {
    /// Required `tr - 2l` for the current length under a trace relation.
    fn target_excess(&self) -> Option<i64> {
        self.constraints.tr_offset.map(|k| self.length as i64 - k)
    }

    /// Sets `w[from..]` to the smallest weights (lexicographically) with the
    /// given total excess over 2, filling from the right.
    fn fill_tail(&self, w: &mut [u32], from: usize, mut excess: i64) -> bool {
        let cap = i64::from(self.max_weight - 2);
        for x in w[from..].iter_mut().rev() {
            let take = excess.min(cap);
            *x = 2 + take as u32;
            excess -= take;
        }
        excess == 0
    }

    /// Next weight vector in odometer order, moving to the next length when
    /// the current one is exhausted. Under a trace relation only vectors of
    /// the right trace are visited.
    fn advance(&mut self) -> Option<Vec<u32>> {
        loop {
            if self.length > self.max_length {
                return None;
            }
            let target = self.target_excess();
            match self.current.take() {
                None => {
                    let mut start = alloc::vec![2; self.length];
                    let feasible = match target {
                        Some(e) => e >= 0 && self.fill_tail(&mut start, 0, e),
                        None => true,
                    };
                    if feasible {
                        self.current = Some(start.clone());
                        return Some(start);
                    }
                    self.length += 1;
                }
                Some(mut w) => {
                    let mut i = w.len();
                    let mut suffix = 0i64;
                    while i > 0 {
                        i -= 1;
                        if w[i] < self.max_weight && (target.is_none() || suffix >= 1) {
                            w[i] += 1;
                            let rest = if target.is_some() { suffix - 1 } else { 0 };
                            self.fill_tail(&mut w, i + 1, rest);
                            self.current = Some(w.clone());
                            return Some(w);
                        }
                        suffix += i64::from(w[i] - 2);
                    }
                    self.length += 1;
                }
            }
        }
    }
}

impl Iterator for ChainStream {
    type Item = Chain;

    fn next(&mut self) -> Option<Chain> {
        while let Some(w) = self.advance() {
            let chain = Chain::new(w).expect("odometer weights are >= 2");
            if self.constraints.accepts(&chain) {
                return Some(chain);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_one() {
        let chains: Vec<Chain> =
            enumerate_chains(&ChainConstraints::lengths(1, 1).max_weight(5)).unwrap().collect();
        let expected: Vec<Chain> = (2..=5).map(|w| Chain::new(vec![w]).unwrap()).collect();
        assert_eq!(chains, expected);
    }

    #[test]
    fn empty_chain_is_emitted_for_length_zero() {
        let chains: Vec<Chain> =
            enumerate_chains(&ChainConstraints::lengths(0, 0).max_weight(3)).unwrap().collect();
        assert_eq!(chains, vec![Chain::default()]);
    }

    #[test]
    fn tr_relation() {
        let c = ChainConstraints::lengths(4, 4).max_weight(5).tr_offset(2);
        let chains: Vec<Chain> = enumerate_chains(&c).unwrap().collect();
        assert!(chains.contains(&"[2,3,2,3]".parse().unwrap()));
        assert!(chains.iter().all(|ch| ch.trace() == 10));
        // sum of (n_i - 2) = 2 over 4 slots: 4 ways to put a 4, 6 ways for two 3s
        assert_eq!(chains.len(), 10);
    }

    #[test]
    fn tr_relation_matches_filtered_odometer() {
        for k in [2, 3, 5, 8] {
            let fast: Vec<Chain> =
                enumerate_chains(&ChainConstraints::lengths(1, 7).max_weight(6).tr_offset(k)).unwrap().collect();
            let slow: Vec<Chain> = enumerate_chains(&ChainConstraints::lengths(1, 7).max_weight(6))
                .unwrap()
                .filter(|c| c.trace() as i64 == 3 * c.len() as i64 - k)
                .collect();
            assert_eq!(fast, slow, "k = {k}");
        }
    }

    #[test]
    fn canonical_order_and_count() {
        let chains: Vec<Chain> =
            enumerate_chains(&ChainConstraints::lengths(1, 3).max_weight(3)).unwrap().collect();
        assert_eq!(chains.len(), 2 + 4 + 8);
        let mut sorted = chains.clone();
        sorted.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.weights().cmp(b.weights())));
        assert_eq!(chains, sorted);
    }

    #[test]
    fn rejects_unbounded() {
        let c = ChainConstraints { max_length: Some(3), ..Default::default() };
        assert!(matches!(enumerate_chains(&c), Err(Error::Unbounded(_))));
        let c = ChainConstraints { max_weight: Some(3), ..Default::default() };
        assert!(matches!(enumerate_chains(&c), Err(Error::Unbounded(_))));
    }

    #[test]
    fn bmy_window_recovers_known_types() {
        let partial: Basket = "A1 + 1/3(1,1) + 1/5(1,2)".parse().unwrap();
        let c = ChainConstraints::lengths(7, 7)
            .max_weight(5)
            .window(partial, Some(BigInt::from(20)));
        let chains: Vec<Chain> = enumerate_chains(&c).unwrap().collect();
        for (q, a) in [(22, 7), (33, 13), (43, 19)] {
            let s = CyclicSingularity::from_type(q, a).unwrap();
            assert!(
                chains.iter().any(|ch| ch == s.chain() || *ch == s.chain().reversed()),
                "missing 1/{q}(1,{a})"
            );
        }
    }
}
