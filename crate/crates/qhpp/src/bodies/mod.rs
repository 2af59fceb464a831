//! Campaign bodies. Each returns plain records; expectations come from the
//! fixtures.

mod chains;
mod curve;
mod fiber;
mod graph;
mod surface;

use std::fmt::Display;

use qhpp_core::enumerate::{enumerate_chains, ChainConstraints};
use qhpp_core::Chain;

use crate::campaign::{BoundSpec, Campaign, ParamSpec};
use crate::report::Layout;
use crate::Error;

pub(crate) fn yes(b: bool) -> &'static str {
    if b { "true" } else { "false" }
}

pub(crate) fn list<T: Display>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

pub(crate) fn all_chains(min: usize, max: usize, max_weight: u32) -> Result<Vec<Chain>, Error> {
    Ok(enumerate_chains(&ChainConstraints::lengths(min, max).max_weight(max_weight))?.collect())
}

const fn length(default: u64, max: u64) -> Option<BoundSpec> {
    Some(BoundSpec { meaning: "maximum chain length", default, min: 1, max })
}

const MAX_WEIGHT: &[ParamSpec] =
    &[ParamSpec { key: "max_weight", default: 5, min: 2, max: 6, meaning: "largest chain weight" }];

const fn plain(id: &'static str, run: crate::campaign::Runner) -> Campaign {
    Campaign { id, bound: None, params: &[], layout: Layout::Rows, default_suite: true, run }
}

const fn bounded(id: &'static str, bound: Option<BoundSpec>, params: &'static [ParamSpec], run: crate::campaign::Runner) -> Campaign {
    Campaign { id, bound, params, layout: Layout::Rows, default_suite: true, run }
}

const FIBER_BOUND: Option<BoundSpec> =
    Some(BoundSpec { meaning: "maximum fiber components", default: 9, min: 2, max: 10 });

pub(crate) static ALL: &[Campaign] = &[
    Campaign { layout: Layout::Columns, ..plain("table1", chains::table1) },
    plain("hj-examples", chains::hj_examples),
    bounded("continuant-identities", length(8, 10), MAX_WEIGHT, chains::continuant_identities),
    bounded(
        "hj-roundtrip",
        Some(BoundSpec { meaning: "largest order q", default: 500, min: 2, max: 5000 }),
        &[],
        chains::hj_roundtrip,
    ),
    bounded("discrepancy", length(6, 8), MAX_WEIGHT, chains::discrepancy),
    plain("basket-values", surface::basket_values),
    bounded("k2-case-identities", length(10, 12), &[], surface::k2_case_identities),
    plain("L13", surface::l13),
    bounded(
        "odd-chain",
        Some(BoundSpec { meaning: "largest l", default: 100, min: 1, max: 10_000 }),
        &[ParamSpec { key: "min_l", default: 1, min: 1, max: 10_000, meaning: "smallest l" }],
        surface::odd_chain,
    ),
    plain("L11-window", surface::l11_window),
    plain("curve-examples", curve::curve_examples),
    bounded("end-end", length(8, 10), MAX_WEIGHT, curve::end_end),
    bounded("rdp-case-n3", length(6, 9), MAX_WEIGHT, curve::rdp_case_n3),
    bounded("rdp-case-n4", length(6, 9), MAX_WEIGHT, curve::rdp_case_n4),
    plain("pair-scan-23719", curve::pair_scan),
    bounded("contraction-identities", Some(BoundSpec { meaning: "maximum chain length", default: 8, min: 2, max: 10 }), MAX_WEIGHT, graph::contraction),
    plain("ed-ge-2", graph::ed_ge_2),
    plain("cascade-demo", graph::cascade_demo),
    bounded("fiber-enumeration", FIBER_BOUND, &[], fiber::enumeration),
    bounded("fiberD2", FIBER_BOUND, &[], fiber::order_three),
    bounded("fiberD3", FIBER_BOUND, &[], fiber::order_five),
];
