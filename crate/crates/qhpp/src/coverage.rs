//! Which campaign exercises which library operation.

use crate::campaign::campaigns;

/// `(module, operation, campaigns that call it)`.
pub const OPERATIONS: &[(&str, &str, &[&str])] = &[
    ("hj_core", "continuant", &["hj-examples", "continuant-identities"]),
    ("hj_core", "hj_expand", &["hj-examples", "hj-roundtrip"]),
    ("hj_core", "reverse_conjugate", &["hj-examples"]),
    ("hj_core", "uv_profile", &["table1", "hj-examples", "continuant-identities"]),
    ("hj_core", "discrepancies", &["hj-examples", "discrepancy"]),
    ("surface_model", "k_squared", &["basket-values", "k2-case-identities", "L13", "odd-chain"]),
    ("surface_model", "orbifold_euler", &["basket-values", "L13", "odd-chain"]),
    ("surface_model", "bmy_gate", &["basket-values", "L13", "odd-chain", "L11-window"]),
    ("surface_model", "arithmetic_obstructions", &["basket-values", "rdp-case-n3"]),
    ("surface_model", "scan_corollary", &["L13", "odd-chain"]),
    ("surface_model", "enumerate_chains", &["k2-case-identities", "L11-window", "continuant-identities"]),
    ("curve_calculus", "equation_one", &["curve-examples", "rdp-case-n4"]),
    ("curve_calculus", "equation_two", &["curve-examples", "rdp-case-n4"]),
    ("curve_calculus", "infer_from_curve", &["curve-examples", "end-end", "rdp-case-n3", "rdp-case-n4"]),
    ("curve_calculus", "pair_scan_23719", &["pair-scan-23719"]),
    ("blowdown_cascade", "blow_up", &["ed-ge-2", "cascade-demo"]),
    ("blowdown_cascade", "contract", &["cascade-demo"]),
    ("blowdown_cascade", "qhpp_check", &["ed-ge-2", "cascade-demo"]),
    ("blowdown_cascade", "contraction_identities", &["contraction-identities"]),
    ("blowdown_cascade", "cascade_search", &["cascade-demo"]),
    ("fibration_comb", "enumerate_fibers", &["fiber-enumeration", "fiberD2", "fiberD3"]),
    ("fibration_comb", "fibers_containing", &["fiberD2", "fiberD3"]),
    ("fibration_comb", "verify_fiber_lemmas", &["fiberD2", "fiberD3"]),
    ("verifier_cli", "run_campaign", &["*"]),
    ("verifier_cli", "emit_report", &["*"]),
];

/// Operations with no campaign, and campaign names in the table that do
/// not exist.
pub fn gaps() -> (Vec<&'static str>, Vec<&'static str>) {
    let unreached = OPERATIONS.iter().filter(|(_, _, c)| c.is_empty()).map(|(_, op, _)| *op).collect();
    let unknown = OPERATIONS
        .iter()
        .flat_map(|(_, _, c)| c.iter().copied())
        .filter(|id| *id != "*" && !campaigns().iter().any(|c| c.id == *id))
        .collect();
    (unreached, unknown)
}

/// The statement-to-campaign map followed by the operation map.
pub fn render() -> String {
    let mut out = String::from("campaigns:\n");
    for c in campaigns() {
        out.push_str(&format!("  {:<24} {}\n", c.id, c.statement()));
    }
    out.push_str("operations:\n");
    for (module, op, ids) in OPERATIONS {
        let reached = if ids.is_empty() { "UNREACHED".to_string() } else { ids.join(", ") };
        out.push_str(&format!("  {:<42} {reached}\n", format!("{module}::{op}")));
    }
    let (unreached, unknown) = gaps();
    out.push_str(&format!("unreached operations: {}\n", unreached.len()));
    if !unknown.is_empty() {
        out.push_str(&format!("unknown campaigns in map: {}\n", unknown.join(", ")));
    }
    out
}
