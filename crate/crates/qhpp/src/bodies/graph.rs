//! Blow-ups, contractions and cascades.

use qhpp_core::graph::{
    cascade_search, cascade_toy, classify_state, contraction_identities, ed_base, ed_ge_2_branches, CurveKind,
    MarkedResolution,
};
use qhpp_core::Chain;

use super::{all_chains, yes};
use crate::campaign::Params;
use crate::report::Record;
use crate::Error;

pub fn contraction(p: &Params) -> Result<Vec<Record>, Error> {
    let mut out = Vec::new();
    for text in ["[2,2,2]", "[2,3]", "[2,4,3,2]"] {
        let r = contraction_identities(&text.parse::<Chain>()?)?;
        out.push(
            Record::new(text)
                .group("example")
                .value("q", &r.q)
                .value("q1", &r.q1)
                .value("ql", &r.ql)
                .value("bar q", &r.bar_q)
                .value("bar q1", &r.bar_q1)
                .value("bar ql", &r.bar_ql)
                .value("difference", &r.difference)
                .value("lhs", &r.lhs)
                .value("rhs", &r.rhs)
                .value("holds", yes(r.holds())),
        );
    }
    for l in 2..=p.bound() as usize {
        let (mut count, mut holds, mut zero_iff_rdp) = (0u64, true, true);
        for chain in all_chains(l, l, p.get("max_weight") as u32)?.into_iter().filter(|c| c.weights()[0] == 2) {
            let r = contraction_identities(&chain)?;
            holds &= r.q1_identity && r.ql_identity && r.q_identity && r.lhs == r.rhs;
            zero_iff_rdp &= num_traits::Zero::is_zero(&r.difference) == chain.is_rdp();
            count += 1;
        }
        out.push(
            Record::new(format!("l={l}"))
                .group("length")
                .value("chains", count)
                .value("identities hold", yes(holds))
                .value("difference=0 iff all weights 2", yes(zero_iff_rdp)),
        );
    }
    Ok(out)
}

pub fn ed_ge_2(_: &Params) -> Result<Vec<Record>, Error> {
    let base = ed_base();
    let mut out = vec![Record::new("base")
        .value("chains", base.qhpp_check().chain_count())
        .value("valid", yes(base.qhpp_check().is_valid()))];
    for o in ed_ge_2_branches()? {
        let violations: Vec<String> = o.verdict.violations.iter().map(ToString::to_string).collect();
        out.push(
            Record::new(o.branch.id())
                .group("branch")
                .value("chains", o.verdict.chain_count())
                .value("picard", o.after.picard_rank())
                .value("violations", violations.join("; "))
                .value("exceeds four", yes(o.verdict.chain_count() > 4))
                .value("valid", yes(o.verdict.is_valid())),
        );
    }
    Ok(out)
}

fn path_record(item: &str, state: &MarkedResolution, depth: usize) -> Result<Record, Error> {
    let rec = Record::new(item).value("initial class", classify_state(state));
    Ok(match cascade_search(state, depth)? {
        Some(path) => rec
            .value("path", format!("[{}]", path.labels().join(",")))
            .value("terminal class", path.terminal_class)
            .value("terminal picard", path.terminal_state.picard_rank()),
        None => rec.value("path", "none"),
    })
}

pub fn cascade_demo(_: &Params) -> Result<Vec<Record>, Error> {
    let (s0, s1) = cascade_toy();
    let mut out = Vec::new();
    out.push(path_record("toy S0", &s0, 3)?);
    let mut rec = path_record("toy S1", &s1, 3)?;
    let inverted = cascade_search(&s1, 3)?.is_some_and(|p| p.terminal_state == s0);
    rec = rec.value("terminal equals S0", yes(inverted));
    out.push(rec);

    // A (-1)-curve meeting three chains: no admissible contraction.
    let mut s = ed_base();
    s.add_curve("E", -1, CurveKind::Extra)?;
    for d in ["a1", "c1", "d1"] {
        s.set_intersection("E", d, 1)?;
    }
    out.push(path_record("E.D=3", &s, 3)?);
    Ok(out)
}
