//! Baskets: `K^2`, orbifold Euler number, the BMY gate and the scans.

use num_bigint::BigInt;
use qhpp_core::enumerate::{enumerate_chains, ChainConstraints};
use qhpp_core::rational::rat;
use qhpp_core::surface::{
    arithmetic_obstructions, bmy_bound, bmy_gate, gcd_with_30_is_one, invariants, k_squared_offset,
    pairwise_coprime, scan_corollary, OrderPattern, square_obstruction, ScanBounds, ScanCase, ScanOutcome,
};
use qhpp_core::{Basket, Chain, CyclicSingularity};

use super::yes;
use crate::campaign::Params;
use crate::report::Record;
use crate::Error;

pub fn basket_values(_: &Params) -> Result<Vec<Record>, Error> {
    let mut out = Vec::new();
    for text in ["", "A1 + 1/3(1,1) + 1/5(1,1) + A8", "A1 + 1/3(1,1) + A4 + [2,3,2,3]"] {
        let basket: Basket = if text.is_empty() { Basket::empty() } else { text.parse()? };
        let inv = invariants(&basket);
        let name = if text.is_empty() { "empty" } else { text };
        out.push(
            Record::new(name)
                .group("basket")
                .value("L", basket.total_length())
                .value("K2", &inv.k_squared)
                .value("e_orb", &inv.e_orb)
                .value("3e_orb", bmy_bound(&basket))
                .value("bmy", bmy_gate(&basket)),
        );
    }

    let orders = |v: &[u64]| v.iter().map(|&q| BigInt::from(q)).collect::<Vec<_>>();
    out.push(
        Record::new("orders (2,3,7,19)")
            .value("pairwise_coprime", yes(pairwise_coprime(&orders(&[2, 3, 7, 19])))),
    );
    out.push(Record::new("q=43").value("gcd(q,30)=1", yes(gcd_with_30_is_one(&BigInt::from(43)))));
    out.push(
        Record::new("(q,q1)=(5,2)")
            .value("30(q1+q)", 30 * 7)
            .value("obstruction", yes(square_obstruction(&BigInt::from(5), &BigInt::from(2)))),
    );
    let b: Basket = "A1 + A2 + 1/7(1,1) + 1/19(1,9)".parse()?;
    let report = arithmetic_obstructions(&b);
    out.push(
        Record::new(b.to_string())
            .value("pairwise_coprime", yes(report.pairwise_coprime))
            .value("pattern", match report.pattern {
                OrderPattern::Orders2_3_7_19 => "(2,3,7,19)".to_string(),
                OrderPattern::Orders2_3_5 { q, .. } => format!("(2,3,5,{q})"),
                OrderPattern::Other => "other".to_string(),
            }),
    );
    Ok(out)
}

/// `(third point, k, constant)` for `tr = 3l - k` and
/// `K^2 = constant + (q_1 + q_l + 2)/q`.
fn case_relations() -> [(&'static str, i64, (i64, i64)); 6] {
    [
        ("A4", 2, (-2, 3)),
        ("A4", 3, (-5, 3)),
        ("1/5(1,2)", 4, (-4, 15)),
        ("1/5(1,2)", 5, (-19, 15)),
        ("1/5(1,1)", 7, (-13, 15)),
        ("1/5(1,1)", 8, (-28, 15)),
    ]
}

pub fn k2_case_identities(p: &Params) -> Result<Vec<Record>, Error> {
    let max_len = p.bound() as usize;
    let mut out = Vec::new();
    for (third, k, (n, d)) in case_relations() {
        let point: CyclicSingularity = third.parse()?;
        let constant = rat(n, d);
        let (mut count, mut holds) = (0u64, true);
        let mut offsets = std::collections::BTreeSet::new();
        for chain in enumerate_chains(&ChainConstraints::lengths(1, max_len).tr_offset(k))? {
            for oriented in [chain.reversed(), chain] {
                let offset = k_squared_offset(&point, &oriented)?;
                holds &= offset == constant;
                offsets.insert(offset.to_string());
            }
            count += 1;
        }
        out.push(
            Record::new(format!("{third}, tr=3l-{k}"))
                .group("relation")
                .value("chains", count)
                .value("K2-(q1+ql+2)/q", offsets.into_iter().collect::<Vec<_>>().join(" "))
                .value("constant", &constant)
                .value("holds", yes(holds && count > 0)),
        );
    }
    Ok(out)
}

fn scan_records(outcome: &ScanOutcome, group_of: impl Fn(&[(&str, u64)]) -> String) -> Vec<Record> {
    let mut out: Vec<Record> = outcome
        .records
        .iter()
        .map(|r| {
            let mut rec = Record::new(format!("{} {}", outcome.case, r.params_string()))
                .group(group_of(&r.params))
                .value("K2", &r.k_squared)
                .value("bound", &r.bound)
                .value("verdict", r.verdict)
                .value("excluded", yes(r.verdict.excludes()));
            if let Some(poly) = &r.polynomial {
                rec = rec
                    .value("q", &poly.q)
                    .value("q1", &poly.q1)
                    .value("ql", &poly.ql)
                    .value("polynomials agree", yes(poly.agrees_with_continuant))
                    .value("(q1+ql+2)/q-1=4(b-1)(a+c-2)/q", yes(poly.end_ratio_identity));
            }
            rec
        })
        .collect();
    out.push(
        Record::new(format!("{} overall", outcome.case))
            .group("overall")
            .value("records", outcome.records.len())
            .value("nonexistence confirmed", yes(outcome.nonexistence_confirmed)),
    );
    out
}

pub fn l13(_: &Params) -> Result<Vec<Record>, Error> {
    let mut out = Vec::new();
    for case in [ScanCase::L13Sum10, ScanCase::L13Sum11] {
        let outcome = scan_corollary(case, &ScanBounds::default())?;
        out.extend(scan_records(&outcome, |_| case.id().to_string()));
    }
    Ok(out)
}

pub fn odd_chain(p: &Params) -> Result<Vec<Record>, Error> {
    let bounds = ScanBounds { odd_chain_l: (p.get("min_l"), p.bound()) };
    let outcome = scan_corollary(ScanCase::OddChain, &bounds)?;
    Ok(scan_records(&outcome, |params| {
        let l = params[0].1;
        match l {
            _ if l < 8 => "l<8",
            8 => "l=8",
            _ => "l>=9",
        }
        .to_string()
    }))
}

pub fn l11_window(_: &Params) -> Result<Vec<Record>, Error> {
    let partial: Basket = "A1 + 1/3(1,1) + 1/5(1,2)".parse()?;
    let constraints = ChainConstraints::lengths(7, 7).max_weight(5).window(partial, Some(BigInt::from(20)));
    let found: Vec<Chain> = enumerate_chains(&constraints)?.collect();
    let mut out = vec![Record::new("window")
        .value("chains", found.len())
        .value("emitted", found.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))];
    for t in ["1/22(1,7)", "1/33(1,13)", "1/43(1,19)"] {
        let s: CyclicSingularity = t.parse()?;
        let present = found.iter().any(|c| c == s.chain() || c.reversed() == *s.chain());
        out.push(Record::new(t).group("required").value("chain", s.chain()).value("emitted", yes(present)));
    }
    Ok(out)
}
