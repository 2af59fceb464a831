//! Singular fibers of P^1-fibrations.

use qhpp_core::fiber::{enumerate_fibers, is_order_three_chain_family, verify_fiber_lemmas, FiberLemmaCase, Shape};

use super::yes;
use crate::campaign::Params;
use crate::report::Record;
use crate::Error;

pub fn enumeration(p: &Params) -> Result<Vec<Record>, Error> {
    let bound = p.bound() as usize;
    let first = enumerate_fibers(bound)?;
    let second = enumerate_fibers(bound)?;
    let mut out = Vec::new();
    for n in 2..=bound {
        let a = first.with_components(n);
        let b = second.with_components(n);
        let stable = a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.canonical_key() == y.canonical_key());
        let numerical = a.iter().all(|f| f.f_squared() == 0 && f.k_dot_f() == -2 && f.is_numerically_fiber());
        let lonely = a.iter().all(|f| {
            let e = f.minus_one_curves();
            !e.is_empty() && (e.len() > 1 || f.components()[e[0]].multiplicity >= 2)
        });
        let degree = a.iter().all(|f| f.minus_one_curves().iter().all(|&e| f.neighbors(e).len() <= 2));
        out.push(
            Record::new(format!("n={n}"))
                .group("size")
                .value("fibers", a.len())
                .value("stable", yes(stable))
                .value("F^2=0, K.F=-2, F.C=0", yes(numerical))
                .value("single (-1)-curve has multiplicity >= 2", yes(lonely))
                .value("(-1)-curves meet <= 2 components", yes(degree)),
        );
    }
    Ok(out)
}

fn case_records(case: &FiberLemmaCase) -> Vec<Record> {
    let label = format!("{} | {}", case.fragment, case.budget.name());
    let shapes: Vec<&str> = case.shapes().into_iter().map(Shape::id).collect();
    let mut out = vec![Record::new(label.clone())
        .group(if case.expected.is_some() { "checked" } else { "reported" })
        .value("fibers", case.found.len())
        .value("shapes", if shapes.is_empty() { "none".to_string() } else { shapes.join(" ") })
        .value("missing", case.missing().len())
        .value("extra", case.extra().len())
        .value("outside blow-up family", case.outside_chain_family().len())
        .value("passes", yes(case.passes()))];
    for (i, a) in case.found.iter().enumerate() {
        out.push(
            Record::new(format!("{label} #{}", i + 1))
                .group("fiber")
                .value("fiber", a)
                .value("shape", Shape::of(&a.config).id())
                .value("hits", a.hits_string())
                .value("in blow-up family", yes(is_order_three_chain_family(&a.config))),
        );
    }
    out
}

fn lemma_records(p: &Params, order: &str) -> Result<Vec<Record>, Error> {
    let report = verify_fiber_lemmas(p.bound() as usize)?;
    Ok(report
        .cases
        .iter()
        .filter(|c| c.id == order)
        .flat_map(case_records)
        .collect())
}

pub fn order_three(p: &Params) -> Result<Vec<Record>, Error> {
    lemma_records(p, "order3")
}

pub fn order_five(p: &Params) -> Result<Vec<Record>, Error> {
    lemma_records(p, "order5")
}
