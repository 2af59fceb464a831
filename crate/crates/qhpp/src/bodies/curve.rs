//! The curve-detecting formula.

use qhpp_core::curve::{
    equation_one, equation_two, infer_from_curve, pair_scan_23719, Classification, CurveHypothesis,
    InferenceOptions,
};
use qhpp_core::rational::from_big;
use qhpp_core::surface::square_obstruction;
use qhpp_core::{Basket, Chain, Rational};

use super::{all_chains, yes};
use crate::campaign::Params;
use crate::report::Record;
use crate::Error;

fn beta_string(curve: &CurveHypothesis, chains: &[Chain]) -> Result<String, Error> {
    match equation_two(curve, chains) {
        Ok(b) => Ok(b.to_string()),
        Err(qhpp_core::Error::Eq2Inapplicable { .. }) => Ok("eq2_inapplicable".into()),
        Err(e) => Err(e.into()),
    }
}

pub fn curve_examples(_: &Params) -> Result<Vec<Record>, Error> {
    let cases = [
        ("A1 + A2", "E(-1): D1[1]*1, D2[2]*1"),
        ("A1 + A2 + 1/7(1,1) + 1/19(1,9)", "E(-1): D4[1]*1, D4[9]*1"),
        ("A1", "C(0,0):"),
        ("[2,3,2,3]", "E(-1): D1[1]*1, D1[4]*1"),
        ("[2,3,2,3]", "E(-1): D1[1]*2"),
        ("[3,2,2]", "E(-1): D1[1]*1, D1[2]*1, D1[3]*1"),
    ];
    let mut out = Vec::new();
    for (basket, curve) in cases {
        let chains = basket.parse::<Basket>()?.chains();
        let c: CurveHypothesis = curve.parse()?;
        let res = infer_from_curve(&c, &chains, &InferenceOptions::default())?;
        let [alpha, _, m, k2] = res.fields();
        out.push(
            Record::new(format!("{basket} | {c}"))
                .value("alpha", alpha)
                .value("beta", beta_string(&c, &chains)?)
                .value("m", m)
                .value("K2", k2)
                .value("class", res.classification),
        );
    }
    Ok(out)
}

pub fn end_end(p: &Params) -> Result<Vec<Record>, Error> {
    let (max_len, max_weight) = (p.bound() as usize, p.get("max_weight") as u32);
    let mut out = Vec::new();
    for l in 1..=max_len {
        let (mut count, mut formula, mut k_ample) = (0u64, true, 0u64);
        for chain in all_chains(l, l, max_weight)? {
            let e = if l == 1 {
                CurveHypothesis::minus_one("E").hit(0, 1, 2)
            } else {
                CurveHypothesis::minus_one("E").hit(0, 1, 1).hit(0, l, 1)
            };
            let res = infer_from_curve(&e, std::slice::from_ref(&chain), &InferenceOptions::default())?;
            let expected = Rational::from_integer(1.into()) - chain.invariants()?.end_ratio();
            formula &= res.alpha == expected && res.beta == Some(-expected.clone());
            k_ample += u64::from(res.classification == Classification::KAmple);
            count += 1;
        }
        out.push(
            Record::new(format!("l={l}"))
                .group("length")
                .value("chains", count)
                .value("alpha=-beta=1-(q1+ql+2)/q", yes(formula))
                .value("K ample", k_ample),
        );
    }
    Ok(out)
}

/// The curve `C` of the `n_1 = 3` case, meeting the first component once.
fn n3_curve() -> CurveHypothesis {
    CurveHypothesis::rational("C", 1).with_kc(-1).hit(0, 1, 1)
}

/// The `0`-curve of the `n_1 = 4` case.
fn n4_curve() -> CurveHypothesis {
    CurveHypothesis::rational("C", 0).with_kc(0).hit(0, 1, 1)
}

pub fn rdp_case_n3(p: &Params) -> Result<Vec<Record>, Error> {
    let mut out = Vec::new();
    let chain: Chain = "[3,2]".parse()?;
    let res = infer_from_curve(&n3_curve(), std::slice::from_ref(&chain), &InferenceOptions::default())?;
    let inv = chain.invariants()?;
    out.push(
        Record::new("[3,2]")
            .value("m", res.fields()[2].clone())
            .value("K2", res.fields()[3].clone())
            .value("class", res.classification)
            .value("30(q1+q)", from_big(&((&inv.q1 + &inv.q) * 30)))
            .value("square obstruction", yes(square_obstruction(&inv.q, &inv.q1))),
    );
    for l in 1..=p.bound() as usize {
        let (mut count, mut formula, mut squares) = (0u64, true, 0u64);
        for chain in all_chains(l, l, p.get("max_weight") as u32)?.into_iter().filter(|c| c.weights()[0] == 3) {
            let inv = chain.invariants()?;
            let (q, q1) = (from_big(&inv.q), from_big(&inv.q1));
            let one = Rational::from_integer(1.into());
            let res = infer_from_curve(&n3_curve(), std::slice::from_ref(&chain), &InferenceOptions::default())?;
            formula &= res.m == Some(-(&q + &q1) / (&q1 + &one))
                && res.k_squared == Some((&q1 + &one) * (&q1 + &one) / (&q * (&q1 + &q)))
                && res.classification == Classification::MinusKAmple;
            squares += u64::from(!square_obstruction(&inv.q, &inv.q1));
            count += 1;
        }
        out.push(
            Record::new(format!("l={l}"))
                .group("length")
                .value("chains", count)
                .value("symbolic m and K2", yes(formula))
                .value("30(q1+q) square", squares),
        );
    }
    Ok(out)
}

pub fn rdp_case_n4(p: &Params) -> Result<Vec<Record>, Error> {
    let mut out = Vec::new();
    for l in 1..=p.bound() as usize {
        let (mut count, mut formula) = (0u64, true);
        for chain in all_chains(l, l, p.get("max_weight") as u32)?.into_iter().filter(|c| c.weights()[0] == 4) {
            let inv = chain.invariants()?;
            let (q, q1) = (from_big(&inv.q), from_big(&inv.q1));
            let one = Rational::from_integer(1.into());
            let chains = std::slice::from_ref(&chain);
            let alpha = equation_one(&n4_curve(), chains)?;
            let beta = equation_two(&n4_curve(), chains)?;
            let res = infer_from_curve(&n4_curve(), chains, &InferenceOptions::default())?;
            formula &= alpha == &one - (&q1 + &one) / &q
                && beta == &q1 / &q
                && res.m == Some(&q1 / (&q - &q1 - &one));
            count += 1;
        }
        out.push(
            Record::new(format!("l={l}"))
                .group("length")
                .value("chains", count)
                .value("m=q1/(q-q1-1)", yes(formula)),
        );
    }
    Ok(out)
}

pub fn pair_scan(_: &Params) -> Result<Vec<Record>, Error> {
    let scan = pair_scan_23719();
    let mut out: Vec<Record> = scan
        .cases
        .iter()
        .map(|c| {
            Record::new(format!("({},{})", c.j, c.k))
                .group("pair")
                .value("sum", &c.sum)
                .value("below one", yes(c.sum < Rational::from_integer(1.into())))
        })
        .collect();
    out.push(
        Record::new("maximum")
            .value("distinct", format!("({},{}) {}", scan.max_distinct.j, scan.max_distinct.k, scan.max_distinct.sum))
            .value("any", format!("({},{}) {}", scan.max_any.j, scan.max_any.k, scan.max_any.sum))
            .value("all below one", yes(scan.all_below_one)),
    );
    Ok(out)
}
