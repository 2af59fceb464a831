//! Continuants, Hirzebruch-Jung expansions and discrepancies.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use qhpp_core::hj::{continuant, discrepancies, hj_expand, intersection_matrix, reverse_conjugate, uv_profile};
use qhpp_core::surface::l13_polynomials;
use qhpp_core::{Chain, Rational};

use super::{all_chains, list, yes};
use crate::campaign::Params;
use crate::report::Record;
use crate::Error;

pub fn table1(_: &Params) -> Result<Vec<Record>, Error> {
    let chain: Chain = "[3,2,2,2,2,2,2,2,2]".parse()?;
    let p = uv_profile(&chain)?;
    Ok((0..chain.len())
        .map(|j| {
            Record::new((j + 1).to_string())
                .value("u_j", &p.u[j])
                .value("v_j", &p.v[j])
                .value("1-(v_j+u_j)/q", &p.coefficients[j])
        })
        .collect())
}

pub fn hj_examples(_: &Params) -> Result<Vec<Record>, Error> {
    let mut out = Vec::new();
    for w in [&[][..], &[2, 2], &[3, 2, 2, 2, 2, 2, 2, 2, 2], &[2, 2, 2, 2, 2, 2, 2]] {
        let c = Chain::from_i64(w)?;
        out.push(Record::new(format!("continuant {c}")).value("q", continuant(w)?));
    }
    let (q, _, _) = l13_polynomials(2, 2, 2);
    out.push(Record::new("polynomial q at (2,2,2)").value("q", q));

    for (q, a) in [(2, 1), (19, 9), (5, 2)] {
        let chain = hj_expand(&BigInt::from(q), &BigInt::from(a))?;
        let (tq, ta) = chain.singularity_type()?;
        out.push(
            Record::new(format!("hj_expand 1/{q}(1,{a})"))
                .value("chain", &chain)
                .value("round_trip", yes(tq == BigInt::from(q) && ta == BigInt::from(a))),
        );
    }

    for text in ["[3,2]", "[2,2]", "[3,2,2,2,2,2,2,2,2]"] {
        let chain: Chain = text.parse()?;
        let (_, a) = chain.singularity_type()?;
        let (rev, s) = reverse_conjugate(&chain)?;
        let product: BigInt = (&a * s.a()) % s.order();
        out.push(
            Record::new(format!("reverse {chain}"))
                .value("reversed", &rev)
                .value("type", &s)
                .value("a*a' mod q", product),
        );
    }

    for text in ["[2,2]", "[3,2]", "[3,2,2,2,2,2,2,2,2]"] {
        let chain: Chain = text.parse()?;
        let p = uv_profile(&chain)?;
        out.push(
            Record::new(format!("uv_profile {chain}"))
                .value("u", list(&p.u))
                .value("v", list(&p.v))
                .value("c", list(&p.coefficients)),
        );
    }

    for text in ["[2]", "[3]", "[3,2,2,2,2,2,2,2,2]"] {
        let chain: Chain = text.parse()?;
        let d = discrepancies(&chain)?;
        out.push(
            Record::new(format!("discrepancies {chain}"))
                .value("a", list(&d.coefficients))
                .value("d_squared", &d.d_squared),
        );
    }
    Ok(out)
}

pub fn continuant_identities(p: &Params) -> Result<Vec<Record>, Error> {
    let (max_len, max_weight) = (p.bound() as usize, p.get("max_weight") as u32);
    let mut out = Vec::new();
    for l in 1..=max_len {
        let (mut count, mut product, mut coprime, mut reversal, mut monotone, mut zeros) =
            (0u64, true, true, true, true, true);
        for chain in all_chains(l, l, max_weight)? {
            let inv = chain.invariants()?;
            let prof = uv_profile(&chain)?;
            count += 1;
            product &= &inv.q1 * &inv.ql - &inv.q * &inv.q_inner == BigInt::one();
            coprime &= inv.q.gcd(&inv.q1).is_one();
            reversal &= chain.reversed().continuant() == inv.q;
            monotone &= inv.u.windows(2).all(|x| x[0] < x[1]) && inv.v.windows(2).all(|x| x[0] > x[1]);
            zeros &= prof.coefficients.iter().all(Zero::is_zero) == chain.is_rdp();
        }
        out.push(
            Record::new(format!("l={l}"))
                .group("length")
                .value("chains", count)
                .value("q1*ql-q*q_inner=1", yes(product))
                .value("gcd(q,q1)=1", yes(coprime))
                .value("reversal", yes(reversal))
                .value("u,v strictly monotone", yes(monotone))
                .value("c=0 iff all weights 2", yes(zeros)),
        );
    }
    Ok(out)
}

pub fn hj_roundtrip(p: &Params) -> Result<Vec<Record>, Error> {
    let max_q = p.bound();
    let mut out = Vec::new();
    let mut start = 2;
    while start <= max_q {
        let end = (start / 100 * 100 + 99).min(max_q);
        let (mut types, mut ok) = (0u64, true);
        for q in start..=end {
            let qb = BigInt::from(q);
            for a in 1..q {
                let ab = BigInt::from(a);
                if !qb.gcd(&ab).is_one() {
                    continue;
                }
                types += 1;
                let chain = hj_expand(&qb, &ab)?;
                ok &= chain.singularity_type()? == (qb.clone(), ab);
            }
        }
        out.push(
            Record::new(format!("q={start}..{end}"))
                .group("block")
                .value("types", types)
                .value("round_trip", yes(ok)),
        );
        start = end + 1;
    }
    Ok(out)
}

pub fn discrepancy(p: &Params) -> Result<Vec<Record>, Error> {
    let (max_len, max_weight) = (p.bound() as usize, p.get("max_weight") as u32);
    let mut out = Vec::new();
    for l in 1..=max_len {
        let (mut count, mut agree, mut range, mut zeros) = (0u64, true, true, true);
        for chain in all_chains(l, l, max_weight)? {
            let d = discrepancies(&chain)?;
            let m = intersection_matrix(&chain);
            let mut quadratic = Rational::zero();
            for (i, row) in m.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    quadratic += &d.coefficients[i] * x * &d.coefficients[j];
                }
            }
            count += 1;
            agree &= quadratic == chain.invariants()?.closed_form_d_squared() && quadratic == d.d_squared;
            range &= d.coefficients.iter().all(|a| !a.is_negative() && *a < Rational::one());
            zeros &= d.d_squared.is_zero() == chain.is_rdp();
        }
        out.push(
            Record::new(format!("l={l}"))
                .group("length")
                .value("chains", count)
                .value("closed form = quadratic form", yes(agree))
                .value("0<=a_j<1", yes(range))
                .value("D^2=0 iff all weights 2", yes(zeros)),
        );
    }
    Ok(out)
}
