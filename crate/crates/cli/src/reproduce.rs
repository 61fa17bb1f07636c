//! Every reference example, recomputed and compared exactly.

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde_json::json;
use unitforge::arith::{int, is_perfect_square, rat, squarefree_part};
use unitforge::biquad::{biquad_sqrt, prop65_admissible, prop65_family};
use unitforge::classes::{example53_family, example54_family};
use unitforge::expr::parse_elem;
use unitforge::lattice::{GramLattice, SearchLimit};
use unitforge::quad::{delta, fundamental_unit, pell_report, quad_sqrt};
use unitforge::{BiquadElem, BiquadField, FieldElement, QuadField, Result};

use crate::scenario::{CliResult, Scenario};

type Example = (String, Box<dyn Fn() -> Result<(bool, String)>>);

fn quad(d: i128) -> Result<QuadField> {
    QuadField::new(d)
}

fn k37() -> Result<BiquadField> {
    BiquadField::new(3, 7)
}

/// `eps_1 = 2 + sqrt 3`, `eps_2 = 8 + 3 sqrt 7`, `eps_3 = (5 + sqrt 21)/2`
/// inside `Q(sqrt 3, sqrt 7)`.
fn biquad_units() -> Result<[BiquadElem; 3]> {
    let f = k37()?;
    Ok([
        f.embed(&quad(3)?.elem(int(2), int(1)), 1),
        f.embed(&quad(7)?.elem(int(8), int(3)), 2),
        f.embed(&quad(21)?.elem(rat(5, 2), rat(1, 2)), 3),
    ])
}

fn sqrt_example(e: BiquadElem, want: &str) -> Result<(bool, String)> {
    let want = parse_elem(&k37()?, want)?;
    let got = biquad_sqrt(&e);
    let ok = got.as_ref().is_some_and(|r| *r == want || *r == -want.clone()) && want.clone() * want.clone() == e;
    Ok((ok, got.map_or("none".into(), |r| r.to_string())))
}

fn examples() -> Vec<Example> {
    let mut v: Vec<Example> = Vec::new();
    v.push((
        "squarefree part of 18".into(),
        Box::new(|| {
            let s = squarefree_part(&BigInt::from(18))?;
            Ok((s.s == 2.into() && s.r == 3.into(), format!("({}, {})", s.s, s.r)))
        }),
    ));
    v.push((
        "2*1 + 1 is not a square".into(),
        Box::new(|| Ok((!is_perfect_square(&BigInt::from(3)), "3".into()))),
    ));
    v.push((
        "norm of 2 + sqrt(3)".into(),
        Box::new(|| {
            let n = quad(3)?.elem(int(2), int(1)).norm();
            Ok((n == int(1), n.to_string()))
        }),
    ));
    v.push((
        "(5 + sqrt(21))/2 is totally positive".into(),
        Box::new(|| {
            let tp = quad(21)?.elem(rat(5, 2), rat(1, 2)).is_totally_positive();
            Ok((tp, tp.to_string()))
        }),
    ));
    v.push((
        "Q(sqrt(3)) has a totally positive unit".into(),
        Box::new(|| {
            let r = pell_report(quad(3)?);
            Ok((r.tp_unit_exists && r.has_p3mod4_divisor, format!("{r:?}")))
        }),
    ));
    for (d, eps, dl) in [(3, "2 + sqrt(3)", 6), (7, "8 + 3*sqrt(7)", 2), (21, "(5 + sqrt(21))/2", 7)] {
        v.push((
            format!("fundamental unit of Q(sqrt({d}))"),
            Box::new(move || {
                let k = quad(d)?;
                let got = fundamental_unit(k);
                Ok((got == parse_elem(&k, eps)?, got.to_string()))
            }),
        ));
        v.push((
            format!("delta of Q(sqrt({d}))"),
            Box::new(move || {
                let got = delta(quad(d)?)?;
                Ok((got == BigInt::from(dl), got.to_string()))
            }),
        ));
    }
    v.push((
        "2 + sqrt(3) is not a square".into(),
        Box::new(|| {
            let r = quad_sqrt(&quad(3)?.elem(int(2), int(1)));
            Ok((r.is_none(), format!("{r:?}")))
        }),
    ));
    v.push((
        "sqrt(eps_1 eps_2)".into(),
        Box::new(|| {
            let [e1, e2, _] = biquad_units()?;
            sqrt_example(e1 * e2, "(3 + 3*sqrt(3) + sqrt(7) + sqrt(21))/2")
        }),
    ));
    v.push((
        "sqrt(eps_3)".into(),
        Box::new(|| {
            let [_, _, e3] = biquad_units()?;
            sqrt_example(e3, "(sqrt(3) + sqrt(7))/2")
        }),
    ));
    v.push((
        "sqrt(eps_1 eps_2 eps_3) has mixed signs".into(),
        Box::new(|| {
            let [e1, e2, e3] = biquad_units()?;
            let (ok, detail) = sqrt_example(e1 * e2 * e3, "(8 + 5*sqrt(3) + 3*sqrt(7) + 2*sqrt(21))/2")?;
            let r = parse_elem(&k37()?, "(8 + 5*sqrt(3) + 3*sqrt(7) + 2*sqrt(21))/2")?;
            let signs = r.embedding_signs();
            let mixed = signs.contains(&Ordering::Greater) && signs.contains(&Ordering::Less);
            Ok((ok && mixed, detail))
        }),
    ));
    v.push((
        "first unit of the 2n + sqrt(4n^2 - 1) family".into(),
        Box::new(|| {
            let fam = example53_family(1)?;
            let m = &fam.members[0];
            let ok = m.n == 1.into() && m.eps == quad(3)?.elem(int(2), int(1)) && m.class == 6.into();
            Ok((ok, format!("n = {}, eps = {}, class {}", m.n, m.eps, m.class)))
        }),
    ));
    v.push((
        "Q(sqrt(21)) from the primes 3, 7".into(),
        Box::new(|| {
            let fam = example54_family(&[3, 7])?;
            let m = &fam.members[0];
            Ok((m.field.d() == 21 && m.delta == 7.into(), format!("delta = {}", m.delta)))
        }),
    ));
    v.push((
        "three squares over Q(sqrt(5)) represent (5 + sqrt(5))/2".into(),
        Box::new(|| {
            let k = quad(5)?;
            let l = GramLattice::identity(k, 3);
            let beta = k.elem(rat(5, 2), rat(1, 2));
            let x = l.represent(&beta, SearchLimit::Exhaustive)?;
            let ok = match &x {
                Some(x) => l.evaluate(x)? == beta,
                None => false,
            };
            Ok((ok, format!("{:?}", x.map(|x| x.iter().map(|c| c.to_string()).collect::<Vec<_>>()))))
        }),
    ));
    v.push((
        "relative norms of mu for the first 10 admissible n".into(),
        Box::new(|| {
            let ns = prop65_admissible(10);
            let mut ok = true;
            for &n in &ns {
                let inst = prop65_family(n)?;
                ok &= inst.checks.all();
            }
            Ok((ok, format!("{ns:?}")))
        }),
    ));
    v
}

pub fn reproduce_paper() -> CliResult {
    let mut s = Scenario::new();
    let mut results = Vec::new();
    for (name, run) in examples() {
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, e.to_string()),
        };
        s.check(name.clone(), ok);
        results.push(json!({ "example": name, "pass": ok, "value": detail }));
    }
    s.output("examples", results);
    Ok(s)
}
