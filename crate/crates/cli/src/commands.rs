use std::cmp::Ordering;
use std::path::Path;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use unitforge::arith::gf2::brute_force_express;
use unitforge::arith::{int, rat, squarefree_part, SquareClassVector};
use unitforge::biquad::{self, cor63_test, prop65_admissible, prop65_family};
use unitforge::classes::{
    example53_certificate, example53_family, example54_family, greedy_disjoint_select, is_square_in,
    primes_3_mod_4, theorem72_certificate, verify_certificate_json, ClassCertificate, FamilyCandidate,
    MultiquadDescriptor,
};
use unitforge::expr::{parse_elem, parse_elem_list, parse_field, parse_form, parse_rational, AnyField};
use unitforge::lattice::{
    diagonal_universal_2n, rank_lower_bound_run, subset_products, GramLattice, RankBoundOutcome, SearchLimit,
};
use unitforge::northcott::{descent_trace, enumerate_tp_integers, northcott_profile, weil_height};
use unitforge::quad::{self, fundamental_unit, lemma51_witness, pell_report, quad_sqrt, signature_rank};
use unitforge::{BiquadField, FieldElement, NumberField, QuadField, RationalField};

use crate::scenario::{CliError, CliResult, Scenario};

/// Runs `$body` with `$f` bound to the parsed field, whatever its type.
macro_rules! with_field {
    ($text:expr, |$f:ident| $body:expr) => {
        match parse_field($text)? {
            AnyField::Rational => {
                let $f = RationalField;
                $body
            }
            AnyField::Quad(k) => {
                let $f = k;
                $body
            }
            AnyField::Biquad(k) => {
                let $f = k;
                $body
            }
        }
    };
}

fn num(d: i128) -> Value {
    i64::try_from(d).map(Value::from).unwrap_or_else(|_| Value::String(d.to_string()))
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("library types serialize")
}

fn strings<E: ToString>(v: &[E]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn biquad_field(text: &str) -> Result<BiquadField, CliError> {
    match parse_field(text)? {
        AnyField::Biquad(k) => Ok(k),
        _ => Err(CliError::Usage(format!("{text} is not biquadratic"))),
    }
}

fn limit(budget: Option<usize>) -> SearchLimit {
    budget.map_or(SearchLimit::Exhaustive, SearchLimit::Budget)
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|_| CliError::Usage(format!("bad list entry {p:?}"))))
        .collect()
}

pub fn fund_unit(d: i128) -> CliResult {
    let k = QuadField::new(d)?;
    let eps = fundamental_unit(k);
    let mut s = Scenario::new();
    s.input("D", num(d));
    let norm_one = eps.norm() == k.one().norm();
    s.output("eps", eps.to_string())
        .output("eps_approx", eps.approx())
        .output("norm", if norm_one { 1 } else { -1 })
        .output("totally_positive", eps.is_totally_positive());
    s.check("unit", eps.is_unit())
        .check("exceeds_one", eps.cmp_value(&k.one()) == Ordering::Greater);
    if norm_one {
        let dl = quad::delta(k)?;
        s.output("delta", dl.to_string());
        s.check("delta_class", quad_sqrt(&eps.scale(&dl.clone().into())).is_some());
    }
    Ok(s)
}

pub fn delta(d: i128) -> CliResult {
    let k = QuadField::new(d)?;
    let eps = fundamental_unit(k);
    let dl = quad::delta(k)?;
    let disc = BigInt::from(k.disc());
    let mut s = Scenario::new();
    s.input("D", num(d));
    s.output("delta", dl.to_string()).output("eps", eps.to_string());
    s.check("delta_class", quad_sqrt(&eps.scale(&dl.clone().into())).is_some())
        .check("squarefree", squarefree_part(&dl).map(|x| x.r == BigInt::from(1)).unwrap_or(false))
        .check("proper_divisor_of_disc", &disc % &dl == BigInt::from(0) && dl != BigInt::from(1) && dl != disc);
    Ok(s)
}

pub fn pell(d: i128) -> CliResult {
    let r = pell_report(QuadField::new(d)?);
    let mut s = Scenario::new();
    s.input("D", num(d));
    s.output("report", to_value(&r));
    s.check("consistent", r.is_consistent());
    Ok(s)
}

pub fn sig_rank(d: i128) -> CliResult {
    let k = QuadField::new(d)?;
    let r = signature_rank(k);
    let mut s = Scenario::new();
    s.input("D", num(d));
    s.output("signature_rank", to_value(&r));
    s.check("class_count", r.quotient_size == quad::totally_positive_unit_classes(k));
    Ok(s)
}

pub fn lemma51(d: i128, elem: Option<&str>) -> CliResult {
    let k = QuadField::new(d)?;
    let e = match elem {
        Some(text) => parse_elem(&k, text)?,
        None => fundamental_unit(k),
    };
    let (beta, t) = lemma51_witness(&e)?;
    let mut s = Scenario::new();
    s.input("D", num(d)).input("elem", e.to_string());
    let class = if t.is_integer() {
        squarefree_part(&t.to_integer()).map(|x| x.s.to_string()).ok()
    } else {
        None
    };
    s.output("beta", beta.to_string())
        .output("trace", t.to_string())
        .output("trace_class", class);
    s.check("identity", e.clone() * beta.clone() * beta == k.from_rational(t));
    Ok(s)
}

pub fn biquad_sqrt(field: &str, elem: &str) -> CliResult {
    let f = biquad_field(field)?;
    let e = parse_elem(&f, elem)?;
    let root = biquad::biquad_sqrt(&e);
    let mut s = Scenario::new();
    s.input("field", f.to_string()).input("elem", e.to_string());
    s.output("sqrt", root.as_ref().map(|r| r.to_string()));
    if let Some(r) = &root {
        let signs: Vec<i8> = r.embedding_signs().iter().map(|o| *o as i8).collect();
        s.output("signs", signs)
            .output("totally_positive", r.is_totally_positive())
            .output("totally_negative", (-r.clone()).is_totally_positive());
        s.check("squares_back", r.clone() * r.clone() == e);
    }
    Ok(s)
}

pub fn cor63(field: &str, elem: &str) -> CliResult {
    let f = biquad_field(field)?;
    let alpha = parse_elem(&f, elem)?;
    let report = cor63_test(&alpha)?;
    let mut s = Scenario::new();
    s.input("field", f.to_string()).input("elem", alpha.to_string());
    s.output("report", to_value(&report));
    if let Some(eps) = &report.decomposition {
        let prod = (1..4).fold(f.one(), |acc, i| acc * f.embed(&eps[i - 1], i));
        s.check("decomposition", prod == alpha);
    }
    Ok(s)
}

pub fn prop65(n: i64) -> CliResult {
    let inst = prop65_family(n)?;
    let mut s = Scenario::new();
    s.input("n", n);
    s.output("field", inst.field.to_string())
        .output("mu", inst.mu.to_string())
        .output("rel_norms", strings(&inst.rel_norms));
    let c = &inst.checks;
    s.check("rel_norm_1", c.rel_norm_1)
        .check("rel_norm_2", c.rel_norm_2)
        .check("rel_norm_3", c.rel_norm_3)
        .check("totally_positive", c.totally_positive)
        .check("unit", c.unit)
        .check("not_in_square_class", c.not_in_square_class);
    Ok(s)
}

pub fn kummer(target: &str, gens: Option<&str>, all: bool) -> CliResult {
    let q = parse_rational(target)?;
    let mut s = Scenario::new();
    s.input("target", q.to_string());
    let descriptor = if all {
        s.input("ambient", "all-square-free");
        MultiquadDescriptor::AllSquareFree
    } else {
        let g: Vec<i128> = parse_list(gens.unwrap_or_default())?;
        s.input("gens", g.iter().map(|&x| num(x)).collect::<Vec<_>>());
        MultiquadDescriptor::Explicit(g)
    };
    let square = is_square_in(&q, &descriptor)?;
    s.output("square", square);
    if let MultiquadDescriptor::Explicit(g) = &descriptor {
        if g.len() <= 20 {
            let class = |n: &BigInt| SquareClassVector::of_integer(n);
            let basis: Vec<SquareClassVector> = g
                .iter()
                .map(|x| class(&BigInt::from(*x)))
                .collect::<Result<_, _>>()
                .map_err(unitforge::Error::from)?;
            let t = class(&(q.numer() * q.denom())).map_err(unitforge::Error::from)?;
            s.check("subset_search_agrees", brute_force_express(&t, &basis).is_some() == square);
        }
    }
    Ok(s)
}

fn certificate_value(cert: &ClassCertificate) -> Result<(Value, bool), CliError> {
    let text = cert.to_json();
    let ok = verify_certificate_json(&text).is_ok();
    Ok((serde_json::from_str(&text).expect("certificate JSON parses"), ok))
}

pub fn family53(m: usize, certificate: bool) -> CliResult {
    let fam = example53_family(m)?;
    let mut s = Scenario::new();
    s.input("m", m);
    s.output("family", to_value(&fam));
    s.check("totally_positive_units", fam.members.iter().all(|x| x.tp_unit))
        .check("classes_match", fam.members.iter().all(|x| x.class_matches))
        .check("coprime_radicands", fam.members.iter().all(|x| x.coprime_to_previous))
        .check("classes_nonsquare", fam.classes_nonsquare)
        .check("products_nonsquare", fam.products_nonsquare);
    if certificate {
        let (v, ok) = certificate_value(&example53_certificate(m)?)?;
        s.output("certificate", v);
        s.check("certificate_verifies", ok);
    }
    Ok(s)
}

pub fn family54(primes: Option<&str>, count: Option<usize>) -> CliResult {
    let ps: Vec<i128> = match (primes, count) {
        (Some(p), _) => parse_list(p)?,
        (None, Some(c)) => primes_3_mod_4(2 * c),
        (None, None) => return Err(CliError::Usage("need --primes or --count".into())),
    };
    let fam = example54_family(&ps)?;
    let mut s = Scenario::new();
    s.input("primes", ps.iter().map(|&p| num(p)).collect::<Vec<_>>());
    s.output("family", to_value(&fam));
    s.check("delta_is_prime_factor", fam.members.iter().all(|x| x.delta_is_prime_factor))
        .check("deltas_nonsquare", fam.deltas_nonsquare)
        .check("products_nonsquare", fam.products_nonsquare);
    Ok(s)
}

pub fn greedy_select(m: usize, candidates: usize, subfield: usize) -> CliResult {
    let count = if candidates == 0 { 4 * m + 8 } else { candidates };
    let fams: Vec<FamilyCandidate> = prop65_admissible(count)
        .into_iter()
        .map(|n| {
            Ok(FamilyCandidate {
                alpha: prop65_family(n)?.mu,
                subfield,
            })
        })
        .collect::<Result<_, unitforge::Error>>()?;
    let cert = greedy_disjoint_select(&fams, m)?;
    let (v, ok) = certificate_value(&cert)?;
    let mut s = Scenario::new();
    s.input("m", m).input("candidates", count).input("subfield", subfield);
    s.output("fields", cert.units.iter().map(|u| u.field.clone()).collect::<Vec<_>>())
        .output("certificate", v);
    s.check("certificate_verifies", ok);
    Ok(s)
}

pub fn thm72_cert(m: Option<usize>, verify: Option<&Path>) -> CliResult {
    let mut s = Scenario::new();
    if let Some(path) = verify {
        let mut text = std::fs::read_to_string(path)?;
        // a saved `thm72-cert --m` result carries the certificate under outputs
        if let Ok(Value::Object(top)) = serde_json::from_str::<Value>(&text) {
            if let Some(cert) = top.get("outputs").and_then(|o| o.get("certificate")) {
                text = cert.to_string();
            }
        }
        s.input("verify", path.display().to_string());
        match verify_certificate_json(&text) {
            Ok(c) => {
                s.output("units", c.units).output("witnesses", c.witnesses);
                s.check("certificate_verifies", true);
            }
            Err(e) => {
                s.output("error", e.to_string());
                s.check("certificate_verifies", false);
            }
        }
        return Ok(s);
    }
    let m = m.ok_or_else(|| CliError::Usage("need --m or --verify".into()))?;
    let cert = theorem72_certificate(m)?;
    let (v, ok) = certificate_value(&cert)?;
    s.input("m", m);
    s.output("fields", cert.units.iter().map(|u| u.field.clone()).collect::<Vec<_>>())
        .output("certificate", v);
    s.check("certificate_verifies", ok);
    Ok(s)
}

fn lattice_inputs<F: NumberField>(s: &mut Scenario, l: &GramLattice<F>) {
    s.input("lattice", l.to_json());
}

pub fn lattice_eval(field: &str, form: &str, vector: &str) -> CliResult {
    with_field!(field, |f| lattice_eval_in(f, form, vector))
}

fn lattice_eval_in<F: NumberField>(f: F, form: &str, vector: &str) -> CliResult {
    let l = parse_form(&f, form)?;
    let v = parse_elem_list(&f, vector)?;
    let value = l.evaluate(&v)?;
    let mut s = Scenario::new();
    lattice_inputs(&mut s, &l);
    s.input("vector", strings(&v));
    s.output("value", value.to_string())
        .output("integral", l.is_integral())
        .output("classical", l.is_classical())
        .output("positive_definite", l.is_positive_definite());
    // Q(2v) = 4 Q(v) through the bilinear form
    let doubled: Vec<F::Elem> = v.iter().map(|x| x.clone() + x.clone()).collect();
    s.check("homogeneity", l.evaluate(&doubled)? == value.scale(&int(4)));
    Ok(s)
}

pub fn lattice_split(field: &str, form: &str, vector: &str) -> CliResult {
    with_field!(field, |f| lattice_split_in(f, form, vector))
}

fn lattice_split_in<F: NumberField>(f: F, form: &str, vector: &str) -> CliResult {
    let l = parse_form(&f, form)?;
    let v = parse_elem_list(&f, vector)?;
    let split = l.split_unit(&v)?;
    let mut s = Scenario::new();
    lattice_inputs(&mut s, &l);
    s.input("vector", strings(&v));
    let basis: Vec<Vec<String>> = split.complement_basis.iter().map(|w| strings(w)).collect();
    s.output("unit_value", l.evaluate(&v)?.to_string())
        .output("complement_basis", basis)
        .output("complement", split.complement.to_json());
    let orthogonal = split
        .complement_basis
        .iter()
        .map(|w| l.bilinear(w, &v))
        .collect::<Result<Vec<_>, _>>()?
        .iter()
        .all(|b| b.is_zero());
    s.check("orthogonal", orthogonal);
    // det L = Q(v) det L' up to the square of the pivot unit
    let ratio = split.complement.determinant() * l.evaluate(&v)?;
    let det = l.determinant();
    let unit_ratio = ratio.inverse().map(|r| (det * r).is_unit()).unwrap_or(false);
    s.check("determinant", unit_ratio);
    Ok(s)
}

pub fn rank_bound(field: &str, form: &str, units: &str, budget: Option<usize>) -> CliResult {
    with_field!(field, |f| rank_bound_in(f, form, units, budget))
}

fn check_split_vectors<F: NumberField>(
    s: &mut Scenario,
    l: &GramLattice<F>,
    units: &[F::Elem],
    outcome: &RankBoundOutcome,
) -> Result<(), CliError> {
    if let RankBoundOutcome::SplitsCompleted { vectors, .. } = outcome {
        let mut ok = vectors.len() == units.len();
        for (vec, u) in vectors.iter().zip(units) {
            let parsed: Vec<F::Elem> = vec
                .iter()
                .map(|x| parse_elem(l.base(), x))
                .collect::<Result<_, _>>()?;
            ok &= &l.evaluate(&parsed)? == u;
        }
        s.check("split_vectors_represent_units", ok);
    }
    Ok(())
}

fn rank_bound_in<F: NumberField>(f: F, form: &str, units: &str, budget: Option<usize>) -> CliResult {
    let l = parse_form(&f, form)?;
    let us = parse_elem_list(&f, units)?;
    let run = rank_lower_bound_run(&l, &us, limit(budget))?;
    let mut s = Scenario::new();
    lattice_inputs(&mut s, &l);
    s.input("units", strings(&us));
    s.output("run", to_value(&run)).output("bound_certified", run.bound_certified());
    check_split_vectors(&mut s, &l, &us, &run.outcome)?;
    Ok(s)
}

pub fn universal_2n(d: i128, units: Option<&str>, n: usize) -> CliResult {
    let k = QuadField::new(d)?;
    let e = match units {
        Some(text) => parse_elem_list(&k, text)?,
        None => vec![fundamental_unit(k); n],
    };
    if e.len() > 6 {
        return Err(CliError::Usage("at most 6 units (64 diagonal entries)".into()));
    }
    let l = diagonal_universal_2n(k, &e)?;
    let products = subset_products(&k, &e);
    let run = rank_lower_bound_run(&l, &products, SearchLimit::Exhaustive)?;
    let mut s = Scenario::new();
    s.input("D", num(d)).input("units", strings(&e));
    s.output("lattice", l.to_json())
        .output("run", to_value(&run))
        .output("bound_certified", run.bound_certified());
    let splits_ok = matches!(run.outcome, RankBoundOutcome::SplitsCompleted { splits, .. } if splits == 1 << e.len());
    s.check("splits_completed", splits_ok);
    check_split_vectors(&mut s, &l, &products, &run.outcome)?;
    Ok(s)
}

pub fn represent(field: &str, form: &str, target: &str, budget: Option<usize>) -> CliResult {
    with_field!(field, |f| represent_in(f, form, target, budget))
}

fn represent_in<F: NumberField>(f: F, form: &str, target: &str, budget: Option<usize>) -> CliResult {
    let l = parse_form(&f, form)?;
    let beta = parse_elem(&f, target)?;
    let found = l.represent(&beta, limit(budget))?;
    let mut s = Scenario::new();
    lattice_inputs(&mut s, &l);
    s.input("target", beta.to_string());
    s.output("vector", found.as_ref().map(|v| strings(v)))
        .output("represented", found.is_some());
    if let Some(v) = &found {
        s.check("value", l.evaluate(v)? == beta);
    }
    Ok(s)
}

fn height_reports<F: NumberField>(f: F, elems: &str, s: &mut Scenario) -> Result<(), CliError> {
    let mut reports = Vec::new();
    for e in parse_elem_list(&f, elems)? {
        let h = weil_height(&e)?;
        s.check(format!("bound {e}"), h.bound_holds);
        reports.push(h.to_json());
    }
    s.output("reports", reports);
    Ok(())
}

pub fn heights(field: &str, elems: &str, random: usize, seed: u64) -> CliResult {
    let mut s = Scenario::new();
    s.input("field", field).input("elems", elems).input("random", random);
    with_field!(field, |f| height_reports(f, elems, &mut s))?;
    if random > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ds: Vec<i128> = (2..=60)
            .filter(|&d| QuadField::new(d).is_ok())
            .collect();
        let mut ok = true;
        let mut done = 0;
        while done < random {
            let k = QuadField::new(ds[rng.random_range(0..ds.len())])?;
            let (a, b) = (rng.random_range(-500i64..=500), rng.random_range(-250i64..=250));
            let e = if k.d() % 4 == 1 {
                let a = if (a - b) % 2 == 0 { a } else { a + 1 };
                k.elem(rat(a, 2), rat(b, 2))
            } else {
                k.elem(int(a), int(b))
            };
            if e.is_zero() {
                continue;
            }
            ok &= weil_height(&e)?.bound_holds;
            done += 1;
        }
        s.check("random_bounds", ok);
    }
    Ok(s)
}

pub fn enumerate(d: i128, r: &str) -> CliResult {
    let k = QuadField::new(d)?;
    let r = parse_rational(r)?;
    let found = enumerate_tp_integers(&k, &r);
    let mut s = Scenario::new();
    s.input("D", num(d)).input("r", r.to_string());
    s.output("count", found.len()).output("elements", strings(&found));
    s.check(
        "predicate",
        found
            .iter()
            .all(|x| x.is_integral() && x.is_totally_positive() && x.house().cmp_rational(&r) == Ordering::Less),
    );
    Ok(s)
}

pub fn profile(ds: &str, r: &str, csv: Option<&Path>) -> CliResult {
    let radicands: Vec<i128> = parse_list(ds)?;
    let fields: Vec<QuadField> = radicands.iter().map(|&d| QuadField::new(d)).collect::<Result<_, _>>()?;
    let r = parse_rational(r)?;
    let p = northcott_profile(&fields, &r);
    if let Some(path) = csv {
        std::fs::write(path, p.to_csv()?)?;
    }
    let mut s = Scenario::new();
    s.input("ds", radicands.iter().map(|&d| num(d)).collect::<Vec<_>>())
        .input("r", r.to_string());
    s.output("profile", to_value(&p));
    s.check("cumulative", p.rows.last().map_or(0, |row| row.cumulative) == p.total);
    Ok(s)
}

pub fn descent(field: &str, form: &str, alpha: &str, max_iter: usize) -> CliResult {
    with_field!(field, |f| descent_in(f, form, alpha, max_iter))
}

fn descent_in<F: NumberField>(f: F, form: &str, alpha: &str, max_iter: usize) -> CliResult {
    let l = parse_form(&f, form)?;
    let a = parse_elem(&f, alpha)?;
    let trace = descent_trace(&l, &a, max_iter)?;
    let mut s = Scenario::new();
    lattice_inputs(&mut s, &l);
    s.input("alpha", a.to_string()).input("max_iter", max_iter);
    s.output("trace", trace.to_json())
        .output("iterations", trace.iterations())
        .output("terminal_max_house", trace.max_house.last().map(|h| h.to_f64()));
    s.check("terminated", trace.terminated)
        .check("decreasing_above_threshold", trace.decreasing_above_threshold());
    Ok(s)
}

