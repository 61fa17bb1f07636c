use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed};
use unitforge::arith::{int, rat, squarefree_part};
use unitforge::quad::{
    delta, fundamental_unit, lemma51_witness, pell_report, quad_sqrt, signature_rank,
    totally_positive_unit_classes,
};
use unitforge::{FieldElement, NumberField, QuadElem, QuadField};

fn field(d: i128) -> QuadField {
    QuadField::new(d).unwrap()
}

fn squarefree_radicands(max: i128) -> impl Iterator<Item = i128> {
    (2..=max).filter(|&d| squarefree_part(&BigInt::from(d)).unwrap().r.is_one())
}

/// Smallest unit > 1 found by scanning the second coordinate upwards.
fn brute_force_unit(d: i128) -> (BigRational, BigRational) {
    let half = d % 4 == 1;
    // work with 2x, 2y so that half-integers are covered: (2x)^2 - D (2y)^2 = +-4
    let step = if half { 1 } else { 2 };
    let mut b: i128 = step;
    loop {
        for sign in [-4i128, 4] {
            let a2 = d * b * b + sign;
            if a2 > 0 {
                let a = a2.sqrt();
                if a * a == a2 && (!half && a % 2 == 0 || half && (a - b) % 2 == 0) {
                    return (rat(a as i64, 2), rat(b as i64, 2));
                }
            }
        }
        b += step;
    }
}

#[test]
fn fundamental_unit_table() {
    let e3 = fundamental_unit(field(3));
    assert_eq!((e3.x().clone(), e3.y().clone()), (int(2), int(1)));
    let e7 = fundamental_unit(field(7));
    assert_eq!((e7.x().clone(), e7.y().clone()), (int(8), int(3)));
    let e21 = fundamental_unit(field(21));
    assert_eq!((e21.x().clone(), e21.y().clone()), (rat(5, 2), rat(1, 2)));
    let e5 = fundamental_unit(field(5));
    assert_eq!((e5.x().clone(), e5.y().clone()), (rat(1, 2), rat(1, 2)));
}

#[test]
fn delta_table() {
    assert_eq!(delta(field(3)).unwrap(), BigInt::from(6));
    assert_eq!(delta(field(7)).unwrap(), BigInt::from(2));
    assert_eq!(delta(field(21)).unwrap(), BigInt::from(7));
    assert!(matches!(delta(field(2)), Err(unitforge::Error::NormMinusOne(2))));
}

#[test]
fn pell_report_examples() {
    let r = pell_report(field(3));
    assert_eq!(
        (r.tp_unit_exists, r.norm_eps, r.neg_pell_solvable, r.has_p3mod4_divisor),
        (true, 1, false, true)
    );
    let r = pell_report(field(2));
    assert_eq!(
        (r.tp_unit_exists, r.norm_eps, r.neg_pell_solvable, r.has_p3mod4_divisor),
        (false, -1, true, false)
    );
    let r = pell_report(field(5));
    assert_eq!(
        (r.tp_unit_exists, r.norm_eps, r.neg_pell_solvable, r.has_p3mod4_divisor),
        (false, -1, true, false)
    );
}

#[test]
fn lemma51_examples() {
    let f = field(3);
    let (beta, t) = lemma51_witness(&f.elem(int(2), int(1))).unwrap();
    assert_eq!(beta, f.elem(int(3), int(-1)));
    assert_eq!(t, int(6));
    let (beta, t) = lemma51_witness(&f.one()).unwrap();
    assert_eq!((beta, t), (f.from_int(2), int(4)));
    let g = field(21);
    let (beta, t) = lemma51_witness(&g.elem(rat(5, 2), rat(1, 2))).unwrap();
    // conj(e) + 1 = (7 - sqrt(21))/2
    assert_eq!(beta, g.elem(rat(7, 2), rat(-1, 2)));
    assert_eq!(t, int(7));
    assert_eq!(lemma51_witness(&f.from_int(-1)), Err(unitforge::Error::DegenerateBeta));
    assert!(lemma51_witness(&f.from_int(2)).is_err());
}

#[test]
fn signature_rank_examples() {
    let s = signature_rank(field(3));
    assert_eq!((s.rank, s.quotient_size), (1, 2));
    let s = signature_rank(field(2));
    assert_eq!((s.rank, s.quotient_size), (2, 1));
    let s = signature_rank(field(5));
    assert_eq!((s.rank, s.quotient_size), (2, 1));
}

#[test]
fn fundamental_unit_properties_up_to_500() {
    for d in squarefree_radicands(500) {
        let f = field(d);
        let e = fundamental_unit(f);
        assert!(e.is_integral(), "D={d}");
        assert!(e.norm().abs().is_one(), "D={d}");
        assert_eq!(e.cmp_value(&f.one()), std::cmp::Ordering::Greater, "D={d}");
        assert!(e.x().is_positive() && e.y().is_positive(), "D={d}");
    }
}

#[test]
fn fundamental_unit_is_minimal_against_brute_force() {
    for d in squarefree_radicands(100) {
        let e = fundamental_unit(field(d));
        let (x, y) = brute_force_unit(d);
        assert_eq!((e.x().clone(), e.y().clone()), (x, y), "D={d}");
    }
}

#[test]
fn pell_equivalences_up_to_500() {
    for d in squarefree_radicands(500) {
        let r = pell_report(field(d));
        assert!(r.is_consistent(), "{r:?}");
    }
}

#[test]
fn lemma_and_delta_up_to_200() {
    for d in squarefree_radicands(200) {
        let f = field(d);
        let e = fundamental_unit(f);
        if e.norm() != BigRational::one() {
            continue;
        }
        let (beta, t) = lemma51_witness(&e).unwrap();
        assert_eq!(e.clone() * beta.clone() * beta, f.from_rational(t));
        let dl = delta(f).unwrap();
        let disc = BigInt::from(f.disc());
        assert!((&disc % &dl) == BigInt::from(0));
        assert!(!dl.is_one() && dl != disc);
        assert!(quad_sqrt(&e.scale(&BigRational::from_integer(dl))).is_some());
    }
}

#[test]
fn signature_rank_matches_class_count() {
    for d in squarefree_radicands(300) {
        let f = field(d);
        let s = signature_rank(f);
        assert_eq!(s.quotient_size, totally_positive_unit_classes(f));
        let norm_one = fundamental_unit(f).norm() == BigRational::one();
        assert_eq!(s.quotient_size, if norm_one { 2 } else { 1 }, "D={d}");
    }
}

fn small_elems(f: QuadField) -> Vec<QuadElem> {
    let mut out = Vec::new();
    for x in -6..=6 {
        for y in -6..=6 {
            out.push(f.elem(rat(x, 2), rat(y, 2)));
        }
    }
    out
}

#[test]
fn quad_sqrt_is_sound_and_complete_on_small_squares() {
    for d in [2, 3, 5, 6, 7, 13, 21] {
        let f = field(d);
        let elems = small_elems(f);
        for s in &elems {
            let sq = s.clone() * s.clone();
            let r = quad_sqrt(&sq).expect("square has a root");
            assert_eq!(r.clone() * r, sq);
        }
        for e in &elems {
            if let Some(r) = quad_sqrt(e) {
                assert_eq!(&(r.clone() * r), e);
            }
        }
    }
}

#[test]
fn exact_sign_agrees_with_floats_away_from_zero() {
    for d in [2, 3, 5, 7, 10] {
        let f = field(d);
        for e in small_elems(f) {
            let approx = e.approx();
            if approx.abs() > 1e-9 {
                let expect = if approx > 0.0 {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Less
                };
                assert_eq!(e.signum(), expect, "{e}");
            }
        }
    }
}
