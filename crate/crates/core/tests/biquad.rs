use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use unitforge::arith::{int, rat};
use unitforge::biquad::{
    biquad_sqrt, cor63_test, prop61_identity_check, prop65_admissible, prop65_family,
};
use unitforge::{BiquadElem, BiquadField, Error, FieldElement, NumberField};

fn k37() -> BiquadField {
    BiquadField::new(3, 7).unwrap()
}

fn half(f: BiquadField, c: [i64; 4]) -> BiquadElem {
    f.elem(c.map(|x| rat(x, 2)))
}

#[test]
fn radical_products() {
    let f = k37();
    assert_eq!(f.d3(), 21);
    assert_eq!(f.radical_elem(1) * f.radical_elem(2), f.radical_elem(3));
    let g = BiquadField::new(2, 21).unwrap();
    assert_eq!(g.d3(), 42);
    assert_eq!(g.radical_elem(1) * g.radical_elem(2), g.radical_elem(3));
    // sqrt(2) * sqrt(42) = 2 sqrt(21)
    assert_eq!(g.radical_elem(1) * g.radical_elem(3), g.from_ints([0, 0, 2, 0]));
    assert_eq!(g.g(), (1, 2, 21));
}

#[test]
fn galois_action() {
    let f = k37();
    let r1 = f.radical_elem(1);
    let r2 = f.radical_elem(2);
    assert_eq!(r1.sigma(1), r1);
    assert_eq!(r2.sigma(1), -r2.clone());
    assert_eq!(r2.sigma(2), r2);
}

fn mu1() -> BiquadElem {
    let f = BiquadField::new(2, 21).unwrap();
    half(f, [7, 3, 1, 1])
}

#[test]
fn relative_norms_of_mu() {
    let mu = mu1();
    let f = mu.field();
    assert_eq!(mu.rel_norm(1).unwrap(), f.subfield(1).one());
    assert_eq!(
        mu.rel_norm(2).unwrap(),
        f.subfield(2).elem(rat(5, 2), rat(1, 2))
    );
    assert_eq!(mu.rel_norm(3).unwrap(), f.subfield(3).elem(int(13), int(2)));
    assert!(mu.is_totally_positive());
    assert!(mu.is_unit());
}

#[test]
fn units_and_signs() {
    let f = k37();
    let minus_one = f.from_int(-1);
    assert!(!minus_one.is_totally_positive());
    assert!(minus_one.is_unit());
    let s = half(f, [8, 5, 3, 2]);
    assert!(!s.is_totally_positive());
    assert!(!(-s).is_totally_positive());
}

#[test]
fn square_roots_in_q3_7() {
    let f = k37();
    let k1 = f.subfield(1);
    let k2 = f.subfield(2);
    let k3 = f.subfield(3);
    let e1 = f.embed(&k1.elem(int(2), int(1)), 1);
    let e2 = f.embed(&k2.elem(int(8), int(3)), 2);
    let e3 = f.embed(&k3.elem(rat(5, 2), rat(1, 2)), 3);

    let cases = [
        (e1.clone() * e2.clone(), half(f, [3, 3, 1, 1])),
        (e3.clone(), half(f, [0, 1, 1, 0])),
        (e1.clone() * e2.clone() * e3.clone(), half(f, [8, 5, 3, 2])),
    ];
    for (e, want) in cases {
        let s = biquad_sqrt(&e).expect("square root exists");
        assert!(s == want || s == -want.clone(), "{s} vs {want}");
        assert_eq!(s.clone() * s.clone(), e);
        let signs = s.embedding_signs();
        assert!(signs.contains(&Ordering::Greater) && signs.contains(&Ordering::Less));
    }
    assert_eq!(biquad_sqrt(&e1), None);
    assert_eq!(biquad_sqrt(&e2), None);
}

#[test]
fn identity_examples() {
    let f = k37();
    assert!(prop61_identity_check(&f.from_rational(rat(3, 5))).unwrap());
    assert!(prop61_identity_check(&mu1()).unwrap());
    assert!(prop61_identity_check(&f.from_ints([1, 1, 1, 0])).unwrap());
    assert_eq!(prop61_identity_check(&f.zero()), Err(Error::DivisionByZero));
}

#[test]
fn cor63_examples() {
    let r = cor63_test(&mu1()).unwrap();
    assert_eq!(r.norms_square, [true, false, false]);
    assert!(!r.in_q_square_class);

    let f = k37();
    let e3 = f.embed(&f.subfield(3).elem(rat(5, 2), rat(1, 2)), 3);
    let r = cor63_test(&e3).unwrap();
    assert!(r.in_q_square_class);
    let [a, b, c] = r.decomposition.unwrap();
    let prod = f.embed(&a, 1) * f.embed(&b, 2) * f.embed(&c, 3);
    assert_eq!(prod, e3);

    let r = cor63_test(&f.one()).unwrap();
    assert_eq!(r.norms_square, [true, true, true]);
    let [a, b, c] = r.decomposition.unwrap();
    assert!(a == f.subfield(1).one() && b == f.subfield(2).one() && c == f.subfield(3).one());
}

#[test]
fn cor63_rejects_non_units() {
    let f = k37();
    assert!(matches!(
        cor63_test(&f.from_int(2)),
        Err(Error::NotTotallyPositiveUnit(_))
    ));
}

#[test]
fn prop65_examples() {
    let inst = prop65_family(1).unwrap();
    assert_eq!((inst.field.d1(), inst.field.d2(), inst.field.d3()), (2, 21, 42));
    assert_eq!(inst.mu, mu1());
    assert!(inst.checks.all());
    let inst = prop65_family(13).unwrap();
    assert_eq!((inst.field.d1(), inst.field.d2(), inst.field.d3()), (182, 1677, 1806));
    assert!(inst.checks.all());
    assert_eq!(prop65_family(5), Err(Error::BadResidue(5)));
    assert!(matches!(prop65_family(25), Err(Error::NotSquareFree { .. })));
}

#[test]
fn prop65_all_valid_n_up_to_1000() {
    let ns = prop65_admissible(200);
    let ns: Vec<i64> = ns.into_iter().take_while(|&n| n <= 1000).collect();
    assert!(ns.len() >= 10);
    for n in ns {
        let inst = prop65_family(n).unwrap();
        assert!(inst.checks.all(), "n={n}: {:?}", inst.checks);
    }
}

#[test]
fn charpoly_norm_matches_galois_product() {
    let f = BiquadField::new(5, 13).unwrap();
    for c in [[1, 2, 3, 4], [0, 1, 0, 0], [7, -1, 2, -3]] {
        let e = f.from_ints(c);
        let prod = e.clone() * e.sigma(1) * e.sigma(2) * e.sigma(3);
        assert_eq!(prod, f.from_rational(e.norm()));
    }
    // (1 + sqrt 5)/2 is integral although its coordinates are not
    let phi = f.elem([rat(1, 2), rat(1, 2), int(0), int(0)]);
    assert!(phi.is_integral());
    assert!(!f.elem([rat(1, 2), int(0), int(0), int(0)]).is_integral());
}

#[test]
fn box_enumeration_finds_quarter_coordinates() {
    // in Q(sqrt 3, sqrt 7), (sqrt 3 + sqrt 7)/2 is integral
    let f = k37();
    let s = half(f, [0, 1, 1, 0]);
    let bounds: Vec<(BigRational, BigRational)> = s
        .conjugates()
        .iter()
        .map(|c| {
            let v = c.approx();
            (
                BigRational::from_float(v - 0.5).unwrap(),
                BigRational::from_float(v + 0.5).unwrap(),
            )
        })
        .collect();
    let pts = f.integers_in_box(&bounds);
    assert!(pts.contains(&s), "{pts:?}");
    assert!(pts.iter().all(|p| p.is_integral()));
}

fn coord() -> impl Strategy<Value = BigRational> {
    (-12i64..=12, prop::sample::select(vec![1i64, 2, 4])).prop_map(|(n, d)| rat(n, d))
}

fn elem_in(f: BiquadField) -> impl Strategy<Value = BiquadElem> {
    [coord(), coord(), coord(), coord()].prop_map(move |c| f.elem(c))
}

fn fields() -> impl Strategy<Value = BiquadField> {
    prop::sample::select(vec![(2, 3), (3, 7), (2, 21), (5, 13), (6, 10)])
        .prop_map(|(a, b)| BiquadField::new(a, b).unwrap())
}

fn field_and_elems() -> impl Strategy<Value = (BiquadElem, BiquadElem, BiquadElem)> {
    fields().prop_flat_map(|f| (elem_in(f), elem_in(f), elem_in(f)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ring_axioms((a, b, c) in field_and_elems()) {
        prop_assert_eq!((&a * &b) * c.clone(), a.clone() * (&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn sigmas_are_automorphisms((a, b, _c) in field_and_elems(), i in 1usize..4) {
        prop_assert_eq!((&a * &b).sigma(i), a.sigma(i) * b.sigma(i));
        prop_assert_eq!(a.sigma(i).sigma(i), a.clone());
        let n = a.clone() * a.sigma(1) * a.sigma(2) * a.sigma(3);
        prop_assert!(n.to_rational().is_some());
    }

    #[test]
    fn inverse_is_inverse((a, _b, _c) in field_and_elems()) {
        prop_assume!(!a.is_zero());
        let inv = a.inverse().unwrap();
        prop_assert_eq!(a.clone() * inv, a.field().one());
        prop_assert!(prop61_identity_check(&a).unwrap());
    }

    #[test]
    fn interval_sign_matches_nested_sign((a, _b, _c) in field_and_elems()) {
        prop_assert_eq!(a.signum(), a.signum_nested());
    }

    #[test]
    fn sqrt_of_a_square_is_found((a, _b, _c) in field_and_elems()) {
        let sq = &a * &a;
        let s = biquad_sqrt(&sq).expect("square");
        prop_assert!(s == a || s == -a.clone());
    }

    #[test]
    fn sqrt_is_sound((a, _b, _c) in field_and_elems()) {
        if let Some(s) = biquad_sqrt(&a) {
            prop_assert_eq!(&s * &s, a);
        }
    }
}

/// Units of `Q(sqrt 3, sqrt 7)` built from the subfield units and the
/// square roots listed above.
fn sample_units() -> Vec<BiquadElem> {
    let f = k37();
    let gens = [
        half(f, [3, 3, 1, 1]),
        half(f, [0, 1, 1, 0]),
        f.from_ints([2, 1, 0, 0]),
        f.from_ints([8, 0, 3, 0]),
    ];
    let mut out = Vec::new();
    for mask in 0..64u32 {
        let mut u = if mask & 32 != 0 { f.from_int(-1) } else { f.one() };
        for (k, g) in gens.iter().enumerate() {
            let e = (mask >> k) & 1;
            // alternate inverse powers to mix signs
            let g = if k % 2 == 1 && mask & 16 != 0 {
                g.inverse().unwrap()
            } else {
                g.clone()
            };
            if e == 1 {
                u = u * g;
            }
        }
        out.push(u);
    }
    out
}

#[test]
fn remark_criterion_on_units() {
    let units = sample_units();
    assert!(units.len() >= 50);
    for u in units {
        assert!(u.is_unit(), "{u}");
        assert!(prop61_identity_check(&u).unwrap());
        let signs = u.embedding_signs();
        let definite = signs.iter().all(|&s| s == Ordering::Greater)
            || signs.iter().all(|&s| s == Ordering::Less);
        let criterion = (1..4).all(|i| (u.clone() * u.sigma(i)).is_totally_positive());
        assert_eq!(definite, criterion, "{u}");
    }
}

#[test]
fn zero_has_square_root_zero() {
    let f = k37();
    assert_eq!(biquad_sqrt(&f.zero()), Some(f.zero()));
    assert!(f.zero().coords().iter().all(|c| c.is_zero()));
}
