use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unitforge::arith::{gf2::brute_force_express, int, squarefree_part, SquareClassVector};
use unitforge::biquad::{prop65_admissible, prop65_family};
use unitforge::classes::{
    example53_certificate, example53_family, example54_family, greedy_disjoint_select,
    is_square_in, theorem72_certificate, verify_certificate, verify_certificate_json,
    ClassCertificate, FamilyCandidate, MultiquadDescriptor,
};
use unitforge::Error;

fn squarefree_upto(max: i128) -> Vec<i128> {
    (2..=max)
        .filter(|&d| squarefree_part(&BigInt::from(d)).unwrap().r.is_one())
        .collect()
}

#[test]
fn kummer_agrees_with_subset_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pool = squarefree_upto(300);
    for _ in 0..200 {
        let len = rng.random_range(0..=15);
        let gens: Vec<i128> = (0..len).map(|_| pool[rng.random_range(0..pool.len())]).collect();
        // products of generators make membership likely half the time
        let target: i128 = if rng.random_bool(0.5) && !gens.is_empty() {
            let mut t = 1i128;
            for g in &gens {
                if rng.random_bool(0.5) {
                    t *= g;
                }
            }
            t * [1, 4, 9][rng.random_range(0..3)]
        } else {
            pool[rng.random_range(0..pool.len())]
        };
        let fast = is_square_in(&int(target), &MultiquadDescriptor::Explicit(gens.clone())).unwrap();
        let basis: Vec<SquareClassVector> = gens
            .iter()
            .map(|g| SquareClassVector::of_integer(&BigInt::from(*g)).unwrap())
            .collect();
        let target_class = SquareClassVector::of_integer(&BigInt::from(target)).unwrap();
        let slow = brute_force_express(&target_class, &basis).is_some();
        assert_eq!(fast, slow, "target {target}, generators {gens:?}");
    }
}

#[test]
fn square_membership_examples() {
    let f23 = MultiquadDescriptor::Explicit(vec![2, 3]);
    assert!(is_square_in(&int(6), &f23).unwrap());
    assert!(!is_square_in(&int(6), &MultiquadDescriptor::Explicit(vec![2, 5])).unwrap());
    assert!(!is_square_in(&int(6), &MultiquadDescriptor::Explicit(vec![3])).unwrap());
    assert!(is_square_in(&int(5), &MultiquadDescriptor::AllSquareFree).unwrap());
    assert_eq!(
        is_square_in(&int(0), &MultiquadDescriptor::AllSquareFree),
        Err(Error::DivisionByZero)
    );
}

#[test]
fn example53_prefix() {
    let fam = example53_family(4).unwrap();
    let ns: Vec<BigInt> = fam.members.iter().map(|m| m.n.clone()).collect();
    assert_eq!(ns, vec![1.into(), 3.into(), 105.into(), 4630395.into()]);
    assert_eq!(fam.members[0].class, BigInt::from(6));
    assert_eq!(fam.members[0].eps.to_string(), "2 + sqrt(3)");
    assert_eq!(fam.members[1].eps.to_string(), "6 + sqrt(35)");
    assert_eq!(fam.members[1].class, BigInt::from(14));
    assert!(fam.all_checks());
    for (i, a) in fam.members.iter().enumerate() {
        for b in &fam.members[i + 1..] {
            assert!(a.radicand.gcd(&b.radicand).is_one());
        }
    }
}

#[test]
fn example53_beyond_i128_fails_loudly() {
    assert!(example53_family(5).is_err());
}

#[test]
fn example54_examples() {
    let fam = example54_family(&[3, 7]).unwrap();
    assert_eq!(fam.members[0].delta, BigInt::from(7));
    let fam = example54_family(&[3, 7, 11, 19]).unwrap();
    assert_eq!(fam.members[1].field.d(), 209);
    assert!([BigInt::from(11), BigInt::from(19)].contains(&fam.members[1].delta));
    assert!(fam.all_checks());
    let long = unitforge::classes::primes_3_mod_4(16);
    assert!(example54_family(&long).unwrap().all_checks());
    assert!(matches!(example54_family(&[3, 5]), Err(Error::BadPrime(_))));
    assert!(matches!(example54_family(&[3, 3]), Err(Error::BadPrime(_))));
    assert!(matches!(example54_family(&[3, 15]), Err(Error::BadPrime(_))));
}

fn prop65_candidates(count: usize) -> Vec<FamilyCandidate> {
    prop65_admissible(count)
        .into_iter()
        .map(|n| FamilyCandidate {
            alpha: prop65_family(n).unwrap().mu,
            subfield: 2,
        })
        .collect()
}

#[test]
fn greedy_selection() {
    let fams = prop65_candidates(5);
    let cert = greedy_disjoint_select(&fams, 3).unwrap();
    assert_eq!(cert.units.len(), 3);
    assert_eq!(cert.witnesses.len(), 6);
    verify_certificate(&cert).unwrap();

    let one = greedy_disjoint_select(&fams, 1).unwrap();
    assert_eq!(one.units.len(), 1);
    verify_certificate(&one).unwrap();

    assert!(matches!(
        greedy_disjoint_select(&fams, 6),
        Err(Error::InsufficientFamilies { wanted: 6, .. })
    ));
}

#[test]
fn greedy_selection_through_third_subfield() {
    let fams: Vec<FamilyCandidate> = prop65_candidates(6)
        .into_iter()
        .map(|c| FamilyCandidate { subfield: 3, ..c })
        .collect();
    let cert = greedy_disjoint_select(&fams, 3).unwrap();
    verify_certificate_json(&cert.to_json()).unwrap();
}

#[test]
fn greedy_rejects_square_norm_subfield() {
    let mut fams = prop65_candidates(1);
    // Norm to K_1 is 1
    fams[0].subfield = 1;
    assert!(matches!(
        greedy_disjoint_select(&fams, 1),
        Err(Error::SquareRelativeNorm { subfield: 1, .. })
    ));
}

#[test]
fn theorem72_certificates() {
    let c1 = theorem72_certificate(1).unwrap();
    assert_eq!(c1.units.len(), 1);
    let c2 = theorem72_certificate(2).unwrap();
    assert_eq!(c2.units[0].field, "Q(sqrt(2), sqrt(21))");
    assert_eq!(c2.units[1].field, "Q(sqrt(182), sqrt(1677))");
    verify_certificate_json(&c2.to_json()).unwrap();

    let c10 = theorem72_certificate(10).unwrap();
    assert_eq!(c10.units.len(), 10);
    assert_eq!(c10.witnesses.len(), 55);
    verify_certificate_json(&c10.to_json()).unwrap();
    assert!(prop65_admissible(10).iter().all(|&n| n < 500));
}

fn tamper(cert: &ClassCertificate, f: impl FnOnce(&mut serde_json::Value)) -> String {
    let mut v = serde_json::to_value(cert).unwrap();
    f(&mut v);
    v.to_string()
}

#[test]
fn tampered_certificates_are_rejected() {
    let cert = theorem72_certificate(3).unwrap();
    // swap in a square relative norm
    let bad = tamper(&cert, |v| {
        v["witnesses"][0]["data"]["norm"]["x"] = "1".into();
        v["witnesses"][0]["data"]["norm"]["y"] = "0".into();
    });
    assert!(verify_certificate_json(&bad).is_err());
    // drop a witness
    let bad = tamper(&cert, |v| {
        v["witnesses"].as_array_mut().unwrap().pop();
    });
    assert!(verify_certificate_json(&bad).is_err());
    // replace a unit by a non-unit
    let bad = tamper(&cert, |v| {
        v["units"][1]["elem"]["coords"][0] = "100".into();
    });
    assert!(verify_certificate_json(&bad).is_err());
    assert!(verify_certificate_json("{not json").is_err());
}

#[test]
fn example53_certificate_round_trip() {
    let cert = example53_certificate(4).unwrap();
    let check = verify_certificate_json(&cert.to_json()).unwrap();
    assert_eq!((check.units, check.witnesses), (4, 10));
    // a wrong class is caught
    let bad = tamper(&cert, |v| {
        v["witnesses"][0]["data"]["classes"][0] = "3".into();
    });
    assert!(verify_certificate_json(&bad).is_err());
}

#[test]
fn example53_classes_in_family_compositum() {
    let fam = example53_family(3).unwrap();
    let ambient = MultiquadDescriptor::Explicit(fam.generators());
    for m in &fam.members {
        let odd = BigRational::from_integer(2 * &m.n + 1);
        assert!(!is_square_in(&(odd * int(2)), &ambient).unwrap());
    }
}
