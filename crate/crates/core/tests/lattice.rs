use proptest::prelude::*;
use unitforge::arith::{int, rat};
use unitforge::lattice::{
    diagonal_universal_2n, is_indecomposable, rank_lower_bound_run, subset_products, GramLattice,
    RankBoundOutcome, SearchLimit,
};
use unitforge::{Error, FieldElement, NumberField, QuadElem, QuadField, Rational, RationalField};

fn q3() -> QuadField {
    QuadField::new(3).unwrap()
}

fn q5() -> QuadField {
    QuadField::new(5).unwrap()
}

fn eps3() -> QuadElem {
    q3().elem(int(2), int(1))
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::int(x)).collect()
}

fn rational_gram(rows: &[&[i64]]) -> GramLattice<RationalField> {
    GramLattice::new(RationalField, rows.iter().map(|r| ints(r)).collect()).unwrap()
}

#[test]
fn evaluation_examples() {
    let i4 = GramLattice::identity(RationalField, 4);
    assert_eq!(i4.evaluate(&ints(&[1, 2, 3, 4])).unwrap(), Rational::int(30));
    assert_eq!(i4.evaluate(&ints(&[0, 0, 0, 0])).unwrap(), Rational::int(0));
    assert!(matches!(
        i4.evaluate(&ints(&[1, 2])),
        Err(Error::DimensionMismatch { expected: 4, got: 2 })
    ));

    let f = q5();
    let i3 = GramLattice::identity(f, 3);
    let phi = f.elem(rat(1, 2), rat(1, 2));
    let v = vec![f.one(), phi, f.zero()];
    assert_eq!(i3.evaluate(&v).unwrap(), f.elem(rat(5, 2), rat(1, 2)));
}

#[test]
fn predicates() {
    let half = GramLattice::new(
        RationalField,
        vec![
            vec![Rational::int(1), Rational(rat(1, 2))],
            vec![Rational(rat(1, 2)), Rational::int(1)],
        ],
    )
    .unwrap();
    assert!(half.is_integral());
    assert!(!half.is_classical());
    assert!(half.is_positive_definite());

    for n in 1..5 {
        let id = GramLattice::identity(RationalField, n);
        assert!(id.is_integral() && id.is_classical() && id.is_positive_definite());
    }
    let indefinite = GramLattice::diagonal(RationalField, ints(&[1, -1]));
    assert!(!indefinite.is_positive_definite());
    // positive at the identity embedding only
    let f = q3();
    let skew = GramLattice::diagonal(f, vec![f.one(), f.elem(int(1), int(1))]);
    assert!(!skew.is_positive_definite());
    assert_eq!(
        GramLattice::new(RationalField, vec![ints(&[1, 2]), ints(&[3, 1])]),
        Err(Error::NotSymmetric)
    );
}

#[test]
fn split_examples() {
    let i3 = GramLattice::identity(RationalField, 3);
    let s = i3.split_unit(&ints(&[1, 0, 0])).unwrap();
    assert_eq!(s.complement, GramLattice::identity(RationalField, 2));
    assert_eq!(s.complement_basis, vec![ints(&[0, 1, 0]), ints(&[0, 0, 1])]);

    let f = q3();
    let e = eps3();
    let l = GramLattice::diagonal(f, vec![f.one(), e.clone(), e.clone() * e.clone()]);
    let s = l.split_unit(&[f.zero(), f.one(), f.zero()]).unwrap();
    assert_eq!(s.complement, GramLattice::diagonal(f, vec![f.one(), e.clone() * e]));

    let half = GramLattice::new(
        RationalField,
        vec![
            vec![Rational::int(1), Rational(rat(1, 2))],
            vec![Rational(rat(1, 2)), Rational::int(1)],
        ],
    )
    .unwrap();
    assert_eq!(half.split_unit(&ints(&[1, 0])), Err(Error::NotClassical));
    assert!(matches!(
        i3.split_unit(&ints(&[1, 1, 0])),
        Err(Error::NotUnit(_))
    ));
}

#[test]
fn split_of_a_non_diagonal_lattice() {
    let l = rational_gram(&[&[1, 1, 0], &[1, 3, 1], &[0, 1, 2]]);
    let v = ints(&[1, 0, 0]);
    let s = l.split_unit(&v).unwrap();
    for w in &s.complement_basis {
        assert_eq!(l.bilinear(w, &v).unwrap(), Rational::int(0));
    }
    assert_eq!(
        l.determinant(),
        l.evaluate(&v).unwrap() * s.complement.determinant()
    );
    assert!(s.complement.is_classical());
}

#[test]
fn representation_examples() {
    let i4 = GramLattice::identity(RationalField, 4);
    let v = i4.represent(&Rational::int(30), SearchLimit::Exhaustive).unwrap().unwrap();
    assert_eq!(i4.evaluate(&v).unwrap(), Rational::int(30));
    assert_eq!(i4.evaluate(&ints(&[1, 2, 3, 4])).unwrap(), Rational::int(30));
    assert!(v.iter().all(|x| x.is_integral()));

    let i3 = GramLattice::identity(RationalField, 3);
    assert_eq!(i3.represent(&Rational::int(7), SearchLimit::Exhaustive).unwrap(), None);
    assert_eq!(i3.represent(&Rational::int(28), SearchLimit::Exhaustive).unwrap(), None);

    let f = q5();
    let i3 = GramLattice::identity(f, 3);
    let beta = f.elem(rat(5, 2), rat(1, 2));
    let v = i3.represent(&beta, SearchLimit::Exhaustive).unwrap().unwrap();
    assert_eq!(i3.evaluate(&v).unwrap(), beta);

    let skew = GramLattice::new(RationalField, vec![ints(&[1, 1]), ints(&[1, 2])]).unwrap();
    assert_eq!(
        skew.represent(&Rational::int(3), SearchLimit::Exhaustive),
        Err(Error::NonDiagonal)
    );
}

#[test]
fn budget_is_reported_separately() {
    let i4 = GramLattice::identity(RationalField, 4);
    assert!(matches!(
        i4.represent(&Rational::int(7 * 4096 - 1), SearchLimit::Budget(3)),
        Err(Error::BudgetExceeded(_))
    ));
}

/// Nested loops over `[-r, r]^n` for a diagonal form with positive integer
/// entries.
fn brute_force(diag: &[i64], target: i64) -> bool {
    fn go(diag: &[i64], rest: i64) -> bool {
        match diag.split_first() {
            None => rest == 0,
            Some((a, tail)) => {
                let mut x = 0;
                while a * x * x <= rest {
                    if go(tail, rest - a * x * x) {
                        return true;
                    }
                    x += 1;
                }
                false
            }
        }
    }
    go(diag, target)
}

#[test]
fn representation_agrees_with_brute_force() {
    let forms: [&[i64]; 6] = [&[1, 1, 1], &[1, 1, 1, 1], &[1, 2, 3], &[1, 1, 5], &[2, 3], &[1, 2, 5, 10]];
    for diag in forms {
        let l = GramLattice::diagonal(RationalField, ints(diag));
        for t in 1..=50 {
            let found = l
                .represent(&Rational::int(t), SearchLimit::Exhaustive)
                .unwrap();
            if let Some(v) = &found {
                assert_eq!(l.evaluate(v).unwrap(), Rational::int(t));
            }
            assert_eq!(found.is_some(), brute_force(diag, t), "{diag:?} t={t}");
        }
    }
}

#[test]
fn quadratic_representation_agrees_with_grid_search() {
    // sums of three squares in Z[sqrt 2] against an explicit coordinate grid
    let f = QuadField::new(2).unwrap();
    let l = GramLattice::identity(f, 3);
    let grid: Vec<QuadElem> = (-6..=6)
        .flat_map(|x| (-4..=4).map(move |y| f.elem(int(x), int(y))))
        .filter(|e| e.house().to_f64() <= 7.5)
        .collect();
    let squares: Vec<QuadElem> = grid.iter().map(|g| g.clone() * g.clone()).collect();
    for a in 0..=8 {
        for b in -5..=5 {
            let beta = f.elem(int(a), int(b));
            if !beta.is_totally_positive() || beta.house().to_f64() > 50.0 {
                continue;
            }
            let found = l.represent(&beta, SearchLimit::Exhaustive).unwrap();
            let brute = squares.iter().any(|s1| {
                squares.iter().any(|s2| {
                    let rest = beta.clone() - s1.clone() - s2.clone();
                    rest.is_totally_nonnegative() && squares.contains(&rest)
                })
            });
            assert_eq!(found.is_some(), brute, "{beta}");
        }
    }
}

#[test]
fn diagonal_2n_examples() {
    let f = q3();
    let l0 = diagonal_universal_2n(f, &[]).unwrap();
    assert_eq!(l0, GramLattice::identity(f, 1));
    let l1 = diagonal_universal_2n(f, &[eps3()]).unwrap();
    assert_eq!(l1, GramLattice::diagonal(f, vec![f.one(), eps3()]));
    let e2 = eps3() * eps3();
    let l2 = diagonal_universal_2n(f, &[eps3(), e2.clone()]).unwrap();
    assert_eq!(
        l2.diagonal_entries().unwrap(),
        vec![f.one(), eps3(), e2.clone(), eps3() * e2]
    );
    assert!(l2.is_classical() && l2.is_positive_definite());
    assert!(matches!(
        diagonal_universal_2n(f, &[f.elem(int(1), int(1))]),
        Err(Error::NotTotallyPositiveUnit(_))
    ));
}

#[test]
fn rank_bound_runs() {
    let f = q3();
    let l1 = diagonal_universal_2n(f, &[eps3()]).unwrap();
    let run = rank_lower_bound_run(&l1, &[f.one(), eps3()], SearchLimit::Exhaustive).unwrap();
    assert!(matches!(run.outcome, RankBoundOutcome::SplitsCompleted { splits: 2, .. }));
    assert!(run.distinct_classes && run.units_indecomposable && run.bound_certified());

    let id1 = GramLattice::identity(f, 1);
    let run = rank_lower_bound_run(&id1, &[f.one(), eps3()], SearchLimit::Exhaustive).unwrap();
    assert_eq!(
        run.outcome,
        RankBoundOutcome::RepresentationNotFound {
            index: 1,
            unit: eps3().to_string()
        }
    );

    let id3 = GramLattice::identity(RationalField, 3);
    let run = rank_lower_bound_run(&id3, &[Rational::int(1)], SearchLimit::Exhaustive).unwrap();
    assert!(matches!(run.outcome, RankBoundOutcome::SplitsCompleted { splits: 1, .. }));
}

#[test]
fn rank_bound_on_subset_product_lattices() {
    let f = q3();
    for n in 0..=3 {
        let e: Vec<QuadElem> = (1..=n).map(|_| eps3()).collect();
        let l = diagonal_universal_2n(f, &e).unwrap();
        let units = subset_products(&f, &e);
        let run = rank_lower_bound_run(&l, &units, SearchLimit::Exhaustive).unwrap();
        match run.outcome {
            RankBoundOutcome::SplitsCompleted { splits, .. } => assert_eq!(splits, 1 << n),
            other => panic!("n={n}: {other:?}"),
        }
        // Q(sqrt 3) has only two classes of totally positive units
        assert_eq!(run.distinct_classes, n <= 1);
    }
}

#[test]
fn repeated_class_is_detected() {
    let f = q3();
    let l = GramLattice::diagonal(f, vec![f.one(), eps3()]);
    let e3 = eps3() * eps3() * eps3();
    let run = rank_lower_bound_run(&l, &[eps3(), e3], SearchLimit::Exhaustive).unwrap();
    assert!(matches!(
        run.outcome,
        RankBoundOutcome::RepresentedByEarlierVectors { index: 1, .. }
    ));
    assert!(!run.distinct_classes);
}

#[test]
fn units_are_indecomposable() {
    for (d, x, y) in [(3, int(2), int(1)), (2, int(3), int(2)), (5, rat(3, 2), rat(1, 2)), (7, int(8), int(3))] {
        let e = QuadField::new(d).unwrap().elem(x, y);
        assert!(e.is_unit() && e.is_totally_positive());
        assert!(is_indecomposable(&e), "{e}");
    }
    assert!(!is_indecomposable(&Rational::int(2)));
    assert!(!is_indecomposable(&q3().from_int(2)));
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=3).prop_map(|(n, d)| Rational(rat(n, d)))
}

fn gram_and_vectors() -> impl Strategy<Value = (GramLattice<RationalField>, Vec<Rational>, Vec<Rational>)> {
    (1usize..=4).prop_flat_map(|n| {
        (
            prop::collection::vec(small_rational(), n * n),
            prop::collection::vec(small_rational(), n),
            prop::collection::vec(small_rational(), n),
        )
            .prop_map(move |(m, v, w)| {
                let mut g = vec![vec![Rational::int(0); n]; n];
                for i in 0..n {
                    for j in 0..n {
                        let (a, b) = (i.min(j), i.max(j));
                        g[i][j] = m[a * n + b].clone();
                    }
                }
                (GramLattice::new(RationalField, g).unwrap(), v, w)
            })
    })
}

/// A classical lattice `U^T G U` with `G[0][0] = +-1` and the vector mapped
/// to `e_0` by a unimodular lower-triangular `U`.
fn split_instance() -> impl Strategy<Value = (GramLattice<RationalField>, Vec<Rational>)> {
    (2usize..=4).prop_flat_map(|n| {
        (
            prop::collection::vec(-4i64..=4, n * n),
            prop::collection::vec(-3i64..=3, n * n),
            prop::bool::ANY,
        )
            .prop_map(move |(m, u, neg)| {
                let mut g = vec![vec![0i64; n]; n];
                for i in 0..n {
                    for j in 0..n {
                        g[i][j] = m[i.min(j) * n + i.max(j)];
                    }
                }
                g[0][0] = if neg { -1 } else { 1 };
                let mut um = vec![vec![0i64; n]; n];
                for i in 0..n {
                    um[i][i] = 1;
                    for j in 0..i {
                        um[i][j] = u[i * n + j];
                    }
                }
                // G' = U^T G U
                let mut gp = vec![vec![0i64; n]; n];
                for i in 0..n {
                    for j in 0..n {
                        let mut s = 0;
                        for k in 0..n {
                            for l in 0..n {
                                s += um[k][i] * g[k][l] * um[l][j];
                            }
                        }
                        gp[i][j] = s;
                    }
                }
                // solve U x = e_0 by forward substitution
                let mut x = vec![0i64; n];
                for i in 0..n {
                    let s: i64 = (0..i).map(|j| um[i][j] * x[j]).sum();
                    x[i] = i64::from(i == 0) - s;
                }
                let rows: Vec<Vec<Rational>> = gp.iter().map(|r| ints(r)).collect();
                (GramLattice::new(RationalField, rows).unwrap(), ints(&x))
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polarization((l, v, w) in gram_and_vectors()) {
        let sum: Vec<Rational> = v.iter().zip(&w).map(|(a, b)| a.clone() + b.clone()).collect();
        let lhs = l.evaluate(&sum).unwrap();
        let rhs = l.evaluate(&v).unwrap()
            + l.evaluate(&w).unwrap()
            + l.bilinear(&v, &w).unwrap().scale(&int(2));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(l.bilinear(&v, &w).unwrap(), l.bilinear(&w, &v).unwrap());
    }

    #[test]
    fn split_is_orthogonal((l, v) in split_instance()) {
        let s = l.split_unit(&v).unwrap();
        prop_assert_eq!(s.complement.rank(), l.rank() - 1);
        prop_assert!(s.complement.is_classical());
        for w in &s.complement_basis {
            prop_assert_eq!(l.bilinear(w, &v).unwrap(), Rational::int(0));
        }
        prop_assert_eq!(l.determinant(), l.evaluate(&v).unwrap() * s.complement.determinant());
    }
}
