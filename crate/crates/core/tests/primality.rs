mod common;

use graded_prime::constructions::{build_group_ring, build_matrix_graded, MatrixGrading};
use graded_prime::{
    decide_prime, is_prime_graded, main_theorem_harness, search_np_datum, verify_np_datum, Caps,
    Degree, Error, FiniteGroup, FiniteRing, Flavor, GradeGroup, GradedRing, Method, NpDatum,
    NpFailure, Strategy,
};

fn caps() -> Caps {
    Caps::default()
}

fn f2() -> FiniteRing {
    FiniteRing::zmod(2)
}

fn group_ring(n: usize) -> GradedRing {
    build_group_ring(&f2(), &FiniteGroup::cyclic(n), &caps()).unwrap()
}

fn matrix(base: &FiniteRing, mode: MatrixGrading) -> GradedRing {
    build_matrix_graded(base, 2, mode, &caps()).unwrap()
}

fn c2_datum(s: &GradedRing) -> NpDatum {
    let g = FiniteGroup::cyclic(2);
    let a = s.ring().principal_ideal(&[1, 1]);
    NpDatum {
        h: g.whole(),
        n: g.whole(),
        i: s.component(&Degree::Finite(0)),
        a: a.clone(),
        b: a,
    }
}

#[test]
fn hand_built_datum_verifies_for_every_flavor() {
    let s = group_ring(2);
    let d = c2_datum(&s);
    // (1+g) x (1+g) = 0 for x in {1, g}
    for x in [vec![1, 0], vec![0, 1]] {
        assert!(s
            .ring()
            .mul(&s.ring().mul(&[1, 1], &x), &[1, 1])
            .iter()
            .all(|&c| c == 0));
    }
    for f in Flavor::ALL {
        assert_eq!(verify_np_datum(&s, &d, f).unwrap(), None, "{f:?}");
    }
    let zero = NpDatum {
        i: s.ring().zero_sub(),
        ..d
    };
    assert_eq!(
        verify_np_datum(&s, &zero, Flavor::B).unwrap(),
        Some(NpFailure::IZero)
    );
}

#[test]
fn search_examples() {
    let s = group_ring(2);
    let d = search_np_datum(&s, Flavor::B, &caps()).unwrap().unwrap();
    assert_eq!((d.h.order(), d.n.order()), (2, 2));
    let s3 = group_ring(3);
    let d = search_np_datum(&s3, Flavor::B, &caps()).unwrap().unwrap();
    assert_eq!(verify_np_datum(&s3, &d, Flavor::B).unwrap(), None);
    assert!(!common::prime_by_elements(s3.ring()));
    let m = matrix(&f2(), MatrixGrading::Cyclic);
    for f in Flavor::ALL {
        assert!(search_np_datum(&m, f, &caps()).unwrap().is_none());
    }
    assert!(common::prime_by_elements(m.ring()));
}

#[test]
fn brute_force_examples() {
    let s = group_ring(2);
    let rep = is_prime_graded(&s, &caps()).unwrap();
    assert!(!rep.prime);
    let (a, b) = rep.witness.unwrap();
    let one_plus_g = s.ring().principal_ideal(&[1, 1]);
    assert_eq!(s.ring().principal_ideal(&a), one_plus_g);
    assert_eq!(s.ring().principal_ideal(&b), one_plus_g);
    assert!(
        is_prime_graded(&matrix(&f2(), MatrixGrading::Integers), &caps())
            .unwrap()
            .prime
    );
    let zp = GradedRing::trivial(FiniteRing::zero_product(3, 2).unwrap());
    assert!(!is_prime_graded(&zp, &caps()).unwrap().prime);
}

#[test]
fn decision_examples() {
    let rep = decide_prime(
        &matrix(&f2(), MatrixGrading::Integers),
        Strategy::Auto,
        &caps(),
    )
    .unwrap();
    assert!(rep.prime);
    assert_eq!(rep.method, Method::OrderedShortcut);
    assert_eq!(rep.cross_check, Some(true));
    let rep = decide_prime(
        &matrix(&FiniteRing::zmod(4), MatrixGrading::Integers),
        Strategy::Auto,
        &caps(),
    )
    .unwrap();
    assert!(!rep.prime);
    assert_eq!(rep.cross_check, Some(true));
    let rep = decide_prime(&group_ring(2), Strategy::Auto, &caps()).unwrap();
    assert!(!rep.prime);
    assert_eq!(rep.method, Method::NpSearch);
    assert!(rep.datum.is_some());
}

#[test]
fn shortcut_needs_nearly_eps_grading() {
    let zp = GradedRing::new(
        FiniteRing::zero_product(2, 1).unwrap(),
        GradeGroup::Lattice(1),
        vec![Degree::Lattice(vec![0])],
    )
    .unwrap();
    let err = decide_prime(&zp, Strategy::OrderedShortcut, &caps()).unwrap_err();
    assert!(matches!(err, Error::StrategyUnavailable(_)));
}

#[test]
fn harness_examples() {
    let h = main_theorem_harness(&group_ring(2), &caps()).unwrap();
    assert_eq!(h.conditions(), [true; 5]);
    let h = main_theorem_harness(&matrix(&f2(), MatrixGrading::Cyclic), &caps()).unwrap();
    assert_eq!(h.conditions(), [false; 5]);
    assert!(h.chain_holds() && h.all_equal());
    let rr = FiniteRing::direct_sum(&[f2(), f2()]).unwrap();
    let g = FiniteGroup::cyclic(2);
    let s = GradedRing::new(
        rr,
        GradeGroup::Finite(g.clone()),
        vec![Degree::Finite(0); 2],
    )
    .unwrap();
    let h = main_theorem_harness(&s, &caps()).unwrap();
    assert!(h.conditions()[0]);
    let d = NpDatum {
        h: g.whole(),
        n: g.trivial_subgroup(),
        i: s.principal(),
        a: s.ring().span([vec![1, 0]]),
        b: s.ring().span([vec![0, 1]]),
    };
    for f in Flavor::ALL {
        assert_eq!(verify_np_datum(&s, &d, f).unwrap(), None, "{f:?}");
    }
}
