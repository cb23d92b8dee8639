mod common;

use std::collections::BTreeMap;

use graded_prime::constructions::{
    build_group_ring, build_matrix_graded, build_partial_crossed_product,
    build_partial_skew_group_ring, build_skew_group_ring, connell_decision, partial_invariance,
    Coefficients, ConnellReason, MatrixGrading, PartialActionData, PartialDomain, SkewAction,
    TwistedPartialData,
};
use graded_prime::{
    decide_prime, Caps, Degree, Error, FiniteGroup, FiniteRing, GradeGroup, Strategy, SymbolicGroup,
};

fn caps() -> Caps {
    Caps::default()
}

fn f2() -> FiniteRing {
    FiniteRing::zmod(2)
}

fn f2f2() -> FiniteRing {
    FiniteRing::direct_sum(&[f2(), f2()]).unwrap()
}

fn swap() -> SkewAction {
    SkewAction {
        maps: vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]],
    }
}

/// C2 acting on F2 + F2 with D_g the first summand, fixed pointwise.
fn one_summand() -> PartialActionData {
    let mut domains = BTreeMap::new();
    domains.insert(
        Degree::Finite(0),
        PartialDomain {
            basis: vec![vec![1, 0], vec![0, 1]],
            map: vec![vec![1, 0], vec![0, 1]],
        },
    );
    domains.insert(
        Degree::Finite(1),
        PartialDomain {
            basis: vec![vec![1, 0]],
            map: vec![vec![1, 0]],
        },
    );
    PartialActionData {
        group: GradeGroup::Finite(FiniteGroup::cyclic(2)),
        domains,
    }
}

#[test]
fn skew_group_rings() {
    let g = FiniteGroup::cyclic(3);
    let plain = build_group_ring(&f2(), &g, &caps()).unwrap();
    let skew = build_skew_group_ring(&f2(), &g, &SkewAction::trivial(&f2(), &g), &caps()).unwrap();
    assert_eq!(plain.ring().dense_table(), skew.ring().dense_table());
    let s = build_skew_group_ring(&f2f2(), &FiniteGroup::cyclic(2), &swap(), &caps()).unwrap();
    assert!(decide_prime(&s, Strategy::Auto, &caps()).unwrap().prime);
    assert!(common::prime_by_elements(s.ring()));
    assert!(!common::prime_by_elements(&f2f2()));
    let bad = SkewAction {
        maps: vec![swap().maps[1].clone(), swap().maps[0].clone()],
    };
    assert!(build_skew_group_ring(&f2f2(), &FiniteGroup::cyclic(2), &bad, &caps()).is_err());
}

#[test]
fn partial_skew_group_rings() {
    let g = FiniteGroup::cyclic(2);
    let global = build_partial_skew_group_ring(
        &f2f2(),
        &PartialActionData::global(&f2f2(), &g, &swap()),
        &caps(),
    )
    .unwrap();
    let skew = build_skew_group_ring(&f2f2(), &g, &swap(), &caps()).unwrap();
    assert_eq!(global.ring().dense_table(), skew.ring().dense_table());
    let s = build_partial_skew_group_ring(&f2f2(), &one_summand(), &caps()).unwrap();
    let f = s.classify(&caps()).unwrap();
    assert!(f.nearly_epsilon_strong && !f.strong);
    let mut bad = one_summand();
    bad.domains.get_mut(&Degree::Finite(1)).unwrap().map = vec![vec![0, 1]];
    assert!(matches!(
        build_partial_skew_group_ring(&f2f2(), &bad, &caps()),
        Err(Error::AxiomViolation { .. })
    ));
}

#[test]
fn twisted_partial_crossed_products() {
    let g = FiniteGroup::cyclic(2);
    let global = TwistedPartialData {
        action: PartialActionData::global(&f2f2(), &g, &swap()),
        twist: BTreeMap::new(),
    };
    let a = build_partial_crossed_product(&f2f2(), &global, &caps()).unwrap();
    let b = build_skew_group_ring(&f2f2(), &g, &swap(), &caps()).unwrap();
    assert_eq!(a.ring().dense_table(), b.ring().dense_table());
    let mut twist = BTreeMap::new();
    twist.insert((Degree::Finite(1), Degree::Finite(1)), vec![1, 0]);
    let unit_twist = TwistedPartialData {
        action: one_summand(),
        twist,
    };
    let s = build_partial_crossed_product(&f2f2(), &unit_twist, &caps()).unwrap();
    assert!(s.classify(&caps()).unwrap().epsilon_strong);
    let mut twist = BTreeMap::new();
    twist.insert((Degree::Finite(1), Degree::Finite(1)), vec![0, 1]);
    let zero_divisor = TwistedPartialData {
        action: one_summand(),
        twist,
    };
    assert!(matches!(
        build_partial_crossed_product(&f2f2(), &zero_divisor, &caps()),
        Err(Error::NotInvertible(_))
    ));
}

#[test]
fn matrix_gradings() {
    let one =
        build_matrix_graded(&FiniteRing::zmod(4), 1, MatrixGrading::Integers, &caps()).unwrap();
    assert_eq!(one.support(), vec![Degree::Lattice(vec![0])]);
    let m = build_matrix_graded(&f2(), 2, MatrixGrading::Integers, &caps()).unwrap();
    assert!(decide_prime(&m, Strategy::Auto, &caps()).unwrap().prime);
    let m4 =
        build_matrix_graded(&FiniteRing::zmod(4), 2, MatrixGrading::Integers, &caps()).unwrap();
    assert!(!decide_prime(&m4, Strategy::Auto, &caps()).unwrap().prime);
    assert!(!common::prime_by_elements(m4.ring()));
}

#[test]
fn group_ring_criterion() {
    let z = SymbolicGroup::parse("Z").unwrap();
    let rep = connell_decision(Coefficients::Ring(&f2()), &z, &caps()).unwrap();
    assert!(rep.prime && rep.cross_check.is_none());
    let c2 = SymbolicGroup::parse("C2").unwrap();
    let rep = connell_decision(Coefficients::Ring(&f2()), &c2, &caps()).unwrap();
    assert_eq!(
        (rep.prime, rep.reason, rep.cross_check),
        (false, ConnellReason::FiniteNormalSubgroup, Some(true))
    );
    let group_ring = build_group_ring(&f2(), &FiniteGroup::cyclic(2), &caps()).unwrap();
    assert!(!common::prime_by_elements(group_ring.ring()));
    let rep = connell_decision(Coefficients::Ring(&FiniteRing::zmod(4)), &z, &caps()).unwrap();
    assert_eq!(
        (rep.prime, rep.reason),
        (false, ConnellReason::CoefficientsNotPrime)
    );
    assert!(
        connell_decision(Coefficients::Prime(true), &z, &caps())
            .unwrap()
            .prime
    );
    let zp = FiniteRing::zero_product(2, 1).unwrap();
    assert_eq!(
        connell_decision(Coefficients::Ring(&zp), &z, &caps()),
        Err(Error::NotSUnital)
    );
}

#[test]
fn partial_invariance_examples() {
    let r = f2f2();
    let d = one_summand();
    assert!(partial_invariance(&r, &d, &r.full(), None).unwrap());
    assert!(partial_invariance(&r, &d, &r.zero_sub(), None).unwrap());
    assert!(partial_invariance(&r, &d, &r.span([vec![0, 1]]), None).unwrap());
    let g = FiniteGroup::cyclic(2);
    let s = build_partial_skew_group_ring(&r, &PartialActionData::global(&r, &g, &swap()), &caps())
        .unwrap();
    assert!(s.classify(&caps()).unwrap().strong);
    let moved = r.span([vec![1, 0]]);
    assert!(!partial_invariance(
        &r,
        &PartialActionData::global(&r, &g, &swap()),
        &moved,
        None
    )
    .unwrap());
}
