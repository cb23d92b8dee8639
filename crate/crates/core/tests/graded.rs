mod common;

use graded_prime::constructions::{build_group_ring, build_matrix_graded, MatrixGrading};
use graded_prime::graded::{Invariance, NormalSpec};
use graded_prime::{Caps, Degree, Error, FiniteGroup, FiniteRing, GradeGroup, GradedRing};

fn caps() -> Caps {
    Caps::default()
}

fn f2() -> FiniteRing {
    FiniteRing::zmod(2)
}

fn m2(base: &FiniteRing) -> GradedRing {
    build_matrix_graded(base, 2, MatrixGrading::Integers, &caps()).unwrap()
}

fn f2_group_ring(n: usize) -> GradedRing {
    build_group_ring(&f2(), &FiniteGroup::cyclic(n), &caps()).unwrap()
}

fn z(x: i64) -> Degree {
    Degree::Lattice(vec![x])
}

#[test]
fn grading_validation() {
    let r = FiniteRing::direct_sum(&[f2(), f2()]).unwrap();
    assert!(GradedRing::new(
        r,
        GradeGroup::Finite(FiniteGroup::cyclic(3)),
        vec![Degree::Finite(0); 2]
    )
    .is_ok());
    let s = m2(&f2());
    assert_eq!(s.degrees(), &[z(0), z(-1), z(1), z(0)]);
    let err = GradedRing::new(
        s.ring().clone(),
        GradeGroup::Lattice(1),
        vec![z(0), z(1), z(1), z(0)],
    )
    .unwrap_err();
    assert!(matches!(err, Error::NotGraded(..)));
}

#[test]
fn components() {
    let s = m2(&f2());
    assert_eq!(s.component(&z(1)).gens(), &[vec![0, 0, 1, 0]]);
    assert!(s.component(&z(5)).is_zero());
}

#[test]
fn classifier_examples() {
    let f = m2(&f2()).classify(&caps()).unwrap();
    assert!(!f.strong && f.epsilon_strong);
    assert!(f2_group_ring(2).classify(&caps()).unwrap().strong);
    let zp = GradedRing::trivial(FiniteRing::zero_product(2, 1).unwrap());
    let f = zp.classify(&caps()).unwrap();
    assert!(!f.nearly_epsilon_strong && !f.nearly_epsilon_strong_by_ideals);
    assert!(!f.epsilon_strong && !f.non_degenerate && !f.ring_s_unital);
}

#[test]
fn cancellative_examples() {
    assert!(f2_group_ring(2)
        .is_cancellative_eps_strong(&caps())
        .unwrap());
    assert!(!m2(&f2()).is_cancellative_eps_strong(&caps()).unwrap());
    assert!(GradedRing::trivial(f2())
        .is_cancellative_eps_strong(&caps())
        .unwrap());
    let zp = GradedRing::trivial(FiniteRing::zero_product(2, 1).unwrap());
    assert_eq!(
        zp.is_cancellative_eps_strong(&caps()),
        Err(Error::NotEpsilonStrong)
    );
}

#[test]
fn conjugate_ideals() {
    let s = GradedRing::new(
        f2(),
        GradeGroup::Finite(FiniteGroup::cyclic(2)),
        vec![Degree::Finite(0)],
    )
    .unwrap();
    assert!(s.conjugate(&s.principal(), &Degree::Finite(1)).is_zero());
    // diag((2), (2)) in M_2(Z/4): I^x in I for all x, yet I^1 is only one corner.
    let s = m2(&FiniteRing::zmod(4));
    let i = s.ring().span([vec![2, 0, 0, 0], vec![0, 0, 0, 2]]);
    assert!(s.invariance(&i, Invariance::Conjugation(None)).unwrap());
    let i1 = s.conjugate(&i, &z(1));
    assert_ne!(i1, i);
    assert!(i1.is_subset(&i));
}

#[test]
fn invariance_examples() {
    let s = f2_group_ring(2);
    let e = s.ring().span([vec![1, 0]]);
    let trivial = FiniteGroup::cyclic(2).trivial_subgroup();
    assert!(s
        .invariance(&e, Invariance::Conjugation(Some(&trivial)))
        .unwrap());
    let s4 = m2(&FiniteRing::zmod(4));
    let corner = s4.ring().span([vec![2, 0, 0, 0]]);
    assert!(!s4
        .invariance(&corner, Invariance::Conjugation(None))
        .unwrap());
    let s = m2(&f2());
    for i in s
        .principal_ring()
        .unwrap()
        .enumerate_ideals(&caps())
        .unwrap()
    {
        let lifted = s.ring().span(i.gens().iter().map(|g| {
            let mut v = vec![0; 4];
            v[0] = g[0];
            v[3] = g[1];
            v
        }));
        assert!(s.invariance(&lifted, Invariance::Epsilon).unwrap());
    }
}

#[test]
fn invariant_closures() {
    let s = m2(&FiniteRing::zmod(4));
    let r = s.ring();
    let diag = r.span([vec![2, 0, 0, 0], vec![0, 0, 0, 2]]);
    assert_eq!(s.invariant_closure(&diag, None).unwrap(), diag);
    let corner = r.span([vec![2, 0, 0, 0]]);
    assert_eq!(s.invariant_closure(&corner, None).unwrap(), diag);
    assert!(s.invariant_closure(&r.zero_sub(), None).unwrap().is_zero());
}

#[test]
fn g_primeness() {
    assert!(f2_group_ring(2).is_g_prime(&caps()).unwrap());
    let s = m2(&FiniteRing::zmod(4));
    assert!(!s.is_g_semiprime(&caps()).unwrap());
}

#[test]
fn subring_projection() {
    let s = f2_group_ring(6);
    assert_eq!(
        s.subring(None).unwrap().ring().dense_table(),
        s.ring().dense_table()
    );
    let h = FiniteGroup::cyclic(6).closure(&[2]);
    let sub = s.subring(Some(&h)).unwrap();
    let c3 = f2_group_ring(3);
    assert_eq!(sub.ring().rank(), 3);
    assert_eq!(
        sub.ring().is_prime(&caps()).unwrap().is_prime(),
        c3.ring().is_prime(&caps()).unwrap().is_prime()
    );
    assert_eq!(
        sub.ring().enumerate_ideals(&caps()).unwrap().len(),
        c3.ring().enumerate_ideals(&caps()).unwrap().len()
    );
    let v = vec![1, 1, 1, 1, 1, 1];
    assert_eq!(s.project(&v, Some(&h)), vec![1, 0, 1, 0, 1, 0]);
}

#[test]
fn quotient_gradings() {
    let s = f2_group_ring(6);
    let q = s
        .quotient_grading(NormalSpec::Finite(
            &FiniteGroup::cyclic(6).trivial_subgroup(),
        ))
        .unwrap();
    assert_eq!(q.degrees(), s.degrees());
    let m = m2(&f2());
    let q = m.quotient_grading(NormalSpec::Lattice(&[vec![2]])).unwrap();
    assert_eq!(
        q.principal(),
        m.ring().span([vec![1, 0, 0, 0], vec![0, 0, 0, 1]])
    );
    let q = s
        .quotient_grading(NormalSpec::Finite(&FiniteGroup::cyclic(6).closure(&[3])))
        .unwrap();
    assert_eq!(q.group().as_finite().unwrap().order(), 3);
    assert_eq!(q.support().len(), 3);
    for d in q.support() {
        assert_eq!(q.component(&d).gens().len(), 2);
    }
}

#[test]
fn correspondence_examples() {
    let r = GradedRing::trivial(f2()).correspondence(&caps()).unwrap();
    assert_eq!((r.graded_ideals, r.invariant_ideals), (2, 2));
    let r = m2(&f2()).correspondence(&caps()).unwrap();
    assert_eq!((r.graded_ideals, r.invariant_ideals), (2, 2));
    assert!(r.maps_inverse && r.primes_correspond);
    let r = f2_group_ring(2).correspondence(&caps()).unwrap();
    assert_eq!(r.graded_ideals, r.invariant_ideals);
    assert!(r.maps_inverse);
}

#[test]
fn graded_primeness_matches_oracle() {
    assert!(GradedRing::trivial(f2()).is_graded_prime(&caps()).unwrap());
    let s = m2(&f2());
    assert!(s.is_graded_prime(&caps()).unwrap());
    assert!(common::prime_by_elements(s.ring()));
    let s = m2(&FiniteRing::zmod(4));
    assert!(!s.is_graded_prime(&caps()).unwrap());
    assert!(!common::prime_by_elements(s.ring()));
}

#[test]
fn calculus_holds_on_small_rings() {
    for s in [
        m2(&f2()),
        m2(&FiniteRing::zmod(4)),
        f2_group_ring(2),
        f2_group_ring(3),
    ] {
        assert_eq!(
            s.check_invariant_calculus(&caps()).unwrap(),
            Vec::<String>::new()
        );
    }
}
