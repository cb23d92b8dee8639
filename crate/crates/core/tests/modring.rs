mod common;

use graded_prime::{Caps, Error, FiniteRing, Side, Verdict};

fn f2() -> FiniteRing {
    FiniteRing::zmod(2)
}

fn z4() -> FiniteRing {
    FiniteRing::zmod(4)
}

fn m2f2() -> FiniteRing {
    FiniteRing::matrix_ring(2, &f2()).unwrap()
}

/// e_{ij} e_{kl} = delta_{jk} e_{il}, basis index 2i + j.
fn matrix_units() -> Vec<Vec<Vec<u64>>> {
    let idx = |i: usize, j: usize| 2 * i + j;
    let mut mul = vec![vec![vec![0; 4]; 4]; 4];
    for (i, j, k, l) in (0..16).map(|x| (x >> 3 & 1, x >> 2 & 1, x >> 1 & 1, x & 1)) {
        if j == k {
            mul[idx(i, j)][idx(k, l)][idx(i, l)] = 1;
        }
    }
    mul
}

#[test]
fn structure_constant_validation() {
    let z4 = FiniteRing::new(4, vec![vec![vec![1]]], Some(vec![1]), None).unwrap();
    assert!(z4.has_identity());
    let m = FiniteRing::new(2, matrix_units(), Some(vec![1, 0, 0, 1]), None).unwrap();
    assert_eq!(m.dense_table(), m2f2().dense_table());
    let twisted = vec![vec![vec![0, 1], vec![0, 0]], vec![vec![1, 0], vec![0, 0]]];
    assert!(matches!(
        FiniteRing::new(4, twisted, None, None),
        Err(Error::NotAssociative(..))
    ));
}

#[test]
fn principal_ideals_match_element_closure() {
    let r = z4();
    assert!(r.principal_ideal(&[0]).is_zero());
    let two = r.principal_ideal(&[2]);
    assert_eq!(
        two.elements()
            .into_iter()
            .collect::<std::collections::BTreeSet<_>>(),
        common::ideal_by_elements(&r, &[vec![2]])
    );
    assert_eq!(two.order(), 2);
    let m = m2f2();
    assert_eq!(m.principal_ideal(&[1, 0, 0, 0]), m.full());
    assert_eq!(common::ideal_by_elements(&m, &[vec![1, 0, 0, 0]]).len(), 16);
}

#[test]
fn ideal_products() {
    let r = z4();
    let two = r.principal_ideal(&[2]);
    assert!(r.product(&two, &r.zero_sub()).is_zero());
    assert!(r.product(&two, &two).is_zero());
    assert_eq!(f2().product(&f2().full(), &f2().full()), f2().full());
}

#[test]
fn s_unitality() {
    let caps = Caps::default();
    assert!(m2f2().is_s_unital(&caps).unwrap());
    let zp = FiniteRing::zero_product(2, 1).unwrap();
    assert!(!zp.is_s_unital(&caps).unwrap());
    let f2f2 = FiniteRing::direct_sum(&[f2(), f2()]).unwrap();
    assert!(f2f2.is_s_unital(&caps).unwrap());
}

#[test]
fn primeness_matches_element_oracle() {
    let caps = Caps::default();
    assert_eq!(f2().is_prime(&caps).unwrap(), Verdict::Prime);
    match z4().is_prime(&caps).unwrap() {
        Verdict::NotPrime { a, b } => assert_eq!((a, b), (vec![2], vec![2])),
        Verdict::Prime => panic!("Z/4 is not prime"),
    }
    let rr = FiniteRing::direct_sum(&[FiniteRing::zmod(3), FiniteRing::zmod(3)]).unwrap();
    assert!(!rr.is_prime(&caps).unwrap().is_prime());
    let zp = FiniteRing::zero_product(2, 1).unwrap();
    for r in [
        f2(),
        z4(),
        rr,
        m2f2(),
        zp,
        FiniteRing::zmod(6),
        FiniteRing::matrix_ring(2, &z4()).unwrap(),
    ] {
        assert_eq!(
            r.is_prime(&caps).unwrap().is_prime(),
            common::prime_by_elements(&r),
            "{r:?}"
        );
    }
}

#[test]
fn ideal_lattices() {
    let caps = Caps::default();
    assert_eq!(f2().enumerate_ideals(&caps).unwrap().len(), 2);
    let z4_ideals = z4().enumerate_ideals(&caps).unwrap();
    assert_eq!(
        z4_ideals.iter().map(|i| i.order()).collect::<Vec<_>>(),
        vec![1, 2, 4]
    );
    let f2f2 = FiniteRing::direct_sum(&[f2(), f2()]).unwrap();
    assert_eq!(f2f2.enumerate_ideals(&caps).unwrap().len(), 4);
}

#[test]
fn annihilators() {
    let r = z4();
    assert_eq!(r.annihilator(&r.zero_sub(), Side::Left), r.full());
    let two = r.principal_ideal(&[2]);
    assert_eq!(r.annihilator(&two, Side::Right), two);
    let m = m2f2();
    assert!(m.annihilator(&m.full(), Side::Right).is_zero());
}

#[test]
fn element_cap_is_explicit() {
    let caps = Caps {
        max_elements: 3,
        ..Caps::default()
    };
    let err = FiniteRing::matrix_ring(2, &z4())
        .unwrap()
        .is_prime(&caps)
        .unwrap_err();
    assert!(matches!(err, Error::CapExceeded { .. }));
}
