mod common;

use graded_prime::constructions::Coefficients;
use graded_prime::corpus::{generate, Case};
use graded_prime::json::{graph_from_json, graph_to_json, ring_from_json, ring_to_json};
use graded_prime::lpa::{
    build_lpa_acyclic, lpa_prime_decision, reachability, satisfies_mt3, DirectedGraph,
};
use graded_prime::zmod::{kernel, solve_left};
use graded_prime::{Caps, FiniteGroup, FiniteRing, Submodule, Zn};
use proptest::prelude::*;

fn modulus() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4, 6, 8, 9, 12])
}

fn vectors(m: u64, dim: usize, max: usize) -> impl Strategy<Value = Vec<Vec<u64>>> {
    prop::collection::vec(prop::collection::vec(0..m, dim), 0..max)
}

fn ring() -> impl Strategy<Value = FiniteRing> {
    (prop::sample::select(vec![2u64, 3, 4, 6]), 0..5usize).prop_map(|(m, kind)| {
        let a = FiniteRing::zmod(m);
        match kind {
            0 => a,
            1 => FiniteRing::direct_sum(&[a.clone(), a]).unwrap(),
            2 => FiniteRing::matrix_ring(2, &FiniteRing::zmod(m.min(3))).unwrap(),
            3 => FiniteRing::zero_product(m, 1).unwrap(),
            _ => FiniteRing::direct_sum(&[a, FiniteRing::zero_product(m, 1).unwrap()]).unwrap(),
        }
    })
}

fn group() -> impl Strategy<Value = FiniteGroup> {
    (1..7usize, 1..4usize, any::<bool>()).prop_map(|(n, k, s3)| {
        if s3 {
            FiniteGroup::symmetric3()
        } else {
            FiniteGroup::direct_product(&FiniteGroup::cyclic(n), &FiniteGroup::cyclic(k))
        }
    })
}

fn acyclic_graph(max_v: usize) -> impl Strategy<Value = DirectedGraph> {
    (1..=max_v).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        prop::sample::subsequence(pairs.clone(), 0..=pairs.len().min(6))
            .prop_map(move |ps| DirectedGraph::from_pairs(n, &ps).unwrap())
    })
}

fn any_graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1..7usize).prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 0..10)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_is_generator_independent(m in modulus(), gens in vectors(12, 3, 5), mix in vectors(12, 5, 4)) {
        let zn = Zn::new(m);
        let a = Submodule::span(zn, 3, gens.clone());
        let mut more = gens.clone();
        for coeffs in &mix {
            let mut v = vec![0; 3];
            for (c, g) in coeffs.iter().zip(&gens) {
                zn.add_assign_scaled(&mut v, *c, g);
            }
            more.push(v);
        }
        more.reverse();
        let b = Submodule::span(zn, 3, more);
        prop_assert_eq!(&a, &b);
        let elems = a.elements();
        prop_assert_eq!(elems.len() as u128, a.order());
        for g in &gens {
            prop_assert!(a.contains(&g.iter().map(|c| c % m).collect::<Vec<_>>()));
        }
    }

    #[test]
    fn sum_and_intersection_orders(m in modulus(), x in vectors(12, 3, 4), y in vectors(12, 3, 4)) {
        let zn = Zn::new(m);
        let a = Submodule::span(zn, 3, x);
        let b = Submodule::span(zn, 3, y);
        let (s, i) = (a.sum(&b), a.intersect(&b));
        prop_assert!(a.is_subset(&s) && b.is_subset(&s) && i.is_subset(&a) && i.is_subset(&b));
        prop_assert_eq!(s.order() * i.order(), a.order() * b.order());
    }

    #[test]
    fn kernel_and_solve(m in modulus(), rows in vectors(12, 3, 5), x in prop::collection::vec(0..12u64, 5)) {
        let zn = Zn::new(m);
        let rows: Vec<Vec<u64>> = rows.into_iter().map(|r| r.into_iter().map(|c| c % m).collect()).collect();
        let apply = |coeffs: &[u64]| {
            let mut v = vec![0; 3];
            for (c, r) in coeffs.iter().zip(&rows) {
                zn.add_assign_scaled(&mut v, *c % m, r);
            }
            v
        };
        for k in kernel(zn, &rows, 3).gens() {
            prop_assert!(apply(k).iter().all(|&c| c == 0));
        }
        let target = apply(&x[..rows.len()]);
        let y = solve_left(zn, &rows, &target).expect("target is in the row span");
        prop_assert_eq!(apply(&y), target);
    }

    #[test]
    fn principal_ideals_are_ideals(r in ring(), seed in prop::collection::vec(0..12u64, 4)) {
        let a: Vec<u64> = (0..r.rank()).map(|i| seed[i % seed.len()] % r.modulus()).collect();
        let i = r.principal_ideal(&a);
        prop_assert!(i.contains(&a));
        prop_assert_eq!(&r.ideal(&i), &i);
        let oracle = common::ideal_by_elements(&r, std::slice::from_ref(&a));
        prop_assert_eq!(oracle.len() as u128, i.order());
        let j = r.principal_ideal(&r.mul(&a, &a));
        let p = r.product(&i, &j);
        prop_assert!(p.is_subset(&i) && p.is_subset(&j));
    }

    #[test]
    fn prime_implies_semiprime(r in ring()) {
        let caps = Caps::default();
        let prime = r.is_prime(&caps).unwrap().is_prime();
        prop_assert_eq!(prime, common::prime_by_elements(&r));
        if prime {
            prop_assert!(r.is_semiprime(&caps).unwrap());
        }
    }

    #[test]
    fn group_axioms(g in group(), picks in prop::collection::vec(0..36usize, 0..3)) {
        let n = g.order();
        let e = g.identity();
        for a in 0..n {
            prop_assert_eq!(g.mul(a, e), a);
            prop_assert_eq!(g.mul(a, g.inv(a)), e);
            for b in 0..n {
                for c in 0..n {
                    prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
        let gens: Vec<usize> = picks.iter().map(|p| p % n).collect();
        let h = g.closure(&gens);
        prop_assert!(g.subgroup(h.elements()).is_ok());
        prop_assert_eq!(n % h.order(), 0);
        let nc = g.normal_closure(&g.whole(), &gens).unwrap();
        prop_assert!(g.is_normal(&nc, &g.whole()).unwrap());
        let (q, proj) = g.quotient(&nc).unwrap();
        prop_assert_eq!(q.order() * nc.order(), n);
        for a in 0..n {
            for b in 0..n {
                prop_assert_eq!(proj[g.mul(a, b)], q.mul(proj[a], proj[b]));
            }
        }
    }

    #[test]
    fn reachability_is_closed((n, pairs) in any_graph()) {
        let g = DirectedGraph::from_pairs(n, &pairs).unwrap();
        let r = reachability(&g).matrix();
        let closure_pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| r[u][v]).collect();
        let again = reachability(&DirectedGraph::from_pairs(n, &closure_pairs).unwrap()).matrix();
        prop_assert_eq!(r, again);
    }

    #[test]
    fn mt3_ignores_labels((n, pairs) in any_graph(), shift in 0..6usize, flip in any::<bool>()) {
        let perm = |v: usize| {
            let w = (v + shift) % n;
            if flip { n - 1 - w } else { w }
        };
        let g = DirectedGraph::from_pairs(n, &pairs).unwrap();
        let moved: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (perm(a), perm(b))).collect();
        let h = DirectedGraph::from_pairs(n, &moved).unwrap();
        prop_assert_eq!(satisfies_mt3(&g).holds, satisfies_mt3(&h).holds);
    }

    #[test]
    fn json_round_trips(r in ring(), (n, pairs) in any_graph()) {
        prop_assert_eq!(&ring_from_json(&ring_to_json(&r)).unwrap(), &r);
        let g = DirectedGraph::from_pairs(n, &pairs).unwrap();
        prop_assert_eq!(&graph_from_json(&graph_to_json(&g)).unwrap(), &g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lpa_decision_matches_brute_force(g in acyclic_graph(6), m in prop::sample::select(vec![2u64, 3, 4])) {
        let caps = Caps::default();
        let r = FiniteRing::zmod(m);
        let real = match build_lpa_acyclic(&g, &r, &caps) {
            Ok(x) => x,
            Err(graded_prime::Error::CapExceeded { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let s = real.graded();
        let brute = match s.ring().is_prime(&caps) {
            Ok(v) => v.is_prime(),
            Err(_) => return Ok(()),
        };
        prop_assert_eq!(lpa_prime_decision(&g, Coefficients::Ring(&r), &caps).unwrap().prime, brute);
        prop_assert!(real.check_relations().is_ok());
        let f = s.classify(&caps).unwrap();
        prop_assert!(f.epsilon_strong && f.nearly_epsilon_strong && f.symmetric && f.non_degenerate);
    }

    #[test]
    fn random_corpus_respects_classifier_chain(seed in any::<u64>()) {
        let caps = Caps::default();
        let (cases, _) = generate(seed, 3, &caps);
        for c in &cases {
            let f = c.graded.classify(&caps).unwrap();
            prop_assert_eq!(f.nearly_epsilon_strong, f.nearly_epsilon_strong_by_ideals);
            prop_assert!(!f.epsilon_strong || f.nearly_epsilon_strong);
            prop_assert!(!f.nearly_epsilon_strong || (f.symmetric && f.non_degenerate && f.ring_s_unital));
            let back = Case::from_json(&c.to_json(), &caps).unwrap();
            prop_assert_eq!(back.to_json(), c.to_json());
        }
    }
}
