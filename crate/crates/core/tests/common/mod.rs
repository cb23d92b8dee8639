//! Element-level oracles: slow, obviously-correct recomputations used to
//! cross-check the module-lattice algorithms.
#![allow(dead_code)]

use std::collections::BTreeSet;

use graded_prime::{FiniteGroup, FiniteRing};

pub fn elements(r: &FiniteRing) -> Vec<Vec<u64>> {
    let m = r.modulus();
    let mut out = vec![vec![]];
    for _ in 0..r.rank() {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u64>| {
                (0..m).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

fn nonzero(v: &[u64]) -> bool {
    v.iter().any(|&c| c != 0)
}

/// Prime iff a S b = 0 forces a = 0 or b = 0.
pub fn prime_by_elements(r: &FiniteRing) -> bool {
    let elems: Vec<Vec<u64>> = elements(r).into_iter().filter(|v| nonzero(v)).collect();
    if elems.is_empty() {
        return false;
    }
    elems.iter().all(|a| {
        elems.iter().all(|b| {
            (0..r.rank()).any(|i| nonzero(&r.mul(&r.mul(a, &r.basis(i)), b)))
                || nonzero(&r.mul(a, b))
        })
    })
}

/// Smallest subset containing `gens`, closed under +, and under multiplication
/// by basis elements and integers on both sides.
pub fn ideal_by_elements(r: &FiniteRing, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
    let mut set: BTreeSet<Vec<u64>> = BTreeSet::new();
    set.insert(r.zero());
    let mut frontier: Vec<Vec<u64>> = gens.to_vec();
    while let Some(x) = frontier.pop() {
        if !set.insert(x.clone()) {
            continue;
        }
        let mut next = Vec::new();
        for y in set.iter() {
            next.push(r.add(&x, y));
        }
        for i in 0..r.rank() {
            next.push(r.mul(&r.basis(i), &x));
            next.push(r.mul(&x, &r.basis(i)));
        }
        frontier.extend(next.into_iter().filter(|v| !set.contains(v)));
    }
    set
}

/// Number of element subsets closed under the group law.
pub fn subgroup_count_by_subsets(g: &FiniteGroup) -> usize {
    let n = g.order();
    (0u32..1 << n)
        .filter(|mask| {
            let has = |x: usize| mask >> x & 1 == 1;
            has(g.identity())
                && (0..n).all(|a| !has(a) || (0..n).all(|b| !has(b) || has(g.mul(a, b))))
        })
        .count()
}
