//! Non-primeness data (H, N, I, A, B), their verification and exhaustive
//! search, strategy dispatch for primeness decisions, and the equivalence
//! harness tying the search flavors to brute-force primeness.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Caps, Error, Result};
use crate::graded::{Degree, GradeGroup, GradedRing, Invariance, Pair};
use crate::groups::{FiniteGroup, Subgroup};
use crate::ring::Verdict;
use crate::zmod::Submodule;

/// Which conjunction of conditions a datum must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    /// Balanced: A S_H B = 0.
    B,
    /// Balanced with N finite; identical to B for finite grade groups.
    C,
    /// Balanced with A, B invariant under conjugation by H.
    D,
    /// A, B invariant under H/N cosets and A B = 0.
    E,
}

impl Flavor {
    pub const ALL: [Flavor; 4] = [Flavor::B, Flavor::C, Flavor::D, Flavor::E];

    pub fn name(self) -> &'static str {
        match self {
            Flavor::B => "b",
            Flavor::C => "c",
            Flavor::D => "d",
            Flavor::E => "e",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NpDatum {
    pub h: Subgroup,
    pub n: Subgroup,
    pub i: Submodule,
    pub a: Submodule,
    pub b: Submodule,
}

/// First condition a datum violates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NpFailure {
    NNotNormal,
    IZero,
    INotIdeal,
    INotInvariant,
    IOrthogonality(usize),
    ABZero,
    ABNotIdeals,
    ABNotContained,
    ABProductNonzero,
    Unbalanced,
    ABNotInvariant,
    ABNotCosetInvariant,
}

impl fmt::Display for NpFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NpFailure::NNotNormal => write!(f, "NP1: N is not normal in H"),
            NpFailure::IZero => write!(f, "NP2: I is zero"),
            NpFailure::INotIdeal => write!(f, "NP2: I is not an ideal of S_e"),
            NpFailure::INotInvariant => write!(f, "NP2: I is not H-invariant"),
            NpFailure::IOrthogonality(x) => write!(f, "NP2: I^x I != 0 for x = {x} outside H"),
            NpFailure::ABZero => write!(f, "NP3: A or B is zero"),
            NpFailure::ABNotIdeals => write!(f, "NP3: A or B is not an ideal of S_N"),
            NpFailure::ABNotContained => write!(f, "NP3: A or B is not contained in I S_N"),
            NpFailure::ABProductNonzero => write!(f, "NP3: A B != 0"),
            NpFailure::Unbalanced => write!(f, "NP4: A S_H B != 0"),
            NpFailure::ABNotInvariant => write!(f, "A or B is not H-invariant"),
            NpFailure::ABNotCosetInvariant => write!(f, "A or B is not H/N-invariant"),
        }
    }
}

fn finite_group(s: &GradedRing) -> Result<&FiniteGroup> {
    s.group()
        .as_finite()
        .ok_or_else(|| Error::StrategyUnavailable("datum search needs a finite grade group".into()))
}

/// Checks the conditions of `flavor` in order; None means the datum is valid.
pub fn verify_np_datum(s: &GradedRing, d: &NpDatum, flavor: Flavor) -> Result<Option<NpFailure>> {
    let g = s
        .group()
        .as_finite()
        .ok_or_else(|| Error::MalformedDatum("datum needs a finite grade group".into()))?;
    let ring = s.ring();
    for sg in [&d.h, &d.n] {
        g.subgroup(sg.elements())
            .map_err(|e| Error::MalformedDatum(e.to_string()))?;
    }
    for m in [&d.i, &d.a, &d.b] {
        if m.dim() != ring.rank() || m.zn() != ring.zn() {
            return Err(Error::MalformedDatum("submodule does not live in S".into()));
        }
    }
    if !d.n.is_subset(&d.h) || !g.is_normal(&d.n, &d.h)? {
        return Ok(Some(NpFailure::NNotNormal));
    }
    let se = s.principal();
    if d.i.is_zero() {
        return Ok(Some(NpFailure::IZero));
    }
    if !d.i.is_subset(&se) || ring.ideal_in(&se, &d.i) != d.i {
        return Ok(Some(NpFailure::INotIdeal));
    }
    if !s.invariance(&d.i, Invariance::Conjugation(Some(&d.h)))? {
        return Ok(Some(NpFailure::INotInvariant));
    }
    if let Some(x) = orthogonality_failure(s, &d.i, &d.h) {
        return Ok(Some(NpFailure::IOrthogonality(x)));
    }
    let sn = s.span_of(d.n.elements());
    let sh = s.span_of(d.h.elements());
    if d.a.is_zero() || d.b.is_zero() {
        return Ok(Some(NpFailure::ABZero));
    }
    if ring.ideal_in(&sn, &d.a) != d.a
        || ring.ideal_in(&sn, &d.b) != d.b
        || !d.a.is_subset(&sn)
        || !d.b.is_subset(&sn)
    {
        return Ok(Some(NpFailure::ABNotIdeals));
    }
    let isn = ring.product(&d.i, &sn);
    if !d.a.is_subset(&isn) || !d.b.is_subset(&isn) {
        return Ok(Some(NpFailure::ABNotContained));
    }
    if !ring.product_is_zero(&d.a, &d.b) {
        return Ok(Some(NpFailure::ABProductNonzero));
    }
    match flavor {
        Flavor::B | Flavor::C | Flavor::D => {
            if !ring.product_is_zero(&ring.product(&d.a, &sh), &d.b) {
                return Ok(Some(NpFailure::Unbalanced));
            }
            if flavor == Flavor::D {
                let inv = Invariance::Conjugation(Some(&d.h));
                if !s.invariance(&d.a, inv)? || !s.invariance(&d.b, inv)? {
                    return Ok(Some(NpFailure::ABNotInvariant));
                }
            }
        }
        Flavor::E => {
            let inv = Invariance::Cosets(&d.h, &d.n);
            if !s.invariance(&d.a, inv)? || !s.invariance(&d.b, inv)? {
                return Ok(Some(NpFailure::ABNotCosetInvariant));
            }
        }
    }
    Ok(None)
}

/// Some support degree x outside H with I^x I != 0.
fn orthogonality_failure(s: &GradedRing, i: &Submodule, h: &Subgroup) -> Option<usize> {
    s.support().into_iter().find_map(|x| {
        let Degree::Finite(xi) = x else { return None };
        if h.contains(xi) {
            return None;
        }
        let ix = s.conjugate(i, &x);
        (!s.ring().product_is_zero(&ix, i)).then_some(xi)
    })
}

/// Search space sizes explored by a decision.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchBounds {
    pub candidates: u128,
    pub subgroups: usize,
    pub principal_ideals: usize,
}

/// Exhaustive search in a fixed order; returns the first datum found.
pub fn search_np_datum(s: &GradedRing, flavor: Flavor, caps: &Caps) -> Result<Option<NpDatum>> {
    Ok(search_with_bounds(s, flavor, caps)?.0)
}

fn search_with_bounds(
    s: &GradedRing,
    flavor: Flavor,
    caps: &Caps,
) -> Result<(Option<NpDatum>, SearchBounds)> {
    let g = finite_group(s)?;
    let subgroups = g.enumerate_subgroups(caps)?;
    let ideals: Vec<Submodule> = s
        .principal_ideals(caps)?
        .into_iter()
        .filter(|i| !i.is_zero())
        .collect();
    let mut pairs = Vec::new();
    for h in &subgroups {
        for n in &subgroups {
            if n.is_subset(h) && g.is_normal(n, h)? {
                pairs.push((h, n));
            }
        }
    }
    let mut bounds = SearchBounds {
        candidates: 0,
        subgroups: subgroups.len(),
        principal_ideals: ideals.len(),
    };
    let outcomes: Vec<Result<(Option<NpDatum>, u128)>> = pairs
        .par_iter()
        .map(|&(h, n)| search_pair(s, flavor, caps, h, n, &ideals))
        .collect();
    let mut found = None;
    for out in outcomes {
        let (datum, count) = out?;
        bounds.candidates += count;
        if found.is_none() {
            found = datum;
        }
    }
    Ok((found, bounds))
}

fn search_pair(
    s: &GradedRing,
    flavor: Flavor,
    caps: &Caps,
    h: &Subgroup,
    n: &Subgroup,
    ideals: &[Submodule],
) -> Result<(Option<NpDatum>, u128)> {
    let ring = s.ring();
    let sn = s.span_of(n.elements());
    let sh = s.span_of(h.elements());
    let mut explored = 0u128;
    for i in ideals {
        if !s.invariance(i, Invariance::Conjugation(Some(h)))?
            || orthogonality_failure(s, i, h).is_some()
        {
            continue;
        }
        let isn = ring.product(i, &sn);
        let count = isn.candidate_count();
        caps.check_elements("datum candidates", count)?;
        explored += count;
        let mut seen = BTreeSet::new();
        let mut family: Vec<Submodule> = Vec::new();
        for a in isn.torsion_candidates() {
            let gen = ring.span([a]);
            let t = match flavor {
                Flavor::B | Flavor::C => ring.ideal_in(&sn, &gen),
                Flavor::D => s.invariant_closure_in(&sn, &gen, h)?,
                Flavor::E => s.coset_closure_in(&sn, &gen, h, n)?,
            };
            if !t.is_zero() && t.is_subset(&isn) && seen.insert(t.clone()) {
                family.push(t);
            }
        }
        let balanced = |a: &Submodule, b: &Submodule| match flavor {
            Flavor::E => ring.product_is_zero(a, b),
            _ => ring.product_is_zero(a, b) && ring.product_is_zero(&ring.product(a, &sh), b),
        };
        for a in &family {
            for b in &family {
                if balanced(a, b) {
                    let datum = NpDatum {
                        h: h.clone(),
                        n: n.clone(),
                        i: i.clone(),
                        a: a.clone(),
                        b: b.clone(),
                    };
                    return Ok((Some(datum), explored));
                }
            }
        }
    }
    Ok((None, explored))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    BruteForce,
    OrderedShortcut,
    NpSearch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    BruteForce,
    OrderedShortcut,
    NpSearch,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::BruteForce => "brute_force",
            Method::OrderedShortcut => "ordered_shortcut",
            Method::NpSearch => "np_search",
        }
    }

    pub fn citation(self) -> &'static str {
        match self {
            Method::BruteForce => "definition: S is prime iff ideal(a) ideal(b) != 0 for all nonzero a, b",
            Method::OrderedShortcut => {
                "ordered grade group, nearly epsilon-strong grading: S is prime iff S_e is G-prime"
            }
            Method::NpSearch => {
                "nearly epsilon-strong grading: S is not prime iff a balanced non-primeness datum (H, N, I, A, B) exists"
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct PrimenessReport {
    pub prime: bool,
    pub method: Method,
    /// Pair (a, b) with ideal(a) ideal(b) = 0 for a non-prime verdict.
    pub witness: Option<Pair>,
    pub datum: Option<NpDatum>,
    pub bounds: SearchBounds,
    /// Brute-force agreement, when brute force fit within the caps.
    pub cross_check: Option<bool>,
    pub elapsed: Duration,
}

/// Brute-force primeness of the underlying ring.
pub fn is_prime_graded(s: &GradedRing, caps: &Caps) -> Result<PrimenessReport> {
    let start = Instant::now();
    let verdict = s.ring().is_prime(caps)?;
    let (prime, witness) = split(verdict);
    Ok(PrimenessReport {
        prime,
        method: Method::BruteForce,
        witness,
        datum: None,
        bounds: SearchBounds {
            candidates: s.ring().full().candidate_count(),
            ..SearchBounds::default()
        },
        cross_check: Some(true),
        elapsed: start.elapsed(),
    })
}

fn split(v: Verdict) -> (bool, Option<Pair>) {
    match v {
        Verdict::Prime => (true, None),
        Verdict::NotPrime { a, b } => (false, Some((a, b))),
    }
}

fn shortcut_applies(s: &GradedRing, nearly: bool) -> bool {
    nearly
        && match s.group() {
            GradeGroup::Lattice(_) => true,
            GradeGroup::Finite(g) => g.order() == 1,
        }
}

pub fn decide_prime(s: &GradedRing, strategy: Strategy, caps: &Caps) -> Result<PrimenessReport> {
    let start = Instant::now();
    let needs_flags = !matches!(strategy, Strategy::BruteForce);
    let nearly = needs_flags && s.classify(caps)?.nearly_epsilon_strong;
    let method = match strategy {
        Strategy::BruteForce => Method::BruteForce,
        Strategy::OrderedShortcut if shortcut_applies(s, nearly) => Method::OrderedShortcut,
        Strategy::OrderedShortcut => {
            return Err(Error::StrategyUnavailable(
                "ordered shortcut needs a nearly epsilon-strong grading by an ordered group".into(),
            ))
        }
        Strategy::NpSearch if nearly && s.group().is_finite() => Method::NpSearch,
        Strategy::NpSearch => {
            return Err(Error::StrategyUnavailable(
                "datum search decides primeness only for nearly epsilon-strong gradings by finite groups".into(),
            ))
        }
        Strategy::Auto if shortcut_applies(s, nearly) && !s.group().is_finite() => Method::OrderedShortcut,
        Strategy::Auto if nearly && s.group().is_finite() => Method::NpSearch,
        Strategy::Auto => Method::BruteForce,
    };
    let brute = match s.ring().is_prime(caps) {
        Ok(v) => Some(v),
        Err(Error::CapExceeded { .. }) if method != Method::BruteForce => None,
        Err(e) => return Err(e),
    };
    let (prime, datum, bounds) = match method {
        Method::BruteForce => {
            let v = brute.clone().expect("brute force ran");
            (
                v.is_prime(),
                None,
                SearchBounds {
                    candidates: s.ring().full().candidate_count(),
                    ..Default::default()
                },
            )
        }
        Method::OrderedShortcut => {
            let se = s.principal();
            (
                s.is_g_prime(caps)?,
                None,
                SearchBounds {
                    candidates: se.candidate_count(),
                    ..Default::default()
                },
            )
        }
        Method::NpSearch => {
            let (d, b) = search_with_bounds(s, Flavor::B, caps)?;
            (d.is_none(), d, b)
        }
    };
    let cross_check = brute.as_ref().map(|v| v.is_prime() == prime);
    if cross_check == Some(false) {
        return Err(Error::TheoremViolation(format!(
            "{} verdict disagrees with brute force",
            method.name()
        )));
    }
    let witness = brute.and_then(|v| split(v).1);
    Ok(PrimenessReport {
        prime,
        method,
        witness,
        datum,
        bounds,
        cross_check,
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Debug)]
pub struct HarnessReport {
    /// Condition (a): S is not prime.
    pub not_prime: bool,
    /// Existence of a datum for flavors b, c, d, e.
    pub data: [Option<NpDatum>; 4],
    pub nearly_epsilon_strong: bool,
    pub non_degenerate: bool,
    pub g_prime: bool,
    /// Departures from the equivalence on gradings where it is not guaranteed.
    pub observations: Vec<String>,
}

impl HarnessReport {
    pub fn conditions(&self) -> [bool; 5] {
        [
            self.not_prime,
            self.data[0].is_some(),
            self.data[1].is_some(),
            self.data[2].is_some(),
            self.data[3].is_some(),
        ]
    }

    pub fn all_equal(&self) -> bool {
        let c = self.conditions();
        c.iter().all(|&x| x == c[0])
    }

    /// (e) => (d) => (c) => (b) => (a).
    pub fn chain_holds(&self) -> bool {
        let c = self.conditions();
        (1..5).all(|k| !c[k] || c[k - 1])
    }
}

pub fn main_theorem_harness(s: &GradedRing, caps: &Caps) -> Result<HarnessReport> {
    finite_group(s)?;
    let flags = s.classify(caps)?;
    let not_prime = !s.ring().is_prime(caps)?.is_prime();
    let mut data: [Option<NpDatum>; 4] = Default::default();
    for (slot, flavor) in data.iter_mut().zip(Flavor::ALL) {
        *slot = search_np_datum(s, flavor, caps)?;
        if let Some(d) = slot {
            if let Some(fail) = verify_np_datum(s, d, flavor)? {
                return Err(Error::TheoremViolation(format!(
                    "flavor ({}) search returned a datum failing {fail}",
                    flavor.name()
                )));
            }
        }
    }
    let report = HarnessReport {
        not_prime,
        data,
        nearly_epsilon_strong: flags.nearly_epsilon_strong,
        non_degenerate: flags.non_degenerate,
        g_prime: s.is_g_prime(caps)?,
        observations: Vec::new(),
    };
    let mut report = report;
    if flags.non_degenerate {
        if !report.chain_holds() {
            return Err(Error::TheoremViolation(format!(
                "implication chain fails on a non-degenerate grading: {:?}",
                report.conditions()
            )));
        }
        if !report.not_prime && !report.g_prime {
            return Err(Error::TheoremViolation(
                "prime ring with S_e not G-prime".into(),
            ));
        }
    }
    if flags.nearly_epsilon_strong && !report.all_equal() {
        return Err(Error::TheoremViolation(format!(
            "conditions differ on a nearly epsilon-strong grading: {:?}",
            report.conditions()
        )));
    }
    if !flags.nearly_epsilon_strong && !report.all_equal() {
        report.observations.push(format!(
            "conditions (a)-(e) = {:?} without nearly epsilon-strongness",
            report.conditions()
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_group_ring, build_matrix_graded, MatrixGrading};
    use crate::ring::FiniteRing;

    fn f2c2() -> GradedRing {
        build_group_ring(
            &FiniteRing::zmod(2),
            &FiniteGroup::cyclic(2),
            &Caps::default(),
        )
        .unwrap()
    }

    fn connell_datum(s: &GradedRing) -> NpDatum {
        let g = s.group().as_finite().unwrap();
        let one_plus_g = s.ring().principal_ideal(&[1, 1]);
        NpDatum {
            h: g.whole(),
            n: g.whole(),
            i: s.principal(),
            a: one_plus_g.clone(),
            b: one_plus_g,
        }
    }

    #[test]
    fn group_ring_datum_valid_for_all_flavors() {
        let s = f2c2();
        let d = connell_datum(&s);
        for f in Flavor::ALL {
            assert_eq!(verify_np_datum(&s, &d, f).unwrap(), None);
        }
        let zero_i = NpDatum {
            i: s.ring().zero_sub(),
            ..d
        };
        assert_eq!(
            verify_np_datum(&s, &zero_i, Flavor::B).unwrap(),
            Some(NpFailure::IZero)
        );
    }

    #[test]
    fn search_finds_full_subgroup_datum() {
        let s = f2c2();
        let d = search_np_datum(&s, Flavor::B, &Caps::default())
            .unwrap()
            .unwrap();
        assert_eq!(d.h.order(), 2);
        assert_eq!(d.n.order(), 2);
        assert_eq!(d.a, s.ring().principal_ideal(&[1, 1]));
    }

    #[test]
    fn cyclic_three_group_ring_not_prime() {
        let caps = Caps::default();
        let s = build_group_ring(&FiniteRing::zmod(2), &FiniteGroup::cyclic(3), &caps).unwrap();
        assert!(search_np_datum(&s, Flavor::B, &caps).unwrap().is_some());
    }

    #[test]
    fn matrix_cyclic_grading_has_no_datum() {
        let caps = Caps::default();
        let s = build_matrix_graded(&FiniteRing::zmod(2), 2, MatrixGrading::Cyclic, &caps).unwrap();
        for f in Flavor::ALL {
            assert!(search_np_datum(&s, f, &caps).unwrap().is_none());
        }
        let h = main_theorem_harness(&s, &caps).unwrap();
        assert_eq!(h.conditions(), [false; 5]);
    }

    #[test]
    fn decisions() {
        let caps = Caps::default();
        let m2 =
            build_matrix_graded(&FiniteRing::zmod(2), 2, MatrixGrading::Integers, &caps).unwrap();
        let rep = decide_prime(&m2, Strategy::Auto, &caps).unwrap();
        assert!(rep.prime);
        assert_eq!(rep.method, Method::OrderedShortcut);
        assert_eq!(rep.cross_check, Some(true));

        let m2z4 =
            build_matrix_graded(&FiniteRing::zmod(4), 2, MatrixGrading::Integers, &caps).unwrap();
        let rep = decide_prime(&m2z4, Strategy::Auto, &caps).unwrap();
        assert!(!rep.prime);
        assert!(rep.witness.is_some());

        let rep = decide_prime(&f2c2(), Strategy::Auto, &caps).unwrap();
        assert!(!rep.prime);
        assert_eq!(rep.method, Method::NpSearch);

        let bf = is_prime_graded(&f2c2(), &caps).unwrap();
        let (a, b) = bf.witness.unwrap();
        assert_eq!((a, b), (vec![1, 1], vec![1, 1]));

        let zero = GradedRing::trivial(FiniteRing::zero_product(2, 1).unwrap());
        assert!(!is_prime_graded(&zero, &caps).unwrap().prime);
    }

    #[test]
    fn shortcut_refused_without_nearly_eps() {
        let caps = Caps::default();
        let zero = FiniteRing::zero_product(2, 2).unwrap();
        let s = GradedRing::new(
            zero,
            GradeGroup::Lattice(1),
            vec![Degree::Lattice(vec![0]), Degree::Lattice(vec![1])],
        )
        .unwrap();
        let err = decide_prime(&s, Strategy::OrderedShortcut, &caps).unwrap_err();
        assert!(matches!(err, Error::StrategyUnavailable(_)));
    }

    #[test]
    fn harness_examples() {
        let caps = Caps::default();
        let h = main_theorem_harness(&f2c2(), &caps).unwrap();
        assert_eq!(h.conditions(), [true; 5]);

        let r = FiniteRing::direct_sum(&[FiniteRing::zmod(2), FiniteRing::zmod(2)]).unwrap();
        let g = FiniteGroup::cyclic(2);
        let s =
            GradedRing::new(r, GradeGroup::Finite(g.clone()), vec![Degree::Finite(0); 2]).unwrap();
        let h = main_theorem_harness(&s, &caps).unwrap();
        assert!(h.not_prime && h.all_equal());
        let d = NpDatum {
            h: g.whole(),
            n: g.trivial_subgroup(),
            i: s.principal(),
            a: s.ring().span([vec![1, 0]]),
            b: s.ring().span([vec![0, 1]]),
        };
        assert_eq!(verify_np_datum(&s, &d, Flavor::B).unwrap(), None);
    }
}
