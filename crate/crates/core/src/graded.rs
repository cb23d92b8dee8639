//! Group-graded rings: grading classifiers, conjugate ideals I^x, invariant
//! closures, induced gradings and the graded-ideal correspondence.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Caps, Error, Result};
use crate::groups::{FiniteGroup, Subgroup};
use crate::ring::{join_closure, principal_family, FiniteRing, Side, Verdict};
use crate::zmod::Submodule;

/// Two ring elements: a left/right identity pair or a non-primeness witness.
pub type Pair = (Vec<u64>, Vec<u64>);

/// Element of a grade group: an index into a finite table or a vector in Z^r.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Degree {
    Finite(usize),
    Lattice(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GradeGroup {
    Finite(FiniteGroup),
    Lattice(usize),
}

impl GradeGroup {
    pub fn identity(&self) -> Degree {
        match self {
            GradeGroup::Finite(g) => Degree::Finite(g.identity()),
            GradeGroup::Lattice(r) => Degree::Lattice(vec![0; *r]),
        }
    }

    pub fn mul(&self, a: &Degree, b: &Degree) -> Degree {
        match (self, a, b) {
            (GradeGroup::Finite(g), Degree::Finite(x), Degree::Finite(y)) => {
                Degree::Finite(g.mul(*x, *y))
            }
            (GradeGroup::Lattice(_), Degree::Lattice(x), Degree::Lattice(y)) => {
                Degree::Lattice(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            _ => panic!("degree kind does not match grade group"),
        }
    }

    pub fn inv(&self, a: &Degree) -> Degree {
        match (self, a) {
            (GradeGroup::Finite(g), Degree::Finite(x)) => Degree::Finite(g.inv(*x)),
            (GradeGroup::Lattice(_), Degree::Lattice(x)) => {
                Degree::Lattice(x.iter().map(|p| -p).collect())
            }
            _ => panic!("degree kind does not match grade group"),
        }
    }

    pub fn check(&self, d: &Degree) -> Result<()> {
        match (self, d) {
            (GradeGroup::Finite(g), Degree::Finite(x)) if *x < g.order() => Ok(()),
            (GradeGroup::Lattice(r), Degree::Lattice(v)) if v.len() == *r => Ok(()),
            _ => Err(Error::Dimension(format!(
                "degree {d:?} is not an element of the grade group"
            ))),
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteGroup> {
        match self {
            GradeGroup::Finite(g) => Some(g),
            GradeGroup::Lattice(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_finite().is_some()
    }
}

/// Which invariance notion to test for an ideal of the principal component.
#[derive(Clone, Copy, Debug)]
pub enum Invariance<'a> {
    /// I^x in I for x in H (None: the whole group).
    Conjugation(Option<&'a Subgroup>),
    /// S_{x^-1 N} I S_{xN} in I for x in H.
    Cosets(&'a Subgroup, &'a Subgroup),
    /// S_x S_{x^-1} I = I S_x S_{x^-1} for every x.
    Epsilon,
}

/// Normal subgroup for an induced quotient grading.
#[derive(Clone, Copy, Debug)]
pub enum NormalSpec<'a> {
    Finite(&'a Subgroup),
    /// Generators of a full-rank sublattice of Z^r.
    Lattice(&'a [Vec<i64>]),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingFlags {
    pub strong: bool,
    pub symmetric: bool,
    pub non_degenerate: bool,
    pub epsilon_strong: bool,
    pub nearly_epsilon_strong: bool,
    /// Same property computed as: symmetric and every S_x S_{x^-1} unital.
    pub nearly_epsilon_strong_by_ideals: bool,
    pub ring_s_unital: bool,
    pub principal_s_unital: bool,
    /// Per support degree: a left identity on S_x from S_x S_{x^-1} and a
    /// right identity on S_x from S_{x^-1} S_x.
    pub epsilon_witnesses: BTreeMap<Degree, Option<Pair>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub graded_ideals: usize,
    pub invariant_ideals: usize,
    pub maps_inverse: bool,
    pub graded_prime_ideals: usize,
    pub g_prime_ideals: usize,
    pub primes_correspond: bool,
}

#[derive(Clone, Debug)]
pub struct GradedRing {
    ring: FiniteRing,
    group: GradeGroup,
    degrees: Vec<Degree>,
    blocks: BTreeMap<Degree, Vec<usize>>,
}

impl PartialEq for GradedRing {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.group == other.group && self.degrees == other.degrees
    }
}

impl Eq for GradedRing {}

/// Elements of a homogeneous component are enumerated one by one below this
/// size; above it the uniform identity solve is used.
const ELEMENTWISE_LIMIT: u128 = 1 << 12;

impl GradedRing {
    pub fn new(ring: FiniteRing, group: GradeGroup, degrees: Vec<Degree>) -> Result<Self> {
        if degrees.len() != ring.rank() {
            return Err(Error::Dimension("one degree per basis element".into()));
        }
        for d in &degrees {
            group.check(d)?;
        }
        let k = ring.rank();
        for i in 0..k {
            for j in 0..k {
                let want = group.mul(&degrees[i], &degrees[j]);
                if let Some(&(l, _)) = ring.terms(i, j).iter().find(|&&(l, _)| degrees[l] != want) {
                    return Err(Error::NotGraded(i, j, l));
                }
            }
        }
        let mut blocks: BTreeMap<Degree, Vec<usize>> = BTreeMap::new();
        for (i, d) in degrees.iter().enumerate() {
            blocks.entry(d.clone()).or_default().push(i);
        }
        Ok(GradedRing {
            ring,
            group,
            degrees,
            blocks,
        })
    }

    /// The ring graded by the trivial group.
    pub fn trivial(ring: FiniteRing) -> Self {
        let k = ring.rank();
        GradedRing::new(
            ring,
            GradeGroup::Finite(FiniteGroup::trivial()),
            vec![Degree::Finite(0); k],
        )
        .expect("trivial grading")
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn group(&self) -> &GradeGroup {
        &self.group
    }

    pub fn degrees(&self) -> &[Degree] {
        &self.degrees
    }

    pub fn identity(&self) -> Degree {
        self.group.identity()
    }

    pub fn support(&self) -> Vec<Degree> {
        self.blocks.keys().cloned().collect()
    }

    pub fn in_support(&self, x: &Degree) -> bool {
        self.blocks.contains_key(x)
    }

    pub fn indices(&self, x: &Degree) -> &[usize] {
        self.blocks.get(x).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn component(&self, x: &Degree) -> Submodule {
        Submodule::coordinate(
            self.ring.zn(),
            self.ring.rank(),
            self.indices(x).iter().copied(),
        )
    }

    /// S_e.
    pub fn principal(&self) -> Submodule {
        self.component(&self.identity())
    }

    pub fn principal_ring(&self) -> Result<FiniteRing> {
        let idx = self.indices(&self.identity()).to_vec();
        if idx.is_empty() {
            return Err(Error::Dimension("principal component is zero".into()));
        }
        self.ring.restrict(&idx)
    }

    /// Sum of the components whose degree satisfies `pred`.
    pub fn span_degrees(&self, pred: impl Fn(&Degree) -> bool) -> Submodule {
        let idx = self
            .degrees
            .iter()
            .enumerate()
            .filter(|(_, d)| pred(d))
            .map(|(i, _)| i);
        Submodule::coordinate(self.ring.zn(), self.ring.rank(), idx)
    }

    pub fn homogeneous_degree(&self, v: &[u64]) -> Option<Degree> {
        let mut found: Option<&Degree> = None;
        for (i, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            match found {
                None => found = Some(&self.degrees[i]),
                Some(d) if *d != self.degrees[i] => return None,
                _ => {}
            }
        }
        found.cloned()
    }

    fn finite_index(&self, x: &Degree) -> usize {
        match x {
            Degree::Finite(i) => *i,
            Degree::Lattice(_) => panic!("finite degree expected"),
        }
    }

    /// S_x S_{x^-1}.
    pub fn local_ideal(&self, x: &Degree) -> Submodule {
        let xi = self.group.inv(x);
        self.ring.product(&self.component(x), &self.component(&xi))
    }

    /// I^x = S_{x^-1} I S_x.
    pub fn conjugate(&self, i: &Submodule, x: &Degree) -> Submodule {
        if !self.in_support(x) || i.is_zero() {
            return self.ring.zero_sub();
        }
        let xi = self.group.inv(x);
        if !self.in_support(&xi) {
            return self.ring.zero_sub();
        }
        self.ring
            .product3(&self.component(&xi), i, &self.component(x))
    }

    fn degrees_in(&self, h: Option<&Subgroup>) -> Result<Vec<Degree>> {
        match (h, &self.group) {
            (None, _) => Ok(self.support()),
            (Some(h), GradeGroup::Finite(_)) => Ok(self
                .support()
                .into_iter()
                .filter(|d| h.contains(self.finite_index(d)))
                .collect()),
            (Some(_), GradeGroup::Lattice(_)) => Err(Error::BadSubgroup(
                "only the whole lattice is supported as a subgroup".into(),
            )),
        }
    }

    fn check_subgroup(&self, h: &Subgroup) -> Result<&FiniteGroup> {
        let g = self
            .group
            .as_finite()
            .ok_or_else(|| Error::BadSubgroup("subgroups need a finite grade group".into()))?;
        g.subgroup(h.elements())
            .map_err(|e| Error::BadSubgroup(e.to_string()))?;
        Ok(g)
    }

    pub fn classify(&self, _caps: &Caps) -> Result<GradingFlags> {
        let ring = &self.ring;
        let support = self.support();
        let comps: BTreeMap<&Degree, Submodule> =
            support.iter().map(|x| (x, self.component(x))).collect();
        let comp = |x: &Degree| comps.get(x).cloned().unwrap_or_else(|| ring.zero_sub());
        let locals: BTreeMap<&Degree, Submodule> =
            support.iter().map(|x| (x, self.local_ideal(x))).collect();
        let local = |x: &Degree| locals.get(x).cloned().unwrap_or_else(|| ring.zero_sub());

        let per_degree: Vec<(bool, bool, bool, Option<Pair>, bool)> = support
            .par_iter()
            .map(|x| {
                let xi = self.group.inv(x);
                let sx = comp(x);
                let sxi = comp(&xi);
                let px = local(x);
                let pxi = local(&xi);
                let symmetric = ring.product3(&sx, &sxi, &sx) == sx;
                let left_ann = ring.annihilator(&sxi, Side::Left).intersect(&sx);
                let right_ann = ring.annihilator(&sxi, Side::Right).intersect(&sx);
                let non_degenerate = left_ann.is_zero() && right_ann.is_zero();
                let witness = ring
                    .left_identity(&px, &sx)
                    .zip(ring.right_identity(&pxi, &sx));
                let elementwise = if sx.order() <= ELEMENTWISE_LIMIT {
                    sx.elements().iter().all(|s| {
                        let ls = ring.span(px.gens().iter().map(|p| ring.mul(p, s)));
                        let rs = ring.span(pxi.gens().iter().map(|q| ring.mul(s, q)));
                        ls.contains(s) && rs.contains(s)
                    })
                } else {
                    witness.is_some()
                };
                let unital_local = ring.identity_in(&px).is_some();
                (
                    symmetric,
                    non_degenerate,
                    elementwise,
                    witness,
                    unital_local,
                )
            })
            .collect();

        let symmetric = per_degree.iter().all(|r| r.0);
        let non_degenerate = per_degree.iter().all(|r| r.1);
        let nearly_epsilon_strong = per_degree.iter().all(|r| r.2);
        let epsilon_strong = per_degree.iter().all(|r| r.3.is_some());
        let nearly_epsilon_strong_by_ideals = symmetric && per_degree.iter().all(|r| r.4);
        let epsilon_witnesses = support
            .iter()
            .cloned()
            .zip(per_degree.into_iter().map(|r| r.3))
            .collect();

        let strong = match &self.group {
            GradeGroup::Finite(g) => {
                let all: Vec<Degree> = (0..g.order()).map(Degree::Finite).collect();
                all.par_iter().all(|x| {
                    all.iter().all(|y| {
                        let xy = self.group.mul(x, y);
                        ring.product(&comp(x), &comp(y)) == comp(&xy)
                    })
                })
            }
            GradeGroup::Lattice(_) => false,
        };
        let flags = GradingFlags {
            strong,
            symmetric,
            non_degenerate,
            epsilon_strong,
            nearly_epsilon_strong,
            nearly_epsilon_strong_by_ideals,
            ring_s_unital: ring.has_identity(),
            principal_s_unital: ring.identity_in(&self.principal()).is_some(),
            epsilon_witnesses,
        };
        if flags.nearly_epsilon_strong != flags.nearly_epsilon_strong_by_ideals {
            return Err(Error::TheoremViolation(
                "the two nearly epsilon-strong computations disagree".into(),
            ));
        }
        Ok(flags)
    }

    /// For an epsilon-strong grading: r.Ann_S(S_x) = 0 for every x in G.
    pub fn is_cancellative_eps_strong(&self, caps: &Caps) -> Result<bool> {
        let flags = self.classify(caps)?;
        if !flags.epsilon_strong {
            return Err(Error::NotEpsilonStrong);
        }
        let faithful = match &self.group {
            GradeGroup::Finite(g) => (0..g.order()).all(|x| {
                self.ring
                    .annihilator(&self.component(&Degree::Finite(x)), Side::Right)
                    .is_zero()
            }),
            // some degree lies off the finite support, and r.Ann(0) = S
            GradeGroup::Lattice(_) => false,
        };
        if faithful != flags.strong {
            return Err(Error::TheoremViolation(
                "zero-annihilator test disagrees with strongness on an epsilon-strong grading"
                    .into(),
            ));
        }
        Ok(faithful)
    }

    /// S_C for a set of degrees given as finite indices.
    pub fn span_of(&self, elements: &[usize]) -> Submodule {
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        self.span_degrees(|d| matches!(d, Degree::Finite(i) if set.contains(i)))
    }

    pub fn invariance(&self, i: &Submodule, mode: Invariance<'_>) -> Result<bool> {
        match mode {
            Invariance::Conjugation(h) => {
                if let Some(h) = h {
                    self.check_subgroup(h)?;
                }
                Ok(self
                    .degrees_in(h)?
                    .iter()
                    .all(|x| self.conjugate(i, x).is_subset(i)))
            }
            Invariance::Cosets(h, n) => {
                let g = self.check_subgroup(h)?;
                self.check_subgroup(n)?;
                if !g
                    .is_normal(n, h)
                    .map_err(|e| Error::BadSubgroup(e.to_string()))?
                {
                    return Err(Error::BadSubgroup("N is not normal in H".into()));
                }
                Ok(h.elements()
                    .iter()
                    .all(|&x| self.coset_conjugate(g, i, x, n).is_subset(i)))
            }
            Invariance::Epsilon => Ok(self.support().iter().all(|x| {
                let p = self.local_ideal(x);
                self.ring.product(&p, i) == self.ring.product(i, &p)
            })),
        }
    }

    /// S_{x^-1 N} I S_{xN}.
    fn coset_conjugate(&self, g: &FiniteGroup, i: &Submodule, x: usize, n: &Subgroup) -> Submodule {
        let left: Vec<usize> = n.elements().iter().map(|&m| g.mul(g.inv(x), m)).collect();
        let right: Vec<usize> = n.elements().iter().map(|&m| g.mul(x, m)).collect();
        self.ring
            .product3(&self.span_of(&left), i, &self.span_of(&right))
    }

    /// Smallest ideal of the subring T containing `start` that is stable under `step`.
    fn closure_in(
        &self,
        t: &Submodule,
        start: &Submodule,
        step: impl Fn(&Submodule) -> Submodule,
    ) -> Submodule {
        let mut j = self.ring.ideal_in(t, start);
        loop {
            let next = self.ring.ideal_in(t, &j.sum(&step(&j)));
            if next == j {
                return j;
            }
            j = next;
        }
    }

    /// Smallest H-invariant ideal of S_e containing I.
    pub fn invariant_closure(&self, i: &Submodule, h: Option<&Subgroup>) -> Result<Submodule> {
        if let Some(h) = h {
            self.check_subgroup(h)?;
        }
        let degs = self.degrees_in(h)?;
        let se = self.principal();
        let closed = self.closure_in(&se, i, |j| {
            degs.iter().fold(self.ring.zero_sub(), |acc, x| {
                acc.sum(&self.conjugate(j, x))
            })
        });
        let is_ideal = i.is_subset(&se) && self.ring.ideal_in(&se, i) == *i;
        if is_ideal && self.ring.identity_in(&se).is_some() {
            let raw = degs.iter().fold(self.ring.zero_sub(), |acc, x| {
                acc.sum(&self.conjugate(i, x))
            });
            if raw != closed || !i.is_subset(&closed) {
                return Err(Error::TheoremViolation(
                    "invariant closure differs from I^H".into(),
                ));
            }
        }
        Ok(closed)
    }

    /// Smallest H-invariant ideal of S_N containing X.
    pub fn invariant_closure_in(
        &self,
        sn: &Submodule,
        x: &Submodule,
        h: &Subgroup,
    ) -> Result<Submodule> {
        let degs = self.degrees_in(Some(h))?;
        Ok(self.closure_in(sn, x, |j| {
            degs.iter().fold(self.ring.zero_sub(), |acc, d| {
                acc.sum(&self.conjugate(j, d))
            })
        }))
    }

    /// Smallest H/N-invariant ideal of S_N containing X.
    pub fn coset_closure_in(
        &self,
        sn: &Submodule,
        x: &Submodule,
        h: &Subgroup,
        n: &Subgroup,
    ) -> Result<Submodule> {
        let g = self.check_subgroup(h)?;
        Ok(self.closure_in(sn, x, |j| {
            h.elements().iter().fold(self.ring.zero_sub(), |acc, &y| {
                acc.sum(&self.coset_conjugate(g, j, y, n))
            })
        }))
    }

    /// G-primeness of S_e over prime-order candidates; a zero principal
    /// component is reported as not G-prime with zero witnesses.
    pub fn g_prime(&self, caps: &Caps) -> Result<Verdict> {
        self.g_closures_check(caps, false)
    }

    pub fn is_g_prime(&self, caps: &Caps) -> Result<bool> {
        Ok(self.g_prime(caps)?.is_prime())
    }

    pub fn is_g_semiprime(&self, caps: &Caps) -> Result<bool> {
        Ok(self.g_closures_check(caps, true)?.is_prime())
    }

    fn g_closures_check(&self, caps: &Caps, squares_only: bool) -> Result<Verdict> {
        let se = self.principal();
        if se.is_zero() {
            let z = self.ring.zero();
            return Ok(Verdict::NotPrime { a: z.clone(), b: z });
        }
        caps.check_elements("primeness candidates", se.candidate_count())?;
        let cands = se.torsion_candidates();
        let closures: Vec<Submodule> = cands
            .par_iter()
            .map(|a| self.invariant_closure(&self.ring.span([a.clone()]), None))
            .collect::<Result<_>>()?;
        let mut reps: Vec<(usize, &Submodule)> = Vec::new();
        let mut seen = BTreeSet::new();
        for (n, c) in closures.iter().enumerate() {
            if seen.insert(c) {
                reps.push((n, c));
            }
        }
        let hit = reps.par_iter().find_map_first(|&(ia, ca)| {
            if squares_only {
                return self.ring.product_is_zero(ca, ca).then_some((ia, ia));
            }
            reps.iter()
                .find(|&&(_, cb)| self.ring.product_is_zero(ca, cb))
                .map(|&(ib, _)| (ia, ib))
        });
        Ok(match hit {
            Some((ia, ib)) => Verdict::NotPrime {
                a: cands[ia].clone(),
                b: cands[ib].clone(),
            },
            None => Verdict::Prime,
        })
    }

    /// S_H = sum of S_x over x in H, as an H-graded ring.
    pub fn subring(&self, h: Option<&Subgroup>) -> Result<GradedRing> {
        let Some(h) = h else { return Ok(self.clone()) };
        let g = self.check_subgroup(h)?;
        let idx: Vec<usize> = (0..self.ring.rank())
            .filter(|&i| h.contains(self.finite_index(&self.degrees[i])))
            .collect();
        if idx.is_empty() {
            return Err(Error::Dimension("S_H is zero".into()));
        }
        let ring = self.ring.restrict(&idx)?;
        let table = g.subgroup_table(h);
        let degrees = idx
            .iter()
            .map(|&i| {
                let x = self.finite_index(&self.degrees[i]);
                Degree::Finite(h.elements().binary_search(&x).expect("in H"))
            })
            .collect();
        GradedRing::new(ring, GradeGroup::Finite(table), degrees)
    }

    /// Truncation to the coordinates of degree in H.
    pub fn project(&self, v: &[u64], h: Option<&Subgroup>) -> Vec<u64> {
        match h {
            None => v.to_vec(),
            Some(h) => v
                .iter()
                .zip(&self.degrees)
                .map(|(&c, d)| {
                    if h.contains(self.finite_index(d)) {
                        c
                    } else {
                        0
                    }
                })
                .collect(),
        }
    }

    pub fn project_submodule(&self, u: &Submodule, h: Option<&Subgroup>) -> Submodule {
        match h {
            None => u.clone(),
            Some(h) => {
                let keep: Vec<bool> = self
                    .degrees
                    .iter()
                    .map(|d| h.contains(self.finite_index(d)))
                    .collect();
                u.project(&keep)
            }
        }
    }

    /// Same ring graded by G/N.
    pub fn quotient_grading(&self, n: NormalSpec<'_>) -> Result<GradedRing> {
        match (n, &self.group) {
            (NormalSpec::Finite(n), GradeGroup::Finite(g)) => {
                let (q, proj) = g.quotient(n)?;
                let degrees = self
                    .degrees
                    .iter()
                    .map(|d| Degree::Finite(proj[self.finite_index(d)]))
                    .collect();
                GradedRing::new(self.ring.clone(), GradeGroup::Finite(q), degrees)
            }
            (NormalSpec::Lattice(gens), GradeGroup::Lattice(r)) => {
                let lat = Sublattice::new(*r, gens)?;
                let q = lat.quotient_group();
                let degrees = self
                    .degrees
                    .iter()
                    .map(|d| match d {
                        Degree::Lattice(v) => Degree::Finite(lat.index_of(v)),
                        Degree::Finite(_) => unreachable!("lattice degrees"),
                    })
                    .collect();
                GradedRing::new(self.ring.clone(), GradeGroup::Finite(q), degrees)
            }
            _ => Err(Error::NotNormal),
        }
    }

    /// Ideals of S_e (as a ring in its own right).
    pub fn principal_ideals(&self, caps: &Caps) -> Result<Vec<Submodule>> {
        let se = self.principal();
        caps.check_elements("principal component elements", se.order())?;
        let fam = principal_family(&se, |a| {
            self.ring.ideal_in(&se, &self.ring.span([a.to_vec()]))
        });
        join_closure(self.ring.zero_sub(), fam, caps)
    }

    pub fn invariant_ideals(&self, caps: &Caps) -> Result<Vec<Submodule>> {
        let all = self.principal_ideals(caps)?;
        all.into_iter()
            .map(|i| Ok((self.invariance(&i, Invariance::Conjugation(None))?, i)))
            .filter_map(|r: Result<(bool, Submodule)>| match r {
                Ok((true, i)) => Some(Ok(i)),
                Ok((false, _)) => None,
                Err(e) => Some(Err(e)),
            })
            .collect()
    }

    /// Graded ideals: sums of ideals generated by homogeneous elements.
    pub fn graded_ideals(&self, caps: &Caps) -> Result<Vec<Submodule>> {
        let total: u128 = self
            .support()
            .iter()
            .map(|x| self.component(x).order())
            .sum();
        caps.check_elements("homogeneous elements", total)?;
        let mut fam = Vec::new();
        let mut seen = BTreeSet::new();
        for x in self.support() {
            for i in principal_family(&self.component(&x), |a| self.ring.principal_ideal(a)) {
                if seen.insert(i.clone()) {
                    fam.push(i);
                }
            }
        }
        join_closure(self.ring.zero_sub(), fam, caps)
    }

    /// Checks I -> I n S_e and J -> SJS against each other and against primes.
    pub fn correspondence(&self, caps: &Caps) -> Result<CorrespondenceReport> {
        let flags = self.classify(caps)?;
        let graded = self.graded_ideals(caps)?;
        let invariant = self.invariant_ideals(caps)?;
        let se = self.principal();
        let full = self.ring.full();
        let restrict = |i: &Submodule| i.intersect(&se);
        let extend = |j: &Submodule| self.ring.product3(&full, j, &full);
        let graded_set: BTreeSet<&Submodule> = graded.iter().collect();
        let inv_set: BTreeSet<&Submodule> = invariant.iter().collect();
        let maps_inverse = graded.len() == invariant.len()
            && graded.iter().all(|i| {
                let r = restrict(i);
                inv_set.contains(&r) && extend(&r) == *i
            })
            && invariant.iter().all(|j| {
                let e = extend(j);
                graded_set.contains(&e) && restrict(&e) == *j
            });
        let graded_primes = prime_members(&self.ring, &graded, &full);
        let g_primes = prime_members(&self.ring, &invariant, &se);
        let images: BTreeSet<Submodule> = graded_primes.iter().map(restrict).collect();
        let targets: BTreeSet<Submodule> = g_primes.iter().cloned().collect();
        let report = CorrespondenceReport {
            graded_ideals: graded.len(),
            invariant_ideals: invariant.len(),
            maps_inverse,
            graded_prime_ideals: graded_primes.len(),
            g_prime_ideals: g_primes.len(),
            primes_correspond: images == targets && graded_primes.len() == g_primes.len(),
        };
        if flags.nearly_epsilon_strong && !(report.maps_inverse && report.primes_correspond) {
            return Err(Error::CorrespondenceViolation(format!("{report:?}")));
        }
        Ok(report)
    }

    /// Graded primeness over homogeneous prime-order candidates.
    pub fn graded_prime(&self, caps: &Caps) -> Result<Verdict> {
        let support = self.support();
        let count: u128 = support
            .iter()
            .map(|x| self.component(x).candidate_count())
            .sum();
        caps.check_elements("primeness candidates", count)?;
        let cands: Vec<Vec<u64>> = support
            .iter()
            .flat_map(|x| self.component(x).torsion_candidates())
            .collect();
        let hit = cands.par_iter().find_map_first(|a| {
            let ann = self
                .ring
                .annihilator(&self.ring.principal_ideal(a), Side::Right);
            if ann.is_zero() {
                return None;
            }
            support
                .iter()
                .find_map(|y| ann.intersect(&self.component(y)).first_torsion())
                .map(|b| (a.clone(), b))
        });
        Ok(match hit {
            Some((a, b)) => Verdict::NotPrime { a, b },
            None => Verdict::Prime,
        })
    }

    pub fn is_graded_prime(&self, caps: &Caps) -> Result<bool> {
        Ok(self.graded_prime(caps)?.is_prime())
    }

    /// Conjugation identities over all ideals of S_e and support degrees;
    /// returns one line per violation.
    pub fn check_invariant_calculus(&self, caps: &Caps) -> Result<Vec<String>> {
        let flags = self.classify(caps)?;
        let ideals = self.principal_ideals(caps)?;
        let support = self.support();
        let ring = &self.ring;
        let se = self.principal();
        let unital_se = ring.identity_in(&se).is_some();
        let invariant: Vec<&Submodule> = ideals
            .iter()
            .filter(|i| support.iter().all(|x| self.conjugate(i, x).is_subset(i)))
            .collect();
        let mut bad = Vec::new();
        let conj: BTreeMap<(usize, &Degree), Submodule> = ideals
            .iter()
            .enumerate()
            .flat_map(|(n, i)| support.iter().map(move |x| ((n, x), self.conjugate(i, x))))
            .collect();
        for (n, i) in ideals.iter().enumerate() {
            for x in &support {
                let ix = &conj[&(n, x)];
                for y in &support {
                    let xy = self.group.mul(x, y);
                    if !self.conjugate(ix, y).is_subset(&self.conjugate(i, &xy)) {
                        bad.push(format!(
                            "(I^x)^y not in I^(xy) for ideal {n}, x={x:?}, y={y:?}"
                        ));
                    }
                }
                if flags.nearly_epsilon_strong {
                    let sx = self.component(x);
                    let xi = self.group.inv(x);
                    let sxi = self.component(&xi);
                    if ring.product(i, &sx) != ring.product(&sx, ix) {
                        bad.push(format!("I S_y != S_y I^y for ideal {n}, y={x:?}"));
                    }
                    if ring.product(&sxi, i) != ring.product(ix, &sxi) {
                        bad.push(format!("S_(y^-1) I != I^y S_(y^-1) for ideal {n}, y={x:?}"));
                    }
                    let p = self.local_ideal(x);
                    if ring.product(&p, i) != ring.product(i, &p) {
                        bad.push(format!("ideal {n} not epsilon-invariant at {x:?}"));
                    }
                }
            }
            for (m, j) in ideals.iter().enumerate() {
                let ij = ring.product(i, j);
                let sum = i.sum(j);
                let sum_pos = ideals.iter().position(|k| *k == sum);
                for x in &support {
                    let (ix, jx) = (&conj[&(n, x)], &conj[&(m, x)]);
                    let ijx = self.conjugate(&ij, x);
                    let prod = ring.product(ix, jx);
                    if !prod.is_subset(&ijx) {
                        bad.push(format!("I^x J^x not in (IJ)^x for ideals {n},{m}, x={x:?}"));
                    }
                    if flags.nearly_epsilon_strong && prod != ijx {
                        bad.push(format!("(IJ)^x != I^x J^x for ideals {n},{m}, x={x:?}"));
                    }
                    if i.is_subset(j) && !ix.is_subset(jx) {
                        bad.push(format!(
                            "I in J but I^x not in J^x for ideals {n},{m}, x={x:?}"
                        ));
                    }
                    let sx = match sum_pos {
                        Some(p) => conj[&(p, x)].clone(),
                        None => self.conjugate(&sum, x),
                    };
                    if sx != ix.sum(jx) {
                        bad.push(format!("(I+J)^x != I^x + J^x for ideals {n},{m}, x={x:?}"));
                    }
                }
            }
            if unital_se {
                let closure = self.invariant_closure(i, None)?;
                let raw = support
                    .iter()
                    .fold(ring.zero_sub(), |acc, x| acc.sum(&conj[&(n, x)]));
                if closure != raw || !i.is_subset(&closure) || !invariant.contains(&&closure) {
                    bad.push(format!("closure of ideal {n} is not I^G"));
                }
                for j in &invariant {
                    if i.is_subset(j) && !closure.is_subset(j) {
                        bad.push(format!("I^G of ideal {n} not minimal"));
                    }
                }
            }
        }
        Ok(bad)
    }
}

/// Prime members of a lattice closed under products: proper P such that
/// AB in P forces A in P or B in P.
fn prime_members(ring: &FiniteRing, lattice: &[Submodule], top: &Submodule) -> Vec<Submodule> {
    let products: Vec<Vec<Submodule>> = lattice
        .par_iter()
        .map(|a| lattice.iter().map(|b| ring.product(a, b)).collect())
        .collect();
    lattice
        .iter()
        .filter(|p| *p != top)
        .filter(|p| {
            (0..lattice.len()).all(|a| {
                (0..lattice.len()).all(|b| {
                    !products[a][b].is_subset(p)
                        || lattice[a].is_subset(p)
                        || lattice[b].is_subset(p)
                })
            })
        })
        .cloned()
        .collect()
}

/// Full-rank sublattice of Z^r in Hermite normal form.
#[derive(Clone, Debug)]
pub struct Sublattice {
    rows: Vec<Vec<i64>>,
}

impl Sublattice {
    pub fn new(r: usize, gens: &[Vec<i64>]) -> Result<Self> {
        if gens.iter().any(|g| g.len() != r) {
            return Err(Error::Dimension("sublattice generator length".into()));
        }
        let mut a: Vec<Vec<i128>> = gens
            .iter()
            .map(|g| g.iter().map(|&x| x as i128).collect())
            .collect();
        let mut rows = Vec::new();
        for c in 0..r {
            loop {
                let nz: Vec<usize> = (0..a.len()).filter(|&i| a[i][c] != 0).collect();
                if nz.len() <= 1 {
                    break;
                }
                let p = *nz.iter().min_by_key(|&&i| a[i][c].abs()).expect("nonempty");
                for &i in &nz {
                    if i != p {
                        let q = a[i][c].div_euclid(a[p][c]);
                        let prow = a[p].clone();
                        for (x, y) in a[i].iter_mut().zip(&prow) {
                            *x -= q * y;
                        }
                    }
                }
            }
            let Some(p) = (0..a.len()).find(|&i| a[i][c] != 0) else {
                return Err(Error::Unsupported(
                    "quotient by a sublattice that is not of full rank".into(),
                ));
            };
            let mut row = a.remove(p);
            if row[c] < 0 {
                row.iter_mut().for_each(|x| *x = -*x);
            }
            rows.push(row.into_iter().map(|x| x as i64).collect());
        }
        Ok(Sublattice { rows })
    }

    fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut v = v.to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let q = v[i].div_euclid(row[i]);
            for (x, y) in v.iter_mut().zip(row) {
                *x -= q * y;
            }
        }
        v
    }

    /// Index of the coset of v among the mixed-radix coset representatives.
    pub fn index_of(&self, v: &[i64]) -> usize {
        let red = self.reduce(v);
        let mut idx = 0usize;
        for (i, row) in self.rows.iter().enumerate().rev() {
            idx = idx * row[i] as usize + red[i] as usize;
        }
        idx
    }

    fn representative(&self, mut idx: usize) -> Vec<i64> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let d = row[i] as usize;
                let c = idx % d;
                idx /= d;
                c as i64
            })
            .collect()
    }

    pub fn index(&self) -> usize {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| r[i] as usize)
            .product()
    }

    pub fn quotient_group(&self) -> FiniteGroup {
        let n = self.index();
        let reps: Vec<Vec<i64>> = (0..n).map(|i| self.representative(i)).collect();
        let table = reps
            .iter()
            .map(|a| {
                reps.iter()
                    .map(|b| {
                        self.index_of(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>())
                    })
                    .collect()
            })
            .collect();
        let labels = reps.iter().map(|r| format!("{r:?}")).collect();
        FiniteGroup::from_table(table, Some(labels)).expect("quotient of Z^r")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(base: &FiniteRing) -> GradedRing {
        let r = FiniteRing::matrix_ring(2, base).unwrap();
        let kb = base.rank();
        let degrees = (0..4 * kb)
            .map(|i| {
                let (row, col) = ((i / kb) / 2, (i / kb) % 2);
                Degree::Lattice(vec![row as i64 - col as i64])
            })
            .collect();
        GradedRing::new(r, GradeGroup::Lattice(1), degrees).unwrap()
    }

    #[test]
    fn matrix_grading_flags() {
        let caps = Caps::default();
        let s = m2(&FiniteRing::zmod(2));
        let f = s.classify(&caps).unwrap();
        assert!(f.epsilon_strong && !f.strong && f.nearly_epsilon_strong && f.non_degenerate);
        assert!(!s.is_cancellative_eps_strong(&caps).unwrap());
        assert_eq!(
            s.component(&Degree::Lattice(vec![1])).gens(),
            &[vec![0, 0, 1, 0]]
        );
        assert!(s.component(&Degree::Lattice(vec![5])).is_zero());
        assert!(s.is_g_prime(&caps).unwrap());
        assert!(!s
            .principal_ring()
            .unwrap()
            .is_prime(&caps)
            .unwrap()
            .is_prime());
        assert!(s.is_graded_prime(&caps).unwrap());
    }

    #[test]
    fn wrong_degrees_rejected() {
        let r = FiniteRing::matrix_ring(2, &FiniteRing::zmod(2)).unwrap();
        let d = |x| Degree::Lattice(vec![x]);
        let err =
            GradedRing::new(r, GradeGroup::Lattice(1), vec![d(0), d(1), d(1), d(0)]).unwrap_err();
        assert!(matches!(err, Error::NotGraded(..)));
    }

    #[test]
    fn z4_matrix_not_g_semiprime() {
        let caps = Caps::default();
        let s = m2(&FiniteRing::zmod(4));
        assert!(!s.is_g_semiprime(&caps).unwrap());
        assert!(!s.is_graded_prime(&caps).unwrap());
    }

    #[test]
    fn quotient_by_even_integers() {
        let s = m2(&FiniteRing::zmod(2));
        let q = s.quotient_grading(NormalSpec::Lattice(&[vec![2]])).unwrap();
        assert_eq!(q.principal().gens().len(), 2);
        let f = q.classify(&Caps::default()).unwrap();
        assert!(f.strong);
    }

    #[test]
    fn sublattice_rank_check() {
        assert!(Sublattice::new(2, &[vec![2, 0]]).is_err());
        let l = Sublattice::new(2, &[vec![2, 1], vec![0, 3]]).unwrap();
        assert_eq!(l.index(), 6);
        assert_eq!(l.quotient_group().order(), 6);
    }
}
