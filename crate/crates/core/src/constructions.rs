//! Builders for group rings, skew group rings, partial skew group rings,
//! unital partial crossed products and graded matrix rings, plus the
//! symbolic group-ring primeness decision.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Caps, Error, Result};
use crate::graded::{Degree, GradeGroup, GradedRing, NormalSpec};
use crate::groups::{FiniteGroup, Subgroup, SymbolicGroup};
use crate::primality::{decide_prime, NpDatum, Strategy};
use crate::ring::{FiniteRing, Term};
use crate::zmod::{solve_left, Submodule, Zn};

fn ring_elements(m: u64, rank: usize) -> u128 {
    u32::try_from(rank)
        .ok()
        .and_then(|r| (m as u128).checked_pow(r))
        .unwrap_or(u128::MAX)
}

fn sparse(v: &[u64], offset: usize) -> Vec<Term> {
    v.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(l, &c)| (offset + l, c))
        .collect()
}

/// Ring automorphisms per group element: `maps[g][i]` is the image of the
/// i-th basis vector, so alpha_g(v) = v * maps[g].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewAction {
    pub maps: Vec<Vec<Vec<u64>>>,
}

impl SkewAction {
    pub fn trivial(r: &FiniteRing, g: &FiniteGroup) -> Self {
        let id: Vec<Vec<u64>> = (0..r.rank()).map(|i| r.basis(i)).collect();
        SkewAction {
            maps: vec![id; g.order()],
        }
    }

    pub fn apply(&self, zn: Zn, g: usize, v: &[u64]) -> Vec<u64> {
        let mut out = vec![0; v.len()];
        for (c, row) in v.iter().zip(&self.maps[g]) {
            zn.add_assign_scaled(&mut out, *c, row);
        }
        out
    }

    pub fn validate(&self, r: &FiniteRing, g: &FiniteGroup) -> Result<()> {
        let k = r.rank();
        let zn = r.zn();
        if self.maps.len() != g.order()
            || self
                .maps
                .iter()
                .any(|a| a.len() != k || a.iter().any(|row| row.len() != k))
        {
            return Err(Error::Dimension(format!(
                "action needs {} matrices of size {k} x {k}",
                g.order()
            )));
        }
        let maps: Vec<Vec<Vec<u64>>> = self
            .maps
            .iter()
            .map(|a| {
                a.iter()
                    .map(|row| row.iter().map(|&c| c % zn.modulus()).collect())
                    .collect()
            })
            .collect();
        let act = SkewAction { maps };
        for x in 0..g.order() {
            for i in 0..k {
                for j in 0..k {
                    let lhs = act.apply(zn, x, &r.basis_product(i, j));
                    let rhs = r.mul(&act.maps[x][i], &act.maps[x][j]);
                    if lhs != rhs {
                        return Err(Error::NotAutomorphism(format!(
                            "alpha_{} not multiplicative on ({}, {})",
                            g.labels()[x],
                            r.labels()[i],
                            r.labels()[j]
                        )));
                    }
                }
            }
            if r.span(act.maps[x].iter().cloned()).order() != r.element_count() {
                return Err(Error::NotAutomorphism(format!(
                    "alpha_{} is not bijective",
                    g.labels()[x]
                )));
            }
        }
        let e = g.identity();
        if let Some(i) = (0..k).find(|&i| act.maps[e][i] != r.basis(i)) {
            return Err(Error::NotAHomomorphism(format!(
                "alpha_e moves {}",
                r.labels()[i]
            )));
        }
        for x in 0..g.order() {
            for y in 0..g.order() {
                let xy = g.mul(x, y);
                for i in 0..k {
                    let lhs = act.apply(zn, x, &act.maps[y][i]);
                    if lhs != act.maps[xy][i] {
                        return Err(Error::NotAHomomorphism(format!(
                            "alpha_{} alpha_{} != alpha_{} on {}",
                            g.labels()[x],
                            g.labels()[y],
                            g.labels()[xy],
                            r.labels()[i]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn degree_labels(r: &FiniteRing, g: &FiniteGroup) -> Vec<String> {
    let mut labels = Vec::with_capacity(g.order() * r.rank());
    for x in g.labels() {
        for l in r.labels() {
            labels.push(format!("{l}.{x}"));
        }
    }
    labels
}

pub fn build_group_ring(r: &FiniteRing, g: &FiniteGroup, caps: &Caps) -> Result<GradedRing> {
    build_skew_group_ring(r, g, &SkewAction::trivial(r, g), caps)
}

/// R *_alpha G with basis b_i delta_x at index x * rank + i.
pub fn build_skew_group_ring(
    r: &FiniteRing,
    g: &FiniteGroup,
    act: &SkewAction,
    caps: &Caps,
) -> Result<GradedRing> {
    let k = r.rank();
    let n = g.order();
    caps.check_elements(
        "crossed product elements",
        ring_elements(r.modulus(), k * n),
    )?;
    act.validate(r, g)?;
    let zn = r.zn();
    let big = k * n;
    let mut table = vec![Vec::new(); big * big];
    for x in 0..n {
        for y in 0..n {
            let xy = g.mul(x, y);
            for i in 0..k {
                let bi = r.basis(i);
                for j in 0..k {
                    let prod = r.mul(&bi, &act.apply(zn, x, &r.basis(j)));
                    table[(x * k + i) * big + y * k + j] = sparse(&prod, xy * k);
                }
            }
        }
    }
    let unit = r.unit().map(|u| {
        let mut v = vec![0; big];
        v[g.identity() * k..g.identity() * k + k].copy_from_slice(u);
        v
    });
    let ring = FiniteRing::from_sparse(zn, big, table, unit, Some(degree_labels(r, g)))?;
    let degrees = (0..big).map(|i| Degree::Finite(i / k)).collect();
    let s = GradedRing::new(ring, GradeGroup::Finite(g.clone()), degrees)?;
    if r.has_identity() && !s.classify(caps)?.strong {
        return Err(Error::TheoremViolation(
            "skew group ring over a unital ring is not strongly graded".into(),
        ));
    }
    Ok(s)
}

/// One nonzero domain of a partial action: a free basis of D_g and the
/// values of alpha_g on the basis of D_{g^-1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialDomain {
    pub basis: Vec<Vec<u64>>,
    pub map: Vec<Vec<u64>>,
}

/// Degrees absent from `domains` have D_g = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialActionData {
    pub group: GradeGroup,
    pub domains: BTreeMap<Degree, PartialDomain>,
}

impl PartialActionData {
    /// The global action of a skew action, all D_g = R.
    pub fn global(r: &FiniteRing, g: &FiniteGroup, act: &SkewAction) -> Self {
        let basis: Vec<Vec<u64>> = (0..r.rank()).map(|i| r.basis(i)).collect();
        let domains = (0..g.order())
            .map(|x| {
                let map = act.maps[x].clone();
                (
                    Degree::Finite(x),
                    PartialDomain {
                        basis: basis.clone(),
                        map,
                    },
                )
            })
            .collect();
        PartialActionData {
            group: GradeGroup::Finite(g.clone()),
            domains,
        }
    }
}

/// Twist w_{g,h}; pairs not listed default to 1_g 1_{gh}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedPartialData {
    pub action: PartialActionData,
    pub twist: BTreeMap<(Degree, Degree), Vec<u64>>,
}

fn axiom(axiom: &'static str, detail: String) -> Error {
    Error::AxiomViolation { axiom, detail }
}

/// Validated view of partial action data over a ring.
struct Partial<'a> {
    r: &'a FiniteRing,
    data: &'a PartialActionData,
    subs: BTreeMap<Degree, Submodule>,
}

impl<'a> Partial<'a> {
    fn new(r: &'a FiniteRing, data: &'a PartialActionData) -> Result<Self> {
        let zn = r.zn();
        let k = r.rank();
        let mut subs = BTreeMap::new();
        for (g, d) in &data.domains {
            data.group.check(g)?;
            if d.basis.iter().chain(&d.map).any(|v| v.len() != k) {
                return Err(Error::Dimension(format!(
                    "domain vectors at {g:?} must have length {k}"
                )));
            }
            let sub = r.span(d.basis.iter().cloned());
            if d.basis.is_empty() || sub.order() != ring_elements(zn.modulus(), d.basis.len()) {
                return Err(Error::MalformedData(format!(
                    "basis of D at {g:?} is not free"
                )));
            }
            subs.insert(g.clone(), sub);
        }
        let p = Partial { r, data, subs };
        p.check_domains()?;
        Ok(p)
    }

    fn dom(&self, g: &Degree) -> Submodule {
        self.subs
            .get(g)
            .cloned()
            .unwrap_or_else(|| self.r.zero_sub())
    }

    fn basis(&self, g: &Degree) -> &[Vec<u64>] {
        self.data
            .domains
            .get(g)
            .map(|d| d.basis.as_slice())
            .unwrap_or(&[])
    }

    fn inv(&self, g: &Degree) -> Degree {
        self.data.group.inv(g)
    }

    fn mul(&self, a: &Degree, b: &Degree) -> Degree {
        self.data.group.mul(a, b)
    }

    fn support(&self) -> Vec<Degree> {
        self.data.domains.keys().cloned().collect()
    }

    /// Coordinates of v in the basis of D_g.
    fn coords(&self, g: &Degree, v: &[u64]) -> Option<Vec<u64>> {
        if v.iter().all(|&c| c == 0) {
            return Some(vec![0; self.basis(g).len()]);
        }
        solve_left(self.r.zn(), self.basis(g), v)
    }

    /// alpha_g(v) for v in D_{g^-1}.
    fn alpha(&self, g: &Degree, v: &[u64]) -> Result<Vec<u64>> {
        let gi = self.inv(g);
        let c = self
            .coords(&gi, v)
            .ok_or_else(|| axiom("P2", format!("alpha at {g:?} applied outside its domain")))?;
        let mut out = self.r.zero();
        if let Some(d) = self.data.domains.get(g) {
            for (ci, img) in c.iter().zip(&d.map) {
                self.r.zn().add_assign_scaled(&mut out, *ci, img);
            }
        }
        Ok(out)
    }

    fn alpha_sub(&self, g: &Degree, u: &Submodule) -> Result<Submodule> {
        let imgs = u
            .gens()
            .iter()
            .map(|v| self.alpha(g, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.r.span(imgs))
    }

    fn check_domains(&self) -> Result<()> {
        let r = self.r;
        let e = self.data.group.identity();
        if self.dom(&e) != r.full() {
            return Err(axiom("P1", "D_e is not the whole ring".into()));
        }
        for (g, d) in &self.data.domains {
            let dg = &self.subs[g];
            if r.ideal(dg) != *dg {
                return Err(axiom("ideal", format!("D at {g:?} is not an ideal")));
            }
            if r.identity_in(dg).is_none() {
                return Err(axiom("s-unital", format!("D at {g:?} is not s-unital")));
            }
            let gi = self.inv(g);
            if d.map.len() != self.basis(&gi).len() {
                return Err(axiom(
                    "isomorphism",
                    format!("alpha at {g:?} needs one image per basis vector of D at {gi:?}"),
                ));
            }
            if r.span(d.map.iter().cloned()) != *dg {
                return Err(axiom(
                    "isomorphism",
                    format!("alpha at {g:?} does not map onto D at {g:?}"),
                ));
            }
            let src = self.basis(&gi);
            for (i, a) in src.iter().enumerate() {
                for (j, b) in src.iter().enumerate() {
                    if self.alpha(g, &r.mul(a, b))? != r.mul(&d.map[i], &d.map[j]) {
                        return Err(axiom(
                            "isomorphism",
                            format!("alpha at {g:?} not multiplicative on ({i}, {j})"),
                        ));
                    }
                }
            }
        }
        for (i, b) in self.basis(&e).iter().enumerate() {
            if self.alpha(&e, b)? != *b {
                return Err(axiom("P1", format!("alpha_e moves basis vector {i}")));
            }
        }
        for g in self.support() {
            let gi = self.inv(&g);
            for h in self.partners(&g) {
                let lhs = self.alpha_sub(&g, &r.product(&self.dom(&gi), &self.dom(&h)))?;
                let rhs = r.product(&self.dom(&g), &self.dom(&self.mul(&g, &h)));
                if lhs != rhs {
                    return Err(axiom(
                        "P2",
                        format!("alpha_g(D_g^-1 D_h) != D_g D_gh at g = {g:?}, h = {h:?}"),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Degrees h for which D_h or D_{gh} is nonzero.
    fn partners(&self, g: &Degree) -> BTreeSet<Degree> {
        let gi = self.inv(g);
        self.support()
            .into_iter()
            .flat_map(|x| [x.clone(), self.mul(&gi, &x)])
            .collect()
    }

    fn check_composition(&self) -> Result<()> {
        let r = self.r;
        for g in self.support() {
            for h in self.support() {
                let gh = self.mul(&g, &h);
                let src = r.product(&self.dom(&self.inv(&h)), &self.dom(&self.inv(&gh)));
                for v in src.gens() {
                    if self.alpha(&g, &self.alpha(&h, v)?)? != self.alpha(&gh, v)? {
                        return Err(axiom(
                            "P3",
                            format!("alpha_g alpha_h != alpha_gh at g = {g:?}, h = {h:?}"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Sorted support with index offsets into the crossed product basis.
    fn layout(&self) -> (Vec<Degree>, BTreeMap<Degree, usize>, usize) {
        let mut off = BTreeMap::new();
        let mut total = 0;
        let supp = self.support();
        for g in &supp {
            off.insert(g.clone(), total);
            total += self.basis(g).len();
        }
        (supp, off, total)
    }

    /// Builds the graded ring with (r delta_g)(r' delta_h) = prod(g, h, r, r') delta_gh.
    fn assemble<F>(&self, prod: F, caps: &Caps) -> Result<GradedRing>
    where
        F: Fn(&Degree, &Degree, &[u64], &[u64]) -> Result<Vec<u64>>,
    {
        let r = self.r;
        let (supp, off, total) = self.layout();
        caps.check_elements(
            "crossed product elements",
            ring_elements(r.modulus(), total),
        )?;
        let mut table = vec![Vec::new(); total * total];
        for g in &supp {
            for h in &supp {
                let gh = self.mul(g, h);
                for (i, a) in self.basis(g).iter().enumerate() {
                    for (j, b) in self.basis(h).iter().enumerate() {
                        let v = prod(g, h, a, b)?;
                        let c = self.coords(&gh, &v).ok_or_else(|| {
                            axiom(
                                "P2",
                                format!("product of degrees {g:?}, {h:?} leaves D at {gh:?}"),
                            )
                        })?;
                        let base = off.get(&gh).copied().unwrap_or(0);
                        table[(off[g] + i) * total + off[h] + j] = sparse(&c, base);
                    }
                }
            }
        }
        let mut labels = Vec::with_capacity(total);
        let mut degrees = Vec::with_capacity(total);
        for g in &supp {
            for i in 0..self.basis(g).len() {
                labels.push(format!("d{i}@{}", degree_text(g)));
                degrees.push(g.clone());
            }
        }
        let ring = FiniteRing::from_sparse(r.zn(), total, table, None, Some(labels))?;
        GradedRing::new(ring, self.data.group.clone(), degrees)
    }
}

fn degree_text(d: &Degree) -> String {
    match d {
        Degree::Finite(i) => i.to_string(),
        Degree::Lattice(v) => format!("{v:?}").replace(' ', ""),
    }
}

pub fn build_partial_skew_group_ring(
    r: &FiniteRing,
    data: &PartialActionData,
    caps: &Caps,
) -> Result<GradedRing> {
    let p = Partial::new(r, data)?;
    p.check_composition()?;
    let s = p.assemble(
        |g, _h, a, b| {
            let x = p.alpha(&p.inv(g), a)?;
            p.alpha(g, &r.mul(&x, b))
        },
        caps,
    )?;
    if !s.classify(caps)?.nearly_epsilon_strong {
        return Err(Error::TheoremViolation(
            "partial skew group ring grading is not nearly epsilon-strong".into(),
        ));
    }
    Ok(s)
}

struct Twisted<'a> {
    p: Partial<'a>,
    units: BTreeMap<Degree, Vec<u64>>,
    twist: &'a BTreeMap<(Degree, Degree), Vec<u64>>,
}

impl<'a> Twisted<'a> {
    fn unit(&self, g: &Degree) -> Vec<u64> {
        self.units
            .get(g)
            .cloned()
            .unwrap_or_else(|| self.p.r.zero())
    }

    fn w(&self, g: &Degree, h: &Degree) -> Vec<u64> {
        match self.twist.get(&(g.clone(), h.clone())) {
            Some(w) => w.clone(),
            None => self.p.r.mul(&self.unit(g), &self.unit(&self.p.mul(g, h))),
        }
    }

    /// Inverse of w_{g,h} inside D_g D_gh.
    fn w_inv(&self, g: &Degree, h: &Degree) -> Result<Vec<u64>> {
        let r = self.p.r;
        let gh = self.p.mul(g, h);
        let t = r.product(&self.p.dom(g), &self.p.dom(&gh));
        let w = self.w(g, h);
        if !t.contains(&w) {
            return Err(Error::NotInvertible(format!(
                "w at ({g:?}, {h:?}) is not in D_g D_gh"
            )));
        }
        let one = r.mul(&self.unit(g), &self.unit(&gh));
        let gens = t.gens();
        if gens.is_empty() {
            return Ok(r.zero());
        }
        let mat: Vec<Vec<u64>> = gens
            .iter()
            .map(|x| {
                let mut row = r.mul(&w, x);
                row.extend(r.mul(x, &w));
                row
            })
            .collect();
        let mut target = one.clone();
        target.extend(one);
        let c = solve_left(r.zn(), &mat, &target).ok_or_else(|| {
            Error::NotInvertible(format!("w at ({g:?}, {h:?}) has no inverse in D_g D_gh"))
        })?;
        let mut out = r.zero();
        for (ci, x) in c.iter().zip(gens) {
            r.zn().add_assign_scaled(&mut out, *ci, x);
        }
        Ok(out)
    }

    fn validate(&self) -> Result<()> {
        let p = &self.p;
        let r = p.r;
        let e = p.data.group.identity();
        let supp = p.support();
        for ((g, h), w) in self.twist {
            if w.len() != r.rank() {
                return Err(Error::Dimension(format!(
                    "twist at ({g:?}, {h:?}) has wrong length"
                )));
            }
        }
        for g in &supp {
            for h in p.partners(g) {
                self.w_inv(g, &h)?;
            }
            if self.w(&e, g) != self.unit(g) || self.w(g, &e) != self.unit(g) {
                return Err(axiom(
                    "UP4",
                    format!("w(e, g) or w(g, e) differs from 1_g at g = {g:?}"),
                ));
            }
        }
        for g in &supp {
            for h in &supp {
                let gh = p.mul(g, h);
                let w = self.w(g, h);
                let wi = self.w_inv(g, h)?;
                let src = r.product(&p.dom(&p.inv(h)), &p.dom(&p.inv(&gh)));
                for v in src.gens() {
                    let lhs = p.alpha(g, &p.alpha(h, v)?)?;
                    let rhs = r.mul(&r.mul(&w, &p.alpha(&gh, v)?), &wi);
                    if lhs != rhs {
                        return Err(axiom(
                            "UP3",
                            format!("twisted composition fails at g = {g:?}, h = {h:?}"),
                        ));
                    }
                }
            }
        }
        for g in &supp {
            for h in &supp {
                let hs: Vec<Degree> = supp.iter().map(|x| p.mul(&p.inv(h), x)).collect();
                for l in &hs {
                    let hl = p.mul(h, l);
                    let gh = p.mul(g, h);
                    let src = r.product3(&p.dom(&p.inv(g)), &p.dom(h), &p.dom(&hl));
                    for v in src.gens() {
                        let lhs = r.mul(&p.alpha(g, &r.mul(v, &self.w(h, l)))?, &self.w(g, &hl));
                        let rhs = r.mul(&r.mul(&p.alpha(g, v)?, &self.w(g, h)), &self.w(&gh, l));
                        if lhs != rhs {
                            return Err(axiom(
                                "UP5",
                                format!(
                                    "cocycle condition fails at g = {g:?}, h = {h:?}, l = {l:?}"
                                ),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn build_partial_crossed_product(
    r: &FiniteRing,
    data: &TwistedPartialData,
    caps: &Caps,
) -> Result<GradedRing> {
    let p = Partial::new(r, &data.action)?;
    let mut units = BTreeMap::new();
    for g in p.support() {
        let dg = p.dom(&g);
        let u = r
            .identity_in(&dg)
            .filter(|u| {
                dg.gens()
                    .iter()
                    .all(|x| r.mul(u, x) == *x && r.mul(x, u) == *x)
            })
            .ok_or_else(|| axiom("UP1", format!("D at {g:?} is not unital")))?;
        units.insert(g, u);
    }
    let t = Twisted {
        p,
        units,
        twist: &data.twist,
    };
    t.validate()?;
    let s = t.p.assemble(
        |g, h, a, b| {
            let gi = t.p.inv(g);
            let inner = t.p.alpha(g, &r.mul(b, &t.unit(&gi)))?;
            Ok(r.mul(&r.mul(a, &inner), &t.w(g, h)))
        },
        caps,
    )?;
    if !s.classify(caps)?.epsilon_strong {
        return Err(Error::TheoremViolation(
            "unital partial crossed product grading is not epsilon-strong".into(),
        ));
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixGrading {
    Integers,
    Cyclic,
}

/// M_n(R) with deg(e_ij) = i - j, or its reduction mod n.
pub fn build_matrix_graded(
    r: &FiniteRing,
    n: usize,
    mode: MatrixGrading,
    caps: &Caps,
) -> Result<GradedRing> {
    if n == 0 {
        return Err(Error::Dimension("matrix size must be positive".into()));
    }
    caps.check_elements(
        "matrix ring elements",
        ring_elements(r.modulus(), n * n * r.rank()),
    )?;
    let ring = FiniteRing::matrix_ring(n, r)?;
    let kb = r.rank();
    let degrees = (0..n * n * kb)
        .map(|idx| {
            let (i, j) = (idx / kb / n, idx / kb % n);
            Degree::Lattice(vec![i as i64 - j as i64])
        })
        .collect();
    let s = GradedRing::new(ring, GradeGroup::Lattice(1), degrees)?;
    match mode {
        MatrixGrading::Integers => {
            if !s.classify(caps)?.nearly_epsilon_strong {
                return Err(Error::TheoremViolation(
                    "matrix grading is not nearly epsilon-strong".into(),
                ));
            }
            Ok(s)
        }
        MatrixGrading::Cyclic => {
            let q = s.quotient_grading(NormalSpec::Lattice(&[vec![n as i64]]))?;
            if r.has_identity() && !q.classify(caps)?.strong {
                return Err(Error::TheoremViolation(
                    "cyclic matrix grading is not strong".into(),
                ));
            }
            Ok(q)
        }
    }
}

/// Direct sum of graded rings over a common grade group.
pub fn build_direct_sum(parts: &[GradedRing]) -> Result<GradedRing> {
    let first = parts
        .first()
        .ok_or_else(|| Error::Dimension("empty direct sum".into()))?;
    if parts.iter().any(|p| p.group() != first.group()) {
        return Err(Error::Dimension(
            "direct sum parts need a common grade group".into(),
        ));
    }
    let rings: Vec<FiniteRing> = parts.iter().map(|p| p.ring().clone()).collect();
    let degrees = parts
        .iter()
        .flat_map(|p| p.degrees().iter().cloned())
        .collect();
    GradedRing::new(
        FiniteRing::direct_sum(&rings)?,
        first.group().clone(),
        degrees,
    )
}

/// Either a concrete coefficient ring or just its primeness.
#[derive(Clone, Debug)]
pub enum Coefficients<'a> {
    Ring(&'a FiniteRing),
    Prime(bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConnellReason {
    Prime,
    CoefficientsNotPrime,
    FiniteNormalSubgroup,
}

impl ConnellReason {
    pub fn name(self) -> &'static str {
        match self {
            ConnellReason::Prime => "prime",
            ConnellReason::CoefficientsNotPrime => "ring_not_prime",
            ConnellReason::FiniteNormalSubgroup => "finite_normal_subgroup",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnellReport {
    pub prime: bool,
    pub reason: ConnellReason,
    /// Agreement with a decision on the built group ring, when it could be built.
    pub cross_check: Option<bool>,
}

/// R[G] is prime iff R is prime and G has no nontrivial finite normal subgroup.
pub fn connell_decision(
    r: Coefficients<'_>,
    g: &SymbolicGroup,
    caps: &Caps,
) -> Result<ConnellReport> {
    let ring_prime = match &r {
        Coefficients::Prime(p) => *p,
        Coefficients::Ring(ring) => {
            if !ring.is_s_unital(caps)? {
                return Err(Error::NotSUnital);
            }
            ring.is_prime(caps)?.is_prime()
        }
    };
    let preds = g.predicates()?;
    let reason = if !ring_prime {
        ConnellReason::CoefficientsNotPrime
    } else if preds.has_nontrivial_finite_normal_subgroup {
        ConnellReason::FiniteNormalSubgroup
    } else {
        ConnellReason::Prime
    };
    let prime = reason == ConnellReason::Prime;
    let mut cross_check = None;
    if let (Coefficients::Ring(ring), Some(fg)) = (&r, g.to_finite()) {
        match build_group_ring(ring, &fg, caps).and_then(|s| decide_prime(&s, Strategy::Auto, caps))
        {
            Ok(rep) => {
                if rep.prime != prime {
                    return Err(Error::TheoremViolation(format!(
                        "group ring criterion says {prime}, decision on R[{g}] says {}",
                        rep.prime
                    )));
                }
                cross_check = Some(true);
            }
            Err(Error::CapExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(ConnellReport {
        prime,
        reason,
        cross_check,
    })
}

/// alpha_h(I D_{h^-1}) is contained in I for every h in H (all of G when None).
/// The equivalent equality form alpha_h(I D_{h^-1}) = I D_h is checked alongside.
pub fn partial_invariance(
    r: &FiniteRing,
    data: &PartialActionData,
    i: &Submodule,
    h: Option<&Subgroup>,
) -> Result<bool> {
    let p = Partial::new(r, data)?;
    if i.dim() != r.rank() || r.ideal(i) != *i {
        return Err(Error::MalformedData("I is not an ideal of R".into()));
    }
    let elems: Vec<Degree> = match (h, &data.group) {
        (None, _) => p.support(),
        (Some(h), GradeGroup::Finite(g)) => {
            g.subgroup(h.elements())
                .map_err(|e| Error::MalformedData(e.to_string()))?;
            h.elements().iter().map(|&x| Degree::Finite(x)).collect()
        }
        (Some(_), GradeGroup::Lattice(_)) => {
            return Err(Error::MalformedData(
                "subgroups of a lattice are given implicitly".into(),
            ))
        }
    };
    let mut contained = true;
    let mut equal = true;
    for x in &elems {
        let img = p.alpha_sub(x, &r.product(i, &p.dom(&p.inv(x))))?;
        contained &= img.is_subset(i);
        equal &= img == r.product(i, &p.dom(x));
    }
    if contained != equal {
        return Err(Error::TheoremViolation(
            "invariance containment and equality forms disagree".into(),
        ));
    }
    Ok(contained)
}

/// Conditions (i)-(iii) for a non-primeness datum of a partial skew group ring,
/// phrased in terms of the partial action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialPrimeConditions {
    pub normal_subgroup: bool,
    pub ideal_invariant: bool,
    pub ideal_orthogonal: bool,
    pub ab_inside: bool,
    pub ab_balanced: bool,
}

impl PartialPrimeConditions {
    pub fn all(&self) -> bool {
        self.normal_subgroup
            && self.ideal_invariant
            && self.ideal_orthogonal
            && self.ab_inside
            && self.ab_balanced
    }
}

/// Translates a datum for S = R *_alpha G (built from `data`) back to the
/// partial action and re-verifies it there.
pub fn partial_prime_conditions(
    s: &GradedRing,
    r: &FiniteRing,
    data: &PartialActionData,
    d: &NpDatum,
) -> Result<PartialPrimeConditions> {
    let p = Partial::new(r, data)?;
    let GradeGroup::Finite(g) = &data.group else {
        return Err(Error::MalformedData(
            "datum translation needs a finite group".into(),
        ));
    };
    let sr = s.ring();
    let e = Degree::Finite(g.identity());
    let e_idx = s.indices(&e);
    let ebasis = p.basis(&e);
    if e_idx.len() != ebasis.len() {
        return Err(Error::MalformedData(
            "S does not come from this partial action".into(),
        ));
    }
    let to_r = |v: &[u64]| {
        let mut out = r.zero();
        for (pos, &idx) in e_idx.iter().enumerate() {
            r.zn().add_assign_scaled(&mut out, v[idx], &ebasis[pos]);
        }
        out
    };
    if !d.i.is_subset(&s.principal()) {
        return Err(Error::MalformedData(
            "I does not lie in the principal component".into(),
        ));
    }
    let ir = r.span(d.i.gens().iter().map(|v| to_r(v)));
    if r.ideal(&ir) != ir {
        return Err(Error::MalformedData("I is not an ideal".into()));
    }
    let normal_subgroup = d.n.is_subset(&d.h) && g.is_normal(&d.n, &d.h)?;
    let mut ideal_invariant = true;
    let mut ideal_orthogonal = true;
    for x in 0..g.order() {
        let x = Degree::Finite(x);
        let img = p.alpha_sub(&x, &r.product(&ir, &p.dom(&p.inv(&x))))?;
        let Degree::Finite(xi) = x else {
            unreachable!()
        };
        if d.h.contains(xi) {
            ideal_invariant &= img == r.product(&ir, &p.dom(&x));
        } else {
            ideal_orthogonal &= r.product_is_zero(&r.product(&ir, &p.dom(&x)), &img);
        }
    }
    let sn = s.span_of(d.n.elements());
    let inside = sr.product(&d.i, &sn);
    let ab_inside = !d.a.is_zero()
        && !d.b.is_zero()
        && sr.ideal_in(&sn, &d.a) == d.a
        && sr.ideal_in(&sn, &d.b) == d.b
        && d.a.is_subset(&inside)
        && d.b.is_subset(&inside);
    let ab_balanced = d.h.elements().iter().all(|&x| {
        let sx = s.component(&Degree::Finite(x));
        sr.product_is_zero(&sr.product(&d.a, &sx), &d.b)
    });
    Ok(PartialPrimeConditions {
        normal_subgroup,
        ideal_invariant,
        ideal_orthogonal,
        ab_inside,
        ab_balanced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn group_ring_of_c2_is_strong() {
        let s = build_group_ring(&f2(), &FiniteGroup::cyclic(2), &Caps::default()).unwrap();
        assert_eq!(s.ring().element_count(), 4);
        assert!(s.classify(&Caps::default()).unwrap().strong);
    }

    #[test]
    fn swap_skew_ring_is_prime() {
        let caps = Caps::default();
        let s = build_skew_group_ring(&f2f2(), &FiniteGroup::cyclic(2), &swap(), &caps).unwrap();
        assert!(s.ring().is_prime(&caps).unwrap().is_prime());
        assert!(!f2f2().is_prime(&caps).unwrap().is_prime());
    }

    #[test]
    fn non_homomorphic_action_rejected() {
        let bad = SkewAction {
            maps: vec![swap().maps[1].clone(), swap().maps[1].clone()],
        };
        let err = build_skew_group_ring(&f2f2(), &FiniteGroup::cyclic(2), &bad, &Caps::default())
            .unwrap_err();
        assert!(matches!(err, Error::NotAHomomorphism(_)));
    }

    #[test]
    fn global_partial_action_matches_skew() {
        let caps = Caps::default();
        let g = FiniteGroup::cyclic(2);
        let a = build_skew_group_ring(&f2f2(), &g, &swap(), &caps).unwrap();
        let data = PartialActionData::global(&f2f2(), &g, &swap());
        let b = build_partial_skew_group_ring(&f2f2(), &data, &caps).unwrap();
        assert_eq!(a.ring().dense_table(), b.ring().dense_table());
        assert_eq!(a.degrees(), b.degrees());
    }

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
    fn partial_one_summand_is_nearly_eps_not_strong() {
        let caps = Caps::default();
        let s = build_partial_skew_group_ring(&f2f2(), &one_summand(), &caps).unwrap();
        let f = s.classify(&caps).unwrap();
        assert!(f.nearly_epsilon_strong);
        assert!(!f.strong);
    }

    #[test]
    fn partial_map_off_domain_rejected() {
        let mut d = one_summand();
        d.domains.get_mut(&Degree::Finite(1)).unwrap().map = vec![vec![0, 1]];
        let err = build_partial_skew_group_ring(&f2f2(), &d, &Caps::default()).unwrap_err();
        assert!(matches!(err, Error::AxiomViolation { .. }));
    }

    #[test]
    fn twisted_default_is_partial_skew() {
        let caps = Caps::default();
        let t = TwistedPartialData {
            action: one_summand(),
            twist: BTreeMap::new(),
        };
        let a = build_partial_crossed_product(&f2f2(), &t, &caps).unwrap();
        let b = build_partial_skew_group_ring(&f2f2(), &one_summand(), &caps).unwrap();
        assert_eq!(a.ring().dense_table(), b.ring().dense_table());
    }

    #[test]
    fn zero_divisor_twist_rejected() {
        let mut twist = BTreeMap::new();
        twist.insert((Degree::Finite(1), Degree::Finite(1)), vec![0, 0]);
        let t = TwistedPartialData {
            action: one_summand(),
            twist,
        };
        let err = build_partial_crossed_product(&f2f2(), &t, &Caps::default()).unwrap_err();
        assert!(matches!(err, Error::NotInvertible(_)));
    }

    #[test]
    fn matrix_gradings() {
        let caps = Caps::default();
        let s = build_matrix_graded(&f2(), 2, MatrixGrading::Integers, &caps).unwrap();
        assert!(s.ring().is_prime(&caps).unwrap().is_prime());
        let q = build_matrix_graded(&f2(), 2, MatrixGrading::Cyclic, &caps).unwrap();
        assert!(q.classify(&caps).unwrap().strong);
        let one = build_matrix_graded(&f2(), 1, MatrixGrading::Integers, &caps).unwrap();
        assert_eq!(one.support().len(), 1);
    }

    #[test]
    fn connell_examples() {
        let caps = Caps::default();
        let z = SymbolicGroup::parse("Z").unwrap();
        assert!(
            connell_decision(Coefficients::Ring(&f2()), &z, &caps)
                .unwrap()
                .prime
        );
        let c2 = SymbolicGroup::parse("C2").unwrap();
        let rep = connell_decision(Coefficients::Ring(&f2()), &c2, &caps).unwrap();
        assert!(!rep.prime);
        assert_eq!(rep.reason, ConnellReason::FiniteNormalSubgroup);
        assert_eq!(rep.cross_check, Some(true));
        let z4 = FiniteRing::zmod(4);
        assert!(
            !connell_decision(Coefficients::Ring(&z4), &z, &caps)
                .unwrap()
                .prime
        );
    }

    #[test]
    fn partial_invariance_examples() {
        let r = f2f2();
        let d = one_summand();
        assert!(partial_invariance(&r, &d, &r.full(), None).unwrap());
        assert!(partial_invariance(&r, &d, &r.zero_sub(), None).unwrap());
        let inactive = r.span([vec![0, 1]]);
        assert!(partial_invariance(&r, &d, &inactive, None).unwrap());
        let active = r.span([vec![1, 0]]);
        assert!(partial_invariance(&r, &d, &active, None).unwrap());
    }
}
