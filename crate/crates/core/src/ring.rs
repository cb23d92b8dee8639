//! Finite, possibly non-unital rings given by structure constants over Z/m.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use crate::error::{Caps, Error, Result};
use crate::zmod::{is_zero_vec, kernel, solve_left, SpanBuilder, Submodule, Zn};

/// Sparse product of two basis elements: (target index, coefficient) pairs.
pub type Term = (usize, u64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRing {
    zn: Zn,
    rank: usize,
    labels: Vec<String>,
    table: Vec<Vec<Term>>,
    unit: Option<Vec<u64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Outcome of an exhaustive primeness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Prime,
    /// ideal(a) * ideal(b) = 0 with a, b nonzero.
    NotPrime {
        a: Vec<u64>,
        b: Vec<u64>,
    },
}

impl Verdict {
    pub fn is_prime(&self) -> bool {
        matches!(self, Verdict::Prime)
    }
}

impl FiniteRing {
    /// Builds and validates a ring from dense structure constants `mul[i][j]`.
    pub fn new(
        m: u64,
        mul: Vec<Vec<Vec<u64>>>,
        unit: Option<Vec<u64>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let zn = Zn::new(m);
        let k = mul.len();
        let mut table = Vec::with_capacity(k * k);
        for row in &mul {
            if row.len() != k {
                return Err(Error::Dimension(format!(
                    "structure constants must be {k} x {k}"
                )));
            }
            for v in row {
                if v.len() != k {
                    return Err(Error::Dimension(format!(
                        "coefficient vectors must have length {k}"
                    )));
                }
                table.push(
                    v.iter()
                        .enumerate()
                        .filter_map(|(l, &c)| (c % m != 0).then_some((l, c % m)))
                        .collect(),
                );
            }
        }
        Self::from_sparse(zn, k, table, unit, labels)
    }

    pub fn from_sparse(
        zn: Zn,
        rank: usize,
        table: Vec<Vec<Term>>,
        unit: Option<Vec<u64>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Dimension("rank must be positive".into()));
        }
        if table.len() != rank * rank {
            return Err(Error::Dimension("structure table size".into()));
        }
        let m = zn.modulus();
        let mut clean = Vec::with_capacity(table.len());
        for terms in table {
            let mut out: Vec<Term> = Vec::new();
            for (l, c) in terms {
                if l >= rank {
                    return Err(Error::Dimension(
                        "structure constant index out of range".into(),
                    ));
                }
                match out.iter_mut().find(|t| t.0 == l) {
                    Some(t) => t.1 = zn.add(t.1, c % m),
                    None => out.push((l, c % m)),
                }
            }
            out.retain(|t| t.1 != 0);
            out.sort_unstable();
            clean.push(out);
        }
        let table = clean;
        let labels = match labels {
            Some(l) if l.len() == rank => l,
            Some(_) => return Err(Error::Dimension("label count differs from rank".into())),
            None => (0..rank).map(|i| format!("b{i}")).collect(),
        };
        let unit = match unit {
            Some(u) if u.len() != rank => return Err(Error::Dimension("unit length".into())),
            Some(u) => Some(u.into_iter().map(|c| c % m).collect()),
            None => None,
        };
        let ring = FiniteRing {
            zn,
            rank,
            labels,
            table,
            unit,
        };
        ring.check_associative()?;
        if let Some(u) = &ring.unit {
            for i in 0..rank {
                let b = ring.basis(i);
                if ring.mul(u, &b) != b || ring.mul(&b, u) != b {
                    return Err(Error::BadUnit(i));
                }
            }
        }
        Ok(ring)
    }

    fn check_associative(&self) -> Result<()> {
        let k = self.rank;
        let bad = (0..k).into_par_iter().find_map_first(|i| {
            for j in 0..k {
                let ij = self.basis_product(i, j);
                for l in 0..k {
                    let lhs = self.mul_right_basis(&ij, l);
                    let jl = self.basis_product(j, l);
                    let rhs = self.mul_left_basis(i, &jl);
                    if lhs != rhs {
                        return Some((i, j, l));
                    }
                }
            }
            None
        });
        match bad {
            Some((i, j, l)) => Err(Error::NotAssociative(i, j, l)),
            None => Ok(()),
        }
    }

    pub fn zn(&self) -> Zn {
        self.zn
    }

    pub fn modulus(&self) -> u64 {
        self.zn.modulus()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> Option<&[u64]> {
        self.unit.as_deref()
    }

    pub fn terms(&self, i: usize, j: usize) -> &[Term] {
        &self.table[i * self.rank + j]
    }

    /// Dense structure constants, mul[i][j] = b_i b_j.
    pub fn dense_table(&self) -> Vec<Vec<Vec<u64>>> {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.basis_product(i, j)).collect())
            .collect()
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.rank]
    }

    pub fn basis(&self, i: usize) -> Vec<u64> {
        let mut v = self.zero();
        v[i] = 1;
        v
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Vec<u64> {
        let mut v = self.zero();
        for &(l, c) in self.terms(i, j) {
            v[l] = self.zn.add(v[l], c);
        }
        v
    }

    pub fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let zn = self.zn;
        let mut out = self.zero();
        let ys: Vec<(usize, u64)> = y.iter().copied().enumerate().filter(|p| p.1 != 0).collect();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for &(j, yj) in &ys {
                let c = zn.mul(xi, yj);
                for &(l, t) in self.terms(i, j) {
                    out[l] = zn.add(out[l], zn.mul(c, t));
                }
            }
        }
        out
    }

    /// b_i * y.
    pub fn mul_left_basis(&self, i: usize, y: &[u64]) -> Vec<u64> {
        let zn = self.zn;
        let mut out = self.zero();
        for (j, &yj) in y.iter().enumerate() {
            if yj == 0 {
                continue;
            }
            for &(l, t) in self.terms(i, j) {
                out[l] = zn.add(out[l], zn.mul(yj, t));
            }
        }
        out
    }

    /// x * b_j.
    pub fn mul_right_basis(&self, x: &[u64], j: usize) -> Vec<u64> {
        let zn = self.zn;
        let mut out = self.zero();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for &(l, t) in self.terms(i, j) {
                out[l] = zn.add(out[l], zn.mul(xi, t));
            }
        }
        out
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        self.zn.add_vec(x, y)
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        self.zn.sub_vec(x, y)
    }

    pub fn full(&self) -> Submodule {
        Submodule::full(self.zn, self.rank)
    }

    pub fn zero_sub(&self) -> Submodule {
        Submodule::zero(self.zn, self.rank)
    }

    pub fn span(&self, gens: impl IntoIterator<Item = Vec<u64>>) -> Submodule {
        Submodule::span(self.zn, self.rank, gens)
    }

    /// Span of all products u v.
    pub fn product(&self, u: &Submodule, v: &Submodule) -> Submodule {
        let mut b = SpanBuilder::new(self.zn, self.rank);
        for x in u.gens() {
            for y in v.gens() {
                b.insert(self.mul(x, y));
            }
        }
        b.finish()
    }

    pub fn product3(&self, u: &Submodule, v: &Submodule, w: &Submodule) -> Submodule {
        self.product(&self.product(u, v), w)
    }

    pub fn product_is_zero(&self, u: &Submodule, v: &Submodule) -> bool {
        u.gens()
            .iter()
            .all(|x| v.gens().iter().all(|y| is_zero_vec(&self.mul(x, y))))
    }

    /// Ideal of the subring T generated by X: X + TX + XT + TXT.
    pub fn ideal_in(&self, t: &Submodule, x: &Submodule) -> Submodule {
        let mut left = SpanBuilder::from(x.clone());
        for g in x.gens() {
            for s in t.gens() {
                left.insert(self.mul(s, g));
            }
        }
        let left = left.finish();
        let mut both = SpanBuilder::from(left.clone());
        for g in left.gens() {
            for s in t.gens() {
                both.insert(self.mul(g, s));
            }
        }
        both.finish()
    }

    /// Two-sided ideal of the whole ring generated by X.
    pub fn ideal(&self, x: &Submodule) -> Submodule {
        let mut left = SpanBuilder::from(x.clone());
        for g in x.gens() {
            for i in 0..self.rank {
                left.insert(self.mul_left_basis(i, g));
            }
        }
        let left = left.finish();
        let mut both = SpanBuilder::from(left.clone());
        for g in left.gens() {
            for j in 0..self.rank {
                both.insert(self.mul_right_basis(g, j));
            }
        }
        both.finish()
    }

    pub fn principal_ideal(&self, a: &[u64]) -> Submodule {
        self.ideal(&self.span([a.to_vec()]))
    }

    /// Left annihilator {x : xU = 0} or right annihilator {x : Ux = 0} in the whole ring.
    pub fn annihilator(&self, u: &Submodule, side: Side) -> Submodule {
        if u.is_zero() {
            return self.full();
        }
        let images: Vec<Vec<u64>> = (0..self.rank)
            .map(|i| {
                let mut img = Vec::with_capacity(self.rank * u.gens().len());
                for g in u.gens() {
                    img.extend(match side {
                        Side::Left => self.mul_left_basis(i, g).into_iter(),
                        Side::Right => self.mul_right_basis(g, i).into_iter(),
                    });
                }
                img
            })
            .collect();
        let ncols = self.rank * u.gens().len();
        kernel(self.zn, &images, ncols)
    }

    /// An element u of T acting as a left identity on every element of M.
    pub fn left_identity(&self, t: &Submodule, m: &Submodule) -> Option<Vec<u64>> {
        self.one_sided_identity(t, m, Side::Left)
    }

    pub fn right_identity(&self, t: &Submodule, m: &Submodule) -> Option<Vec<u64>> {
        self.one_sided_identity(t, m, Side::Right)
    }

    fn one_sided_identity(&self, t: &Submodule, m: &Submodule, side: Side) -> Option<Vec<u64>> {
        if m.is_zero() {
            return Some(self.zero());
        }
        let tg = t.gens();
        if tg.is_empty() {
            return None;
        }
        let mat: Vec<Vec<u64>> = tg
            .iter()
            .map(|s| {
                m.gens()
                    .iter()
                    .flat_map(|x| match side {
                        Side::Left => self.mul(s, x),
                        Side::Right => self.mul(x, s),
                    })
                    .collect()
            })
            .collect();
        let target: Vec<u64> = m.gens().iter().flatten().copied().collect();
        let c = solve_left(self.zn, &mat, &target)?;
        let mut u = self.zero();
        for (ci, s) in c.iter().zip(tg) {
            self.zn.add_assign_scaled(&mut u, *ci, s);
        }
        Some(u)
    }

    /// An element of T that is a two-sided identity for T, if T has one.
    pub fn identity_in(&self, t: &Submodule) -> Option<Vec<u64>> {
        let tg = t.gens();
        if tg.is_empty() {
            return Some(self.zero());
        }
        let mat: Vec<Vec<u64>> = tg
            .iter()
            .map(|s| {
                let mut row: Vec<u64> = tg.iter().flat_map(|x| self.mul(s, x)).collect();
                row.extend(tg.iter().flat_map(|x| self.mul(x, s)));
                row
            })
            .collect();
        let mut target: Vec<u64> = tg.iter().flatten().copied().collect();
        target.extend(tg.iter().flatten().copied());
        let c = solve_left(self.zn, &mat, &target)?;
        let mut u = self.zero();
        for (ci, s) in c.iter().zip(tg) {
            self.zn.add_assign_scaled(&mut u, *ci, s);
        }
        Some(u)
    }

    pub fn has_identity(&self) -> bool {
        self.unit.is_some() || self.identity_in(&self.full()).is_some()
    }

    pub fn element_count(&self) -> u128 {
        (self.modulus() as u128).saturating_pow(self.rank as u32)
    }

    /// Element-wise s-unitality: None when s-unital, else the first r with
    /// r not in rS or not in Sr.
    pub fn s_unital_witness(&self, caps: &Caps) -> Result<Option<Vec<u64>>> {
        caps.check_elements("ring elements", self.element_count())?;
        let elements = self.full().elements();
        Ok(elements.into_par_iter().find_first(|r| {
            let rs = self.span((0..self.rank).map(|i| self.mul_right_basis(r, i)));
            let sr = self.span((0..self.rank).map(|i| self.mul_left_basis(i, r)));
            !rs.contains(r) || !sr.contains(r)
        }))
    }

    pub fn is_s_unital(&self, caps: &Caps) -> Result<bool> {
        Ok(self.s_unital_witness(caps)?.is_none())
    }

    /// Exhaustive primeness over prime-order candidates a; when ideal(a) has
    /// a nonzero right annihilator the pair (a, b) is returned.
    pub fn is_prime(&self, caps: &Caps) -> Result<Verdict> {
        let full = self.full();
        caps.check_elements("primeness candidates", full.candidate_count())?;
        let cands = full.torsion_candidates();
        let hit = cands.par_iter().find_map_first(|a| {
            let ia = self.principal_ideal(a);
            let ann = self.annihilator(&ia, Side::Right);
            ann.first_torsion().map(|b| (a.clone(), b))
        });
        Ok(match hit {
            Some((a, b)) => Verdict::NotPrime { a, b },
            None => Verdict::Prime,
        })
    }

    /// None when semiprime, else a nonzero a with ideal(a)^2 = 0.
    pub fn semiprime_witness(&self, caps: &Caps) -> Result<Option<Vec<u64>>> {
        let full = self.full();
        caps.check_elements("primeness candidates", full.candidate_count())?;
        let cands = full.torsion_candidates();
        Ok(cands.into_par_iter().find_first(|a| {
            let ia = self.principal_ideal(a);
            self.product_is_zero(&ia, &ia)
        }))
    }

    pub fn is_semiprime(&self, caps: &Caps) -> Result<bool> {
        Ok(self.semiprime_witness(caps)?.is_none())
    }

    /// The full ideal lattice, as sums of principal ideals.
    pub fn enumerate_ideals(&self, caps: &Caps) -> Result<Vec<Submodule>> {
        caps.check_elements("ring elements", self.element_count())?;
        let principals = principal_family(&self.full(), |a| self.principal_ideal(a));
        join_closure(self.zero_sub(), principals, caps)
    }

    /// Ring structure on the coordinate subspace spanned by `idx`, which must
    /// be closed under multiplication.
    pub fn restrict(&self, idx: &[usize]) -> Result<FiniteRing> {
        let mut pos = vec![usize::MAX; self.rank];
        for (n, &i) in idx.iter().enumerate() {
            pos[i] = n;
        }
        let mut table = Vec::with_capacity(idx.len() * idx.len());
        for &i in idx {
            for &j in idx {
                let mut terms = Vec::new();
                for &(l, c) in self.terms(i, j) {
                    if pos[l] == usize::MAX {
                        return Err(Error::Dimension(format!(
                            "coordinates not closed: b{i} b{j} hits b{l}"
                        )));
                    }
                    terms.push((pos[l], c));
                }
                table.push(terms);
            }
        }
        let labels = idx.iter().map(|&i| self.labels[i].clone()).collect();
        FiniteRing::from_sparse(self.zn, idx.len(), table, None, Some(labels))
    }

    pub fn zmod(m: u64) -> FiniteRing {
        FiniteRing::new(
            m,
            vec![vec![vec![1]]],
            Some(vec![1]),
            Some(vec!["1".into()]),
        )
        .expect("Z/m")
    }

    /// Additive group (Z/m)^rank with all products zero.
    pub fn zero_product(m: u64, rank: usize) -> Result<FiniteRing> {
        FiniteRing::from_sparse(Zn::new(m), rank, vec![Vec::new(); rank * rank], None, None)
    }

    pub fn matrix_ring(n: usize, base: &FiniteRing) -> Result<FiniteRing> {
        if n == 0 {
            return Err(Error::Dimension("matrix size must be positive".into()));
        }
        let kb = base.rank;
        let k = n * n * kb;
        let idx = |i: usize, j: usize, l: usize| (i * n + j) * kb + l;
        let mut table = vec![Vec::new(); k * k];
        for i in 0..n {
            for j in 0..n {
                for q in 0..n {
                    for l in 0..kb {
                        for l2 in 0..kb {
                            let terms = base
                                .terms(l, l2)
                                .iter()
                                .map(|&(t, c)| (idx(i, q, t), c))
                                .collect();
                            table[idx(i, j, l) * k + idx(j, q, l2)] = terms;
                        }
                    }
                }
            }
        }
        let mut labels = Vec::with_capacity(k);
        for i in 0..n {
            for j in 0..n {
                for l in 0..kb {
                    labels.push(if kb == 1 && base.labels[0] == "1" {
                        format!("e{}{}", i + 1, j + 1)
                    } else {
                        format!("e{}{}*{}", i + 1, j + 1, base.labels[l])
                    });
                }
            }
        }
        let unit = base.unit.as_ref().map(|u| {
            let mut v = vec![0; k];
            for i in 0..n {
                for l in 0..kb {
                    v[idx(i, i, l)] = u[l];
                }
            }
            v
        });
        FiniteRing::from_sparse(base.zn, k, table, unit, Some(labels))
    }

    pub fn direct_sum(parts: &[FiniteRing]) -> Result<FiniteRing> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Dimension("empty direct sum".into()))?;
        if parts.iter().any(|p| p.zn != first.zn) {
            return Err(Error::Dimension(
                "direct sum parts need a common modulus".into(),
            ));
        }
        let k: usize = parts.iter().map(|p| p.rank).sum();
        let mut table = vec![Vec::new(); k * k];
        let mut labels = Vec::with_capacity(k);
        let mut off = 0;
        for (pi, p) in parts.iter().enumerate() {
            for i in 0..p.rank {
                for j in 0..p.rank {
                    table[(off + i) * k + off + j] =
                        p.terms(i, j).iter().map(|&(l, c)| (off + l, c)).collect();
                }
                labels.push(format!("{}#{}", p.labels[i], pi + 1));
            }
            off += p.rank;
        }
        let unit = if parts.iter().all(|p| p.unit.is_some()) {
            Some(
                parts
                    .iter()
                    .flat_map(|p| p.unit.clone().expect("checked"))
                    .collect(),
            )
        } else {
            None
        };
        FiniteRing::from_sparse(first.zn, k, table, unit, Some(labels))
    }
}

/// Distinct ideals generated by single elements of `within`, skipping elements
/// whose leading coefficient is not a divisor of m (unit multiples of others).
pub fn principal_family<F>(within: &Submodule, gen: F) -> Vec<Submodule>
where
    F: Fn(&[u64]) -> Submodule + Sync,
{
    let m = within.zn().modulus();
    let elems: Vec<Vec<u64>> = within
        .elements()
        .into_iter()
        .filter(|v| match v.iter().find(|&&x| x != 0) {
            Some(&lead) => m % lead == 0,
            None => false,
        })
        .collect();
    let ideals: Vec<Submodule> = elems.par_iter().map(|a| gen(a)).collect();
    let mut seen = HashSet::new();
    ideals
        .into_iter()
        .filter(|i| seen.insert(i.clone()))
        .collect()
}

/// All sums of subsets of `generators`, starting from `zero`, sorted.
pub fn join_closure(
    zero: Submodule,
    generators: Vec<Submodule>,
    caps: &Caps,
) -> Result<Vec<Submodule>> {
    let mut set: BTreeSet<Submodule> = BTreeSet::new();
    set.insert(zero);
    for p in &generators {
        let fresh: Vec<Submodule> = set
            .iter()
            .map(|j| j.sum(p))
            .filter(|s| !set.contains(s))
            .collect();
        set.extend(fresh);
        if set.len() > caps.max_ideals {
            return Err(Error::CapExceeded {
                what: "ideal lattice",
                needed: set.len() as u128,
                limit: caps.max_ideals as u128,
            });
        }
    }
    Ok(set.into_iter().collect())
}
