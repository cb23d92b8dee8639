//! Finite groups as multiplication tables, subgroup machinery, and a closed
//! catalog of symbolic (possibly infinite) groups.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Caps, Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    labels: Vec<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {}, {:?})", self.order(), self.labels)
    }
}

/// A subgroup, stored as its sorted element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Parse("empty group table".into()));
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(Error::Parse("group table must be n x n over 0..n".into()));
            }
            let mut seen = vec![false; n];
            for &x in row {
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Parse("group table rows must be permutations".into()));
                }
            }
        }
        for c in 0..n {
            let mut seen = vec![false; n];
            for row in &table {
                if std::mem::replace(&mut seen[row[c]], true) {
                    return Err(Error::Parse(
                        "group table columns must be permutations".into(),
                    ));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|i| table[e][i] == i && table[i][e] == i))
            .ok_or_else(|| Error::Parse("group table has no identity".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Parse(format!(
                            "group table not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let inverses = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| table[a][b] == identity)
                    .expect("latin square")
            })
            .collect();
        let labels = match labels {
            Some(l) if l.len() == n => l,
            Some(_) => return Err(Error::Parse("label count differs from group order".into())),
            None => (0..n).map(|i| format!("g{i}")).collect(),
        };
        Ok(FiniteGroup {
            table,
            identity,
            inverses,
            labels,
        })
    }

    pub fn trivial() -> Self {
        FiniteGroup::from_table(vec![vec![0]], Some(vec!["e".into()])).expect("valid")
    }

    /// Z/n with element i standing for i.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        FiniteGroup::from_table(table, Some((0..n).map(|i| i.to_string()).collect()))
            .expect("valid")
    }

    /// Symmetric group on three letters; element order e, (12), (13), (23), (123), (132).
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 0, 2],
            [2, 1, 0],
            [0, 2, 1],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let labels = ["e", "(1 2)", "(1 3)", "(2 3)", "(1 2 3)", "(1 3 2)"];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed");
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    // (a*b)(x) = a(b(x))
                    .map(|b| idx([a[b[0]], a[b[1]], a[b[2]]]))
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(table, Some(labels.iter().map(|s| s.to_string()).collect()))
            .expect("valid")
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let table = (0..na * nb)
            .map(|x| {
                (0..na * nb)
                    .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                    .collect()
            })
            .collect();
        let labels = (0..na * nb)
            .map(|x| format!("({},{})", a.labels[x / nb], b.labels[x % nb]))
            .collect();
        FiniteGroup::from_table(table, Some(labels)).expect("product of groups")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.order()).collect(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            elements: vec![self.identity],
        }
    }

    /// Subgroup generated by the given elements.
    pub fn closure(&self, gens: &[usize]) -> Subgroup {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut queue: VecDeque<usize> = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Subgroup {
            elements: (0..self.order()).filter(|&i| seen[i]).collect(),
        }
    }

    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut el: Vec<usize> = elements.to_vec();
        el.sort_unstable();
        el.dedup();
        if el.iter().any(|&x| x >= self.order()) {
            return Err(Error::NotASubgroup("element index out of range".into()));
        }
        let s = Subgroup { elements: el };
        if !s.contains(self.identity) {
            return Err(Error::NotASubgroup("missing identity".into()));
        }
        for &a in s.elements() {
            if !s.contains(self.inv(a)) {
                return Err(Error::NotASubgroup(format!(
                    "not closed under inverse at {a}"
                )));
            }
            for &b in s.elements() {
                if !s.contains(self.mul(a, b)) {
                    return Err(Error::NotASubgroup(format!("not closed at ({a},{b})")));
                }
            }
        }
        Ok(s)
    }

    /// Every subgroup once, sorted by order then elements.
    pub fn enumerate_subgroups(&self, caps: &Caps) -> Result<Vec<Subgroup>> {
        if self.order() > caps.max_group {
            return Err(Error::CapExceeded {
                what: "group order",
                needed: self.order() as u128,
                limit: caps.max_group as u128,
            });
        }
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let start = self.trivial_subgroup();
        found.insert(start.elements.clone());
        let mut queue = VecDeque::from([start]);
        while let Some(h) = queue.pop_front() {
            for g in 0..self.order() {
                if h.contains(g) {
                    continue;
                }
                let mut gens = h.elements.clone();
                gens.push(g);
                let k = self.closure(&gens);
                if found.insert(k.elements.clone()) {
                    queue.push_back(k);
                }
            }
        }
        let mut out: Vec<Subgroup> = found
            .into_iter()
            .map(|elements| Subgroup { elements })
            .collect();
        out.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
        Ok(out)
    }

    pub fn conjugate(&self, h: usize, n: usize) -> usize {
        self.mul(self.mul(h, n), self.inv(h))
    }

    pub fn is_normal(&self, n: &Subgroup, h: &Subgroup) -> Result<bool> {
        if !n.is_subset(h) {
            return Err(Error::NotASubgroup("N is not contained in H".into()));
        }
        Ok(h.elements
            .iter()
            .all(|&x| n.elements.iter().all(|&y| n.contains(self.conjugate(x, y)))))
    }

    /// Quotient group G/N with cosets ordered by least representative, plus
    /// the projection g -> coset index.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_normal(n, &self.whole())? {
            return Err(Error::NotNormal);
        }
        let mut proj = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for g in 0..self.order() {
            if proj[g] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(g);
            for &x in n.elements() {
                proj[self.mul(g, x)] = idx;
            }
        }
        let table = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| proj[self.mul(a, b)]).collect())
            .collect();
        let labels = reps
            .iter()
            .map(|&r| format!("{}N", self.labels[r]))
            .collect();
        Ok((FiniteGroup::from_table(table, Some(labels))?, proj))
    }

    pub fn centralizer(&self, g: usize) -> Subgroup {
        Subgroup {
            elements: (0..self.order())
                .filter(|&x| self.mul(x, g) == self.mul(g, x))
                .collect(),
        }
    }

    /// Elements with finitely many conjugates; all of G for a finite group.
    pub fn fc_center(&self) -> Subgroup {
        self.whole()
    }

    /// Smallest normal subgroup of H containing X.
    pub fn normal_closure(&self, h: &Subgroup, x: &[usize]) -> Result<Subgroup> {
        if x.iter().any(|&g| !h.contains(g)) {
            return Err(Error::NotASubgroup("X is not contained in H".into()));
        }
        let mut gens: BTreeSet<usize> = x.iter().copied().collect();
        loop {
            let k = self.closure(&gens.iter().copied().collect::<Vec<_>>());
            let mut grew = false;
            for &a in h.elements() {
                for &b in k.elements() {
                    let c = self.conjugate(a, b);
                    if !k.contains(c) {
                        grew |= gens.insert(c);
                    }
                }
            }
            if !grew {
                return Ok(k);
            }
        }
    }

    /// The subgroup as a group in its own right; element i of the result is
    /// `h.elements()[i]`.
    pub fn subgroup_table(&self, h: &Subgroup) -> FiniteGroup {
        let pos = |g: usize| h.elements.binary_search(&g).expect("closed subgroup");
        let table = h
            .elements
            .iter()
            .map(|&a| h.elements.iter().map(|&b| pos(self.mul(a, b))).collect())
            .collect();
        let labels = h.elements.iter().map(|&g| self.labels[g].clone()).collect();
        FiniteGroup::from_table(table, Some(labels)).expect("subgroup")
    }

    /// A bijection phi with phi(ab) = phi(a)phi(b), if one exists.
    pub fn find_isomorphism(&self, other: &FiniteGroup) -> Option<Vec<usize>> {
        if self.order() != other.order() {
            return None;
        }
        let mut gens: Vec<usize> = Vec::new();
        let mut span = self.trivial_subgroup();
        for g in 0..self.order() {
            if !span.contains(g) {
                gens.push(g);
                span = self.closure(&gens);
            }
        }
        let mut images = vec![0usize; gens.len()];
        self.iso_search(other, &gens, &mut images, 0)
    }

    fn iso_search(
        &self,
        other: &FiniteGroup,
        gens: &[usize],
        images: &mut Vec<usize>,
        depth: usize,
    ) -> Option<Vec<usize>> {
        if depth == gens.len() {
            return self.extend_hom(other, gens, images);
        }
        let ord = self.element_order(gens[depth]);
        for cand in 0..other.order() {
            if other.element_order(cand) != ord {
                continue;
            }
            images[depth] = cand;
            if let Some(phi) = self.iso_search(other, gens, images, depth + 1) {
                return Some(phi);
            }
        }
        None
    }

    fn extend_hom(
        &self,
        other: &FiniteGroup,
        gens: &[usize],
        images: &[usize],
    ) -> Option<Vec<usize>> {
        let n = self.order();
        let mut phi = vec![usize::MAX; n];
        phi[self.identity] = other.identity;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let py = other.mul(phi[x], img);
                if phi[y] == usize::MAX {
                    phi[y] = py;
                    queue.push_back(y);
                } else if phi[y] != py {
                    return None;
                }
            }
        }
        let distinct: BTreeSet<usize> = phi.iter().copied().collect();
        if distinct.len() != n {
            return None;
        }
        let hom = (0..n).all(|a| (0..n).all(|b| phi[self.mul(a, b)] == other.mul(phi[a], phi[b])));
        hom.then_some(phi)
    }
}

/// Closed catalog of groups used by the symbolic criteria.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolicGroup {
    Trivial,
    Cyclic(usize),
    FiniteTable(FiniteGroup),
    IntegerLattice(usize),
    Free(usize),
    DirectProduct(Vec<SymbolicGroup>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupPredicates {
    pub is_torsion_free: bool,
    pub is_ordered: bool,
    pub has_nontrivial_finite_normal_subgroup: bool,
    pub is_finite: bool,
}

impl SymbolicGroup {
    /// Parses `Z^2 x C3 x F2`-style expressions.
    pub fn parse(expr: &str) -> Result<Self> {
        let normalized = expr.replace('×', " x ");
        let tokens: Vec<&str> = normalized.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(Error::Parse("empty group expression".into()));
        }
        let mut atoms = Vec::new();
        for (i, tok) in tokens.iter().enumerate() {
            if i % 2 == 1 {
                if *tok != "x" {
                    return Err(Error::Parse(format!("expected 'x', found '{tok}'")));
                }
                continue;
            }
            atoms.push(Self::parse_atom(tok)?);
        }
        if tokens.len() % 2 == 0 {
            return Err(Error::Parse("dangling 'x' in group expression".into()));
        }
        Ok(if atoms.len() == 1 {
            atoms.pop().expect("one atom")
        } else {
            SymbolicGroup::DirectProduct(atoms)
        })
    }

    fn parse_atom(tok: &str) -> Result<Self> {
        let num = |s: &str| -> Result<usize> {
            s.parse::<usize>()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::Parse(format!("bad number in atom '{tok}'")))
        };
        if tok == "1" {
            return Ok(SymbolicGroup::Trivial);
        }
        if let Some(rest) = tok.strip_prefix('Z') {
            if rest.is_empty() {
                return Ok(SymbolicGroup::IntegerLattice(1));
            }
            let r = rest
                .strip_prefix('^')
                .ok_or_else(|| Error::Parse(format!("bad atom '{tok}'")))?;
            return Ok(SymbolicGroup::IntegerLattice(num(r)?));
        }
        if let Some(rest) = tok.strip_prefix('C') {
            return Ok(SymbolicGroup::Cyclic(num(rest)?));
        }
        if let Some(rest) = tok.strip_prefix('F') {
            return Ok(SymbolicGroup::Free(num(rest)?));
        }
        Err(Error::Parse(format!("unknown group atom '{tok}'")))
    }

    fn validate(&self) -> Result<()> {
        match self {
            SymbolicGroup::Cyclic(0)
            | SymbolicGroup::IntegerLattice(0)
            | SymbolicGroup::Free(0) => {
                Err(Error::Unknown("rank or order must be positive".into()))
            }
            SymbolicGroup::DirectProduct(ch) if ch.len() < 2 => Err(Error::Unknown(
                "direct product needs at least two factors".into(),
            )),
            SymbolicGroup::DirectProduct(ch) => ch.iter().try_for_each(|c| c.validate()),
            _ => Ok(()),
        }
    }

    pub fn predicates(&self) -> Result<GroupPredicates> {
        self.validate()?;
        Ok(match self {
            SymbolicGroup::Trivial | SymbolicGroup::Cyclic(1) => GroupPredicates {
                is_torsion_free: true,
                is_ordered: true,
                has_nontrivial_finite_normal_subgroup: false,
                is_finite: true,
            },
            SymbolicGroup::FiniteTable(g) if g.order() == 1 => {
                SymbolicGroup::Trivial.predicates()?
            }
            SymbolicGroup::Cyclic(_) | SymbolicGroup::FiniteTable(_) => GroupPredicates {
                is_torsion_free: false,
                is_ordered: false,
                has_nontrivial_finite_normal_subgroup: true,
                is_finite: true,
            },
            SymbolicGroup::IntegerLattice(_) | SymbolicGroup::Free(_) => GroupPredicates {
                is_torsion_free: true,
                is_ordered: true,
                has_nontrivial_finite_normal_subgroup: false,
                is_finite: false,
            },
            SymbolicGroup::DirectProduct(ch) => {
                let ps = ch
                    .iter()
                    .map(|c| c.predicates())
                    .collect::<Result<Vec<_>>>()?;
                GroupPredicates {
                    is_torsion_free: ps.iter().all(|p| p.is_torsion_free),
                    is_ordered: ps.iter().all(|p| p.is_ordered),
                    has_nontrivial_finite_normal_subgroup: ps
                        .iter()
                        .any(|p| p.has_nontrivial_finite_normal_subgroup),
                    is_finite: ps.iter().all(|p| p.is_finite),
                }
            }
        })
    }

    /// Multiplication table when the group is finite.
    pub fn to_finite(&self) -> Option<FiniteGroup> {
        match self {
            SymbolicGroup::Trivial => Some(FiniteGroup::trivial()),
            SymbolicGroup::Cyclic(n) => Some(FiniteGroup::cyclic(*n)),
            SymbolicGroup::FiniteTable(g) => Some(g.clone()),
            SymbolicGroup::IntegerLattice(_) | SymbolicGroup::Free(_) => None,
            SymbolicGroup::DirectProduct(ch) => {
                let mut it = ch.iter();
                let mut acc = it.next()?.to_finite()?;
                for c in it {
                    acc = FiniteGroup::direct_product(&acc, &c.to_finite()?);
                }
                Some(acc)
            }
        }
    }

    /// Rank r when the group is Z^r (possibly written as a product of lattices).
    pub fn lattice_rank(&self) -> Option<usize> {
        match self {
            SymbolicGroup::IntegerLattice(r) => Some(*r),
            SymbolicGroup::DirectProduct(ch) => ch.iter().map(|c| c.lattice_rank()).sum(),
            _ => None,
        }
    }
}

impl fmt::Display for SymbolicGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicGroup::Trivial => write!(f, "1"),
            SymbolicGroup::Cyclic(n) => write!(f, "C{n}"),
            SymbolicGroup::FiniteTable(g) => write!(f, "<table of order {}>", g.order()),
            SymbolicGroup::IntegerLattice(1) => write!(f, "Z"),
            SymbolicGroup::IntegerLattice(r) => write!(f, "Z^{r}"),
            SymbolicGroup::Free(k) => write!(f, "F{k}"),
            SymbolicGroup::DirectProduct(ch) => {
                let parts: Vec<String> = ch.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", parts.join(" x "))
            }
        }
    }
}
