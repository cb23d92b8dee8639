//! Directed graphs, the downward-directedness condition on reachability, and
//! Leavitt path algebras of finite acyclic graphs realized as sums of matrix
//! rings indexed by paths into sinks.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::constructions::Coefficients;
use crate::error::{Caps, Error, Result};
use crate::graded::{Degree, GradeGroup, GradedRing};
use crate::ring::FiniteRing;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    infinite_emitters: BTreeSet<usize>,
}

impl DirectedGraph {
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<Edge>,
        infinite_emitters: BTreeSet<usize>,
    ) -> Result<Self> {
        let n = vertices.len();
        if n == 0 {
            return Err(Error::MalformedData("graph needs a vertex".into()));
        }
        let mut names = BTreeSet::new();
        for v in &vertices {
            if !names.insert(v.as_str()) {
                return Err(Error::MalformedData(format!("duplicate vertex {v}")));
            }
        }
        let mut enames = BTreeSet::new();
        for e in &edges {
            if e.src >= n || e.dst >= n {
                return Err(Error::MalformedData(format!(
                    "edge {} has an endpoint out of range",
                    e.name
                )));
            }
            if !enames.insert(e.name.as_str()) {
                return Err(Error::MalformedData(format!("duplicate edge {}", e.name)));
            }
        }
        if let Some(&v) = infinite_emitters.iter().find(|&&v| v >= n) {
            return Err(Error::MalformedData(format!(
                "infinite emitter {v} out of range"
            )));
        }
        Ok(DirectedGraph {
            vertices,
            edges,
            infinite_emitters,
        })
    }

    /// Vertices v1..vn with edges f1.. between the given index pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let vertices = (1..=n).map(|i| format!("v{i}")).collect();
        let edges = pairs
            .iter()
            .enumerate()
            .map(|(i, &(src, dst))| Edge {
                name: format!("f{}", i + 1),
                src,
                dst,
            })
            .collect();
        DirectedGraph::new(vertices, edges, BTreeSet::new())
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn infinite_emitters(&self) -> &BTreeSet<usize> {
        &self.infinite_emitters
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.src == v)
            .map(|(i, _)| i)
    }

    pub fn is_sink(&self, v: usize) -> bool {
        !self.infinite_emitters.contains(&v) && self.out_edges(v).next().is_none()
    }

    pub fn is_acyclic(&self) -> bool {
        let n = self.vertex_count();
        let mut indeg = vec![0usize; n];
        for e in &self.edges {
            indeg[e.dst] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for e in self.out_edges(v).collect::<Vec<_>>() {
                let d = self.edges[e].dst;
                indeg[d] -= 1;
                if indeg[d] == 0 {
                    stack.push(d);
                }
            }
        }
        seen == n
    }
}

/// Reflexive-transitive closure of the edge relation, one bitset row per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reachability {
    n: usize,
    rows: Vec<Vec<u64>>,
}

impl Reachability {
    pub fn reaches(&self, u: usize, v: usize) -> bool {
        self.rows[u][v / 64] >> (v % 64) & 1 == 1
    }

    pub fn matrix(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|u| (0..self.n).map(|v| self.reaches(u, v)).collect())
            .collect()
    }

    fn common(&self, u: usize, v: usize) -> bool {
        self.rows[u]
            .iter()
            .zip(&self.rows[v])
            .any(|(a, b)| a & b != 0)
    }
}

pub fn reachability(g: &DirectedGraph) -> Reachability {
    let n = g.vertex_count();
    let words = n.div_ceil(64);
    let mut adj = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.src].push(e.dst);
    }
    let rows = (0..n)
        .into_par_iter()
        .map(|s| {
            let mut row = vec![0u64; words];
            let mut stack = vec![s];
            row[s / 64] |= 1 << (s % 64);
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if row[w / 64] >> (w % 64) & 1 == 0 {
                        row[w / 64] |= 1 << (w % 64);
                        stack.push(w);
                    }
                }
            }
            row
        })
        .collect();
    Reachability { n, rows }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mt3 {
    pub holds: bool,
    /// First pair of vertices with no common descendant.
    pub witness: Option<(usize, usize)>,
}

pub fn satisfies_mt3(g: &DirectedGraph) -> Mt3 {
    let r = reachability(g);
    let n = g.vertex_count();
    let witness = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .find(|&(u, v)| !r.common(u, v));
    Mt3 {
        holds: witness.is_none(),
        witness,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpaVerdict {
    pub prime: bool,
    pub ring_prime: bool,
    pub mt3: Mt3,
}

/// L_R(E) is prime iff R is prime and E satisfies the condition.
pub fn lpa_prime_decision(
    g: &DirectedGraph,
    r: Coefficients<'_>,
    caps: &Caps,
) -> Result<LpaVerdict> {
    let ring_prime = match r {
        Coefficients::Prime(p) => p,
        Coefficients::Ring(ring) => {
            if !ring.has_identity() {
                return Err(Error::NotUnital);
            }
            ring.is_prime(caps)?.is_prime()
        }
    };
    let mt3 = satisfies_mt3(g);
    Ok(LpaVerdict {
        prime: ring_prime && mt3.holds,
        ring_prime,
        mt3,
    })
}

/// A vertex (no edges) or a composable edge sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    pub edges: Vec<usize>,
}

impl Path {
    pub fn vertex(v: usize) -> Self {
        Path {
            start: v,
            edges: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn range(&self, g: &DirectedGraph) -> usize {
        self.edges.last().map_or(self.start, |&e| g.edges()[e].dst)
    }

    pub fn concat(&self, other: &Path) -> Path {
        let mut edges = self.edges.clone();
        edges.extend(&other.edges);
        Path {
            start: self.start,
            edges,
        }
    }

    pub fn display(&self, g: &DirectedGraph) -> String {
        if self.edges.is_empty() {
            g.vertices()[self.start].clone()
        } else {
            self.edges
                .iter()
                .map(|&e| g.edges()[e].name.as_str())
                .collect::<Vec<_>>()
                .join("")
        }
    }
}

/// Every path of a finite acyclic graph, by length then lexicographically.
pub fn all_paths(g: &DirectedGraph) -> Vec<Path> {
    let mut out: Vec<Path> = (0..g.vertex_count()).map(Path::vertex).collect();
    let mut frontier = out.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for p in &frontier {
            for e in g.out_edges(p.range(g)) {
                let mut q = p.clone();
                q.edges.push(e);
                next.push(q);
            }
        }
        next.sort();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[derive(Clone, Debug)]
struct Block {
    sink: usize,
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    offset: usize,
}

/// L_R(E) as the direct sum over sinks s of M_{P_s}(R), where P_s is the set
/// of paths ending at s.
#[derive(Clone, Debug)]
pub struct LpaRealization {
    graph: DirectedGraph,
    coeff: FiniteRing,
    graded: GradedRing,
    blocks: Vec<Block>,
    paths: Vec<Path>,
}

pub fn build_lpa_acyclic(g: &DirectedGraph, r: &FiniteRing, caps: &Caps) -> Result<LpaRealization> {
    if !g.infinite_emitters().is_empty() {
        return Err(Error::Unsupported(
            "infinite emitters cannot be realized".into(),
        ));
    }
    if !g.is_acyclic() {
        return Err(Error::NotAcyclic);
    }
    if !r.has_identity() {
        return Err(Error::NotUnital);
    }
    let paths = all_paths(g);
    let kb = r.rank();
    let mut blocks = Vec::new();
    let mut offset = 0;
    for s in (0..g.vertex_count()).filter(|&v| g.is_sink(v)) {
        let ps: Vec<Path> = paths.iter().filter(|p| p.range(g) == s).cloned().collect();
        let index = ps.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let size = ps.len() * ps.len() * kb;
        blocks.push(Block {
            sink: s,
            paths: ps,
            index,
            offset,
        });
        offset += size;
    }
    let needed = u32::try_from(offset)
        .ok()
        .and_then(|k| (r.modulus() as u128).checked_pow(k))
        .unwrap_or(u128::MAX);
    caps.check_elements("path algebra elements", needed)?;
    let parts = blocks
        .iter()
        .map(|b| FiniteRing::matrix_ring(b.paths.len(), r))
        .collect::<Result<Vec<_>>>()?;
    let ring = FiniteRing::direct_sum(&parts)?;
    let mut degrees = Vec::with_capacity(offset);
    for b in &blocks {
        for p in &b.paths {
            for q in &b.paths {
                for _ in 0..kb {
                    degrees.push(Degree::Lattice(vec![p.len() as i64 - q.len() as i64]));
                }
            }
        }
    }
    let graded = GradedRing::new(ring, GradeGroup::Lattice(1), degrees)?;
    let real = LpaRealization {
        graph: g.clone(),
        coeff: r.clone(),
        graded,
        blocks,
        paths,
    };
    real.check_relations()?;
    let flags = real.graded.classify(caps)?;
    if !flags.epsilon_strong || !flags.nearly_epsilon_strong {
        return Err(Error::TheoremViolation(
            "path algebra grading is not epsilon-strong".into(),
        ));
    }
    Ok(real)
}

impl LpaRealization {
    pub fn graded(&self) -> &GradedRing {
        &self.graded
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    pub fn coefficients(&self) -> &FiniteRing {
        &self.coeff
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    /// Sinks with the size of their matrix block.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        self.blocks
            .iter()
            .map(|b| (b.sink, b.paths.len()))
            .collect()
    }

    fn rank(&self) -> usize {
        self.graded.ring().rank()
    }

    /// t * alpha beta^*, zero unless alpha and beta end at the same vertex.
    pub fn monomial_scaled(&self, alpha: &Path, beta: &Path, t: &[u64]) -> Vec<u64> {
        let g = &self.graph;
        let kb = self.coeff.rank();
        let mut out = vec![0; self.rank()];
        let v = alpha.range(g);
        if beta.range(g) != v {
            return out;
        }
        for b in &self.blocks {
            let n = b.paths.len();
            for gamma in b.paths.iter().filter(|p| p.start == v) {
                let p = b.index[&alpha.concat(gamma)];
                let q = b.index[&beta.concat(gamma)];
                let at = b.offset + (p * n + q) * kb;
                out[at..at + kb].copy_from_slice(t);
            }
        }
        out
    }

    pub fn monomial(&self, alpha: &Path, beta: &Path) -> Vec<u64> {
        let one = self.coeff.unit().expect("unital coefficients").to_vec();
        self.monomial_scaled(alpha, beta, &one)
    }

    pub fn vertex(&self, v: usize) -> Vec<u64> {
        self.monomial(&Path::vertex(v), &Path::vertex(v))
    }

    pub fn edge(&self, f: usize) -> Vec<u64> {
        let e = &self.graph.edges()[f];
        self.monomial(
            &Path {
                start: e.src,
                edges: vec![f],
            },
            &Path::vertex(e.dst),
        )
    }

    pub fn ghost(&self, f: usize) -> Vec<u64> {
        let e = &self.graph.edges()[f];
        self.monomial(
            &Path::vertex(e.dst),
            &Path {
                start: e.src,
                edges: vec![f],
            },
        )
    }

    /// alpha^* as an element.
    pub fn path_ghost(&self, alpha: &Path) -> Vec<u64> {
        self.monomial(&Path::vertex(alpha.range(&self.graph)), alpha)
    }

    pub fn path_element(&self, alpha: &Path) -> Vec<u64> {
        self.monomial(alpha, &Path::vertex(alpha.range(&self.graph)))
    }

    /// The defining relations on all generators.
    pub fn check_relations(&self) -> Result<()> {
        let s = self.graded.ring();
        let g = &self.graph;
        let n = g.vertex_count();
        let fail =
            |axiom: &'static str, detail: String| Err(Error::AxiomViolation { axiom, detail });
        let zero = s.zero();
        for v in 0..n {
            for w in 0..n {
                let want = if v == w { self.vertex(v) } else { zero.clone() };
                if s.mul(&self.vertex(v), &self.vertex(w)) != want {
                    return fail(
                        "vertex idempotents",
                        format!("{} {}", g.vertices()[v], g.vertices()[w]),
                    );
                }
            }
        }
        for (i, e) in g.edges().iter().enumerate() {
            let f = self.edge(i);
            let fs = self.ghost(i);
            if s.mul(&self.vertex(e.src), &f) != f || s.mul(&f, &self.vertex(e.dst)) != f {
                return fail("edge endpoints", e.name.clone());
            }
            if s.mul(&self.vertex(e.dst), &fs) != fs || s.mul(&fs, &self.vertex(e.src)) != fs {
                return fail("ghost endpoints", e.name.clone());
            }
            for (j, e2) in g.edges().iter().enumerate() {
                let want = if i == j {
                    self.vertex(e.dst)
                } else {
                    zero.clone()
                };
                if s.mul(&fs, &self.edge(j)) != want {
                    return fail("ghost orthogonality", format!("{} {}", e.name, e2.name));
                }
            }
        }
        for v in 0..n {
            let out: Vec<usize> = g.out_edges(v).collect();
            if out.is_empty() {
                continue;
            }
            let mut sum = zero.clone();
            for f in out {
                sum = s.add(&sum, &s.mul(&self.edge(f), &self.ghost(f)));
            }
            if sum != self.vertex(v) {
                return fail("vertex sum", g.vertices()[v].clone());
            }
        }
        Ok(())
    }

    /// t with x = t v, when x lies in R v.
    fn vertex_multiple(&self, x: &[u64], v: usize) -> Option<Vec<u64>> {
        let kb = self.coeff.rank();
        let b = self
            .blocks
            .iter()
            .find(|b| b.index.keys().any(|p| p.start == v))?;
        let gamma = b.paths.iter().find(|p| p.start == v)?;
        let p = b.index[gamma];
        let at = b.offset + (p * b.paths.len() + p) * kb;
        let t = x[at..at + kb].to_vec();
        (self.monomial_scaled(&Path::vertex(v), &Path::vertex(v), &t) == x).then_some(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub alpha: Path,
    pub beta: Path,
    pub vertex: usize,
    pub t: Vec<u64>,
}

/// Paths alpha, beta, a vertex v and nonzero t with alpha^* a beta = t v,
/// found by increasing |alpha| + |beta|.
pub fn tomforde_reduce(real: &LpaRealization, a: &[u64]) -> Result<Reduction> {
    if a.iter().all(|&c| c == 0) {
        return Err(Error::ZeroInput);
    }
    if real.graded.homogeneous_degree(a) != Some(Degree::Lattice(vec![0])) {
        return Err(Error::MalformedData(
            "element is not homogeneous of degree 0".into(),
        ));
    }
    let s = real.graded.ring();
    let g = &real.graph;
    let mut pairs: Vec<(&Path, &Path)> = real
        .paths
        .iter()
        .flat_map(|p| real.paths.iter().map(move |q| (p, q)))
        .collect();
    pairs.sort_by_key(|(p, q)| p.len() + q.len());
    for (alpha, beta) in pairs {
        let x = s.mul(&s.mul(&real.path_ghost(alpha), a), &real.path_element(beta));
        if x.iter().all(|&c| c == 0) {
            continue;
        }
        for v in [alpha.range(g), beta.range(g)] {
            if let Some(t) = real.vertex_multiple(&x, v) {
                if t.iter().any(|&c| c != 0) {
                    return Ok(Reduction {
                        alpha: alpha.clone(),
                        beta: beta.clone(),
                        vertex: v,
                        t,
                    });
                }
            }
        }
    }
    Err(Error::InternalExhaustion(
        "no path pair reduces the element to a vertex multiple".into(),
    ))
}

/// For every pair of vertices, S v S w S = 0 exactly when v and w have no
/// common descendant.
pub fn mt3_ideal_criterion_check(real: &LpaRealization) -> bool {
    let s = real.graded.ring();
    let n = real.graph.vertex_count();
    let reach = reachability(&real.graph);
    let ideals: Vec<_> = (0..n).map(|v| s.principal_ideal(&real.vertex(v))).collect();
    (0..n).all(|v| (0..n).all(|w| s.product_is_zero(&ideals[v], &ideals[w]) == !reach.common(v, w)))
}

/// Graphs on vertices v1..vn (n up to `max_vertices`) whose edges are distinct
/// pairs i -> j with i < j, at most `max_edges` of them, in a fixed order.
pub fn acyclic_graphs(max_vertices: usize, max_edges: usize) -> Vec<DirectedGraph> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let total = 1u64 << pairs.len();
        let mut masks: Vec<u64> = (0..total)
            .filter(|m| m.count_ones() as usize <= max_edges)
            .collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        for m in masks {
            let chosen: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            out.push(DirectedGraph::from_pairs(n, &chosen).expect("valid pairs"));
        }
    }
    out
}
