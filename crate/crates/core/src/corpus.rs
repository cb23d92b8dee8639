//! Seeded generation of graded-ring test cases and their harness evaluation.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::constructions::{
    build_direct_sum, MatrixGrading, PartialActionData, PartialDomain, SkewAction,
};
use crate::error::{Caps, Error, Result};
use crate::graded::{Degree, GradeGroup, GradedRing, NormalSpec};
use crate::groups::FiniteGroup;
use crate::json::{
    construction_to_json, graded_from_json, graded_to_json, graph_to_json, ring_to_json,
    Construction,
};
use crate::lpa::{acyclic_graphs, build_lpa_acyclic, DirectedGraph};
use crate::primality::{decide_prime, main_theorem_harness, Strategy};
use crate::ring::FiniteRing;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub name: String,
    pub family: String,
    /// How the case was produced (construction, graph, or parent case).
    pub origin: Value,
    pub graded: GradedRing,
}

impl Case {
    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "family": self.family,
            "origin": self.origin,
            "graded": graded_to_json(&self.graded),
        })
    }

    pub fn from_json(v: &Value, caps: &Caps) -> Result<Case> {
        let text = |k: &str| {
            v.get(k)
                .and_then(Value::as_str)
                .map(str::to_string)
                .ok_or_else(|| Error::Parse(format!("case field '{k}' missing")))
        };
        let graded = v
            .get("graded")
            .ok_or_else(|| Error::Parse("case field 'graded' missing".into()))?;
        Ok(Case {
            name: text("name")?,
            family: text("family")?,
            origin: v.get("origin").cloned().unwrap_or(Value::Null),
            graded: graded_from_json(graded, caps)?,
        })
    }
}

/// Attempted case that could not be built within the caps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skipped {
    pub name: String,
    pub family: String,
    pub reason: String,
}

const FAMILIES: [&str; 9] = [
    "group_ring",
    "skew",
    "partial_skew",
    "partial_skew_lattice",
    "matrix",
    "lpa",
    "direct_sum",
    "quotient",
    "degenerate",
];

fn small_groups() -> Vec<FiniteGroup> {
    let c2 = FiniteGroup::cyclic(2);
    vec![
        FiniteGroup::trivial(),
        c2.clone(),
        FiniteGroup::cyclic(3),
        FiniteGroup::cyclic(4),
        FiniteGroup::direct_product(&c2, &c2),
        FiniteGroup::symmetric3(),
    ]
}

fn coefficient_rings() -> Vec<FiniteRing> {
    let f2 = FiniteRing::zmod(2);
    vec![
        f2.clone(),
        FiniteRing::zmod(3),
        FiniteRing::zmod(4),
        FiniteRing::direct_sum(&[f2.clone(), f2]).expect("F2 + F2"),
    ]
}

fn elements(r: &FiniteRing, rank: usize) -> u128 {
    (r.modulus() as u128).saturating_pow(rank as u32)
}

/// Left cosets xK of a subgroup, with g acting by left multiplication.
fn coset_action(g: &FiniteGroup, k_elems: &[usize]) -> Vec<Vec<usize>> {
    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut coset_of = vec![0; g.order()];
    for x in 0..g.order() {
        let mut c: Vec<usize> = k_elems.iter().map(|&k| g.mul(x, k)).collect();
        c.sort_unstable();
        let n = index.len();
        coset_of[x] = *index.entry(c).or_insert(n);
    }
    let mut reps = vec![0; index.len()];
    for x in (0..g.order()).rev() {
        reps[coset_of[x]] = x;
    }
    (0..g.order())
        .map(|a| reps.iter().map(|&x| coset_of[g.mul(a, x)]).collect())
        .collect()
}

fn unit_vec(len: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; len];
    v[i] = 1;
    v
}

/// Diagonal algebra (Z/m)^n.
fn diagonal(m: u64, n: usize) -> FiniteRing {
    FiniteRing::direct_sum(&vec![FiniteRing::zmod(m); n]).expect("diagonal algebra")
}

/// Restriction of a permutation action on points to the subset `ys`:
/// D_g spans e_y for y in Y with g^-1 y in Y.
fn restricted_action(
    group: GradeGroup,
    elems: &[Degree],
    act: impl Fn(&Degree, i64) -> i64,
    ys: &[i64],
) -> PartialActionData {
    let n = ys.len();
    let pos = |p: i64| ys.iter().position(|&y| y == p);
    let mut domains = BTreeMap::new();
    for g in elems {
        let gi = group.inv(g);
        let basis: Vec<Vec<u64>> = ys
            .iter()
            .filter(|&&y| pos(act(&gi, y)).is_some())
            .map(|&y| unit_vec(n, pos(y).expect("in Y")))
            .collect();
        if basis.is_empty() {
            continue;
        }
        let map = ys
            .iter()
            .filter(|&&y| pos(act(g, y)).is_some())
            .map(|&y| unit_vec(n, pos(act(g, y)).expect("in Y")))
            .collect();
        domains.insert(g.clone(), PartialDomain { basis, map });
    }
    PartialActionData { group, domains }
}

struct Generator {
    rng: ChaCha8Rng,
    caps: Caps,
}

impl Generator {
    fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        xs.choose(&mut self.rng).expect("nonempty choice")
    }

    fn modulus(&mut self) -> u64 {
        *self.pick(&[2, 2, 3, 4])
    }

    fn construction(&mut self, c: Construction) -> Result<(Value, GradedRing)> {
        let s = c.build(&self.caps)?;
        Ok((construction_to_json(&c), s))
    }

    fn group_ring(&mut self) -> Result<(Value, GradedRing)> {
        loop {
            let g = self.pick(&small_groups()).clone();
            let r = self.pick(&coefficient_rings()).clone();
            if r.rank() * g.order() <= 8 && elements(&r, r.rank() * g.order()) <= 1 << 12 {
                return self.construction(Construction::GroupRing { ring: r, group: g });
            }
        }
    }

    fn permutation_setup(&mut self, max_rank: usize) -> (FiniteGroup, Vec<Vec<usize>>, u64) {
        loop {
            let g = self.pick(&small_groups()).clone();
            let subs = g.enumerate_subgroups(&self.caps).expect("small group");
            let k = self.pick(&subs).clone();
            let act = coset_action(&g, k.elements());
            let m = self.modulus();
            let points = act[0].len();
            if points * g.order() <= max_rank
                && (m as u128).pow((points * g.order()) as u32) <= 1 << 14
            {
                return (g, act, m);
            }
        }
    }

    fn skew(&mut self) -> Result<(Value, GradedRing)> {
        let (g, act, m) = self.permutation_setup(9);
        let n = act[0].len();
        let ring = diagonal(m, n);
        let maps = act
            .iter()
            .map(|perm| perm.iter().map(|&p| unit_vec(n, p)).collect())
            .collect();
        self.construction(Construction::Skew {
            ring,
            group: g,
            action: SkewAction { maps },
        })
    }

    fn partial_skew(&mut self) -> Result<(Value, GradedRing)> {
        let (g, act, m) = self.permutation_setup(12);
        let points = act[0].len();
        let mask = self.rng.gen_range(1..(1u32 << points));
        let ys: Vec<i64> = (0..points as i64).filter(|&p| mask >> p & 1 == 1).collect();
        let elems: Vec<Degree> = (0..g.order()).map(Degree::Finite).collect();
        let group = GradeGroup::Finite(g);
        let data = restricted_action(
            group,
            &elems,
            |d, p| match d {
                Degree::Finite(x) => act[*x][p as usize] as i64,
                Degree::Lattice(_) => unreachable!("finite group"),
            },
            &ys,
        );
        self.construction(Construction::PartialSkew {
            ring: diagonal(m, ys.len()),
            data,
        })
    }

    fn partial_skew_lattice(&mut self) -> Result<(Value, GradedRing)> {
        let m = self.modulus();
        let rank = *self.pick(&[1usize, 1, 2]);
        let pts: Vec<Vec<i64>> = if rank == 1 {
            (0..4).map(|i| vec![i]).collect()
        } else {
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        };
        let mut chosen: Vec<Vec<i64>> = Vec::new();
        while chosen.is_empty() {
            chosen = pts
                .iter()
                .filter(|_| self.rng.gen_bool(0.6))
                .cloned()
                .collect();
            chosen.truncate(3);
        }
        let code = |v: &[i64]| v.iter().fold(0i64, |acc, &x| acc * 64 + x + 16);
        let ys: Vec<i64> = chosen.iter().map(|v| code(v)).collect();
        let mut elems: Vec<Degree> = Vec::new();
        for a in &chosen {
            for b in &chosen {
                let d = Degree::Lattice(a.iter().zip(b).map(|(x, y)| x - y).collect());
                if !elems.contains(&d) {
                    elems.push(d);
                }
            }
        }
        let data = restricted_action(
            GradeGroup::Lattice(rank),
            &elems,
            |d, p| match d {
                Degree::Lattice(t) => p + code(t) - code(&vec![0; t.len()]),
                Degree::Finite(_) => unreachable!("lattice group"),
            },
            &ys,
        );
        self.construction(Construction::PartialSkew {
            ring: diagonal(m, ys.len()),
            data,
        })
    }

    fn matrix(&mut self) -> Result<(Value, GradedRing)> {
        loop {
            let r = self.pick(&coefficient_rings()).clone();
            let n = *self.pick(&[1usize, 2, 2, 3]);
            let mode = *self.pick(&[MatrixGrading::Integers, MatrixGrading::Cyclic]);
            let rank = n * n * r.rank();
            if rank <= 9 && elements(&r, rank) <= 1 << 18 {
                return self.construction(Construction::Matrix { ring: r, n, mode });
            }
        }
    }

    fn lpa(&mut self) -> Result<(Value, GradedRing)> {
        let graphs = acyclic_graphs(4, 4);
        loop {
            let g: DirectedGraph = self.pick(&graphs).clone();
            let r = FiniteRing::zmod(*self.pick(&[2, 2, 3, 4]));
            let probe = build_lpa_acyclic(
                &g,
                &r,
                &Caps {
                    max_elements: 1 << 12,
                    ..self.caps
                },
            );
            match probe {
                Ok(real) => {
                    let origin =
                        json!({"graph": graph_to_json(&g), "coefficients": ring_to_json(&r)});
                    return Ok((origin, real.graded().clone()));
                }
                Err(Error::CapExceeded { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
    }

    fn direct_sum(&mut self) -> Result<(Value, GradedRing)> {
        let g = self
            .pick(&[FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)])
            .clone();
        let m = *self.pick(&[2u64, 3]);
        let base = FiniteRing::zmod(m);
        let group_ring = Construction::GroupRing {
            ring: base.clone(),
            group: g.clone(),
        };
        let trivial = GradedRing::new(
            base.clone(),
            GradeGroup::Finite(g.clone()),
            vec![Degree::Finite(g.identity())],
        )?;
        let second = if self.rng.gen_bool(0.5) {
            let act = coset_action(&g, &[g.identity()]);
            let elems: Vec<Degree> = (0..g.order()).map(Degree::Finite).collect();
            let data = restricted_action(
                GradeGroup::Finite(g.clone()),
                &elems,
                |d, p| match d {
                    Degree::Finite(x) => act[*x][p as usize] as i64,
                    Degree::Lattice(_) => unreachable!("finite group"),
                },
                &[0, 1],
            );
            Construction::PartialSkew {
                ring: diagonal(m, 2),
                data,
            }
            .build(&self.caps)?
        } else {
            trivial
        };
        let s = build_direct_sum(&[group_ring.build(&self.caps)?, second])?;
        Ok((json!({"direct_sum": construction_to_json(&group_ring)}), s))
    }

    fn quotient(&mut self) -> Result<(Value, GradedRing)> {
        let (origin, parent) = match self.rng.gen_range(0..3) {
            0 => self.matrix_integers()?,
            1 => self.lpa()?,
            _ => self.partial_skew_lattice()?,
        };
        let GradeGroup::Lattice(r) = parent.group() else {
            unreachable!("lattice parent")
        };
        let n = *self.pick(&[2i64, 3]);
        let gens: Vec<Vec<i64>> = (0..*r)
            .map(|i| (0..*r).map(|j| if i == j { n } else { 0 }).collect())
            .collect();
        if gens.len() == 2 && n == 3 {
            return self.quotient();
        }
        let s = parent.quotient_grading(NormalSpec::Lattice(&gens))?;
        Ok((json!({"quotient_of": origin, "modulus": n}), s))
    }

    fn matrix_integers(&mut self) -> Result<(Value, GradedRing)> {
        let r = FiniteRing::zmod(self.modulus());
        let n = *self.pick(&[2usize, 3]);
        self.construction(Construction::Matrix {
            ring: r,
            n,
            mode: MatrixGrading::Integers,
        })
    }

    /// Group ring over a ring with zero multiplication.
    fn degenerate(&mut self) -> Result<(Value, GradedRing)> {
        let g = self
            .pick(&[FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)])
            .clone();
        let r = FiniteRing::zero_product(2, 1)?;
        self.construction(Construction::GroupRing { ring: r, group: g })
    }

    fn family(&mut self, name: &str) -> Result<(Value, GradedRing)> {
        match name {
            "group_ring" => self.group_ring(),
            "skew" => self.skew(),
            "partial_skew" => self.partial_skew(),
            "partial_skew_lattice" => self.partial_skew_lattice(),
            "matrix" => self.matrix(),
            "lpa" => self.lpa(),
            "direct_sum" => self.direct_sum(),
            "quotient" => self.quotient(),
            _ => self.degenerate(),
        }
    }
}

/// Deterministic corpus: the same seed and count give the same cases.
pub fn generate(seed: u64, count: usize, caps: &Caps) -> (Vec<Case>, Vec<Skipped>) {
    let mut gen = Generator {
        rng: ChaCha8Rng::seed_from_u64(seed),
        caps: *caps,
    };
    let weights = [4usize, 3, 4, 2, 3, 3, 2, 3, 1];
    let total: usize = weights.iter().sum();
    let mut cases = Vec::new();
    let mut skipped = Vec::new();
    for i in 0..count {
        let mut roll = gen.rng.gen_range(0..total);
        let mut fam = 0;
        while roll >= weights[fam] {
            roll -= weights[fam];
            fam += 1;
        }
        let family = FAMILIES[fam];
        let name = format!("case-{:04}-{family}", i + 1);
        match gen.family(family) {
            Ok((origin, graded)) => cases.push(Case {
                name,
                family: family.into(),
                origin,
                graded,
            }),
            Err(e) => skipped.push(Skipped {
                name,
                family: family.into(),
                reason: e.to_string(),
            }),
        }
    }
    (cases, skipped)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub name: String,
    pub family: String,
    pub finite_group: bool,
    pub nearly_epsilon_strong: bool,
    pub non_degenerate: bool,
    pub prime: Option<bool>,
    pub conditions: Option<[bool; 5]>,
    pub chain_holds: Option<bool>,
    pub all_equal: Option<bool>,
    pub method: Option<String>,
    pub observations: Vec<String>,
    /// "ok", "cap_exceeded" or "violation".
    pub status: String,
    pub detail: Option<String>,
}

impl Outcome {
    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "family": self.family,
            "finite_group": self.finite_group,
            "nearly_epsilon_strong": self.nearly_epsilon_strong,
            "non_degenerate": self.non_degenerate,
            "prime": self.prime,
            "conditions": self.conditions,
            "chain_holds": self.chain_holds,
            "all_equal": self.all_equal,
            "method": self.method,
            "observations": self.observations,
            "status": self.status,
            "detail": self.detail,
        })
    }
}

pub fn evaluate(case: &Case, caps: &Caps) -> Outcome {
    let s = &case.graded;
    let mut out = Outcome {
        name: case.name.clone(),
        family: case.family.clone(),
        finite_group: s.group().is_finite(),
        nearly_epsilon_strong: false,
        non_degenerate: false,
        prime: None,
        conditions: None,
        chain_holds: None,
        all_equal: None,
        method: None,
        observations: Vec::new(),
        status: "ok".into(),
        detail: None,
    };
    let run = |out: &mut Outcome| -> Result<()> {
        let flags = s.classify(caps)?;
        out.nearly_epsilon_strong = flags.nearly_epsilon_strong;
        out.non_degenerate = flags.non_degenerate;
        if s.group().is_finite() {
            let h = main_theorem_harness(s, caps)?;
            out.prime = Some(!h.not_prime);
            out.conditions = Some(h.conditions());
            out.chain_holds = Some(h.chain_holds());
            out.all_equal = Some(h.all_equal());
            out.observations = h.observations;
        }
        let rep = decide_prime(s, Strategy::Auto, caps)?;
        out.prime = Some(rep.prime);
        out.method = Some(rep.method.name().into());
        Ok(())
    };
    if let Err(e) = run(&mut out) {
        out.status = match e {
            Error::CapExceeded { .. } => "cap_exceeded",
            _ => "violation",
        }
        .into();
        out.detail = Some(e.to_string());
    }
    out
}

/// Outcomes in case order, evaluated in parallel.
pub fn evaluate_all(cases: &[Case], caps: &Caps) -> Vec<Outcome> {
    cases.par_iter().map(|c| evaluate(c, caps)).collect()
}

pub fn summary_json(seed: u64, count: usize, outcomes: &[Outcome], skipped: &[Skipped]) -> Value {
    let ok = outcomes.iter().filter(|o| o.status == "ok").count();
    json!({
        "seed": seed,
        "count": count,
        "evaluated": outcomes.len(),
        "ok": ok,
        "violations": outcomes.iter().filter(|o| o.status == "violation").count(),
        "cases": outcomes.iter().map(Outcome::to_json).collect::<Vec<_>>(),
        "skipped": skipped
            .iter()
            .map(|s| json!({"name": s.name, "family": s.family, "reason": s.reason}))
            .collect::<Vec<_>>(),
    })
}
