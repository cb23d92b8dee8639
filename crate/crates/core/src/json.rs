//! JSON interchange for groups, rings, graded rings, constructions, graphs
//! and certificates. Keys come out sorted and every number is an integer.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Map, Value};

use crate::constructions::{
    build_group_ring, build_matrix_graded, build_partial_crossed_product,
    build_partial_skew_group_ring, build_skew_group_ring, ConnellReport, MatrixGrading,
    PartialActionData, PartialDomain, SkewAction, TwistedPartialData,
};
use crate::error::{Caps, Error, Result};
use crate::graded::{Degree, GradeGroup, GradedRing, GradingFlags};
use crate::groups::{FiniteGroup, Subgroup, SymbolicGroup};
use crate::lpa::{DirectedGraph, Edge, LpaVerdict, Mt3};
use crate::primality::{Flavor, HarnessReport, NpDatum, PrimenessReport};
use crate::ring::FiniteRing;
use crate::zmod::Submodule;

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| bad(format!("missing field '{key}'")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| bad(format!("{what} must be a non-negative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be an array")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| bad(format!("{what} must be a string")))
}

/// Coefficient vector, reduced mod m (negative entries allowed).
fn coeffs(v: &Value, m: u64, what: &str) -> Result<Vec<u64>> {
    as_array(v, what)?
        .iter()
        .map(|x| {
            x.as_i64()
                .map(|c| c.rem_euclid(m as i64) as u64)
                .or_else(|| x.as_u64().map(|c| c % m))
                .ok_or_else(|| bad(format!("{what} entries must be integers")))
        })
        .collect()
}

fn vectors(v: &Value, m: u64, what: &str) -> Result<Vec<Vec<u64>>> {
    as_array(v, what)?
        .iter()
        .map(|x| coeffs(x, m, what))
        .collect()
}

fn string_list(v: &Value, what: &str) -> Result<Vec<String>> {
    as_array(v, what)?
        .iter()
        .map(|x| as_str(x, what).map(str::to_string))
        .collect()
}

pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn big(n: u128) -> Value {
    match u64::try_from(n) {
        Ok(x) => json!(x),
        Err(_) => json!(n.to_string()),
    }
}

pub fn finite_group_to_json(g: &FiniteGroup) -> Value {
    json!({"kind": "finite", "table": g.table(), "labels": g.labels()})
}

pub fn symbolic_from_json(v: &Value) -> Result<SymbolicGroup> {
    match v {
        Value::String(s) => SymbolicGroup::parse(s),
        _ => match as_str(field(v, "kind")?, "kind")? {
            "symbolic" => SymbolicGroup::parse(as_str(field(v, "expr")?, "expr")?),
            "finite" => {
                let table = as_array(field(v, "table")?, "table")?
                    .iter()
                    .map(|row| {
                        as_array(row, "table row")?
                            .iter()
                            .map(|x| as_usize(x, "table entry"))
                            .collect()
                    })
                    .collect::<Result<Vec<Vec<usize>>>>()?;
                let labels = v
                    .get("labels")
                    .map(|l| string_list(l, "labels"))
                    .transpose()?;
                Ok(SymbolicGroup::FiniteTable(FiniteGroup::from_table(
                    table, labels,
                )?))
            }
            other => Err(bad(format!("unknown group kind '{other}'"))),
        },
    }
}

pub fn group_to_json(g: &GradeGroup) -> Value {
    match g {
        GradeGroup::Finite(f) => finite_group_to_json(f),
        GradeGroup::Lattice(1) => json!({"kind": "symbolic", "expr": "Z"}),
        GradeGroup::Lattice(r) => json!({"kind": "symbolic", "expr": format!("Z^{r}")}),
    }
}

pub fn group_from_json(v: &Value) -> Result<GradeGroup> {
    let s = symbolic_from_json(v)?;
    if let Some(r) = s.lattice_rank() {
        return Ok(GradeGroup::Lattice(r));
    }
    s.to_finite()
        .map(GradeGroup::Finite)
        .ok_or_else(|| Error::Unsupported(format!("cannot grade by {s}")))
}

pub fn finite_group_from_json(v: &Value) -> Result<FiniteGroup> {
    match group_from_json(v)? {
        GradeGroup::Finite(g) => Ok(g),
        GradeGroup::Lattice(_) => Err(bad("a finite group is required")),
    }
}

pub fn degree_to_json(d: &Degree) -> Value {
    match d {
        Degree::Finite(i) => json!(i),
        Degree::Lattice(v) => json!(v),
    }
}

pub fn degree_from_json(v: &Value, g: &GradeGroup) -> Result<Degree> {
    match g {
        GradeGroup::Finite(f) => {
            let i = match v {
                Value::String(s) => f
                    .labels()
                    .iter()
                    .position(|l| l == s)
                    .ok_or_else(|| bad(format!("unknown group element '{s}'")))?,
                _ => as_usize(v, "degree")?,
            };
            let d = Degree::Finite(i);
            g.check(&d)?;
            Ok(d)
        }
        GradeGroup::Lattice(r) => {
            let xs = match v {
                Value::Number(_) if *r == 1 => vec![v.clone()],
                _ => as_array(v, "lattice degree")?.clone(),
            };
            let d = Degree::Lattice(
                xs.iter()
                    .map(|x| {
                        x.as_i64()
                            .ok_or_else(|| bad("lattice degree entries must be integers"))
                    })
                    .collect::<Result<_>>()?,
            );
            g.check(&d)?;
            Ok(d)
        }
    }
}

pub fn ring_to_json(r: &FiniteRing) -> Value {
    json!({
        "modulus": r.modulus(),
        "rank": r.rank(),
        "labels": r.labels(),
        "mul": r.dense_table(),
        "unit": r.unit(),
    })
}

pub fn ring_from_json(v: &Value) -> Result<FiniteRing> {
    if let Some(p) = v.get("preset") {
        return match as_str(p, "preset")? {
            "Zmod" => Ok(FiniteRing::zmod(modulus(field(v, "m")?)?)),
            "MatrixRing" => {
                let n = as_usize(field(v, "n")?, "n")?;
                FiniteRing::matrix_ring(n, &ring_from_json(field(v, "base")?)?)
            }
            "DirectSum" => {
                let parts = as_array(field(v, "parts")?, "parts")?
                    .iter()
                    .map(ring_from_json)
                    .collect::<Result<Vec<_>>>()?;
                FiniteRing::direct_sum(&parts)
            }
            "ZeroProduct" => {
                let rank = v
                    .get("rank")
                    .map(|x| as_usize(x, "rank"))
                    .transpose()?
                    .unwrap_or(1);
                FiniteRing::zero_product(modulus(field(v, "m")?)?, rank)
            }
            other => Err(bad(format!("unknown ring preset '{other}'"))),
        };
    }
    let m = modulus(field(v, "modulus")?)?;
    let mul = as_array(field(v, "mul")?, "mul")?
        .iter()
        .map(|row| vectors(row, m, "mul"))
        .collect::<Result<Vec<_>>>()?;
    if let Some(k) = v.get("rank") {
        if as_usize(k, "rank")? != mul.len() {
            return Err(Error::Dimension(
                "rank differs from the structure constants".into(),
            ));
        }
    }
    let unit = match v.get("unit") {
        None | Some(Value::Null) => None,
        Some(u) => Some(coeffs(u, m, "unit")?),
    };
    let labels = v
        .get("labels")
        .map(|l| string_list(l, "labels"))
        .transpose()?;
    FiniteRing::new(m, mul, unit, labels)
}

fn modulus(v: &Value) -> Result<u64> {
    v.as_u64()
        .filter(|&m| m >= 2)
        .ok_or_else(|| bad("modulus must be an integer >= 2"))
}

pub fn graded_to_json(s: &GradedRing) -> Value {
    json!({
        "ring": ring_to_json(s.ring()),
        "group": group_to_json(s.group()),
        "degrees": s.degrees().iter().map(degree_to_json).collect::<Vec<_>>(),
    })
}

/// A graded ring, a construction that builds one, or a corpus case file.
pub fn graded_from_json(v: &Value, caps: &Caps) -> Result<GradedRing> {
    if let Some(inner) = v.get("graded") {
        return graded_from_json(inner, caps);
    }
    if v.get("construct").is_some() {
        return construction_from_json(v)?.build(caps);
    }
    let ring = ring_from_json(field(v, "ring")?)?;
    let group = group_from_json(field(v, "group")?)?;
    let degrees = as_array(field(v, "degrees")?, "degrees")?
        .iter()
        .map(|d| degree_from_json(d, &group))
        .collect::<Result<Vec<_>>>()?;
    GradedRing::new(ring, group, degrees)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    GroupRing {
        ring: FiniteRing,
        group: FiniteGroup,
    },
    Skew {
        ring: FiniteRing,
        group: FiniteGroup,
        action: SkewAction,
    },
    PartialSkew {
        ring: FiniteRing,
        data: PartialActionData,
    },
    PartialCrossed {
        ring: FiniteRing,
        data: TwistedPartialData,
    },
    Matrix {
        ring: FiniteRing,
        n: usize,
        mode: MatrixGrading,
    },
}

impl Construction {
    pub fn build(&self, caps: &Caps) -> Result<GradedRing> {
        match self {
            Construction::GroupRing { ring, group } => build_group_ring(ring, group, caps),
            Construction::Skew {
                ring,
                group,
                action,
            } => build_skew_group_ring(ring, group, action, caps),
            Construction::PartialSkew { ring, data } => {
                build_partial_skew_group_ring(ring, data, caps)
            }
            Construction::PartialCrossed { ring, data } => {
                build_partial_crossed_product(ring, data, caps)
            }
            Construction::Matrix { ring, n, mode } => build_matrix_graded(ring, *n, *mode, caps),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Construction::GroupRing { .. } => "group_ring",
            Construction::Skew { .. } => "skew",
            Construction::PartialSkew { .. } => "partial_skew",
            Construction::PartialCrossed { .. } => "partial_crossed",
            Construction::Matrix { .. } => "matrix",
        }
    }
}

fn domains_to_json(d: &PartialActionData) -> Value {
    Value::Array(
        d.domains
            .iter()
            .map(
                |(g, dom)| json!({"degree": degree_to_json(g), "basis": dom.basis, "map": dom.map}),
            )
            .collect(),
    )
}

fn domains_from_json(v: &Value, group: GradeGroup, m: u64) -> Result<PartialActionData> {
    let mut domains = BTreeMap::new();
    for d in as_array(v, "domains")? {
        let g = degree_from_json(field(d, "degree")?, &group)?;
        let dom = PartialDomain {
            basis: vectors(field(d, "basis")?, m, "basis")?,
            map: vectors(field(d, "map")?, m, "map")?,
        };
        if domains.insert(g.clone(), dom).is_some() {
            return Err(bad(format!("domain for {g:?} given twice")));
        }
    }
    Ok(PartialActionData { group, domains })
}

pub fn construction_to_json(c: &Construction) -> Value {
    let mut o = Map::new();
    o.insert("construct".into(), json!(c.kind()));
    match c {
        Construction::GroupRing { ring, group } => {
            o.insert("ring".into(), ring_to_json(ring));
            o.insert("group".into(), finite_group_to_json(group));
        }
        Construction::Skew {
            ring,
            group,
            action,
        } => {
            o.insert("ring".into(), ring_to_json(ring));
            o.insert("group".into(), finite_group_to_json(group));
            o.insert("action".into(), json!(action.maps));
        }
        Construction::PartialSkew { ring, data } => {
            o.insert("ring".into(), ring_to_json(ring));
            o.insert("group".into(), group_to_json(&data.group));
            o.insert("domains".into(), domains_to_json(data));
        }
        Construction::PartialCrossed { ring, data } => {
            o.insert("ring".into(), ring_to_json(ring));
            o.insert("group".into(), group_to_json(&data.action.group));
            o.insert("domains".into(), domains_to_json(&data.action));
            let twist: Vec<Value> = data
                .twist
                .iter()
                .map(|((g, h), w)| json!({"g": degree_to_json(g), "h": degree_to_json(h), "w": w}))
                .collect();
            o.insert("twist".into(), Value::Array(twist));
        }
        Construction::Matrix { ring, n, mode } => {
            o.insert("ring".into(), ring_to_json(ring));
            o.insert("n".into(), json!(n));
            let mode = match mode {
                MatrixGrading::Integers => "Z",
                MatrixGrading::Cyclic => "ZmodN",
            };
            o.insert("mode".into(), json!(mode));
        }
    }
    Value::Object(o)
}

pub fn construction_from_json(v: &Value) -> Result<Construction> {
    let ring = ring_from_json(field(v, "ring")?)?;
    let m = ring.modulus();
    match as_str(field(v, "construct")?, "construct")? {
        "group_ring" => Ok(Construction::GroupRing {
            group: finite_group_from_json(field(v, "group")?)?,
            ring,
        }),
        "skew" => {
            let maps = as_array(field(v, "action")?, "action")?
                .iter()
                .map(|a| vectors(a, m, "action"))
                .collect::<Result<Vec<_>>>()?;
            Ok(Construction::Skew {
                group: finite_group_from_json(field(v, "group")?)?,
                action: SkewAction { maps },
                ring,
            })
        }
        "partial_skew" => {
            let group = group_from_json(field(v, "group")?)?;
            Ok(Construction::PartialSkew {
                data: domains_from_json(field(v, "domains")?, group, m)?,
                ring,
            })
        }
        "partial_crossed" => {
            let group = group_from_json(field(v, "group")?)?;
            let action = domains_from_json(field(v, "domains")?, group.clone(), m)?;
            let mut twist = BTreeMap::new();
            if let Some(t) = v.get("twist") {
                for e in as_array(t, "twist")? {
                    let g = degree_from_json(field(e, "g")?, &group)?;
                    let h = degree_from_json(field(e, "h")?, &group)?;
                    twist.insert((g, h), coeffs(field(e, "w")?, m, "w")?);
                }
            }
            Ok(Construction::PartialCrossed {
                data: TwistedPartialData { action, twist },
                ring,
            })
        }
        "matrix" => {
            let n = as_usize(field(v, "n")?, "n")?;
            let mode = match v
                .get("mode")
                .map(|x| as_str(x, "mode"))
                .transpose()?
                .unwrap_or("Z")
            {
                "Z" => MatrixGrading::Integers,
                "ZmodN" => MatrixGrading::Cyclic,
                other => return Err(bad(format!("unknown matrix mode '{other}'"))),
            };
            Ok(Construction::Matrix { ring, n, mode })
        }
        other => Err(bad(format!("unknown construction '{other}'"))),
    }
}

pub fn graph_to_json(g: &DirectedGraph) -> Value {
    let names = g.vertices();
    json!({
        "vertices": names,
        "edges": g.edges().iter().map(|e| json!({"name": e.name, "src": names[e.src], "dst": names[e.dst]})).collect::<Vec<_>>(),
        "infinite_emitters": g.infinite_emitters().iter().map(|&v| names[v].clone()).collect::<Vec<_>>(),
    })
}

pub fn graph_from_json(v: &Value) -> Result<DirectedGraph> {
    let vertices = string_list(field(v, "vertices")?, "vertices")?;
    let index = |name: &str| {
        vertices
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| bad(format!("unknown vertex '{name}'")))
    };
    let mut edges = Vec::new();
    if let Some(es) = v.get("edges") {
        for e in as_array(es, "edges")? {
            edges.push(Edge {
                name: as_str(field(e, "name")?, "edge name")?.to_string(),
                src: index(as_str(field(e, "src")?, "src")?)?,
                dst: index(as_str(field(e, "dst")?, "dst")?)?,
            });
        }
    }
    let mut inf = BTreeSet::new();
    if let Some(xs) = v.get("infinite_emitters") {
        for x in as_array(xs, "infinite_emitters")? {
            inf.insert(index(as_str(x, "infinite emitter")?)?);
        }
    }
    DirectedGraph::new(vertices, edges, inf)
}

fn subgroup_labels(s: &GradedRing, h: &Subgroup) -> Value {
    match s.group().as_finite() {
        Some(g) => json!(h
            .elements()
            .iter()
            .map(|&x| g.labels()[x].clone())
            .collect::<Vec<_>>()),
        None => json!(h.elements()),
    }
}

fn gens(u: &Submodule) -> Value {
    json!(u.gens())
}

pub fn datum_to_json(s: &GradedRing, d: &NpDatum) -> Value {
    json!({
        "H": subgroup_labels(s, &d.h),
        "N": subgroup_labels(s, &d.n),
        "I_gens": gens(&d.i),
        "A_gens": gens(&d.a),
        "B_gens": gens(&d.b),
    })
}

/// Certificate for a primeness decision; `elapsed_us` is the only
/// run-dependent field.
pub fn report_to_json(s: &GradedRing, r: &PrimenessReport) -> Value {
    json!({
        "verdict": if r.prime { "prime" } else { "not_prime" },
        "method": r.method.name(),
        "citation": r.method.citation(),
        "np_datum": r.datum.as_ref().map(|d| datum_to_json(s, d)),
        "witness": r.witness.as_ref().map(|(a, b)| json!({"a": a, "b": b})),
        "bounds": {
            "candidates": big(r.bounds.candidates),
            "subgroups": r.bounds.subgroups,
            "principal_ideals": r.bounds.principal_ideals,
        },
        "cross_check": r.cross_check,
        "elapsed_us": u64::try_from(r.elapsed.as_micros()).unwrap_or(u64::MAX),
    })
}

pub fn flags_to_json(f: &GradingFlags, cancellative: Option<bool>) -> Value {
    let witnesses: Vec<Value> = f
        .epsilon_witnesses
        .iter()
        .filter_map(|(d, w)| {
            w.as_ref()
                .map(|(l, r)| json!({"degree": degree_to_json(d), "left": l, "right": r}))
        })
        .collect();
    json!({
        "strong": f.strong,
        "symmetric": f.symmetric,
        "non_degenerate": f.non_degenerate,
        "epsilon_strong": f.epsilon_strong,
        "nearly_epsilon_strong": f.nearly_epsilon_strong,
        "ring_s_unital": f.ring_s_unital,
        "principal_s_unital": f.principal_s_unital,
        "cancellative": cancellative,
        "epsilon_witnesses": witnesses,
    })
}

pub fn harness_to_json(s: &GradedRing, h: &HarnessReport) -> Value {
    let c = h.conditions();
    let data: Map<String, Value> = Flavor::ALL
        .iter()
        .zip(&h.data)
        .map(|(f, d)| {
            (
                f.name().to_string(),
                d.as_ref().map_or(Value::Null, |d| datum_to_json(s, d)),
            )
        })
        .collect();
    json!({
        "conditions": {"a": c[0], "b": c[1], "c": c[2], "d": c[3], "e": c[4]},
        "all_equal": h.all_equal(),
        "chain_holds": h.chain_holds(),
        "nearly_epsilon_strong": h.nearly_epsilon_strong,
        "non_degenerate": h.non_degenerate,
        "g_prime": h.g_prime,
        "data": data,
        "observations": h.observations,
    })
}

pub fn mt3_to_json(g: &DirectedGraph, m: &Mt3) -> Value {
    let names = g.vertices();
    json!({
        "mt3": m.holds,
        "witness": m.witness.map(|(u, v)| vec![names[u].clone(), names[v].clone()]),
    })
}

pub fn lpa_verdict_to_json(g: &DirectedGraph, v: &LpaVerdict) -> Value {
    let failing = match (v.ring_prime, v.mt3.holds) {
        (true, true) => Value::Null,
        (false, _) => json!("ring_not_prime"),
        (true, false) => json!("mt3"),
    };
    json!({
        "verdict": if v.prime { "prime" } else { "not_prime" },
        "ring_prime": v.ring_prime,
        "mt3": mt3_to_json(g, &v.mt3),
        "failing": failing,
        "citation": "L_R(E) is prime iff R is prime and E satisfies MT-3",
    })
}

pub fn connell_to_json(r: &ConnellReport) -> Value {
    json!({
        "verdict": if r.prime { "prime" } else { "not_prime" },
        "reason": r.reason.name(),
        "cross_check": r.cross_check,
        "citation": "R[G] is prime iff R is prime and G has no nontrivial finite normal subgroup",
    })
}
