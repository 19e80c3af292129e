//! JSON interchange for simplices, weights, moves and reports.
//!
//! Integers of any size are written as plain JSON numbers; rationals are
//! written as strings such as `"9/2"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Number, Value};

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::mutation::MutationMove;
use crate::simplex::{validate_fano, FanoSimplex, WeightSystem};
use crate::singularity::SingularityReport;
use crate::sylvester::{KappaWitness, MutationGraph, TowerState};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn big(x: &BigInt) -> Value {
    Value::Number(x.to_string().parse::<Number>().expect("integers are valid JSON numbers"))
}

pub fn bigs(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(big).collect())
}

pub fn rational(x: &BigRational) -> Value {
    Value::String(x.to_string())
}

pub fn vector(v: &LatticeVector) -> Value {
    bigs(v.coords())
}

pub fn parse_big(v: &Value) -> Result<BigInt> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(parse_err(format!("expected an integer, found {other}"))),
    };
    text.parse::<BigInt>().map_err(|_| parse_err(format!("expected an integer, found {text}")))
}

fn parse_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("{what} must be an array")))
}

pub fn parse_bigs(v: &Value) -> Result<Vec<BigInt>> {
    parse_array(v, "integer list")?.iter().map(parse_big).collect()
}

pub fn parse_vectors(v: &Value) -> Result<Vec<LatticeVector>> {
    parse_array(v, "vertex list")?.iter().map(|x| parse_bigs(x).map(LatticeVector::new)).collect()
}

pub fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(format!("malformed JSON: {e}")))
}

/// Accepts `{"dim": n, "vertices": [...]}` or a bare vertex list.
/// Shape problems are parse errors; a well-formed but non-Fano simplex is a
/// domain error.
pub fn parse_simplex(v: &Value) -> Result<FanoSimplex> {
    let (vertices, dim) = match v {
        Value::Object(obj) => {
            let verts = obj.get("vertices").ok_or_else(|| parse_err("missing \"vertices\""))?;
            let dim = match obj.get("dim") {
                Some(d) => Some(
                    d.as_u64().ok_or_else(|| parse_err("\"dim\" must be a non-negative integer"))?
                        as usize,
                ),
                None => None,
            };
            (parse_vectors(verts)?, dim)
        }
        Value::Array(_) => (parse_vectors(v)?, None),
        _ => return Err(parse_err("expected a simplex object or vertex list")),
    };
    if let (Some(d), Some(first)) = (dim, vertices.first()) {
        if first.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: first.dim() });
        }
    }
    validate_fano(vertices)
}

/// Accepts `{"weights": [...], "multiplicity": m}` (multiplicity optional,
/// default 1) or a bare weight list.
pub fn parse_weights(v: &Value) -> Result<WeightSystem> {
    let (weights, mult) = match v {
        Value::Object(obj) => {
            let w = obj.get("weights").ok_or_else(|| parse_err("missing \"weights\""))?;
            let m = match obj.get("multiplicity") {
                Some(m) => parse_big(m)?,
                None => BigInt::from(1),
            };
            (parse_bigs(w)?, m)
        }
        Value::Array(_) => (parse_bigs(v)?, BigInt::from(1)),
        _ => return Err(parse_err("expected a weight object or list")),
    };
    WeightSystem::new(weights, mult)
}

pub fn simplex_json(p: &FanoSimplex) -> Value {
    polytope_json(p.dim(), p.vertices())
}

pub fn polytope_json(dim: usize, vertices: &[LatticeVector]) -> Value {
    json!({
        "dim": dim,
        "vertices": vertices.iter().map(vector).collect::<Vec<_>>(),
    })
}

/// Weights sorted ascending.
pub fn weights_json(ws: &WeightSystem) -> Value {
    json!({
        "weights": bigs(&ws.sorted()),
        "multiplicity": big(ws.multiplicity()),
    })
}

pub fn move_json(mv: &MutationMove) -> Value {
    json!({
        "w": bigs(mv.w.coords()),
        "apex": mv.apex,
        "min_face": mv.min_face,
        "zero_set": mv.zero_set,
        "h_min": big(&mv.h_min),
        "h_max": big(&mv.h_max),
        "k": mv.k(),
        "trivial": mv.trivial,
        "factor_vertices": mv.factor_vertices.iter().map(vector).collect::<Vec<_>>(),
    })
}

pub fn report_json(r: &SingularityReport) -> Value {
    let mut obj = Map::new();
    obj.insert("canonical".into(), Value::Bool(r.canonical));
    obj.insert("terminal".into(), Value::Bool(r.terminal));
    obj.insert("gorenstein".into(), Value::Bool(r.gorenstein));
    obj.insert("witness_kappa".into(), r.witness_kappa.as_ref().map_or(Value::Null, big));
    obj.insert("witness_point".into(), r.witness_point.as_ref().map_or(Value::Null, vector));
    obj.insert("exhaustive".into(), Value::Bool(r.exhaustive));
    Value::Object(obj)
}

pub fn witness_json(w: &KappaWitness) -> Value {
    json!({
        "kappa": big(&w.kappa),
        "sum": rational(&w.sum),
        "in_range": w.in_range,
        "violates": w.violates,
    })
}

pub fn tower_state_json(s: &TowerState, witness: Option<&KappaWitness>) -> Value {
    json!({
        "n": s.n,
        "variant": s.variant,
        "a": s.a,
        "m": s.m,
        "weights": bigs(&s.lambda),
        "h": big(&s.h),
        "kappa_witness": witness.map_or(Value::Null, witness_json),
    })
}

pub fn graph_json(g: &MutationGraph) -> Value {
    let nodes: Vec<Value> = g
        .nodes
        .iter()
        .map(|node| {
            json!({
                "id": node.id,
                "depth": node.depth,
                "label": node.label(),
                "weights": bigs(&node.weights.sorted()),
                "multiplicity": big(node.weights.multiplicity()),
                "singularity": node.singularity.as_ref().map_or(Value::Null, report_json),
            })
        })
        .collect();
    let edges: Vec<Value> = g
        .edges
        .iter()
        .map(|e| json!({"from": e.from, "to": e.to, "k": e.k, "d": big(&e.d)}))
        .collect();
    json!({
        "n": g.n,
        "variant": g.variant,
        "depth": g.max_depth,
        "depth_counts": g.depth_counts(),
        "nodes": nodes,
        "edges": edges,
    })
}
