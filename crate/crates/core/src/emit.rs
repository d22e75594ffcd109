//! Graphviz and JSON output.
//!
//! JSON objects use `serde_json`'s default map, so keys come out sorted and
//! `to_string` is byte-stable. Rationals are written as `"p/q"` strings.

use std::fmt::Write as _;

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::extended::{ComponentKind, NormalizedExtendedGraph};
use crate::graph::{Role, WeightedGraph};
use crate::invariants::{rational_string, ConfigurationInvariant, Verdict};
use crate::presentation::BlowupSchedule;

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Undirected Graphviz source, vertices and edges in id order.
pub fn emit_dot(name: &str, g: &WeightedGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph \"{}\" {{", dot_escape(name));
    for v in g.vertices() {
        let mut label = format!("{}\\nw={}", dot_escape(&v.label()), v.weight);
        if v.genus > 0 {
            let _ = write!(label, ", g={}", v.genus);
        }
        let mut attrs = vec![format!("label=\"{label}\"")];
        match v.role {
            Role::Feather => attrs.push("style=dashed".into()),
            Role::Section => attrs.push("peripheries=2".into()),
            _ => {}
        }
        let _ = writeln!(out, "  n{} [{}];", v.id.0, attrs.join(", "));
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "  n{} -- n{};", a.0, b.0);
    }
    out.push_str("}\n");
    out
}

pub fn rational_json(q: &BigRational) -> Value {
    Value::String(rational_string(q))
}

pub fn graph_json(g: &WeightedGraph) -> Value {
    let vertices: Vec<Value> = g
        .vertices()
        .map(|v| {
            json!({
                "id": v.id.0,
                "name": v.label(),
                "weight": v.weight,
                "role": v.role.as_str(),
                "genus": v.genus,
            })
        })
        .collect();
    let label = |id| g.vertex(id).expect("edge endpoint").label();
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|&(a, b)| json!([label(a), label(b)]))
        .collect();
    json!({ "vertices": vertices, "edges": edges })
}

/// δ is keyed by vertex name, so the output does not depend on how the
/// feathers of the source graph were numbered.
pub fn normalized_json(d: &NormalizedExtendedGraph) -> Value {
    let delta: serde_json::Map<String, Value> = d
        .delta
        .iter()
        .map(|(&c, &k)| (d.boundary.vertex(c).expect("delta key").label(), json!(k)))
        .collect();
    json!({ "boundary": graph_json(&d.boundary), "delta": delta })
}

pub fn verdict_json(v: &Verdict) -> Value {
    json!({ "equivalent": v.equivalent, "witness": v.witness.as_str() })
}

pub fn kinds_json<'a>(kinds: impl IntoIterator<Item = (String, &'a ComponentKind)>) -> Value {
    let m: serde_json::Map<String, Value> = kinds
        .into_iter()
        .map(|(k, kind)| (k, json!(kind.as_str())))
        .collect();
    Value::Object(m)
}

pub fn invariant_json(g: &WeightedGraph, q: &ConfigurationInvariant) -> Value {
    let m: serde_json::Map<String, Value> = q
        .entries
        .iter()
        .map(|(&c, cfg)| {
            let pts: Vec<Value> = cfg.points().iter().map(rational_json).collect();
            let name = g.vertex(c).map_or_else(|| c.to_string(), |v| v.label());
            (name, json!({ "kind": cfg.kind.as_str(), "points": pts }))
        })
        .collect();
    Value::Object(m)
}

pub fn schedule_json(s: &BlowupSchedule, dimension: u64) -> Value {
    let slots: Vec<Value> = s.slots.iter().map(|sl| json!(sl.name)).collect();
    json!({
        "dimension": dimension,
        "section_weight": s.target_section_weight,
        "slots": slots,
        "text": s.to_text(),
    })
}

/// Canonical single-line JSON.
pub fn to_canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("values built here always serialize")
}
