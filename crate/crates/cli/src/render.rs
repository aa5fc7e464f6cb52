use serde_json::{json, Map, Value};

use setcalc::polyhedron::PolyhedronJson;
use setcalc::tree::{NodeId, ScenarioTree};
use setcalc::{Polyhedron, Rational};

const DECIMAL_DIGITS: usize = 12;

pub fn rational(q: &Rational) -> Value {
    Value::String(q.to_string())
}

pub fn vector(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

pub fn polyhedron(p: &Polyhedron) -> Value {
    serde_json::to_value(PolyhedronJson::from(p)).expect("polyhedra serialise")
}

pub fn label(tree: &ScenarioTree, n: NodeId) -> Value {
    serde_json::to_value(tree.label(n)).expect("labels serialise")
}

pub fn label_text(tree: &ScenarioTree, n: NodeId) -> String {
    tree.label(n).to_string()
}

/// `{"id": .., "time": ..}` for a node, ready to be extended.
pub fn node_header(tree: &ScenarioTree, n: NodeId) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("id".into(), label(tree, n));
    m.insert("time".into(), json!(tree.time(n)));
    m
}

fn as_rational(s: &str) -> Option<Rational> {
    if !s.contains('/') {
        return None;
    }
    s.parse().ok()
}

fn decimal_mirror(v: &Value) -> Value {
    match v {
        Value::String(s) => match as_rational(s) {
            Some(q) => Value::String(q.to_decimal_string(DECIMAL_DIGITS)),
            None => v.clone(),
        },
        Value::Array(items) => Value::Array(items.iter().map(decimal_mirror).collect()),
        Value::Object(map) => Value::Object(
            map.iter()
                .map(|(k, x)| (k.clone(), decimal_mirror(x)))
                .collect(),
        ),
        other => other.clone(),
    }
}

/// Pretty JSON with a trailing newline. With `decimal`, a copy of the
/// document with every rational written as a truncated decimal is attached
/// under `decimal_approximation`; the exact values are left untouched.
pub fn json_text(mut doc: Value, decimal: bool) -> String {
    if decimal {
        let mirror = decimal_mirror(&doc);
        if let Value::Object(map) = &mut doc {
            map.insert("decimal_approximation".into(), mirror);
        }
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("values serialise");
    s.push('\n');
    s
}

pub fn csv_text(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

pub fn coordinate_header(prefix: &str, d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("{prefix}{i}")).collect()
}
