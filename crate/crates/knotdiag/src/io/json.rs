//! JSON documents, schema `knotdiag/v1`.
//!
//! Every document is an object with `"schema": "knotdiag/v1"` and a `"kind"`.
//!
//! * `planar`: `signs` (array of +1/-1), `links` (port index per port),
//!   `outer` (`{"dart": p}` or `{"round": "ccw" | "cw"}`) and `pd` (text).
//! * `gauss`: `arrows` (array of `{"tail", "head", "sign"}`) and `code`.
//!
//! Command outputs (`invariants`, `faces`, search reports, ...) are objects
//! with the same two header fields and command-specific members; the header is
//! checked by [`check_header`].

use serde_json::{json, Map, Value};

use crate::diagram::{Outer, PlanarDiagram, Port, Sign};
use crate::error::ParseError;
use crate::gauss::{Arrow, GaussDiagram};
use crate::io::{emit_gauss, emit_pd};

pub const SCHEMA: &str = "knotdiag/v1";

/// Starts a document of the given kind.
pub fn document(kind: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("kind".into(), json!(kind));
    m
}

/// Returns the document's kind after checking the schema tag.
pub fn check_header(v: &Value) -> Result<&str, ParseError> {
    let obj = v.as_object().ok_or_else(|| bad("document is not an object"))?;
    match obj.get("schema").and_then(Value::as_str) {
        Some(SCHEMA) => {}
        Some(other) => return Err(bad(&format!("unsupported schema {other:?}"))),
        None => return Err(bad("missing schema")),
    }
    obj.get("kind").and_then(Value::as_str).ok_or_else(|| bad("missing kind"))
}

fn bad(msg: &str) -> ParseError {
    ParseError::StructureError(msg.to_string())
}

pub fn planar_to_json(d: &PlanarDiagram) -> Value {
    let mut m = document("planar");
    m.insert("signs".into(), json!(d.signs().iter().map(|s| s.value()).collect::<Vec<_>>()));
    m.insert("links".into(), json!(d.links().iter().map(|p| p.0).collect::<Vec<_>>()));
    let outer = match d.outer() {
        Outer::Dart(p) => json!({ "dart": p.0 }),
        Outer::Round { ccw } => json!({ "round": if ccw { "ccw" } else { "cw" } }),
    };
    m.insert("outer".into(), outer);
    m.insert("pd".into(), json!(emit_pd(d)));
    Value::Object(m)
}

pub fn planar_from_json(v: &Value) -> Result<PlanarDiagram, ParseError> {
    if check_header(v)? != "planar" {
        return Err(bad("expected a planar document"));
    }
    let ints = |key: &str| -> Result<Vec<i64>, ParseError> {
        v.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| bad(&format!("missing {key}")))?
            .iter()
            .map(|x| x.as_i64().ok_or_else(|| bad(&format!("{key} must hold integers"))))
            .collect()
    };
    let signs = ints("signs")?
        .into_iter()
        .map(|s| Sign::from_value(s as i32).ok_or_else(|| bad("sign must be +1 or -1")))
        .collect::<Result<Vec<_>, _>>()?;
    let links = ints("links")?
        .into_iter()
        .map(|p| u32::try_from(p).map(Port).map_err(|_| bad("negative port")))
        .collect::<Result<Vec<_>, _>>()?;
    let o = v.get("outer").ok_or_else(|| bad("missing outer"))?;
    let outer = if let Some(p) = o.get("dart").and_then(Value::as_u64) {
        Outer::Dart(Port(p as u32))
    } else {
        match o.get("round").and_then(Value::as_str) {
            Some("ccw") => Outer::Round { ccw: true },
            Some("cw") => Outer::Round { ccw: false },
            _ => return Err(bad("outer must be a dart or a round circle")),
        }
    };
    PlanarDiagram::new(signs, links, outer).map_err(|e| bad(&e.to_string()))
}

pub fn gauss_to_json(g: &GaussDiagram) -> Value {
    let mut m = document("gauss");
    let arrows: Vec<Value> =
        g.arrows().iter().map(|a| json!({ "tail": a.tail, "head": a.head, "sign": a.sign.value() })).collect();
    m.insert("arrows".into(), Value::Array(arrows));
    m.insert("code".into(), json!(emit_gauss(g)));
    Value::Object(m)
}

pub fn gauss_from_json(v: &Value) -> Result<GaussDiagram, ParseError> {
    if check_header(v)? != "gauss" {
        return Err(bad("expected a gauss document"));
    }
    let arr = v.get("arrows").and_then(Value::as_array).ok_or_else(|| bad("missing arrows"))?;
    let mut arrows = Vec::with_capacity(arr.len());
    for a in arr {
        let field = |k: &str| a.get(k).and_then(Value::as_i64).ok_or_else(|| bad(&format!("arrow without {k}")));
        let (tail, head, sign) = (field("tail")?, field("head")?, field("sign")?);
        if tail < 0 || head < 0 {
            return Err(bad("negative slot"));
        }
        let sign = Sign::from_value(sign as i32).ok_or_else(|| bad("sign must be +1 or -1"))?;
        arrows.push(Arrow { tail: tail as usize, head: head as usize, sign });
    }
    GaussDiagram::new(arrows).map_err(|e| bad(&e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{figure6_eight, trefoil};

    #[test]
    fn planar_round_trip() {
        for d in [trefoil(), PlanarDiagram::unknot(false), PlanarDiagram::round_unknot()] {
            let v = planar_to_json(&d);
            assert_eq!(check_header(&v).unwrap(), "planar");
            assert_eq!(planar_from_json(&v).unwrap(), d);
        }
    }

    #[test]
    fn gauss_round_trip() {
        let g = figure6_eight();
        assert_eq!(gauss_from_json(&gauss_to_json(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_other_schemas() {
        let mut v = planar_to_json(&trefoil());
        v["schema"] = json!("knotdiag/v0");
        assert!(planar_from_json(&v).is_err());
        assert!(gauss_from_json(&planar_to_json(&trefoil())).is_err());
    }
}
