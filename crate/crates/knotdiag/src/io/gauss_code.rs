//! Signed Gauss codes such as `O1+U2+U1+O2+`: one token per passage giving
//! the crossing number, over or under, and the crossing sign.

use std::collections::BTreeMap;

use crate::diagram::Sign;
use crate::error::ParseError;
use crate::gauss::{Arrow, GaussDiagram};

pub fn parse_gauss(text: &str) -> Result<GaussDiagram, ParseError> {
    let b = text.as_bytes();
    let mut i = 0;
    // crossing label -> (under slot, over slot, sign)
    let mut seen: BTreeMap<usize, [Option<(usize, Sign)>; 2]> = BTreeMap::new();
    let mut slot = 0;
    let err = |pos: usize, msg: &str| ParseError::SyntaxError { pos, msg: msg.to_string() };
    loop {
        while i < b.len() && (b[i].is_ascii_whitespace() || b[i] == b',') {
            i += 1;
        }
        if i == b.len() {
            break;
        }
        let over = match b[i] {
            b'O' | b'o' => true,
            b'U' | b'u' => false,
            _ => return Err(err(i, "expected O or U")),
        };
        i += 1;
        let start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if start == i {
            return Err(err(i, "expected a crossing number"));
        }
        let label: usize = text[start..i].parse().map_err(|_| err(start, "number too large"))?;
        let sign = match b.get(i) {
            Some(b'+') => Sign::Positive,
            Some(b'-') => Sign::Negative,
            _ => return Err(err(i, "expected + or -")),
        };
        i += 1;
        let entry = seen.entry(label).or_insert([None, None]);
        let k = over as usize;
        if entry[k].is_some() {
            return Err(ParseError::StructureError(format!(
                "crossing {label} has two {} passages",
                if over { "over" } else { "under" }
            )));
        }
        entry[k] = Some((slot, sign));
        slot += 1;
    }
    let mut arrows = Vec::with_capacity(seen.len());
    for (label, e) in seen {
        match e {
            [Some((u, su)), Some((o, so))] if su == so => arrows.push(Arrow { tail: u, head: o, sign: su }),
            [Some(_), Some(_)] => {
                return Err(ParseError::StructureError(format!("crossing {label} has two different signs")))
            }
            _ => return Err(ParseError::StructureError(format!("crossing {label} appears once"))),
        }
    }
    GaussDiagram::new(arrows).map_err(|e| ParseError::StructureError(e.to_string()))
}

/// Deterministic text: read from the rotation with the smallest normal form,
/// crossings numbered by first appearance.
pub fn emit_gauss(g: &GaussDiagram) -> String {
    let m = g.slot_count();
    if m == 0 {
        return String::new();
    }
    let start = g.canonical_start();
    let mut names = vec![0; g.len()];
    let mut next = 1;
    let mut out = String::new();
    for k in 0..m {
        let (a, is_head) = g.at((start + k) % m);
        if names[a] == 0 {
            names[a] = next;
            next += 1;
        }
        out.push(if is_head { 'O' } else { 'U' });
        out.push_str(&names[a].to_string());
        out.push(g.arrow(a).sign.symbol());
    }
    out
}
