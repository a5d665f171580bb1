//! Knot-Atlas style PD codes.
//!
//! `X[a,b,c,d]` lists the edge labels around a crossing counterclockwise,
//! starting at the incoming under-strand. Labels run `1..=2n` along the
//! orientation, so the over-strand enters through whichever of `b`, `d` is
//! followed by the other. PD codes describe spherical diagrams; the unbounded
//! face defaults to the face on the right of edge 1 and can be overridden with
//! a trailing `outer=L<k>` or `outer=R<k>` (left or right of edge `k`).

use crate::diagram::{EdgeSide, Outer, PlanarDiagram, Port, Side, Sign};
use crate::error::ParseError;

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_whitespace() || self.s[self.pos] == b',') {
            self.pos += 1;
        }
    }
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }
    fn eat(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }
    fn err(&self, msg: String) -> ParseError {
        ParseError::SyntaxError { pos: self.pos, msg }
    }
    fn number(&mut self) -> Result<usize, ParseError> {
        while self.peek().is_some_and(|c| c == b' ') {
            self.pos += 1;
        }
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number".into()));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| ParseError::SyntaxError { pos: start, msg: "number too large".into() })
    }
}

/// An `outer=L<k>` / `outer=R<k>` directive: the given side of edge `k`.
pub type OuterDirective = (Side, usize);

/// Raw crossing tuples plus the optional outer-face directive.
pub fn parse_pd_tuples(text: &str) -> Result<(Vec<[usize; 4]>, Option<OuterDirective>), ParseError> {
    let mut lx = Lexer { s: text.as_bytes(), pos: 0 };
    lx.skip_ws();
    if lx.peek().is_none() {
        return Err(lx.err("empty input".into()));
    }
    let wrapped = text[lx.pos..].starts_with("PD[");
    if wrapped {
        lx.pos += 3;
    }
    let mut tuples = Vec::new();
    loop {
        lx.skip_ws();
        match lx.peek() {
            Some(b'X') => {
                lx.pos += 1;
                lx.eat(b'[')?;
                let mut t = [0; 4];
                for (i, slot) in t.iter_mut().enumerate() {
                    *slot = lx.number()?;
                    if i < 3 {
                        while lx.peek() == Some(b' ') {
                            lx.pos += 1;
                        }
                        lx.eat(b',')?;
                    }
                }
                while lx.peek() == Some(b' ') {
                    lx.pos += 1;
                }
                lx.eat(b']')?;
                tuples.push(t);
            }
            Some(b']') if wrapped => {
                lx.pos += 1;
                break;
            }
            None if !wrapped => break,
            Some(b'o') if !wrapped => break,
            _ => return Err(lx.err("expected X[...]".into())),
        }
    }
    lx.skip_ws();
    let mut outer = None;
    if text[lx.pos..].starts_with("outer=") {
        lx.pos += 6;
        let side = match lx.peek() {
            Some(b'L') => Side::Left,
            Some(b'R') => Side::Right,
            _ => return Err(lx.err("expected L or R".into())),
        };
        lx.pos += 1;
        outer = Some((side, lx.number()?));
        lx.skip_ws();
    }
    if lx.peek().is_some() {
        return Err(lx.err("trailing input".into()));
    }
    Ok((tuples, outer))
}

pub fn parse_pd(text: &str) -> Result<PlanarDiagram, ParseError> {
    let (tuples, outer) = parse_pd_tuples(text)?;
    from_tuples(&tuples, outer)
}

fn structure(msg: impl Into<String>) -> ParseError {
    ParseError::StructureError(msg.into())
}

/// Builds a diagram from PD tuples; `outer` picks the side of an edge label.
pub fn from_tuples(tuples: &[[usize; 4]], outer: Option<OuterDirective>) -> Result<PlanarDiagram, ParseError> {
    let n = tuples.len();
    let (side, label) = outer.unwrap_or((Side::Right, 1));
    if n == 0 {
        if label != 1 {
            return Err(structure(format!("no edge {label}")));
        }
        return Ok(PlanarDiagram::unknot(side == Side::Right));
    }
    let m = 2 * n;
    let mut seen: Vec<Vec<Port>> = vec![Vec::new(); m + 1];
    for (c, t) in tuples.iter().enumerate() {
        for (slot, &l) in t.iter().enumerate() {
            if l == 0 || l > m {
                return Err(structure(format!("label {l} outside 1..={m}")));
            }
            seen[l].push(Port::new(c, slot));
        }
    }
    for (l, ports) in seen.iter().enumerate().skip(1) {
        if ports.len() != 2 {
            return Err(structure(format!("label {l} used {} times", ports.len())));
        }
    }
    // strands through each crossing join opposite labels
    let mut comp: Vec<usize> = (0..=m).collect();
    fn root(c: &mut [usize], mut x: usize) -> usize {
        while c[x] != x {
            c[x] = c[c[x]];
            x = c[x];
        }
        x
    }
    for t in tuples {
        for (x, y) in [(t[0], t[2]), (t[1], t[3])] {
            let (rx, ry) = (root(&mut comp, x), root(&mut comp, y));
            comp[rx] = ry;
        }
    }
    let components = (1..=m).filter(|&l| root(&mut comp, l) == l).count();
    if components > 1 {
        return Err(ParseError::NotAKnot(components));
    }
    let succ = |l: usize| l % m + 1;
    let mut signs = Vec::with_capacity(n);
    for (c, t) in tuples.iter().enumerate() {
        let [a, b, cc, d] = *t;
        let sign = if n == 1 {
            if d == cc && b == a {
                Sign::Positive
            } else if b == cc && d == a {
                Sign::Negative
            } else {
                return Err(structure(format!("crossing {} is inconsistent", c + 1)));
            }
        } else if succ(d) == b {
            Sign::Positive
        } else if succ(b) == d {
            Sign::Negative
        } else {
            return Err(structure(format!("over-strand labels {b}, {d} of crossing {} are not consecutive", c + 1)));
        };
        if succ(a) != cc {
            return Err(structure(format!("under-strand labels {a}, {cc} of crossing {} are not consecutive", c + 1)));
        }
        signs.push(sign);
    }
    let incoming = |p: Port| crate::diagram::is_incoming(signs[p.crossing()], p.slot());
    let mut links = vec![Port(0); 4 * n];
    let mut head_of = vec![Port(0); m + 1];
    for l in 1..=m {
        let (x, y) = (seen[l][0], seen[l][1]);
        if incoming(x) == incoming(y) {
            return Err(structure(format!("edge {l} has no consistent direction")));
        }
        links[x.index()] = y;
        links[y.index()] = x;
        head_of[l] = if incoming(x) { x } else { y };
    }
    if label == 0 || label > m {
        return Err(structure(format!("no edge {label}")));
    }
    let head = head_of[label];
    let dart = match side {
        Side::Right => head,
        Side::Left => links[head.index()],
    };
    PlanarDiagram::new(signs, links, Outer::Dart(dart)).map_err(|e| match e {
        crate::error::DiagramError::InvalidDiagram(vs) => {
            for v in &vs {
                if let crate::diagram::Violation::MultipleComponents { components } = v {
                    return ParseError::NotAKnot(*components);
                }
            }
            structure(vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))
        }
        other => structure(other.to_string()),
    })
}

/// Edge labels used by [`emit_pd`]: the edge leaving the canonical basepoint
/// is 1. Returns (label of every port, crossings ordered by under-in label).
pub fn labelling(d: &PlanarDiagram) -> (Vec<usize>, Vec<usize>) {
    let n = d.crossing_count();
    let mut label = vec![0; 4 * n];
    let mut order = vec![0; n];
    if n == 0 {
        return (label, order);
    }
    let start = d.canonical_start().expect("crossings present");
    let mut under_in_label = vec![0; n];
    for (i, p) in d.walk_from(start).into_iter().enumerate() {
        let q = d.link(p);
        label[p.index()] = i + 1;
        label[q.index()] = i + 1;
        if q.slot() == 0 {
            under_in_label[q.crossing()] = i + 1;
        }
    }
    order = (0..n).collect();
    order.sort_by_key(|&c| under_in_label[c]);
    (label, order)
}

pub fn emit_pd(d: &PlanarDiagram) -> String {
    let n = d.crossing_count();
    if n == 0 {
        return match d.outer() {
            Outer::Round { ccw: false } => "PD[] outer=L1".to_string(),
            _ => "PD[]".to_string(),
        };
    }
    let (label, order) = labelling(d);
    let body: Vec<String> = order
        .iter()
        .map(|&c| {
            let l: Vec<String> = (0..4).map(|s| label[Port::new(c, s).index()].to_string()).collect();
            format!("X[{}]", l.join(","))
        })
        .collect();
    let mut out = format!("PD[{}]", body.join(", "));
    // default: the face right of edge 1
    let faces = d.faces();
    let head1 = (0..4 * n as u32).map(Port).find(|&p| label[p.index()] == 1 && d.is_incoming(p)).expect("edge 1");
    let outer = faces.outer();
    if faces.face_of(head1) != outer.id {
        let best = outer
            .darts
            .iter()
            .map(|&p| {
                let EdgeSide { side, .. } = d.dart_to_edge_side(p);
                (label[p.index()], side == Side::Right)
            })
            .min()
            .expect("outer face has darts");
        out.push_str(&format!(" outer={}{}", if best.1 { 'R' } else { 'L' }, best.0));
    }
    out
}
