//! SVG and Graphviz output.
//!
//! Planar diagrams are laid out by a Tutte (barycentric) embedding of the
//! second barycentric subdivision of the map. That subdivision is a simple
//! triangulation of the sphere, hence 3-connected, so the embedding is a
//! planar straight-line drawing; each knot edge becomes a four-segment path
//! inside it.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::diagram::{Outer, PlanarDiagram, Port, Sign};
use crate::error::RenderError;
use crate::gauss::GaussDiagram;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Svg,
    Dot,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "svg" => Ok(Format::Svg),
            "dot" => Ok(Format::Dot),
            other => Err(format!("unknown render format {other:?}")),
        }
    }
}

const SIZE: f64 = 600.0;

pub fn render_gauss(g: &GaussDiagram, format: Format) -> String {
    match format {
        Format::Svg => gauss_svg(g),
        Format::Dot => gauss_dot(g),
    }
}

pub fn render_planar(d: &PlanarDiagram, format: Format) -> Result<String, RenderError> {
    let layout = Layout::new(d)?;
    Ok(match format {
        Format::Svg => planar_svg(d, &layout),
        Format::Dot => planar_dot(d, &layout),
    })
}

fn slot_point(slot: usize, m: usize, r: f64) -> (f64, f64) {
    // slot 0 at the top, increasing clockwise as read on the page
    let a = std::f64::consts::TAU * slot as f64 / m as f64;
    (SIZE / 2.0 + r * a.sin(), SIZE / 2.0 - r * a.cos())
}

fn gauss_svg(g: &GaussDiagram) -> String {
    let r = SIZE * 0.4;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">"#);
    let _ = writeln!(
        s,
        r#"<defs><marker id="head" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="8" markerHeight="8" orient="auto"><path d="M0,0 L10,5 L0,10 z"/></marker></defs>"#
    );
    let _ = writeln!(s, r#"<circle cx="{0}" cy="{0}" r="{r}" fill="none" stroke="black" stroke-width="2"/>"#, SIZE / 2.0);
    let m = g.slot_count();
    for (i, a) in g.arrows().iter().enumerate() {
        let (x1, y1) = slot_point(a.tail, m, r);
        let (x2, y2) = slot_point(a.head, m, r);
        let color = if a.sign == Sign::Positive { "#1f5fbf" } else { "#bf1f1f" };
        let _ = writeln!(
            s,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{color}" stroke-width="1.5" marker-end="url(#head)"/>"#
        );
        let (lx, ly) = ((x1 + x2) / 2.0, (y1 + y2) / 2.0);
        let _ = writeln!(
            s,
            r#"<text x="{lx:.2}" y="{ly:.2}" font-size="14" fill="{color}">{}{}</text>"#,
            i + 1,
            a.sign.symbol()
        );
    }
    s.push_str("</svg>\n");
    s
}

fn gauss_dot(g: &GaussDiagram) -> String {
    let m = g.slot_count();
    let mut s = String::from("digraph gauss {\n  node [shape=point];\n");
    for k in 0..m {
        let (x, y) = slot_point(k, m, SIZE * 0.4);
        let _ = writeln!(s, "  s{k} [pos=\"{:.2},{:.2}!\"];", x, SIZE - y);
    }
    for k in 0..m {
        let _ = writeln!(s, "  s{k} -> s{} [arrowhead=none, color=gray];", (k + 1) % m);
    }
    for a in g.arrows() {
        let _ = writeln!(s, "  s{} -> s{} [label=\"{}\"];", a.tail, a.head, a.sign.symbol());
    }
    s.push_str("}\n");
    s
}

/// Vertex positions of the subdivided map.
struct Layout {
    pos: Vec<(f64, f64)>,
    n: usize,
    /// position index of the middle of half-edge `p` (crossing to edge midpoint)
    half_mid: Vec<usize>,
    /// position index of the midpoint of the edge whose tail is port `p`
    edge_mid: Vec<usize>,
}

impl Layout {
    fn new(d: &PlanarDiagram) -> Result<Layout, RenderError> {
        let n = d.crossing_count();
        if n == 0 {
            return Ok(Layout { pos: vec![], n, half_mid: vec![], edge_mid: vec![] });
        }
        let m = 4 * n;
        let faces = d.faces();
        let nf = faces.len();
        let tail = |p: Port| if d.is_incoming(p) { d.link(p) } else { p };
        // first subdivision: vertices are crossings, edges (by tail port), faces
        let edge_vertex = |p: Port| n + tail(p).index();
        let face_vertex = |f: usize| n + m + f;
        let v1 = n + m + nf;
        // sides: half-edges [0, m), edge-face segments [m, 2m), corners [2m, 3m)
        let mut tris: Vec<([usize; 3], [usize; 3])> = Vec::with_capacity(2 * m);
        for i in 0..m {
            let p = Port(i as u32);
            let left = faces.face_of(p).0;
            let right = faces.face_of(d.link(p)).0;
            tris.push((
                [p.crossing(), edge_vertex(p), face_vertex(left)],
                [p.index(), m + p.index(), 2 * m + p.index()],
            ));
            tris.push((
                [p.crossing(), edge_vertex(p), face_vertex(right)],
                [p.index(), m + d.link(p).index(), 2 * m + p.prev_ccw().index()],
            ));
        }
        // second subdivision: old vertices, side midpoints, triangle centres
        let side_vertex = |s: usize| v1 + s;
        let centre = |t: usize| v1 + 3 * m + t;
        let total = v1 + 3 * m + tris.len();
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); total];
        let mut add = |a: usize, b: usize| {
            adj[a].insert(b);
            adj[b].insert(a);
        };
        for (t, (vs, ss)) in tris.iter().enumerate() {
            let c = centre(t);
            // side k joins vertices k and k+1 of the triangle
            for k in 0..3 {
                let s = side_vertex(ss[k]);
                add(vs[k], s);
                add(vs[(k + 1) % 3], s);
                add(s, c);
                add(vs[k], c);
            }
        }
        // pin a small triangle inside the unbounded face of the knot
        let outer_dart = match d.outer() {
            Outer::Dart(p) => p,
            Outer::Round { .. } => unreachable!("crossings present"),
        };
        let fixed = [face_vertex(faces.face_of(outer_dart).0), side_vertex(2 * m + outer_dart.index()), centre(2 * outer_dart.index())];
        for w in fixed.windows(2) {
            if !adj[w[0]].contains(&w[1]) {
                return Err(RenderError::LayoutFailure("pinned triangle is not a face".into()));
            }
        }
        let pos = tutte(&adj, &fixed)?;
        let half_mid = (0..m).map(side_vertex).collect();
        let edge_mid = (0..m).map(|i| n + i).collect();
        Ok(Layout { pos, n, half_mid, edge_mid })
    }

    /// Polyline of the edge leaving through `p` with its end trimmed at
    /// under-crossings.
    fn edge_path(&self, d: &PlanarDiagram, p: Port) -> Vec<(f64, f64)> {
        let q = d.link(p);
        let mut pts = vec![
            self.pos[p.crossing()],
            self.pos[self.half_mid[p.index()]],
            self.pos[self.edge_mid[p.index()]],
            self.pos[self.half_mid[q.index()]],
            self.pos[q.crossing()],
        ];
        let trim = |a: (f64, f64), b: (f64, f64)| (a.0 + 0.35 * (b.0 - a.0), a.1 + 0.35 * (b.1 - a.1));
        if !p.is_over() {
            pts[0] = trim(pts[0], pts[1]);
        }
        if !q.is_over() {
            pts[4] = trim(pts[4], pts[3]);
        }
        pts
    }
}

/// Barycentric embedding with `fixed` pinned to a triangle, solved by
/// conjugate gradients on the free vertices.
fn tutte(adj: &[BTreeSet<usize>], fixed: &[usize; 3]) -> Result<Vec<(f64, f64)>, RenderError> {
    let nv = adj.len();
    let mut pos = vec![(0.0, 0.0); nv];
    let corners = [(SIZE / 2.0, 10.0), (10.0, SIZE - 10.0), (SIZE - 10.0, SIZE - 10.0)];
    let mut free_index = vec![usize::MAX; nv];
    let mut free = Vec::new();
    for v in 0..nv {
        if let Some(k) = fixed.iter().position(|&f| f == v) {
            pos[v] = corners[k];
        } else {
            free_index[v] = free.len();
            free.push(v);
        }
    }
    for axis in 0..2 {
        let coord = |p: (f64, f64)| if axis == 0 { p.0 } else { p.1 };
        let k = free.len();
        let mut b = vec![0.0; k];
        for (i, &v) in free.iter().enumerate() {
            for &w in &adj[v] {
                if free_index[w] == usize::MAX {
                    b[i] += coord(pos[w]);
                }
            }
        }
        let apply = |x: &[f64], out: &mut [f64]| {
            for (i, &v) in free.iter().enumerate() {
                let mut s = adj[v].len() as f64 * x[i];
                for &w in &adj[v] {
                    let j = free_index[w];
                    if j != usize::MAX {
                        s -= x[j];
                    }
                }
                out[i] = s;
            }
        };
        let mut x = vec![SIZE / 2.0; k];
        let mut ax = vec![0.0; k];
        apply(&x, &mut ax);
        let mut r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let mut p = r.clone();
        let mut rr: f64 = r.iter().map(|v| v * v).sum();
        let mut ap = vec![0.0; k];
        for _ in 0..10 * k + 100 {
            if rr < 1e-18 {
                break;
            }
            apply(&p, &mut ap);
            let alpha = rr / p.iter().zip(&ap).map(|(a, b)| a * b).sum::<f64>();
            for i in 0..k {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            let rr2: f64 = r.iter().map(|v| v * v).sum();
            for i in 0..k {
                p[i] = r[i] + rr2 / rr * p[i];
            }
            rr = rr2;
        }
        if !rr.is_finite() || rr > 1e-6 {
            return Err(RenderError::LayoutFailure(format!("solver residual {rr}")));
        }
        for (i, &v) in free.iter().enumerate() {
            if axis == 0 {
                pos[v].0 = x[i];
            } else {
                pos[v].1 = x[i];
            }
        }
    }
    Ok(pos)
}

fn planar_svg(d: &PlanarDiagram, layout: &Layout) -> String {
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">"#);
    if layout.n == 0 {
        let _ = writeln!(s, r#"<circle cx="{0}" cy="{0}" r="{1}" fill="none" stroke="black" stroke-width="2"/>"#, SIZE / 2.0, SIZE * 0.4);
    }
    for e in d.edges() {
        if layout.n == 0 {
            break;
        }
        let pts = layout.edge_path(d, Port(e.0));
        let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="black" stroke-width="2" stroke-linejoin="round"/>"#,
            path.join(" ")
        );
    }
    for c in 0..layout.n {
        let (x, y) = layout.pos[c];
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="9" fill="gray">{}{}</text>"#, x + 3.0, y - 3.0, c, d.sign(c).symbol());
    }
    s.push_str("</svg>\n");
    s
}

fn planar_dot(d: &PlanarDiagram, layout: &Layout) -> String {
    let mut s = String::from("digraph knot {\n  node [shape=circle, fontsize=9];\n");
    for c in 0..layout.n {
        let (x, y) = layout.pos[c];
        let _ = writeln!(s, "  c{c} [label=\"{c}{}\", pos=\"{:.2},{:.2}!\"];", d.sign(c).symbol(), x, SIZE - y);
    }
    if layout.n > 0 {
        for e in d.edges() {
            let p = Port(e.0);
            let q = d.link(p);
            let _ = writeln!(s, "  c{} -> c{} [taillabel=\"{}\", headlabel=\"{}\"];", p.crossing(), q.crossing(), p.slot(), q.slot());
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{figure2, figure6_eight, trefoil};

    #[test]
    fn empty_gauss_is_a_circle() {
        let s = render_gauss(&GaussDiagram::empty(), Format::Svg);
        assert!(s.contains("<circle"));
        assert!(!s.contains("<line"));
    }

    #[test]
    fn figure6_has_four_signed_chords() {
        let s = render_gauss(&figure6_eight(), Format::Svg);
        assert_eq!(s.matches("<line").count(), 4);
        assert_eq!(s.matches("+</text>").count(), 2);
        assert_eq!(s.matches("-</text>").count(), 2);
    }

    #[test]
    fn deterministic() {
        for d in [trefoil(), figure2(), PlanarDiagram::round_unknot()] {
            for f in [Format::Svg, Format::Dot] {
                assert_eq!(render_planar(&d, f).unwrap(), render_planar(&d, f).unwrap());
            }
        }
    }

    fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    }

    fn segments_cross(a: (f64, f64), b: (f64, f64), c: (f64, f64), e: (f64, f64)) -> bool {
        let d1 = cross(c, e, a);
        let d2 = cross(c, e, b);
        let d3 = cross(a, b, c);
        let d4 = cross(a, b, e);
        d1 * d2 < -1e-9 && d3 * d4 < -1e-9
    }

    #[test]
    fn layout_is_planar() {
        for d in [trefoil(), figure2()] {
            let l = Layout::new(&d).unwrap();
            let mut segs = Vec::new();
            for e in d.edges() {
                let p = Port(e.0);
                let q = d.link(p);
                let pts = [
                    l.pos[p.crossing()],
                    l.pos[l.half_mid[p.index()]],
                    l.pos[l.edge_mid[p.index()]],
                    l.pos[l.half_mid[q.index()]],
                    l.pos[q.crossing()],
                ];
                for w in pts.windows(2) {
                    segs.push((w[0], w[1]));
                }
            }
            for i in 0..segs.len() {
                for j in i + 1..segs.len() {
                    assert!(!segments_cross(segs[i].0, segs[i].1, segs[j].0, segs[j].1));
                }
            }
        }
    }
}
