//! Built-in diagrams and the generators for dependent diagram pairs.

use serde::{Deserialize, Serialize};

use crate::diagram::{EdgeId, EdgeSide, Outer, PlanarDiagram, Port, Side, Sign};
use crate::error::ConstructionError;
use crate::gauss::{count_isolated_copies, reconstruct_planar, Arrow, ArrowPattern, GaussDiagram};
use crate::io::pd::from_tuples;
use crate::moves::{omega2_across_edges, Site};

/// Closure of the 3-braid `(s1 s2^-1)^4`: alternating, every face a 3-gon or
/// a 4-gon.
const FIGURE1_PD: [[usize; 4]; 8] = [
    [11, 16, 12, 1],
    [1, 7, 2, 6],
    [13, 3, 14, 2],
    [3, 8, 4, 9],
    [15, 4, 16, 5],
    [5, 11, 6, 10],
    [7, 12, 8, 13],
    [9, 15, 10, 14],
];

/// An unknot with no face of degree below three and no slidable 3-gon.
const FIGURE2_PD: [[usize; 4]; 18] = [
    [25, 36, 26, 1],
    [11, 25, 12, 24],
    [10, 16, 11, 15],
    [16, 29, 17, 30],
    [35, 31, 36, 30],
    [23, 3, 24, 2],
    [13, 22, 14, 23],
    [3, 14, 4, 15],
    [8, 17, 9, 18],
    [28, 9, 29, 10],
    [18, 33, 19, 34],
    [34, 7, 35, 8],
    [32, 6, 33, 5],
    [6, 20, 7, 19],
    [27, 5, 28, 4],
    [26, 21, 27, 22],
    [20, 32, 21, 31],
    [1, 13, 2, 12],
];

/// The edge of figure 2 that receives a tangle in the pair constructions.
pub const FIGURE2_TANGLE_EDGE: usize = 0;

const TREFOIL_PD: [[usize; 4]; 3] = [[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]];
const FIGURE_EIGHT_PD: [[usize; 4]; 4] = [[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]];

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 9] = [
    "figure1",
    "figure2",
    "figure5-pattern",
    "figure6-eight",
    "unknot",
    "trefoil",
    "figure-eight",
    "granny",
    "square",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Planar(PlanarDiagram),
    Gauss(GaussDiagram),
    Pattern(ArrowPattern),
}

pub fn builtin(name: &str) -> Result<Builtin, ConstructionError> {
    Ok(match name {
        "figure1" => Builtin::Planar(figure1()),
        "figure2" => Builtin::Planar(figure2()),
        "figure5-pattern" => Builtin::Pattern(figure5_pattern()),
        "figure6-eight" => Builtin::Gauss(figure6_eight()),
        "unknot" => Builtin::Planar(PlanarDiagram::round_unknot()),
        "trefoil" => Builtin::Planar(trefoil()),
        "figure-eight" => Builtin::Planar(figure_eight()),
        "granny" => Builtin::Planar(granny()),
        "square" => Builtin::Planar(square()),
        other => return Err(ConstructionError::UnknownBuiltin(other.to_string())),
    })
}

/// A builtin as a planar diagram; Gauss diagrams are reconstructed.
pub fn builtin_planar(name: &str) -> Result<PlanarDiagram, ConstructionError> {
    match builtin(name)? {
        Builtin::Planar(d) => Ok(d),
        Builtin::Gauss(g) => Ok(reconstruct_planar(&g)?),
        Builtin::Pattern(_) => Err(ConstructionError::UnknownBuiltin(format!("{name} is not a diagram"))),
    }
}

fn from_table(t: &[[usize; 4]]) -> PlanarDiagram {
    from_tuples(t, None).expect("built-in PD table is valid")
}

pub fn figure1() -> PlanarDiagram {
    from_table(&FIGURE1_PD)
}

pub fn figure2() -> PlanarDiagram {
    from_table(&FIGURE2_PD)
}

/// Four arrows on eight slots, signs free.
pub fn figure5_pattern() -> ArrowPattern {
    ArrowPattern::new(vec![(3, 0), (1, 6), (5, 2), (7, 4)]).expect("valid pattern")
}

pub fn figure6_eight() -> GaussDiagram {
    let a = |tail, head, s: i32| Arrow { tail, head, sign: Sign::from_value(s).expect("unit sign") };
    GaussDiagram::new(vec![a(3, 0, 1), a(1, 6, -1), a(5, 2, -1), a(7, 4, 1)]).expect("valid Gauss diagram")
}

pub fn trefoil() -> PlanarDiagram {
    from_table(&TREFOIL_PD)
}

pub fn figure_eight() -> PlanarDiagram {
    from_table(&FIGURE_EIGHT_PD)
}

pub fn granny() -> PlanarDiagram {
    let t = trefoil();
    connected_sum(&t, splice_edge(&t), &t, splice_edge(&t)).expect("trefoil sum")
}

pub fn square() -> PlanarDiagram {
    let t = trefoil();
    let m = t.mirror();
    connected_sum(&m, splice_edge(&m), &t, splice_edge(&t)).expect("trefoil sum")
}

/// The smallest edge with the unbounded face on its right, or on its left if
/// no edge has it on the right. Cutting or splicing at a right-side edge keeps
/// the unbounded faces of both pieces together.
pub fn splice_edge(d: &PlanarDiagram) -> EdgeId {
    match d.outer() {
        Outer::Round { .. } => EdgeId(0),
        Outer::Dart(o) => {
            let faces = d.faces();
            let outer = faces.outer().id;
            d.edges()
                .into_iter()
                .find(|e| faces.face_of(d.link(Port(e.0))) == outer)
                .unwrap_or_else(|| d.edge_of(o))
        }
    }
}

/// A single-stranded tangle: a diagram opened at one edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tangle {
    diagram: PlanarDiagram,
    cut: EdgeId,
    pub label: Option<String>,
}

impl Tangle {
    /// The straight strand.
    pub fn trivial() -> Tangle {
        Tangle { diagram: PlanarDiagram::round_unknot(), cut: EdgeId(0), label: Some("unknot".into()) }
    }
    pub fn crossing_count(&self) -> usize {
        self.diagram.crossing_count()
    }
    pub fn cut(&self) -> EdgeId {
        self.cut
    }
    /// Joins the two loose ends again.
    pub fn close(&self) -> PlanarDiagram {
        self.diagram.clone()
    }
}

pub fn cut_to_tangle(d: &PlanarDiagram, e: EdgeId) -> Result<Tangle, ConstructionError> {
    if !d.has_edge(e) {
        return Err(crate::error::DiagramError::UnknownEdge(e.0).into());
    }
    Ok(Tangle { diagram: d.clone(), cut: e, label: None })
}

/// Splices `t` into edge `e` of `d`. The crossings of `d` keep their
/// numbers, the tangle's follow, and the unbounded face of `d` stays
/// unbounded.
pub fn replace_edge_with_tangle(d: &PlanarDiagram, e: EdgeId, t: &Tangle) -> Result<PlanarDiagram, ConstructionError> {
    if !d.has_edge(e) {
        return Err(crate::error::DiagramError::UnknownEdge(e.0).into());
    }
    if !t.diagram.has_edge(t.cut) {
        return Err(ConstructionError::InvalidTangle(format!("cut edge {} is missing", t.cut.0)));
    }
    let (nb, na) = (d.crossing_count(), t.diagram.crossing_count());
    if na == 0 {
        return Ok(d.clone());
    }
    if nb == 0 {
        // the strand closes up through one side of the tangle
        let side = match d.outer() {
            Outer::Round { ccw: true } => Side::Right,
            _ => Side::Left,
        };
        let dart = t.diagram.edge_side_to_dart(EdgeSide { edge: t.cut, side }).expect("edge exists");
        let face = t.diagram.faces().face_of(dart);
        return Ok(t.diagram.with_outer_face(face)?);
    }
    let shift = |p: Port| Port::new(p.crossing() + nb, p.slot());
    let mut signs: Vec<Sign> = d.signs().to_vec();
    signs.extend_from_slice(t.diagram.signs());
    let mut links: Vec<Port> = d.links().to_vec();
    links.extend(t.diagram.links().iter().map(|&p| shift(p)));
    let (xb, yb) = (Port(e.0), d.link(Port(e.0)));
    let (xa, ya) = (shift(Port(t.cut.0)), shift(t.diagram.link(Port(t.cut.0))));
    links[xb.index()] = ya;
    links[ya.index()] = xb;
    links[xa.index()] = yb;
    links[yb.index()] = xa;
    Ok(PlanarDiagram::new(signs, links, d.outer())?)
}

/// `a # b`: `b` with edge `edge_b` replaced by `a` cut open at `edge_a`.
pub fn connected_sum(
    a: &PlanarDiagram,
    edge_a: EdgeId,
    b: &PlanarDiagram,
    edge_b: EdgeId,
) -> Result<PlanarDiagram, ConstructionError> {
    replace_edge_with_tangle(b, edge_b, &cut_to_tangle(a, edge_a)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dependence {
    /// No connecting sequence avoids Ω2.
    Omega2,
    /// No connecting sequence avoids any one of Ω1, Ω2, Ω3.
    AllMoves,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// The single Ω2 increase turning the first diagram into the second, and
    /// the isolated-copy counts before and after.
    Omega2 { site: Site, copies_before: usize, copies_after: usize },
    /// The summands: first = f # e, second = f' # e'.
    Summands { f: PlanarDiagram, f_prime: PlanarDiagram, e: PlanarDiagram, e_prime: PlanarDiagram },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramPair {
    pub first: PlanarDiagram,
    pub second: PlanarDiagram,
    pub dependence: Dependence,
    pub witness: Witness,
}

/// `F` is figure 2 with one edge replaced by `k`; `F'` is one Ω2 increase
/// across two core edges that breaks an isolated copy of figure 2's Gauss
/// diagram.
pub fn make_omega2_dependent_pair(k: &PlanarDiagram) -> Result<DiagramPair, ConstructionError> {
    let core = figure2();
    let n_core = core.crossing_count();
    let core_edge = core.edges()[FIGURE2_TANGLE_EDGE];
    let f = replace_edge_with_tangle(&core, core_edge, &cut_to_tangle(k, splice_edge(k))?)?;
    let g_core = GaussDiagram::from_planar(&core);
    let before = count_isolated_copies(&GaussDiagram::from_planar(&f), &g_core);
    let is_core_edge = |p: Port| p.crossing() < n_core && f.link(p).crossing() < n_core;
    let faces = f.faces();
    for s in 0..f.port_count() as u32 {
        let s = Port(s);
        if !is_core_edge(s) {
            continue;
        }
        let poly = faces.get(faces.face_of(s));
        let mut targets: Vec<Port> = poly.darts.iter().copied().filter(|&t| is_core_edge(t)).collect();
        targets.sort_unstable();
        for t in targets {
            let (e1, e2) = (f.dart_to_edge_side(s), f.dart_to_edge_side(t));
            if e1.edge == e2.edge {
                continue;
            }
            let f2 = omega2_across_edges(&f, e1, e2, true)?;
            let after = count_isolated_copies(&GaussDiagram::from_planar(&f2), &g_core);
            if after < before {
                let site = Site::Omega2Increase {
                    source: s,
                    target: t,
                    source_over: true,
                    unbounded: crate::moves::SplitPart::Target,
                };
                return Ok(DiagramPair {
                    first: f,
                    second: f2,
                    dependence: Dependence::Omega2,
                    witness: Witness::Omega2 { site, copies_before: before, copies_after: after },
                });
            }
        }
    }
    Err(ConstructionError::NoCofacialCorePair)
}

/// The figure-eight diagram and its mirror, both from figure 6. The two share
/// one curve on the sphere, so the mirror takes the first unbounded face (in
/// the default order) that gives it a different rotation number.
pub fn figure_eight_pair() -> Result<(PlanarDiagram, PlanarDiagram), ConstructionError> {
    let g = figure6_eight();
    let e = reconstruct_planar(&g)?;
    let m = reconstruct_planar(&g.mirror())?;
    let rot = e.rotation_number();
    let faces = m.faces();
    let mut order: Vec<_> = faces.polygons.iter().collect();
    order.sort_by(|a, b| b.degree().cmp(&a.degree()).then_with(|| a.darts.iter().min().cmp(&b.darts.iter().min())));
    for f in order {
        let cand = m.with_outer_face(f.id)?;
        if cand.rotation_number() != rot {
            return Ok((e, cand));
        }
    }
    Err(ConstructionError::InvalidTangle("every unbounded face gives the same rotation number".into()))
}

/// `(F # E, F' # E')` with `(F, F')` from [`make_omega2_dependent_pair`] and
/// `(E, E')` from [`figure_eight_pair`].
pub fn make_all_dependent_pair(k: &PlanarDiagram) -> Result<DiagramPair, ConstructionError> {
    let pair = make_omega2_dependent_pair(k)?;
    let (f, f2) = (pair.first, pair.second);
    let (e, e2) = figure_eight_pair()?;
    // an edge of F that the Ω2 move left alone, so both sums use the same spot
    let faces = f.faces();
    let outer = faces.outer().id;
    let edge = f
        .edges()
        .into_iter()
        .find(|x| {
            let p = Port(x.0);
            f2.has_edge(*x) && f2.link(p) == f.link(p) && faces.face_of(f.link(p)) == outer
        })
        .ok_or(ConstructionError::NoCofacialCorePair)?;
    let first = connected_sum(&e, splice_edge(&e), &f, edge)?;
    let second = connected_sum(&e2, splice_edge(&e2), &f2, edge)?;
    Ok(DiagramPair {
        first,
        second,
        dependence: Dependence::AllMoves,
        witness: Witness::Summands { f, f_prime: f2, e, e_prime: e2 },
    })
}
