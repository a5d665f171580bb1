//! Reidemeister moves as port surgery on the combinatorial map.
//!
//! Sites are named with darts (see [`crate::diagram`]) and every move records a
//! hash of the exact diagram it was enumerated on; applying it anywhere else is
//! refused.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use bitflags::bitflags;
use serde::{Deserialize, Serialize};

use crate::diagram::{CanonicalKey, EdgeId, EdgeSide, Outer, PlanarDiagram, Polygon, Port, Side, Sign};
use crate::error::{DiagramError, MoveError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    Omega1Increase,
    Omega1Decrease,
    Omega2Increase,
    Omega2Decrease,
    Omega3,
}

impl MoveKind {
    pub fn flag(self) -> MoveKinds {
        match self {
            MoveKind::Omega1Increase => MoveKinds::OMEGA1_INCREASE,
            MoveKind::Omega1Decrease => MoveKinds::OMEGA1_DECREASE,
            MoveKind::Omega2Increase => MoveKinds::OMEGA2_INCREASE,
            MoveKind::Omega2Decrease => MoveKinds::OMEGA2_DECREASE,
            MoveKind::Omega3 => MoveKinds::OMEGA3,
        }
    }
    pub fn crossing_delta(self) -> i32 {
        match self {
            MoveKind::Omega1Increase => 1,
            MoveKind::Omega1Decrease => -1,
            MoveKind::Omega2Increase => 2,
            MoveKind::Omega2Decrease => -2,
            MoveKind::Omega3 => 0,
        }
    }
    pub fn is_omega1(self) -> bool {
        matches!(self, MoveKind::Omega1Increase | MoveKind::Omega1Decrease)
    }
    pub fn is_omega2(self) -> bool {
        matches!(self, MoveKind::Omega2Increase | MoveKind::Omega2Decrease)
    }
}

bitflags! {
    #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
    pub struct MoveKinds: u8 {
        const OMEGA1_INCREASE = 1;
        const OMEGA1_DECREASE = 1 << 1;
        const OMEGA2_INCREASE = 1 << 2;
        const OMEGA2_DECREASE = 1 << 3;
        const OMEGA3 = 1 << 4;
        const OMEGA1 = Self::OMEGA1_INCREASE.bits() | Self::OMEGA1_DECREASE.bits();
        const OMEGA2 = Self::OMEGA2_INCREASE.bits() | Self::OMEGA2_DECREASE.bits();
    }
}

impl MoveKinds {
    /// Parses a comma list such as `r1,r3` or `r2+,r1-`; `all` for everything.
    pub fn parse(s: &str) -> Result<MoveKinds, String> {
        let mut k = MoveKinds::empty();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            k |= match tok.to_ascii_lowercase().as_str() {
                "all" => MoveKinds::all(),
                "r1" => MoveKinds::OMEGA1,
                "r2" => MoveKinds::OMEGA2,
                "r3" => MoveKinds::OMEGA3,
                "r1+" => MoveKinds::OMEGA1_INCREASE,
                "r1-" => MoveKinds::OMEGA1_DECREASE,
                "r2+" => MoveKinds::OMEGA2_INCREASE,
                "r2-" => MoveKinds::OMEGA2_DECREASE,
                other => return Err(format!("unknown move kind {other:?}")),
            };
        }
        if k.is_empty() {
            return Err("no move kinds given".into());
        }
        Ok(k)
    }
}

/// Which piece of a split face stays unbounded after an Ω2 increase inside
/// the outer face: the piece following the source edge or the target edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SplitPart {
    Source,
    Target,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Site {
    /// Kink on the given side of an edge; `sign` is the new crossing's sign.
    Omega1Increase { at: EdgeSide, sign: Sign },
    /// Removes the kink whose 1-gon lies left of `face_dart`.
    Omega1Decrease { face_dart: Port },
    /// Pushes a finger of the source edge across the target edge through the
    /// face they share.
    Omega2Increase { source: Port, target: Port, source_over: bool, unbounded: SplitPart },
    /// Removes the 2-gon left of `face_dart`.
    Omega2Decrease { face_dart: Port },
    /// Triple-point move on the 3-gon left of `face_dart`; `slider` is the
    /// dart of the 3-gon edge whose strand slides.
    Omega3 { face_dart: Port, slider: Port },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReidemeisterMove {
    pub site: Site,
    /// Hash of the diagram the move belongs to.
    pub origin: u64,
}

impl ReidemeisterMove {
    pub fn kind(&self) -> MoveKind {
        match self.site {
            Site::Omega1Increase { .. } => MoveKind::Omega1Increase,
            Site::Omega1Decrease { .. } => MoveKind::Omega1Decrease,
            Site::Omega2Increase { .. } => MoveKind::Omega2Increase,
            Site::Omega2Decrease { .. } => MoveKind::Omega2Decrease,
            Site::Omega3 { .. } => MoveKind::Omega3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveSequence {
    pub start: CanonicalKey,
    pub moves: Vec<ReidemeisterMove>,
}

impl MoveSequence {
    pub fn len(&self) -> usize {
        self.moves.len()
    }
    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Applies every move in order starting from `d`.
    pub fn replay(&self, d: &PlanarDiagram) -> Result<PlanarDiagram, MoveError> {
        if d.canonical_key() != self.start {
            return Err(MoveError::InapplicableMove("sequence starts elsewhere".into()));
        }
        let mut cur = d.clone();
        for m in &self.moves {
            cur = apply_move(&cur, m)?;
        }
        Ok(cur)
    }
}

/// Hash of the concrete representation (crossing numbering included).
pub fn structure_hash(d: &PlanarDiagram) -> u64 {
    let mut h = DefaultHasher::new();
    d.hash(&mut h);
    h.finish()
}

/// Is the 3-gon non-cyclic, so that some strand can slide?
pub fn omega3_admissible(d: &PlanarDiagram, f: &Polygon) -> Result<bool, MoveError> {
    if f.degree() != 3 {
        return Err(MoveError::NotATriangle(f.id.0));
    }
    Ok(triangle_sliders(d, &f.darts).is_some())
}

/// The darts of a 3-gon's edges whose strand is on top or at the bottom at
/// both ends, or `None` when no Ω3 move exists there.
fn triangle_sliders(d: &PlanarDiagram, darts: &[Port]) -> Option<Vec<Port>> {
    let (a, b, c) = (darts[0].crossing(), darts[1].crossing(), darts[2].crossing());
    if a == b || b == c || a == c {
        return None;
    }
    let s: Vec<Port> = darts.iter().copied().filter(|&p| p.is_over() == d.link(p).is_over()).collect();
    if s.is_empty() {
        None
    } else {
        Some(s)
    }
}

pub fn enumerate_moves(d: &PlanarDiagram, allowed: MoveKinds) -> Vec<ReidemeisterMove> {
    let origin = structure_hash(d);
    let mut sites = Vec::new();
    let faces = d.faces();
    let n = d.crossing_count();
    if n > 0 {
        for f in faces.polygons.iter().filter(|f| !f.is_outer) {
            match f.degree() {
                1 if allowed.contains(MoveKinds::OMEGA1_DECREASE) => {
                    sites.push(Site::Omega1Decrease { face_dart: f.darts[0] });
                }
                2 if allowed.contains(MoveKinds::OMEGA2_DECREASE) => {
                    let p = f.darts[0];
                    if p.crossing() != f.darts[1].crossing() && p.is_over() == d.link(p).is_over() {
                        sites.push(Site::Omega2Decrease { face_dart: p });
                    }
                }
                3 if allowed.contains(MoveKinds::OMEGA3) => {
                    if let Some(sl) = triangle_sliders(d, &f.darts) {
                        for slider in sl {
                            sites.push(Site::Omega3 { face_dart: f.darts[0], slider });
                        }
                    }
                }
                _ => {}
            }
        }
    }
    if allowed.contains(MoveKinds::OMEGA1_INCREASE) {
        for e in d.edges() {
            for side in [Side::Left, Side::Right] {
                for sign in [Sign::Positive, Sign::Negative] {
                    sites.push(Site::Omega1Increase { at: EdgeSide { edge: e, side }, sign });
                }
            }
        }
    }
    if allowed.contains(MoveKinds::OMEGA2_INCREASE) && n > 0 {
        for f in &faces.polygons {
            let parts: &[SplitPart] = if f.is_outer { &[SplitPart::Target, SplitPart::Source] } else { &[SplitPart::Target] };
            for &s in &f.darts {
                for &t in &f.darts {
                    if d.edge_of(s) == d.edge_of(t) {
                        continue;
                    }
                    for source_over in [true, false] {
                        for &unbounded in parts {
                            sites.push(Site::Omega2Increase { source: s, target: t, source_over, unbounded });
                        }
                    }
                }
            }
        }
    }
    sites.into_iter().map(|site| ReidemeisterMove { site, origin }).collect()
}

pub fn apply_move(d: &PlanarDiagram, m: &ReidemeisterMove) -> Result<PlanarDiagram, MoveError> {
    if m.origin != structure_hash(d) {
        return Err(MoveError::InapplicableMove("move belongs to a different diagram".into()));
    }
    apply_site(d, &m.site)
}

/// Applies a site without the provenance check. Site rules are still
/// enforced.
pub fn apply_site(d: &PlanarDiagram, site: &Site) -> Result<PlanarDiagram, MoveError> {
    match *site {
        Site::Omega1Increase { at, sign } => omega1_increase(d, at, sign),
        Site::Omega1Decrease { face_dart } => omega1_decrease(d, face_dart),
        Site::Omega2Increase { source, target, source_over, unbounded } => {
            omega2_increase(d, source, target, source_over, unbounded)
        }
        Site::Omega2Decrease { face_dart } => omega2_decrease(d, face_dart),
        Site::Omega3 { face_dart, slider } => omega3(d, face_dart, slider),
    }
}

/// One Ω2 increase pushing edge side `e1` across edge side `e2`; `over_first`
/// puts `e1`'s strand on top. For the unbounded face the piece after `e2`
/// stays unbounded.
pub fn omega2_across_edges(
    d: &PlanarDiagram,
    e1: EdgeSide,
    e2: EdgeSide,
    over_first: bool,
) -> Result<PlanarDiagram, MoveError> {
    if e1.edge == e2.edge {
        return Err(MoveError::SameEdge);
    }
    let (Some(s), Some(t)) = (d.edge_side_to_dart(e1), d.edge_side_to_dart(e2)) else {
        return Err(MoveError::NotCofacial);
    };
    omega2_increase(d, s, t, over_first, SplitPart::Target)
}

fn check_dart(d: &PlanarDiagram, p: Port) -> Result<(), MoveError> {
    if p.index() >= d.port_count() {
        return Err(DiagramError::UnknownDart(p.0).into());
    }
    Ok(())
}

fn inapplicable(msg: &str) -> MoveError {
    MoveError::InapplicableMove(msg.to_string())
}

fn is_outer_dart(d: &PlanarDiagram, face_dart: Port) -> bool {
    match d.outer() {
        Outer::Dart(o) => {
            let mut p = face_dart;
            loop {
                if p == o {
                    return true;
                }
                p = d.face_next(p);
                if p == face_dart {
                    return false;
                }
            }
        }
        Outer::Round { .. } => false,
    }
}

fn face_darts(d: &PlanarDiagram, start: Port) -> Vec<Port> {
    let mut v = vec![start];
    let mut p = d.face_next(start);
    while p != start {
        v.push(p);
        p = d.face_next(p);
    }
    v
}

/// Working copy for port surgery.
struct Surgery {
    signs: Vec<Sign>,
    links: Vec<Port>,
    removed: Vec<bool>,
}

impl Surgery {
    fn new(d: &PlanarDiagram) -> Self {
        Surgery { signs: d.signs().to_vec(), links: d.links().to_vec(), removed: vec![false; d.crossing_count()] }
    }

    /// Appends a crossing described in local counterclockwise slots; returns
    /// the global port of each local slot.
    fn add_crossing(&mut self, under_in: usize, over_in: usize) -> [Port; 4] {
        let c = self.signs.len();
        let g = (over_in + 4 - under_in) % 4;
        debug_assert!(g == 1 || g == 3);
        self.signs.push(if g == 3 { Sign::Positive } else { Sign::Negative });
        self.removed.push(false);
        self.links.extend([Port(u32::MAX); 4]);
        let mut out = [Port(0); 4];
        for (k, o) in out.iter_mut().enumerate() {
            *o = Port::new(c, (k + 4 - under_in) % 4);
        }
        out
    }

    fn connect(&mut self, a: Port, b: Port) {
        self.links[a.index()] = b;
        self.links[b.index()] = a;
    }

    fn link(&self, p: Port) -> Port {
        self.links[p.index()]
    }

    /// Deletes crossings, letting both strands pass straight through.
    fn remove(&mut self, cs: &[usize]) -> Result<(), MoveError> {
        for &c in cs {
            self.removed[c] = true;
        }
        let total = self.links.len();
        for i in 0..total {
            let x = Port(i as u32);
            if self.removed[x.crossing()] {
                continue;
            }
            let mut cur = self.links[i];
            let mut guard = 0;
            while self.removed[cur.crossing()] {
                cur = self.links[cur.opposite().index()];
                guard += 1;
                if guard > total {
                    return Err(inapplicable("strand closes up inside removed crossings"));
                }
            }
            self.links[i] = cur;
        }
        Ok(())
    }

    fn survivors(&self) -> usize {
        self.removed.iter().filter(|r| !**r).count()
    }

    /// Compacts crossing numbers; `outer` is in pre-compaction numbering.
    fn finish(self, outer: Outer) -> Result<PlanarDiagram, MoveError> {
        let mut newidx = vec![usize::MAX; self.signs.len()];
        let mut signs = Vec::new();
        for (c, &r) in self.removed.iter().enumerate() {
            if !r {
                newidx[c] = signs.len();
                signs.push(self.signs[c]);
            }
        }
        let map = |p: Port| Port::new(newidx[p.crossing()], p.slot());
        let mut links = vec![Port(0); 4 * signs.len()];
        for (i, &q) in self.links.iter().enumerate() {
            let p = Port(i as u32);
            if !self.removed[p.crossing()] {
                links[map(p).index()] = map(q);
            }
        }
        let outer = match outer {
            Outer::Dart(o) => Outer::Dart(map(o)),
            r => r,
        };
        Ok(PlanarDiagram::new(signs, links, outer)?)
    }
}

fn omega1_increase(d: &PlanarDiagram, at: EdgeSide, sign: Sign) -> Result<PlanarDiagram, MoveError> {
    let n = d.crossing_count();
    let mut s = Surgery::new(d);
    // local slots: travel enters at 0, runs to 2, loops 2 -> 3, leaves via 1
    let (travel_along, dart) = if n == 0 {
        if at.edge != EdgeId(0) {
            return Err(DiagramError::UnknownEdge(at.edge.0).into());
        }
        (at.side == Side::Left, None)
    } else {
        let dart = d.edge_side_to_dart(at).ok_or(DiagramError::UnknownEdge(at.edge.0))?;
        (!d.is_incoming(dart), Some(dart))
    };
    let (a, b) = if travel_along { (0, 3) } else { (1, 2) };
    let mut k = s.add_crossing(a, b);
    if s.signs[n] != sign {
        s.signs.pop();
        s.removed.pop();
        s.links.truncate(4 * n);
        k = s.add_crossing(b, a);
    }
    debug_assert_eq!(s.signs[n], sign);
    s.connect(k[2], k[3]);
    let outer = match dart {
        None => {
            s.connect(k[1], k[0]);
            let outer_on_left_of_orientation = matches!(d.outer(), Outer::Round { ccw: false });
            let outer_left_of_travel = outer_on_left_of_orientation == travel_along;
            Outer::Dart(if outer_left_of_travel { k[1] } else { k[0] })
        }
        Some(p) => {
            let e = d.link(p);
            s.connect(p, k[0]);
            s.connect(k[1], e);
            d.outer()
        }
    };
    s.finish(outer)
}

fn omega1_decrease(d: &PlanarDiagram, face_dart: Port) -> Result<PlanarDiagram, MoveError> {
    check_dart(d, face_dart)?;
    if d.link(face_dart) != face_dart.next_ccw() {
        return Err(inapplicable("not a 1-gon"));
    }
    if is_outer_dart(d, face_dart) {
        return Err(inapplicable("1-gon is the unbounded face"));
    }
    // the 1-gon lies left of the loop as traversed from face_dart
    let delta = if d.is_incoming(face_dart) { -1 } else { 1 };
    let c = face_dart.crossing();
    remove_and_finish(d, &[c], &[face_dart, face_dart.opposite()], delta)
}

/// `merging` holds one dart of each face that becomes part of a single face
/// once the crossings go.
fn remove_and_finish(d: &PlanarDiagram, cs: &[usize], merging: &[Port], rotation_delta: i32) -> Result<PlanarDiagram, MoveError> {
    let mut s = Surgery::new(d);
    s.remove(cs)?;
    if s.survivors() == 0 {
        let rot = d.rotation_number() - rotation_delta;
        return s.finish(Outer::Round { ccw: rot == 1 });
    }
    let Outer::Dart(o) = d.outer() else { unreachable!() };
    let mut darts = face_darts(d, o);
    if merging.iter().any(|m| darts.contains(m)) {
        darts = merging.iter().flat_map(|&m| face_darts(d, m)).collect();
    }
    if let Some(&p) = darts.iter().find(|p| !cs.contains(&p.crossing())) {
        return s.finish(Outer::Dart(p));
    }
    // every corner of the unbounded face goes away: continue along a boundary
    // edge to a surviving crossing and take the rerouted dart arriving there
    let far = darts.iter().map(|&p| d.link(p)).find(|q| !cs.contains(&q.crossing()));
    match far {
        Some(q) => {
            let p = s.link(q);
            s.finish(Outer::Dart(p))
        }
        None => Err(inapplicable("unbounded face would vanish")),
    }
}

fn omega2_decrease(d: &PlanarDiagram, face_dart: Port) -> Result<PlanarDiagram, MoveError> {
    check_dart(d, face_dart)?;
    let p0 = face_dart;
    let q1 = d.link(p0);
    let p1 = q1.prev_ccw();
    if d.link(p1).prev_ccw() != p0 {
        return Err(inapplicable("not a 2-gon"));
    }
    if p0.crossing() == p1.crossing() {
        return Err(inapplicable("2-gon with a single vertex"));
    }
    if p0.is_over() != q1.is_over() {
        return Err(inapplicable("2-gon crossings alternate"));
    }
    if is_outer_dart(d, p0) {
        return Err(inapplicable("2-gon is the unbounded face"));
    }
    remove_and_finish(d, &[p0.crossing(), p1.crossing()], &[p0, p0.opposite(), p1.opposite()], 0)
}

fn omega2_increase(
    d: &PlanarDiagram,
    d1: Port,
    d2: Port,
    source_over: bool,
    unbounded: SplitPart,
) -> Result<PlanarDiagram, MoveError> {
    if d.crossing_count() == 0 {
        return Err(inapplicable("a lone circle has a single edge"));
    }
    check_dart(d, d1)?;
    check_dart(d, d2)?;
    if d.edge_of(d1) == d.edge_of(d2) {
        return Err(MoveError::SameEdge);
    }
    let darts = face_darts(d, d1);
    if !darts.contains(&d2) {
        return Err(MoveError::NotCofacial);
    }
    let outer_face = is_outer_dart(d, d1);
    let (b1, b2) = (d.link(d1), d.link(d2));
    let along1 = !d.is_incoming(d1);
    let along2 = !d.is_incoming(d2);
    // local slots: strand 1 uses 1 and 3, strand 2 uses 0 and 2
    let m_in1 = if along1 { 1 } else { 3 };
    let n_in1 = if along1 { 3 } else { 1 };
    let m_in2 = if along2 { 2 } else { 0 };
    let n_in2 = if along2 { 2 } else { 0 };
    let mut s = Surgery::new(d);
    let (m, n) = if source_over {
        (s.add_crossing(m_in2, m_in1), s.add_crossing(n_in2, n_in1))
    } else {
        (s.add_crossing(m_in1, m_in2), s.add_crossing(n_in1, n_in2))
    };
    s.connect(d1, m[1]);
    s.connect(n[1], b1);
    s.connect(d2, n[2]);
    s.connect(m[0], b2);
    s.connect(m[3], n[3]);
    s.connect(m[2], n[0]);
    let outer = if outer_face {
        Outer::Dart(match unbounded {
            SplitPart::Target => m[0],
            SplitPart::Source => n[1],
        })
    } else {
        d.outer()
    };
    s.finish(outer)
}

fn omega3(d: &PlanarDiagram, face_dart: Port, slider: Port) -> Result<PlanarDiagram, MoveError> {
    check_dart(d, face_dart)?;
    let darts = face_darts(d, face_dart);
    if darts.len() != 3 {
        return Err(MoveError::NotATriangle(face_dart.0 as usize));
    }
    let sliders = triangle_sliders(d, &darts).ok_or_else(|| inapplicable("3-gon is cyclic"))?;
    if !sliders.contains(&slider) {
        return Err(inapplicable("strand cannot slide"));
    }
    if is_outer_dart(d, face_dart) {
        return Err(inapplicable("3-gon is the unbounded face"));
    }
    let p = [darts[0], darts[1], darts[2]];
    let q = [p[0].next_ccw(), p[1].next_ccw(), p[2].next_ccw()];
    let opp = |x: Port| x.opposite();
    // new partner of each outward-facing port of the triangle
    let remap = |x: Port| -> Option<Port> {
        for i in 0..3 {
            if x == opp(q[(i + 1) % 3]) {
                return Some(p[i]);
            }
            if x == opp(p[i]) {
                return Some(q[(i + 1) % 3]);
            }
        }
        None
    };
    let mut s = Surgery::new(d);
    let outward: Vec<Port> = (0..3).flat_map(|i| [opp(p[i]), opp(q[i])]).collect();
    let mut pairs = Vec::new();
    for &x in &outward {
        let t = d.link(x);
        let nx = remap(x).expect("outward port");
        let nt = remap(t).unwrap_or(t);
        pairs.push((nx, nt));
    }
    for (a, b) in pairs {
        s.connect(a, b);
    }
    for i in 0..3 {
        s.connect(opp(p[i]), opp(q[(i + 1) % 3]));
    }
    let outer = match d.outer() {
        Outer::Dart(o) => {
            let tri: [usize; 3] = [p[0].crossing(), p[1].crossing(), p[2].crossing()];
            let od = face_darts(d, o);
            if let Some(&x) = od.iter().find(|x| !tri.contains(&x.crossing())) {
                Outer::Dart(x)
            } else {
                let mut found = None;
                for &x in &od {
                    for i in 0..3 {
                        if x == q[i] {
                            found = Some(p[(i + 1) % 3]);
                        } else if x == opp(p[i]) {
                            found = Some(q[(i + 1) % 3]);
                        } else if x == opp(q[i]) {
                            found = Some(p[(i + 2) % 3]);
                        }
                    }
                    if found.is_some() {
                        break;
                    }
                }
                Outer::Dart(found.ok_or_else(|| inapplicable("3-gon is the unbounded face"))?)
            }
        }
        r => r,
    };
    s.finish(outer)
}
