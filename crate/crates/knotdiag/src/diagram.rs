//! Oriented knot diagrams stored as decorated 4-valent combinatorial maps.
//!
//! A crossing owns four ports numbered counterclockwise. Crossings are kept in
//! a normal form where slot 0 is the port through which the under-strand
//! enters, so the under-strand always runs `0 -> 2` and the over-strand uses
//! the odd slots. Port `p` lives at crossing `p / 4`, slot `p % 4`.
//!
//! A *dart* is a port read as "leave the crossing through this port"; the face
//! of a dart is the one on its left. Every port is a dart, so faces are the
//! orbits of `p -> prev_ccw(link(p))`.

use std::collections::BTreeMap;
use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::DiagramError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Port(pub u32);

impl Port {
    pub const fn new(crossing: usize, slot: usize) -> Port {
        Port((4 * crossing + slot) as u32)
    }
    pub const fn index(self) -> usize {
        self.0 as usize
    }
    pub const fn crossing(self) -> usize {
        (self.0 >> 2) as usize
    }
    pub const fn slot(self) -> usize {
        (self.0 & 3) as usize
    }
    pub const fn next_ccw(self) -> Port {
        Port((self.0 & !3) | ((self.0 + 1) & 3))
    }
    pub const fn prev_ccw(self) -> Port {
        Port((self.0 & !3) | ((self.0 + 3) & 3))
    }
    /// The port across the crossing on the same strand.
    pub const fn opposite(self) -> Port {
        Port((self.0 & !3) | ((self.0 + 2) & 3))
    }
    /// Odd slots carry the over-strand.
    pub const fn is_over(self) -> bool {
        self.0 & 1 == 1
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.crossing(), self.slot())
    }
}

/// Crossing sign under the right-handed frame rule: positive when
/// (over direction, under direction) is a positively oriented frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
    pub fn from_value(v: i32) -> Option<Sign> {
        match v {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }
    /// Sign of a crossing whose under-strand enters at slot `under_in` and
    /// whose over-strand leaves at slot `over_out` (slots counterclockwise).
    pub fn from_slots(under_in: usize, over_out: usize) -> Sign {
        if over_out % 4 == (under_in + 1) % 4 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// Which side of an oriented edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// An edge is named by its tail (outgoing) port. The crossingless circle has
/// the single edge `EdgeId(0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeSide {
    pub edge: EdgeId,
    pub side: Side,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceId(pub usize);

/// Marker for the unbounded face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outer {
    /// The unbounded face lies to the left of this dart.
    Dart(Port),
    /// Crossingless circle, counterclockwise or not.
    Round { ccw: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Violation {
    LengthMismatch { signs: usize, ports: usize },
    PortOutOfRange { port: u32 },
    UnpairedPort { port: u32 },
    NotInvolution { port: u32 },
    /// An edge joining two incoming or two outgoing ports.
    OrientationClash { port: u32 },
    MultipleComponents { components: usize },
    EulerMismatch { faces: usize, expected: usize },
    OuterFaceMissing,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LengthMismatch { signs, ports } => {
                write!(f, "{signs} crossings but {ports} ports")
            }
            Violation::PortOutOfRange { port } => write!(f, "port {port} links out of range"),
            Violation::UnpairedPort { port } => {
                write!(f, "unpaired port {} ({})", port, Port(*port))
            }
            Violation::NotInvolution { port } => {
                write!(f, "edge pairing is not an involution at port {port}")
            }
            Violation::OrientationClash { port } => {
                write!(f, "edge at port {port} joins two heads or two tails")
            }
            Violation::MultipleComponents { components } => {
                write!(f, "multiple components ({components})")
            }
            Violation::EulerMismatch { faces, expected } => {
                write!(f, "{faces} faces, expected {expected}")
            }
            Violation::OuterFaceMissing => write!(f, "outer face marker refers to no face"),
        }
    }
}

/// A face of the diagram, listed by its darts in boundary order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    pub id: FaceId,
    pub darts: Vec<Port>,
    pub is_outer: bool,
}

impl Polygon {
    pub fn degree(&self) -> usize {
        self.darts.len()
    }

    /// Corner crossings, with multiplicity.
    pub fn vertices(&self) -> Vec<usize> {
        self.darts.iter().map(|p| p.crossing()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Faces {
    face_of: Vec<usize>,
    pub polygons: Vec<Polygon>,
}

impl Faces {
    pub fn face_of(&self, dart: Port) -> FaceId {
        FaceId(self.face_of[dart.index()])
    }
    pub fn get(&self, id: FaceId) -> &Polygon {
        &self.polygons[id.0]
    }
    pub fn len(&self) -> usize {
        self.polygons.len()
    }
    pub fn is_empty(&self) -> bool {
        self.polygons.is_empty()
    }
    pub fn outer(&self) -> &Polygon {
        self.polygons.iter().find(|p| p.is_outer).expect("outer face")
    }
}

/// Opaque key: equal iff the diagrams are isomorphic as oriented, decorated,
/// rooted maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u32>);

impl CanonicalKey {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// 128-bit digest used where storing whole keys is too expensive.
    pub fn fingerprint(&self) -> u128 {
        let mut a = DefaultHasher::new();
        self.0.hash(&mut a);
        let mut b = DefaultHasher::new();
        0x9e37_79b9_7f4a_7c15u64.hash(&mut b);
        self.0.hash(&mut b);
        ((a.finish() as u128) << 64) | b.finish() as u128
    }
}

/// A face that blocks the rigidity conditions: too few sides, or a 3-gon on
/// which a triple-point move is possible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaceViolation {
    SmallFace { face: FaceId, degree: usize },
    SlidableTriangle { face: FaceId },
}

impl fmt::Display for FaceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaceViolation::SmallFace { face, degree } => write!(f, "face {} is a {degree}-gon", face.0),
            FaceViolation::SlidableTriangle { face } => write!(f, "3-gon {} admits a triple-point move", face.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreconditionReport {
    pub holds: bool,
    pub violations: Vec<FaceViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanarDiagram {
    signs: Vec<Sign>,
    links: Vec<Port>,
    outer: Outer,
}

impl PlanarDiagram {
    /// Builds and validates a diagram.
    pub fn new(signs: Vec<Sign>, links: Vec<Port>, outer: Outer) -> Result<Self, DiagramError> {
        let d = PlanarDiagram { signs, links, outer };
        let report = d.validate();
        if report.is_empty() {
            Ok(d)
        } else {
            Err(DiagramError::InvalidDiagram(report))
        }
    }

    pub(crate) fn from_parts_unchecked(signs: Vec<Sign>, links: Vec<Port>, outer: Outer) -> Self {
        let d = PlanarDiagram { signs, links, outer };
        debug_assert!(d.validate().is_empty(), "{:?}", d.validate());
        d
    }

    /// The crossingless circle.
    pub fn unknot(ccw: bool) -> Self {
        PlanarDiagram { signs: vec![], links: vec![], outer: Outer::Round { ccw } }
    }

    /// Counterclockwise round unknot.
    pub fn round_unknot() -> Self {
        Self::unknot(true)
    }

    pub fn crossing_count(&self) -> usize {
        self.signs.len()
    }
    pub fn port_count(&self) -> usize {
        self.links.len()
    }
    pub fn sign(&self, c: usize) -> Sign {
        self.signs[c]
    }
    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }
    pub fn link(&self, p: Port) -> Port {
        self.links[p.index()]
    }
    pub fn links(&self) -> &[Port] {
        &self.links
    }
    pub fn outer(&self) -> Outer {
        self.outer
    }

    pub fn is_incoming(&self, p: Port) -> bool {
        is_incoming(self.signs[p.crossing()], p.slot())
    }

    /// Every diagnosable problem; empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.signs.len();
        if self.links.len() != 4 * n {
            out.push(Violation::LengthMismatch { signs: n, ports: self.links.len() });
            return out;
        }
        if n == 0 {
            if !matches!(self.outer, Outer::Round { .. }) {
                out.push(Violation::OuterFaceMissing);
            }
            return out;
        }
        for (i, &q) in self.links.iter().enumerate() {
            let i32_ = i as u32;
            if q.index() >= 4 * n {
                out.push(Violation::PortOutOfRange { port: i32_ });
            } else if q.0 == i32_ {
                out.push(Violation::UnpairedPort { port: i32_ });
            } else if self.links[q.index()].0 != i32_ {
                out.push(Violation::NotInvolution { port: i32_ });
            } else if self.is_incoming(Port(i32_)) == self.is_incoming(q) {
                out.push(Violation::OrientationClash { port: i32_ });
            }
        }
        if !out.is_empty() {
            return out;
        }
        let comps = self.component_count();
        if comps != 1 {
            out.push(Violation::MultipleComponents { components: comps });
        }
        let (_, count) = self.face_labels();
        if count != n + 2 {
            out.push(Violation::EulerMismatch { faces: count, expected: n + 2 });
        }
        if !matches!(self.outer, Outer::Dart(p) if p.index() < 4 * n) {
            out.push(Violation::OuterFaceMissing);
        }
        out
    }

    fn component_count(&self) -> usize {
        let n = self.signs.len();
        let mut seen = vec![false; 4 * n];
        let mut comps = 0;
        for start in 0..4 * n {
            let p = Port(start as u32);
            if seen[start] || self.is_incoming(p) {
                continue;
            }
            comps += 1;
            let mut cur = p;
            while !seen[cur.index()] {
                seen[cur.index()] = true;
                let q = self.links[cur.index()];
                seen[q.index()] = true;
                cur = q.opposite();
            }
        }
        comps
    }

    fn face_labels(&self) -> (Vec<usize>, usize) {
        let m = self.links.len();
        let mut face_of = vec![usize::MAX; m];
        let mut count = 0;
        for start in 0..m {
            if face_of[start] != usize::MAX {
                continue;
            }
            let mut p = Port(start as u32);
            while face_of[p.index()] == usize::MAX {
                face_of[p.index()] = count;
                p = self.links[p.index()].prev_ccw();
            }
            count += 1;
        }
        (face_of, count)
    }

    /// Next dart along the face on its left.
    pub fn face_next(&self, dart: Port) -> Port {
        self.links[dart.index()].prev_ccw()
    }

    pub fn faces(&self) -> Faces {
        if self.signs.is_empty() {
            let left_outer = matches!(self.outer, Outer::Round { ccw: false });
            let polygons = vec![
                Polygon { id: FaceId(0), darts: vec![], is_outer: left_outer },
                Polygon { id: FaceId(1), darts: vec![], is_outer: !left_outer },
            ];
            return Faces { face_of: vec![], polygons };
        }
        let (face_of, count) = self.face_labels();
        let mut polygons: Vec<Polygon> = (0..count)
            .map(|i| Polygon { id: FaceId(i), darts: Vec::new(), is_outer: false })
            .collect();
        for start in 0..self.links.len() {
            let f = face_of[start];
            if !polygons[f].darts.is_empty() {
                continue;
            }
            let mut p = Port(start as u32);
            loop {
                polygons[f].darts.push(p);
                p = self.face_next(p);
                if p.index() == start {
                    break;
                }
            }
        }
        if let Outer::Dart(d) = self.outer {
            polygons[face_of[d.index()]].is_outer = true;
        }
        Faces { face_of, polygons }
    }

    /// Face count by degree.
    pub fn ngon_census(&self) -> BTreeMap<usize, usize> {
        let mut census = BTreeMap::new();
        for p in self.faces().polygons {
            *census.entry(p.degree()).or_insert(0) += 1;
        }
        census
    }

    /// No face with fewer than three sides and no 3-gon where a triple-point
    /// move applies.
    pub fn check_theorem1_preconditions(&self) -> PreconditionReport {
        let faces = self.faces();
        let mut violations = Vec::new();
        for f in &faces.polygons {
            match f.degree() {
                d if d <= 2 => violations.push(FaceViolation::SmallFace { face: f.id, degree: d }),
                3 if crate::moves::omega3_admissible(self, f).expect("3-gon") => {
                    violations.push(FaceViolation::SlidableTriangle { face: f.id })
                }
                _ => {}
            }
        }
        PreconditionReport { holds: violations.is_empty(), violations }
    }

    pub fn writhe(&self) -> i32 {
        self.signs.iter().map(|s| s.value()).sum()
    }

    /// Outgoing ports in traversal order, starting with `start`.
    pub fn walk_from(&self, start: Port) -> Vec<Port> {
        debug_assert!(!self.is_incoming(start));
        let mut out = Vec::with_capacity(2 * self.signs.len());
        let mut p = start;
        loop {
            out.push(p);
            p = self.links[p.index()].opposite();
            if p == start {
                break;
            }
        }
        out
    }

    /// The smallest outgoing port; the default basepoint.
    pub fn first_out_port(&self) -> Option<Port> {
        (0..self.links.len() as u32).map(Port).find(|&p| !self.is_incoming(p))
    }

    /// All edges, named by tail port, in port order.
    pub fn edges(&self) -> Vec<EdgeId> {
        if self.signs.is_empty() {
            return vec![EdgeId(0)];
        }
        (0..self.links.len() as u32)
            .map(Port)
            .filter(|&p| !self.is_incoming(p))
            .map(|p| EdgeId(p.0))
            .collect()
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        if self.signs.is_empty() {
            e.0 == 0
        } else {
            (e.0 as usize) < self.links.len() && !self.is_incoming(Port(e.0))
        }
    }

    /// Head port of an edge.
    pub fn edge_head(&self, e: EdgeId) -> Port {
        self.links[e.0 as usize]
    }

    /// The edge containing a port.
    pub fn edge_of(&self, p: Port) -> EdgeId {
        if self.is_incoming(p) {
            EdgeId(self.links[p.index()].0)
        } else {
            EdgeId(p.0)
        }
    }

    pub fn dart_to_edge_side(&self, dart: Port) -> EdgeSide {
        if self.is_incoming(dart) {
            EdgeSide { edge: EdgeId(self.links[dart.index()].0), side: Side::Right }
        } else {
            EdgeSide { edge: EdgeId(dart.0), side: Side::Left }
        }
    }

    /// Inverse of [`Self::dart_to_edge_side`]; `None` for the crossingless
    /// circle or an unknown edge.
    pub fn edge_side_to_dart(&self, es: EdgeSide) -> Option<Port> {
        if self.signs.is_empty() || !self.has_edge(es.edge) {
            return None;
        }
        Some(match es.side {
            Side::Left => Port(es.edge.0),
            Side::Right => self.links[es.edge.0 as usize],
        })
    }

    pub fn mirror(&self) -> PlanarDiagram {
        let n = self.signs.len();
        if n == 0 {
            return self.clone();
        }
        let map = |p: Port| -> Port {
            let shift = match self.signs[p.crossing()] {
                Sign::Positive => 1,
                Sign::Negative => 3,
            };
            Port::new(p.crossing(), (p.slot() + shift) % 4)
        };
        let mut links = vec![Port(0); 4 * n];
        for i in 0..4 * n {
            let p = Port(i as u32);
            links[map(p).index()] = map(self.links[i]);
        }
        let signs = self.signs.iter().map(|s| s.flip()).collect();
        let outer = match self.outer {
            Outer::Dart(d) => Outer::Dart(map(d)),
            r => r,
        };
        PlanarDiagram::from_parts_unchecked(signs, links, outer)
    }

    /// Same map with a different unbounded face.
    pub fn with_outer_face(&self, face: FaceId) -> Result<PlanarDiagram, DiagramError> {
        let faces = self.faces();
        let poly = faces.polygons.get(face.0).ok_or(DiagramError::UnknownFace(face.0))?;
        let outer = match poly.darts.first() {
            Some(&d) => Outer::Dart(d),
            None => Outer::Round { ccw: face.0 == 1 },
        };
        Ok(PlanarDiagram { signs: self.signs.clone(), links: self.links.clone(), outer })
    }

    /// Deterministic outer face: the largest face, ties to the smallest dart.
    pub fn with_default_outer_face(&self) -> PlanarDiagram {
        if self.signs.is_empty() {
            return PlanarDiagram::round_unknot();
        }
        let faces = self.faces();
        let best = faces
            .polygons
            .iter()
            .max_by(|a, b| {
                a.degree()
                    .cmp(&b.degree())
                    .then_with(|| b.darts.iter().min().cmp(&a.darts.iter().min()))
            })
            .expect("nonempty");
        let d = *best.darts.iter().min().expect("nonempty face");
        PlanarDiagram { signs: self.signs.clone(), links: self.links.clone(), outer: Outer::Dart(d) }
    }

    /// Renumbers crossings by `perm` (old index -> new index).
    pub fn relabel(&self, perm: &[usize]) -> PlanarDiagram {
        let n = self.signs.len();
        assert_eq!(perm.len(), n);
        let map = |p: Port| Port::new(perm[p.crossing()], p.slot());
        let mut signs = vec![Sign::Positive; n];
        let mut links = vec![Port(0); 4 * n];
        for c in 0..n {
            signs[perm[c]] = self.signs[c];
        }
        for i in 0..4 * n {
            links[map(Port(i as u32)).index()] = map(self.links[i]);
        }
        let outer = match self.outer {
            Outer::Dart(d) => Outer::Dart(map(d)),
            r => r,
        };
        PlanarDiagram::from_parts_unchecked(signs, links, outer)
    }

    /// Whitney rotation number, computed from the Seifert circles: smoothing
    /// every crossing along the orientation keeps the total turning, and a
    /// simple closed curve contributes +1 exactly when the unbounded side is on
    /// its right.
    pub fn rotation_number(&self) -> i32 {
        let n = self.signs.len();
        if n == 0 {
            return match self.outer {
                Outer::Round { ccw: true } => 1,
                _ => -1,
            };
        }
        let (face_of, nfaces) = self.face_labels();
        let mut uf = UnionFind::new(nfaces);
        for c in 0..n {
            // smoothing joins the in-in corner to the out-out corner
            let (in_corner, out_corner) = match self.signs[c] {
                Sign::Positive => (Port::new(c, 3), Port::new(c, 1)),
                Sign::Negative => (Port::new(c, 0), Port::new(c, 2)),
            };
            uf.union(face_of[in_corner.index()], face_of[out_corner.index()]);
        }
        // regions and Seifert circles form a tree rooted at the outer region
        let outer_dart = match self.outer {
            Outer::Dart(d) => d,
            Outer::Round { .. } => unreachable!(),
        };
        let mut circle_sides: Vec<(usize, usize)> = Vec::new();
        let mut seen = vec![false; 4 * n];
        for start in 0..4 * n {
            let p = Port(start as u32);
            if seen[start] || self.is_incoming(p) {
                continue;
            }
            let left = uf.find(face_of[p.index()]);
            let right = uf.find(face_of[self.links[p.index()].index()]);
            let mut cur = p;
            while !seen[cur.index()] {
                seen[cur.index()] = true;
                let q = self.links[cur.index()];
                cur = self.smooth(q);
            }
            circle_sides.push((left, right));
        }
        let root = uf.find(face_of[outer_dart.index()]);
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(l, r) in &circle_sides {
            adj.entry(l).or_default().push(r);
            adj.entry(r).or_default().push(l);
        }
        let mut depth: BTreeMap<usize, usize> = BTreeMap::new();
        depth.insert(root, 0);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let du = depth[&u];
            for &v in adj.get(&u).map(|v| v.as_slice()).unwrap_or(&[]) {
                if let std::collections::btree_map::Entry::Vacant(e) = depth.entry(v) {
                    e.insert(du + 1);
                    queue.push_back(v);
                }
            }
        }
        circle_sides
            .iter()
            .map(|&(l, r)| if depth[&r] < depth[&l] { 1 } else { -1 })
            .sum()
    }

    /// Outgoing port reached from incoming port `q` by the oriented smoothing.
    fn smooth(&self, q: Port) -> Port {
        let c = q.crossing();
        match (self.signs[c], q.slot()) {
            (Sign::Positive, 0) => Port::new(c, 1),
            (Sign::Positive, 3) => Port::new(c, 2),
            (Sign::Negative, 0) => Port::new(c, 3),
            (Sign::Negative, 1) => Port::new(c, 2),
            _ => unreachable!("smoothing from an outgoing port"),
        }
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        self.canonical_key_and_start().0
    }

    /// Basepoint (an outgoing port) from which the canonical key is read.
    pub fn canonical_start(&self) -> Option<Port> {
        self.canonical_key_and_start().1
    }

    fn canonical_key_and_start(&self) -> (CanonicalKey, Option<Port>) {
        use std::cmp::Ordering;
        let n = self.signs.len();
        if n == 0 {
            let ccw = matches!(self.outer, Outer::Round { ccw: true });
            return (CanonicalKey(vec![0, ccw as u32]), None);
        }
        let outer_darts: Vec<Port> = match self.outer {
            Outer::Dart(d) => {
                let mut v = vec![d];
                let mut p = self.face_next(d);
                while p != d {
                    v.push(p);
                    p = self.face_next(p);
                }
                v
            }
            Outer::Round { .. } => unreachable!(),
        };
        // The signed Gauss word read from a basepoint fixes the map, so the
        // key is that word (first visits as 2n + code, revisits as the step of
        // the first visit) followed by the position of the outer face.
        let m = 4 * n;
        let fresh = 2 * n as u32;
        let mut first = vec![u32::MAX; n];
        let mut step = vec![0u32; m];
        let mut best: Vec<u32> = Vec::new();
        let mut cur: Vec<u32> = Vec::with_capacity(2 * n + 2);
        let mut best_start = None;
        for s in 0..m {
            let start = Port(s as u32);
            if self.is_incoming(start) {
                continue;
            }
            first.iter_mut().for_each(|f| *f = u32::MAX);
            cur.clear();
            cur.push(n as u32);
            let mut state = if best.is_empty() { Ordering::Less } else { Ordering::Equal };
            let mut p = start;
            let mut i = 0u32;
            let alive = loop {
                let q = self.links[p.index()];
                step[p.index()] = i;
                step[q.index()] = i;
                let c = q.crossing();
                let v = if first[c] == u32::MAX {
                    first[c] = i;
                    fresh + 2 * q.is_over() as u32 + (self.signs[c] == Sign::Negative) as u32
                } else {
                    first[c]
                };
                if state == Ordering::Equal {
                    state = v.cmp(&best[cur.len()]);
                }
                if state == Ordering::Greater {
                    break false;
                }
                cur.push(v);
                i += 1;
                p = q.opposite();
                if p == start {
                    break true;
                }
            };
            if !alive {
                continue;
            }
            let oc = outer_darts
                .iter()
                .map(|&d| 2 * step[d.index()] + self.is_incoming(d) as u32)
                .min()
                .expect("outer face has darts");
            if state == Ordering::Equal {
                state = oc.cmp(&best[cur.len()]);
            }
            if state == Ordering::Less {
                cur.push(oc);
                std::mem::swap(&mut best, &mut cur);
                best_start = Some(start);
            }
        }
        (CanonicalKey(best), best_start)
    }
}

pub(crate) fn is_incoming(sign: Sign, slot: usize) -> bool {
    match slot {
        0 => true,
        2 => false,
        1 => sign == Sign::Negative,
        _ => sign == Sign::Positive,
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }
}
