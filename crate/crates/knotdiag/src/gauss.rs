//! Gauss diagrams: a circle of `2n` slots and one signed arrow per crossing,
//! pointing from the under passage to the over passage.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diagram::{Outer, PlanarDiagram, Port, Sign};
use crate::error::GaussError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub tail: usize,
    pub head: usize,
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussDiagram {
    arrows: Vec<Arrow>,
    /// slot -> (arrow, is_head)
    owner: Vec<(usize, bool)>,
}

impl GaussDiagram {
    pub fn new(arrows: Vec<Arrow>) -> Result<Self, GaussError> {
        let m = 2 * arrows.len();
        let mut owner = vec![(usize::MAX, false); m];
        for (i, a) in arrows.iter().enumerate() {
            if a.tail == a.head {
                return Err(GaussError::Malformed(format!("arrow {i} has tail = head")));
            }
            for (slot, is_head) in [(a.tail, false), (a.head, true)] {
                if slot >= m {
                    return Err(GaussError::Malformed(format!("slot {slot} out of range")));
                }
                if owner[slot].0 != usize::MAX {
                    return Err(GaussError::Malformed(format!("slot {slot} used twice")));
                }
                owner[slot] = (i, is_head);
            }
        }
        Ok(GaussDiagram { arrows, owner })
    }

    pub fn empty() -> Self {
        GaussDiagram::default()
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }
    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
    pub fn slot_count(&self) -> usize {
        self.owner.len()
    }
    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }
    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }
    /// Arrow occupying a slot and whether the slot is its head.
    pub fn at(&self, slot: usize) -> (usize, bool) {
        self.owner[slot]
    }

    pub fn from_planar(d: &PlanarDiagram) -> GaussDiagram {
        let n = d.crossing_count();
        if n == 0 {
            return GaussDiagram::empty();
        }
        let start = d.first_out_port().expect("crossings present");
        let mut tails = vec![0; n];
        let mut heads = vec![0; n];
        for (slot, p) in d.walk_from(start).into_iter().enumerate() {
            let q = d.link(p);
            if q.is_over() {
                heads[q.crossing()] = slot;
            } else {
                tails[q.crossing()] = slot;
            }
        }
        let arrows = (0..n).map(|c| Arrow { tail: tails[c], head: heads[c], sign: d.sign(c) }).collect();
        GaussDiagram::new(arrows).expect("walk visits each passage once")
    }

    /// Every arrow reversed and every sign negated; the circle keeps its
    /// orientation.
    pub fn mirror(&self) -> GaussDiagram {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow { tail: a.head, head: a.tail, sign: a.sign.flip() })
            .collect();
        GaussDiagram::new(arrows).expect("mirror keeps slots")
    }

    /// Shift every slot by `k` around the circle.
    pub fn rotate(&self, k: usize) -> GaussDiagram {
        let m = self.slot_count();
        if m == 0 {
            return self.clone();
        }
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow { tail: (a.tail + k) % m, head: (a.head + k) % m, sign: a.sign })
            .collect();
        GaussDiagram::new(arrows).expect("rotation keeps slots")
    }

    pub fn interleave(&self, a: usize, b: usize) -> bool {
        let (x, y) = ordered(self.arrows[a].tail, self.arrows[a].head);
        let inside = |s: usize| x < s && s < y;
        inside(self.arrows[b].tail) != inside(self.arrows[b].head)
    }

    pub fn arrows_interleave(&self, a: usize, b: usize) -> Result<bool, GaussError> {
        for i in [a, b] {
            if i >= self.len() {
                return Err(GaussError::UnknownArrow(i));
            }
        }
        if a == b {
            return Err(GaussError::Malformed("an arrow compared with itself".into()));
        }
        Ok(self.interleave(a, b))
    }

    /// Number of unordered interleaving pairs.
    pub fn interleaving_pairs(&self) -> usize {
        let n = self.len();
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| self.interleave(a, b)).count()
    }

    /// Components of the interleave graph, each a sorted list of arrows.
    pub fn interleave_components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let a = members[i];
                for b in 0..n {
                    if comp[b] == usize::MAX && self.interleave(a, b) {
                        comp[b] = id;
                        members.push(b);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Word read from slot `start`: arrows renamed by first appearance.
    fn word_from(&self, start: usize, signed: bool, out: &mut Vec<u32>) {
        let m = self.slot_count();
        let mut rename = vec![u32::MAX; self.len()];
        let mut next = 0;
        out.clear();
        for i in 0..m {
            let (a, is_head) = self.owner[(start + i) % m];
            if rename[a] == u32::MAX {
                rename[a] = next;
                next += 1;
            }
            let sign_bit = if signed { (self.arrows[a].sign == Sign::Negative) as u32 } else { 0 };
            out.push(rename[a] * 4 + 2 * is_head as u32 + sign_bit);
        }
    }

    /// Rotation-invariant normal form. Reflections are not quotiented.
    pub fn canonical_form(&self) -> Vec<u32> {
        canonical_word(self, true)
    }

    /// Does some rotation read exactly as `form`?
    fn has_form(&self, form: &[u32], scratch: &mut Vec<u32>) -> bool {
        let m = self.slot_count();
        if form.len() != m {
            return false;
        }
        let mut rename = vec![u32::MAX; self.len()];
        'start: for start in 0..m {
            rename.iter_mut().for_each(|r| *r = u32::MAX);
            let mut next = 0;
            scratch.clear();
            for (i, &want) in form.iter().enumerate() {
                let (a, is_head) = self.owner[(start + i) % m];
                if rename[a] == u32::MAX {
                    rename[a] = next;
                    next += 1;
                }
                let v = rename[a] * 4 + 2 * is_head as u32 + (self.arrows[a].sign == Sign::Negative) as u32;
                if v != want {
                    continue 'start;
                }
            }
            return true;
        }
        false
    }

    /// Slot at which the normal form starts.
    pub fn canonical_start(&self) -> usize {
        let mut best: Vec<u32> = Vec::new();
        let mut at = 0;
        let mut cur = Vec::new();
        for s in 0..self.slot_count() {
            self.word_from(s, true, &mut cur);
            if best.is_empty() || cur < best {
                std::mem::swap(&mut best, &mut cur);
                at = s;
            }
        }
        at
    }

    pub fn equal_up_to_rotation(&self, other: &GaussDiagram) -> bool {
        self.len() == other.len() && self.canonical_form() == other.canonical_form()
    }

    /// Subdiagram on the given arrows, slots renumbered in circle order.
    pub fn induced(&self, arrows: &[usize]) -> GaussDiagram {
        let mut slots: Vec<usize> = arrows.iter().flat_map(|&a| [self.arrows[a].tail, self.arrows[a].head]).collect();
        slots.sort_unstable();
        let pos = |s: usize| slots.binary_search(&s).expect("slot present");
        let sub = arrows
            .iter()
            .map(|&a| {
                let ar = self.arrows[a];
                Arrow { tail: pos(ar.tail), head: pos(ar.head), sign: ar.sign }
            })
            .collect();
        GaussDiagram::new(sub).expect("induced subdiagram")
    }

    /// True iff some two arrows have adjacent heads and adjacent tails.
    pub fn has_adjacent_parallel_pair(&self) -> bool {
        let m = self.slot_count();
        if m < 4 {
            return false;
        }
        for s in 0..m {
            let (a, ah) = self.owner[s];
            let (b, bh) = self.owner[(s + 1) % m];
            if a == b || !ah || !bh {
                continue;
            }
            let (ta, tb) = (self.arrows[a].tail, self.arrows[b].tail);
            if (ta + 1) % m == tb || (tb + 1) % m == ta {
                return true;
            }
        }
        false
    }

    /// Splices `other` into this diagram. `at` is an arc position of `self`
    /// (the arc just before slot `at`, `0..=slot_count`), `at_other` an arc
    /// position of `other` where its circle is opened.
    pub fn connected_sum(&self, at: usize, other: &GaussDiagram, at_other: usize) -> GaussDiagram {
        let m1 = self.slot_count();
        let m2 = other.slot_count();
        let at = if m1 == 0 { 0 } else { at % (m1 + 1) };
        let map1 = |s: usize| if s < at { s } else { s + m2 };
        let map2 = |s: usize| {
            let r = if m2 == 0 { 0 } else { (s + m2 - at_other % m2.max(1)) % m2 };
            at + r
        };
        let mut arrows: Vec<Arrow> = self
            .arrows
            .iter()
            .map(|a| Arrow { tail: map1(a.tail), head: map1(a.head), sign: a.sign })
            .collect();
        arrows.extend(other.arrows.iter().map(|a| Arrow { tail: map2(a.tail), head: map2(a.head), sign: a.sign }));
        GaussDiagram::new(arrows).expect("splice is a bijection on slots")
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn canonical_word(g: &GaussDiagram, signed: bool) -> Vec<u32> {
    let mut best: Vec<u32> = Vec::new();
    let mut cur = Vec::new();
    for s in 0..g.slot_count() {
        g.word_from(s, signed, &mut cur);
        if best.is_empty() || cur < best {
            std::mem::swap(&mut best, &mut cur);
        }
    }
    best
}

/// Unsigned arrow template with optional per-arrow sign constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowPattern {
    arrows: Vec<(usize, usize)>,
    constraints: Vec<Option<Sign>>,
}

impl ArrowPattern {
    /// Arrows as `(tail, head)` slot pairs.
    pub fn new(arrows: Vec<(usize, usize)>) -> Result<Self, GaussError> {
        let k = arrows.len();
        Self::with_constraints(arrows, vec![None; k])
    }

    pub fn with_constraints(arrows: Vec<(usize, usize)>, constraints: Vec<Option<Sign>>) -> Result<Self, GaussError> {
        if constraints.len() != arrows.len() {
            return Err(GaussError::Malformed("one constraint per arrow".into()));
        }
        // reuse the slot checks
        GaussDiagram::new(arrows.iter().map(|&(t, h)| Arrow { tail: t, head: h, sign: Sign::Positive }).collect())?;
        Ok(ArrowPattern { arrows, constraints })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }
    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }
    pub fn constraints(&self) -> &[Option<Sign>] {
        &self.constraints
    }

    /// The pattern as a diagram with all arrows positive.
    pub fn as_diagram(&self) -> GaussDiagram {
        GaussDiagram::new(self.arrows.iter().map(|&(t, h)| Arrow { tail: t, head: h, sign: Sign::Positive }).collect())
            .expect("validated at construction")
    }

    /// Does the pattern, rotated by some amount, lay exactly over `sub`
    /// (a diagram with the same number of arrows) with directions kept and
    /// sign constraints met?
    fn matches(&self, sub: &GaussDiagram) -> bool {
        let m = 2 * self.len();
        'rot: for r in 0..m {
            for (i, &(t, h)) in self.arrows.iter().enumerate() {
                let (a, is_head) = sub.at((t + r) % m);
                if is_head || sub.arrow(a).head != (h + r) % m {
                    continue 'rot;
                }
                if let Some(s) = self.constraints[i] {
                    if sub.arrow(a).sign != s {
                        continue 'rot;
                    }
                }
            }
            return true;
        }
        false
    }
}

/// Signed count of subdiagrams of `g` shaped like `p`; each occurrence counts
/// once whatever the symmetry of `p`.
pub fn count_pattern(g: &GaussDiagram, p: &ArrowPattern) -> i64 {
    let k = p.len();
    let n = g.len();
    if k == 0 {
        return 1;
    }
    if k > n {
        return 0;
    }
    let mut total = 0i64;
    let mut chosen = Vec::with_capacity(k);
    subsets(n, k, 0, &mut chosen, &mut |set| {
        let sub = g.induced(set);
        if p.matches(&sub) {
            total += set.iter().map(|&a| g.arrow(a).sign.value() as i64).product::<i64>();
        }
    });
    total
}

fn subsets(n: usize, k: usize, from: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if chosen.len() == k {
        f(chosen);
        return;
    }
    let need = k - chosen.len();
    for i in from..=n - need {
        chosen.push(i);
        subsets(n, k, i + 1, chosen, f);
        chosen.pop();
    }
}

/// Number of copies of `h` in `g` (signs, directions and cyclic order kept,
/// counted up to automorphisms of `h`) that no other arrow of `g` interleaves.
pub fn count_isolated_copies(g: &GaussDiagram, h: &GaussDiagram) -> usize {
    IsolatedCopies::new(h).count(g)
}

/// [`count_isolated_copies`] with the pattern side precomputed, for
/// counting the same `h` in many diagrams.
#[derive(Clone, Debug)]
pub struct IsolatedCopies {
    len: usize,
    /// (component size, how many)
    groups: Vec<(usize, usize)>,
    target: Vec<u32>,
}

impl IsolatedCopies {
    pub fn new(h: &GaussDiagram) -> IsolatedCopies {
        let mut want: BTreeMap<usize, usize> = BTreeMap::new();
        for c in h.interleave_components() {
            *want.entry(c.len()).or_insert(0) += 1;
        }
        IsolatedCopies { len: h.len(), groups: want.into_iter().collect(), target: h.canonical_form() }
    }

    pub fn count(&self, g: &GaussDiagram) -> usize {
        if self.len == 0 {
            return 1;
        }
        if self.len > g.len() {
            return 0;
        }
        // An isolated image is a union of interleave components of g whose
        // sizes match those of h.
        let comps = g.interleave_components();
        let mut by_size: BTreeMap<usize, Vec<&Vec<usize>>> = BTreeMap::new();
        for c in &comps {
            if self.groups.iter().any(|&(size, _)| size == c.len()) {
                by_size.entry(c.len()).or_default().push(c);
            }
        }
        let mut count = 0;
        let mut picked: Vec<usize> = Vec::new();
        let mut word = Vec::with_capacity(2 * self.len);
        choose_groups(&self.groups, 0, &by_size, &mut picked, &mut |arrows| {
            let mut set = arrows.to_vec();
            set.sort_unstable();
            if g.induced(&set).has_form(&self.target, &mut word) {
                count += 1;
            }
        });
        count
    }
}

fn choose_groups(
    groups: &[(usize, usize)],
    gi: usize,
    by_size: &BTreeMap<usize, Vec<&Vec<usize>>>,
    picked: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if gi == groups.len() {
        f(picked);
        return;
    }
    let (size, k) = groups[gi];
    let pool = match by_size.get(&size) {
        Some(p) if p.len() >= k => p,
        _ => return,
    };
    let mut idx = Vec::with_capacity(k);
    subsets(pool.len(), k, 0, &mut idx, &mut |sel| {
        let before = picked.len();
        for &i in sel {
            picked.extend_from_slice(pool[i]);
        }
        choose_groups(groups, gi + 1, by_size, picked, f);
        picked.truncate(before);
    });
}

/// Rebuilds the planar map of a signed Gauss diagram. The crossing signs fix
/// the cyclic order at every vertex, so the map is unique on the sphere; it is
/// planar exactly when Euler's formula holds. The unbounded face is the
/// default one (largest face, ties to the smallest dart).
pub fn reconstruct_planar(g: &GaussDiagram) -> Result<PlanarDiagram, GaussError> {
    let n = g.len();
    if n == 0 {
        return Ok(PlanarDiagram::round_unknot());
    }
    let m = 2 * n;
    // head[j] / tail[j]: ports where edge j (from slot j to slot j+1) ends / starts
    let mut head = vec![Port(0); m];
    let mut tail = vec![Port(0); m];
    for (c, a) in g.arrows().iter().enumerate() {
        let (u, o) = (a.tail, a.head);
        head[(u + m - 1) % m] = Port::new(c, 0);
        tail[u] = Port::new(c, 2);
        let (over_in, over_out) = match a.sign {
            Sign::Positive => (3, 1),
            Sign::Negative => (1, 3),
        };
        head[(o + m - 1) % m] = Port::new(c, over_in);
        tail[o] = Port::new(c, over_out);
    }
    let mut links = vec![Port(0); 4 * n];
    for j in 0..m {
        links[tail[j].index()] = head[j];
        links[head[j].index()] = tail[j];
    }
    let signs = g.arrows().iter().map(|a| a.sign).collect();
    let d = PlanarDiagram::new(signs, links, Outer::Dart(Port(0))).map_err(|_| GaussError::NonRealizable)?;
    Ok(d.with_default_outer_face())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrows(spec: &[(usize, usize, i32)]) -> GaussDiagram {
        GaussDiagram::new(
            spec.iter().map(|&(t, h, s)| Arrow { tail: t, head: h, sign: Sign::from_value(s).unwrap() }).collect(),
        )
        .unwrap()
    }

    #[test]
    fn interleave_definition() {
        let g = arrows(&[(0, 2, 1), (1, 3, 1)]);
        assert!(g.interleave(0, 1));
        let g = arrows(&[(0, 1, 1), (2, 3, 1)]);
        assert!(!g.interleave(0, 1));
        assert_eq!(g.arrows_interleave(0, 5), Err(GaussError::UnknownArrow(5)));
    }

    #[test]
    fn rejects_bad_slots() {
        assert!(GaussDiagram::new(vec![Arrow { tail: 0, head: 0, sign: Sign::Positive }]).is_err());
        assert!(GaussDiagram::new(vec![Arrow { tail: 0, head: 2, sign: Sign::Positive }]).is_err());
    }

    #[test]
    fn rotation_is_not_reflection() {
        let g = arrows(&[(0, 3, 1), (1, 6, 1), (5, 2, 1), (7, 4, 1)]);
        assert!(g.equal_up_to_rotation(&g.rotate(3)));
        assert!(!g.equal_up_to_rotation(&g.mirror().mirror().rotate(1).mirror()));
    }

    #[test]
    fn mirror_involution() {
        let g = arrows(&[(0, 2, 1), (3, 1, -1)]);
        assert_eq!(g.mirror().mirror(), g);
        assert_eq!(GaussDiagram::empty().mirror(), GaussDiagram::empty());
    }

    #[test]
    fn adjacent_parallel_pair() {
        // heads at 0,1 and tails at 3,4
        let g = arrows(&[(3, 0, 1), (4, 1, -1), (2, 5, 1)]);
        assert!(g.has_adjacent_parallel_pair());
        assert!(!GaussDiagram::empty().has_adjacent_parallel_pair());
        let g = arrows(&[(0, 2, 1), (1, 4, 1), (3, 5, -1)]);
        assert!(!g.has_adjacent_parallel_pair());
    }

    #[test]
    fn word_1212_is_not_planar() {
        // O1+ U2+ U1+ O2+
        let g = arrows(&[(2, 0, 1), (1, 3, 1)]);
        assert_eq!(reconstruct_planar(&g), Err(GaussError::NonRealizable));
    }

    #[test]
    fn connected_sum_with_empty() {
        let g = arrows(&[(0, 2, 1), (3, 1, -1)]);
        assert!(GaussDiagram::empty().connected_sum(0, &g, 1).equal_up_to_rotation(&g));
        assert_eq!(g.connected_sum(2, &GaussDiagram::empty(), 0), g);
    }
}
