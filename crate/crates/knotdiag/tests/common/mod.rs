#![allow(dead_code)]

use std::collections::BTreeSet;

use knotdiag::constructions::{figure_eight, trefoil};
use knotdiag::{apply_move, enumerate_moves, ArrowPattern, GaussDiagram, MoveKinds, PlanarDiagram, ReidemeisterMove};
use rand::seq::SliceRandom;
use rand::Rng;

/// Moves of `d` that keep it at or below `cap` crossings.
pub fn moves_under(d: &PlanarDiagram, allowed: MoveKinds, cap: usize) -> Vec<ReidemeisterMove> {
    let n = d.crossing_count() as i32;
    enumerate_moves(d, allowed).into_iter().filter(|m| n + m.kind().crossing_delta() <= cap as i32).collect()
}

pub fn seed_diagram(rng: &mut impl Rng) -> PlanarDiagram {
    match rng.gen_range(0..4) {
        0 => PlanarDiagram::round_unknot(),
        1 => PlanarDiagram::unknot(false),
        2 => trefoil(),
        _ => figure_eight(),
    }
}

/// A diagram reached from a small seed by a random walk of up to `steps`
/// moves, never exceeding `cap` crossings.
pub fn random_diagram(rng: &mut impl Rng, cap: usize, steps: usize) -> PlanarDiagram {
    let mut d = seed_diagram(rng);
    if rng.gen_bool(0.5) {
        d = d.mirror();
    }
    for _ in 0..rng.gen_range(0..=steps) {
        let moves = moves_under(&d, MoveKinds::all(), cap);
        let Some(m) = moves.choose(rng) else { break };
        d = apply_move(&d, m).expect("enumerated move applies");
    }
    d
}

/// Positions of the pattern's endpoints listed by pattern slot.
fn slot_images(p: &[(usize, usize)], image: &[(usize, usize)]) -> Vec<usize> {
    let mut by_slot = vec![0; 2 * p.len()];
    for (i, &(t, h)) in p.iter().enumerate() {
        by_slot[t] = image[i].0;
        by_slot[h] = image[i].1;
    }
    by_slot
}

/// True when `seq` increases once around the circle, read cyclically.
fn cyclically_increasing(seq: &[usize]) -> bool {
    let m = seq.len();
    if m <= 2 {
        return true;
    }
    (0..m).filter(|&i| seq[i] > seq[(i + 1) % m]).count() == 1
}

/// Every injection of `k` arrows into `n`, as ordered index lists.
fn injections(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(n: usize, k: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for a in 0..n {
            if !used[a] {
                used[a] = true;
                cur.push(a);
                go(n, k, used, cur, f);
                cur.pop();
                used[a] = false;
            }
        }
    }
    go(n, k, &mut vec![false; n], &mut Vec::new(), f);
}

/// Images (as arrow sets) of every order- and direction-preserving injection
/// of `p` into `g` that respects the sign constraints.
fn embeddings(g: &GaussDiagram, p: &[(usize, usize)], constraints: &[Option<knotdiag::Sign>]) -> BTreeSet<Vec<usize>> {
    let mut found = BTreeSet::new();
    if p.len() > g.len() {
        return found;
    }
    injections(g.len(), p.len(), &mut |map| {
        let ok_sign = map.iter().zip(constraints).all(|(&a, c)| c.is_none_or(|s| g.arrow(a).sign == s));
        if !ok_sign {
            return;
        }
        let image: Vec<(usize, usize)> = map.iter().map(|&a| (g.arrow(a).tail, g.arrow(a).head)).collect();
        if cyclically_increasing(&slot_images(p, &image)) {
            let mut set = map.to_vec();
            set.sort_unstable();
            found.insert(set);
        }
    });
    found
}

/// Signed pattern count by listing injections.
pub fn brute_count_pattern(g: &GaussDiagram, p: &ArrowPattern) -> i64 {
    embeddings(g, p.arrows(), p.constraints())
        .iter()
        .map(|set| set.iter().map(|&a| g.arrow(a).sign.value() as i64).product::<i64>())
        .sum()
}

fn interleaved(g: &GaussDiagram, a: usize, b: usize) -> bool {
    let (x, y) = (g.arrow(a), g.arrow(b));
    let (lo, hi) = (x.tail.min(x.head), x.tail.max(x.head));
    let inside = |s: usize| lo < s && s < hi;
    inside(y.tail) != inside(y.head)
}

/// Isolated copies of `h` in `g` by listing injections.
pub fn brute_isolated_copies(g: &GaussDiagram, h: &GaussDiagram) -> usize {
    let p: Vec<(usize, usize)> = h.arrows().iter().map(|a| (a.tail, a.head)).collect();
    let signs: Vec<_> = h.arrows().iter().map(|a| Some(a.sign)).collect();
    embeddings(g, &p, &signs)
        .into_iter()
        .filter(|set| {
            (0..g.len()).filter(|a| !set.contains(a)).all(|out| set.iter().all(|&a| !interleaved(g, a, out)))
        })
        .count()
}

/// An Ω2 decrease whose two crossings share more than the bigon's two edges
/// fuses both strands into one edge; undoing it would push an edge across
/// itself, which is not an Ω2 increase between distinct edges.
pub fn fuses_strands(d: &PlanarDiagram, m: &ReidemeisterMove) -> bool {
    let knotdiag::moves::Site::Omega2Decrease { face_dart } = m.site else { return false };
    let cs = [face_dart.crossing(), d.link(face_dart).crossing()];
    let internal = cs
        .iter()
        .flat_map(|&c| (0..4).map(move |s| knotdiag::Port::new(c, s)))
        .filter(|&p| cs.contains(&d.link(p).crossing()))
        .count();
    internal > 4
}

/// The move kinds that can undo a move of kind `kind`.
pub fn undo_kinds(kind: knotdiag::MoveKind) -> MoveKinds {
    use knotdiag::MoveKind::*;
    match kind {
        Omega1Increase => MoveKinds::OMEGA1_DECREASE,
        Omega1Decrease => MoveKinds::OMEGA1_INCREASE,
        Omega2Increase => MoveKinds::OMEGA2_DECREASE,
        Omega2Decrease => MoveKinds::OMEGA2_INCREASE,
        Omega3 => MoveKinds::OMEGA3,
    }
}

/// Some move of `after` leads back to `before`.
pub fn undoable(before: &PlanarDiagram, after: &PlanarDiagram, kind: knotdiag::MoveKind) -> bool {
    let key = before.canonical_key();
    enumerate_moves(after, undo_kinds(kind)).iter().any(|m| apply_move(after, m).is_ok_and(|x| x.canonical_key() == key))
}
