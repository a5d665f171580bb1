//! Bounded breadth-first exploration of the Reidemeister move graph.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diagram::{CanonicalKey, PlanarDiagram};
use crate::error::SearchError;
use crate::gauss::{GaussDiagram, IsolatedCopies};
use crate::io::pd::emit_pd;
use crate::moves::{apply_site, enumerate_moves, structure_hash, MoveKinds, MoveSequence, ReidemeisterMove, Site};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_depth: usize,
    pub max_crossings: usize,
    pub max_states: usize,
}

impl SearchBudget {
    /// Depth `depth`, crossing cap four above `start`, two million states.
    pub fn for_start(start: &PlanarDiagram, depth: usize) -> SearchBudget {
        SearchBudget { max_depth: depth, max_crossings: start.crossing_count() + 4, max_states: 2_000_000 }
    }

    fn check(&self, start: &PlanarDiagram) -> Result<(), SearchError> {
        if self.max_depth == 0 || self.max_states == 0 {
            return Err(SearchError::InvalidBudget("depth and state cap must be positive".into()));
        }
        if self.max_crossings < start.crossing_count() {
            return Err(SearchError::InvalidBudget(format!(
                "crossing cap {} is below the starting {}",
                self.max_crossings,
                start.crossing_count()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    Found(MoveSequence),
    /// Every state within the depth and crossing caps was seen.
    Exhausted,
    /// The state cap stopped the search early.
    BudgetHit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub states_explored: usize,
    /// Number of new states at each depth, starting with depth 0.
    pub frontier_sizes: Vec<usize>,
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self.status, SearchStatus::Found(_))
    }
    pub fn status_name(&self) -> &'static str {
        match self.status {
            SearchStatus::Found(_) => "found",
            SearchStatus::Exhausted => "exhausted",
            SearchStatus::BudgetHit => "budget_hit",
        }
    }
}

/// Moves from `d` that keep it under `cap` crossings.
fn capped_sites(d: &PlanarDiagram, allowed: MoveKinds, cap: usize) -> Vec<Site> {
    let n = d.crossing_count() as i32;
    enumerate_moves(d, allowed)
        .into_iter()
        .filter(|m| n + m.kind().crossing_delta() <= cap as i32)
        .map(|m| m.site)
        .collect()
}

struct Node {
    parent: u32,
    site: Option<Site>,
}

/// Rebuilds the move list for node `at`, binding each move to the diagram it
/// is applied to.
fn sequence_to(nodes: &[Node], at: usize, start: &PlanarDiagram) -> Result<MoveSequence, SearchError> {
    let mut sites = Vec::new();
    let mut i = at;
    while let Some(s) = nodes[i].site {
        sites.push(s);
        i = nodes[i].parent as usize;
    }
    sites.reverse();
    let mut cur = start.clone();
    let mut moves = Vec::with_capacity(sites.len());
    for site in sites {
        moves.push(ReidemeisterMove { site, origin: structure_hash(&cur) });
        cur = apply_site(&cur, &site)?;
    }
    Ok(MoveSequence { start: start.canonical_key(), moves })
}

/// Breadth-first search for `target`, deduplicating by canonical key.
pub fn reachable(
    start: &PlanarDiagram,
    target: &PlanarDiagram,
    allowed: MoveKinds,
    budget: SearchBudget,
) -> Result<SearchOutcome, SearchError> {
    budget.check(start)?;
    let target_key = target.canonical_key();
    let found = |nodes: &[Node], at: usize, sizes: Vec<usize>| -> Result<SearchOutcome, SearchError> {
        let seq = sequence_to(nodes, at, start)?;
        let end = seq.replay(start)?;
        assert_eq!(end.canonical_key(), target_key, "found sequence must replay onto the target");
        Ok(SearchOutcome { status: SearchStatus::Found(seq), states_explored: nodes.len(), frontier_sizes: sizes })
    };
    let mut nodes = vec![Node { parent: 0, site: None }];
    if start.canonical_key() == target_key {
        return found(&nodes, 0, vec![1]);
    }
    let mut seen: HashSet<u128> = HashSet::new();
    seen.insert(start.canonical_key().fingerprint());
    let mut frontier: Vec<(usize, PlanarDiagram)> = vec![(0, start.clone())];
    let mut sizes = vec![1];
    for depth in 1..=budget.max_depth {
        let last = depth == budget.max_depth;
        let mut next = Vec::new();
        let mut fresh = 0;
        for (idx, d) in &frontier {
            for site in capped_sites(d, allowed, budget.max_crossings) {
                let child = apply_site(d, &site)?;
                let key = child.canonical_key();
                if !seen.insert(key.fingerprint()) {
                    continue;
                }
                nodes.push(Node { parent: *idx as u32, site: Some(site) });
                let at = nodes.len() - 1;
                fresh += 1;
                if key == target_key {
                    sizes.push(fresh);
                    return found(&nodes, at, sizes);
                }
                if nodes.len() >= budget.max_states {
                    sizes.push(fresh);
                    return Ok(SearchOutcome { status: SearchStatus::BudgetHit, states_explored: nodes.len(), frontier_sizes: sizes });
                }
                if !last {
                    next.push((at, child));
                }
            }
        }
        sizes.push(fresh);
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(SearchOutcome { status: SearchStatus::Exhausted, states_explored: nodes.len(), frontier_sizes: sizes })
}

/// `steps` uniformly chosen moves; the same seed gives the same walk.
pub fn random_walk(start: &PlanarDiagram, allowed: MoveKinds, steps: usize, seed: u64) -> Result<MoveSequence, SearchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = start.clone();
    let mut moves = Vec::with_capacity(steps);
    for _ in 0..steps {
        let options = enumerate_moves(&cur, allowed);
        let m = *options.choose(&mut rng).ok_or(SearchError::Deadend)?;
        cur = crate::moves::apply_move(&cur, &m)?;
        moves.push(m);
    }
    Ok(MoveSequence { start: start.canonical_key(), moves })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersistenceReport {
    pub min_count: usize,
    pub initial_count: usize,
    pub states_explored: usize,
    pub depth_reached: usize,
    /// False when the state cap cut the exploration short.
    pub complete: bool,
}

/// Explores the ball around `d` under moves that exclude Ω2 and checks that
/// every state keeps an isolated copy of `core`.
pub fn verify_isolated_copy_persistence(
    d: &PlanarDiagram,
    core: &GaussDiagram,
    allowed: MoveKinds,
    budget: SearchBudget,
) -> Result<PersistenceReport, SearchError> {
    budget.check(d)?;
    if allowed.intersects(MoveKinds::OMEGA2) {
        return Err(SearchError::Precondition("Ω2 moves must be excluded".into()));
    }
    let counter = IsolatedCopies::new(core);
    let count = |x: &PlanarDiagram| counter.count(&GaussDiagram::from_planar(x));
    let initial = count(d);
    if initial == 0 {
        return Err(SearchError::Precondition("the start has no isolated copy of the core".into()));
    }
    let mut seen: HashSet<u128> = HashSet::new();
    seen.insert(d.canonical_key().fingerprint());
    let mut report =
        PersistenceReport { min_count: initial, initial_count: initial, states_explored: 1, depth_reached: 0, complete: true };
    let mut frontier = vec![d.clone()];
    for depth in 1..=budget.max_depth {
        let last = depth == budget.max_depth;
        let mut next = Vec::new();
        for x in &frontier {
            for site in capped_sites(x, allowed, budget.max_crossings) {
                let child = apply_site(x, &site)?;
                if !seen.insert(child.canonical_key().fingerprint()) {
                    continue;
                }
                report.states_explored += 1;
                let c = count(&child);
                if c == 0 {
                    return Err(SearchError::ViolationFound { depth, diagram: emit_pd(&child) });
                }
                report.min_count = report.min_count.min(c);
                if report.states_explored >= budget.max_states {
                    report.complete = false;
                    report.depth_reached = depth;
                    return Ok(report);
                }
                if !last {
                    next.push(child);
                }
            }
        }
        report.depth_reached = depth;
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(report)
}

/// Key of the diagram reached by replaying `seq` from `start`.
pub fn replay_key(seq: &MoveSequence, start: &PlanarDiagram) -> Result<CanonicalKey, SearchError> {
    Ok(seq.replay(start)?.canonical_key())
}
