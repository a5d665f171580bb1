//! End-to-end checks with exact expected values, one report line each.
//! Runs without the libtest harness so the lines always show.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use knotdiag::constructions::{
    connected_sum, figure2, figure5_pattern, figure6_eight, figure_eight, granny, make_all_dependent_pair,
    make_omega2_dependent_pair, square, trefoil,
};
use knotdiag::io::json::{gauss_from_json, gauss_to_json, planar_from_json, planar_to_json};
use knotdiag::io::{emit_gauss, emit_pd, parse_gauss, parse_pd};
use knotdiag::moves::Site;
use knotdiag::search::{reachable, verify_isolated_copy_persistence, SearchBudget};
use knotdiag::{
    apply_move, count_isolated_copies, count_pattern, enumerate_moves, Arrow, ArrowPattern, GaussDiagram, MoveKind,
    MoveKinds, PlanarDiagram, Sign,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{brute_count_pattern, brute_isolated_copies, moves_under, random_diagram};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn fig5(g: &GaussDiagram) -> i64 {
    count_pattern(g, &figure5_pattern())
}

fn gauss(d: &PlanarDiagram) -> GaussDiagram {
    GaussDiagram::from_planar(d)
}

fn pattern_count_oracle() -> Outcome {
    let g = figure6_eight();
    let (on, mirror) = (fig5(&g), fig5(&g.mirror()));
    ensure!(on == 1, "count on the figure-eight diagram is {on}");
    ensure!(mirror == 0, "count on the mirror is {mirror}");
    Ok(format!("count {on}, mirror {mirror}"))
}

/// Expected rotation change of a move, read off the site: a kink on the left
/// of the strand turns counterclockwise.
fn rotation_delta(d: &PlanarDiagram, site: &Site) -> i32 {
    match *site {
        Site::Omega1Increase { at, .. } => match at.side {
            knotdiag::Side::Left => 1,
            knotdiag::Side::Right => -1,
        },
        Site::Omega1Decrease { face_dart } => {
            if d.is_incoming(face_dart) {
                1
            } else {
                -1
            }
        }
        _ => 0,
    }
}

fn writhe_delta(d: &PlanarDiagram, site: &Site) -> i32 {
    match *site {
        Site::Omega1Increase { sign, .. } => sign.value(),
        Site::Omega1Decrease { face_dart } => -d.sign(face_dart.crossing()).value(),
        _ => 0,
    }
}

fn invariance_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut cases = 0;
    let mut by_kind = [0usize; 5];
    while cases < 10_000 {
        let mut d = random_diagram(&mut rng, 10, 6);
        for _ in 0..40 {
            let moves = moves_under(&d, MoveKinds::all(), 10);
            let Some(m) = moves.choose(&mut rng) else { break };
            let e = apply_move(&d, m).map_err(|e| e.to_string())?;
            let kind = m.kind();
            let (before, after) = (fig5(&gauss(&d)), fig5(&gauss(&e)));
            if kind != MoveKind::Omega3 {
                ensure!(before == after, "{kind:?} changed the count {before} -> {after} on {}", emit_pd(&d));
            }
            let dw = e.writhe() - d.writhe();
            ensure!(dw == writhe_delta(&d, &m.site), "{kind:?} changed writhe by {dw} on {}", emit_pd(&d));
            let dr = e.rotation_number() - d.rotation_number();
            ensure!(dr == rotation_delta(&d, &m.site), "{kind:?} changed rotation by {dr} on {}", emit_pd(&d));
            by_kind[kind as usize] += 1;
            cases += 1;
            d = e;
        }
    }
    Ok(format!("{cases} cases, by kind (Ω1+, Ω1-, Ω2+, Ω2-, Ω3) {by_kind:?}"))
}

fn omega3_variance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20_000 {
        let d = random_diagram(&mut rng, 8, 12);
        for m in enumerate_moves(&d, MoveKinds::OMEGA3) {
            let e = apply_move(&d, &m).map_err(|e| e.to_string())?;
            let (before, after) = (fig5(&gauss(&d)), fig5(&gauss(&e)));
            if before != after {
                return Ok(format!(
                    "{} crossings, count {before} -> {after} (change {:+}) on {}",
                    d.crossing_count(),
                    after - before,
                    emit_pd(&d)
                ));
            }
        }
    }
    Err("no Ω3 move changed the count".into())
}

fn additivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut nonzero = 0;
    for _ in 0..1_000 {
        let a = random_diagram(&mut rng, 6, 10);
        let b = random_diagram(&mut rng, 6, 10);
        let ea = *a.edges().choose(&mut rng).expect("a diagram has edges");
        let eb = *b.edges().choose(&mut rng).expect("a diagram has edges");
        let s = connected_sum(&a, ea, &b, eb).map_err(|e| e.to_string())?;
        let (ca, cb, cs) = (fig5(&gauss(&a)), fig5(&gauss(&b)), fig5(&gauss(&s)));
        ensure!(cs == ca + cb, "{cs} != {ca} + {cb} for {} # {}", emit_pd(&a), emit_pd(&b));
        ensure!(s.writhe() == a.writhe() + b.writhe(), "writhe not additive");
        if ca != 0 || cb != 0 {
            nonzero += 1;
        }
    }
    Ok(format!("1000 pairs, {nonzero} with a nonzero summand"))
}

fn omega2_pair_desk_check() -> Outcome {
    let d = figure2();
    let pair = make_omega2_dependent_pair(&PlanarDiagram::round_unknot()).map_err(|e| e.to_string())?;
    ensure!(pair.first.canonical_key() == d.canonical_key(), "F for the unknot is not figure 2");
    let d2 = &pair.second;
    let one = reachable(&d, d2, MoveKinds::all(), SearchBudget::for_start(&d, 1)).map_err(|e| e.to_string())?;
    ensure!(one.is_found(), "depth 1 with all moves: {}", one.status_name());

    let budget = SearchBudget { max_depth: 6, max_crossings: d.crossing_count() + 4, max_states: 2_000_000 };
    let free = reachable(&d, d2, MoveKinds::OMEGA1 | MoveKinds::OMEGA3, budget).map_err(|e| e.to_string())?;
    ensure!(!free.is_found(), "found without Ω2");

    let ball = SearchBudget { max_depth: 4, max_crossings: d.crossing_count() + 4, max_states: usize::MAX };
    let report = verify_isolated_copy_persistence(&d, &gauss(&d), MoveKinds::OMEGA1 | MoveKinds::OMEGA3, ball)
        .map_err(|e| e.to_string())?;
    ensure!(report.complete && report.depth_reached == 4, "ball not fully explored: {report:?}");
    ensure!(report.min_count == 1, "minimum isolated-copy count {}", report.min_count);
    Ok(format!(
        "depth 1 found; Ω2-free search {} after {} states; persistence min {} over {} states",
        free.status_name(),
        free.states_explored,
        report.min_count,
        report.states_explored
    ))
}

fn pair_over_five_knots() -> Outcome {
    let core = gauss(&figure2());
    let mut parts = Vec::new();
    let knots = [
        ("unknot", PlanarDiagram::round_unknot()),
        ("trefoil", trefoil()),
        ("figure-eight", figure_eight()),
        ("granny", granny()),
        ("square", square()),
    ];
    for (name, k) in knots {
        let pair = make_omega2_dependent_pair(&k).map_err(|e| format!("{name}: {e}"))?;
        let before = count_isolated_copies(&gauss(&pair.first), &core);
        let after = count_isolated_copies(&gauss(&pair.second), &core);
        ensure!(before >= 1 && before > after, "{name}: {before} -> {after}");
        parts.push(format!("{name} {before}->{after}"));
    }
    Ok(parts.join(", "))
}

fn all_moves_pair() -> Outcome {
    let pair = make_all_dependent_pair(&PlanarDiagram::round_unknot()).map_err(|e| e.to_string())?;
    let (p, q) = (&pair.first, &pair.second);
    let (rp, rq) = (p.rotation_number(), q.rotation_number());
    ensure!(rp != rq, "rotation numbers agree: {rp}");
    let (cp, cq) = (fig5(&gauss(p)), fig5(&gauss(q)));
    ensure!((cp - cq).abs() == 1, "pattern counts {cp} and {cq}");
    let core = gauss(&figure2());
    let (ip, iq) = (count_isolated_copies(&gauss(p), &core), count_isolated_copies(&gauss(q), &core));
    ensure!(ip != iq, "isolated copies agree: {ip}");
    Ok(format!("rotation {rp} vs {rq}, pattern count {cp} vs {cq}, isolated copies {ip} vs {iq}"))
}

fn random_gauss(rng: &mut impl Rng, max: usize) -> GaussDiagram {
    let n = rng.gen_range(0..=max);
    let mut slots: Vec<usize> = (0..2 * n).collect();
    slots.shuffle(rng);
    let arrows = slots
        .chunks(2)
        .map(|c| Arrow { tail: c[0], head: c[1], sign: if rng.gen_bool(0.5) { Sign::Positive } else { Sign::Negative } })
        .collect();
    GaussDiagram::new(arrows).expect("slots form a perfect matching")
}

fn random_pattern(rng: &mut impl Rng) -> ArrowPattern {
    let g = random_gauss(rng, 3);
    let arrows = g.arrows().iter().map(|a| (a.tail, a.head)).collect();
    let constraints = g.arrows().iter().map(|a| rng.gen_bool(0.3).then_some(a.sign)).collect();
    ArrowPattern::with_constraints(arrows, constraints).expect("valid pattern")
}

/// A pattern guaranteed to occur isolated: one or two interleave components.
fn isolated_piece(rng: &mut impl Rng, g: &GaussDiagram) -> GaussDiagram {
    let mut comps: Vec<Vec<usize>> = g.interleave_components().into_iter().filter(|c| c.len() <= 4).collect();
    comps.shuffle(rng);
    let mut pick: Vec<usize> = comps.iter().take(rng.gen_range(1..=2)).flatten().copied().collect();
    if pick.len() > 5 {
        pick.truncate(comps[0].len());
    }
    pick.sort_unstable();
    g.induced(&pick)
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let fig = figure5_pattern();
    let mut corpus: Vec<GaussDiagram> = (0..600).map(|_| gauss(&random_diagram(&mut rng, 10, 30))).collect();
    corpus.extend((0..600).map(|_| random_gauss(&mut rng, 10)));
    ensure!(corpus.iter().all(|g| g.len() <= 10), "corpus diagram above 10 arrows");
    let mut nonzero = [0usize; 3];
    for g in &corpus {
        let p = random_pattern(&mut rng);
        for (i, pat) in [&fig, &p].into_iter().enumerate() {
            let (fast, slow) = (count_pattern(g, pat), brute_count_pattern(g, pat));
            ensure!(fast == slow, "pattern {:?}: {fast} vs {slow} on {}", pat.arrows(), emit_gauss(g));
            nonzero[i] += (fast != 0) as usize;
        }
        let h = isolated_piece(&mut rng, g);
        let (fast, slow) = (count_isolated_copies(g, &h), brute_isolated_copies(g, &h));
        ensure!(fast == slow, "isolated {}: {fast} vs {slow} in {}", emit_gauss(&h), emit_gauss(g));
        nonzero[2] += (fast != 0) as usize;
    }
    Ok(format!("{} diagrams, nonzero results (figure 5, random pattern, isolated) {nonzero:?}", corpus.len()))
}

fn structural_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut cases = 0;
    while cases < 10_000 {
        let d = random_diagram(&mut rng, 10, 30);
        let n = d.crossing_count();
        let faces = d.faces();
        ensure!(faces.len() == n + 2, "{} faces for {n} crossings", faces.len());
        let degree_sum: usize = faces.polygons.iter().map(|f| f.degree()).sum();
        ensure!(degree_sum == 4 * n, "degree sum {degree_sum} for {n} crossings");

        let pd = emit_pd(&d);
        let back = parse_pd(&pd).map_err(|e| format!("{pd}: {e}"))?;
        ensure!(back.canonical_key() == d.canonical_key(), "PD round trip changed {pd}");
        ensure!(emit_pd(&back) == pd, "PD emission not canonical for {pd}");
        let json = planar_from_json(&planar_to_json(&d)).map_err(|e| e.to_string())?;
        ensure!(json == d, "JSON round trip changed {pd}");

        let g = gauss(&d);
        let code = emit_gauss(&g);
        let g2 = parse_gauss(&code).map_err(|e| format!("{code}: {e}"))?;
        ensure!(g2.equal_up_to_rotation(&g), "Gauss round trip changed {code}");
        ensure!(gauss_from_json(&gauss_to_json(&g)).ok().as_ref() == Some(&g), "Gauss JSON round trip");

        let moves = enumerate_moves(&d, MoveKinds::all());
        if let Some(m) = moves.choose(&mut rng) {
            let e = apply_move(&d, m).map_err(|e| e.to_string())?;
            ensure!(e.validate().is_empty(), "{:?} left an invalid diagram", m.kind());
            let undone = common::fuses_strands(&d, m) || common::undoable(&d, &e, m.kind());
            ensure!(undone, "{:?} has no inverse on {pd}", m.kind());
        }
        cases += 1;
    }
    Ok(format!("{cases} diagrams"))
}

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "figure 5 count oracle", limit: Duration::from_secs(1), run: pattern_count_oracle },
        Criterion { name: "Ω1/Ω2 invariance suite", limit: Duration::from_secs(120), run: invariance_suite },
        Criterion { name: "Ω3 variance witness", limit: Duration::from_secs(300), run: omega3_variance },
        Criterion { name: "connected-sum additivity", limit: Duration::from_secs(60), run: additivity },
        Criterion { name: "Ω2-dependent pair desk check", limit: Duration::from_secs(600), run: omega2_pair_desk_check },
        Criterion { name: "pair construction over five knots", limit: Duration::from_secs(120), run: pair_over_five_knots },
        Criterion { name: "all-moves dependent pair", limit: Duration::from_secs(60), run: all_moves_pair },
        Criterion { name: "counter oracle equivalence", limit: Duration::from_secs(300), run: oracle_equivalence },
        Criterion { name: "structural suite", limit: Duration::from_secs(120), run: structural_suite },
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let number = i + 1;
        if only.is_some_and(|k| k != number) {
            continue;
        }
        let t = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let took = t.elapsed();
        let result = match result {
            Ok(msg) if took > c.limit => Err(format!("{msg}; over the {:?} limit", c.limit)),
            other => other,
        };
        match result {
            Ok(msg) => println!("criterion {number} PASS [{:.1?}] {}: {msg}", took, c.name),
            Err(msg) => {
                failed += 1;
                println!("criterion {number} FAIL [{:.1?}] {}: {msg}", took, c.name);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
