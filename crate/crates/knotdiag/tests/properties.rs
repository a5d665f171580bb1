mod common;

use knotdiag::constructions::{connected_sum, figure5_pattern, splice_edge};
use knotdiag::io::json::{gauss_from_json, gauss_to_json, planar_from_json, planar_to_json};
use knotdiag::io::{emit_gauss, emit_pd, parse_gauss, parse_pd};
use knotdiag::{
    apply_move, count_isolated_copies, count_pattern, enumerate_moves, reconstruct_planar, GaussDiagram, MoveKinds, PlanarDiagram,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn diagram(cap: usize) -> impl Strategy<Value = PlanarDiagram> {
    (any::<u64>(), 0usize..40).prop_map(move |(seed, steps)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        common::random_diagram(&mut rng, cap, steps)
    })
}

fn with_move(cap: usize) -> impl Strategy<Value = (PlanarDiagram, usize)> {
    (diagram(cap), any::<usize>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn euler_and_degree_sum(d in diagram(12)) {
        let n = d.crossing_count();
        let faces = d.faces();
        prop_assert_eq!(faces.len(), n + 2);
        prop_assert_eq!(faces.polygons.iter().map(|f| f.degree()).sum::<usize>(), 4 * n);
        prop_assert_eq!(faces.polygons.iter().filter(|f| f.is_outer).count(), 1);
    }

    #[test]
    fn pd_round_trip(d in diagram(12)) {
        let text = emit_pd(&d);
        let back = parse_pd(&text).unwrap();
        prop_assert_eq!(back.canonical_key(), d.canonical_key());
        prop_assert_eq!(emit_pd(&back), text);
    }

    #[test]
    fn json_round_trips(d in diagram(10)) {
        prop_assert_eq!(planar_from_json(&planar_to_json(&d)).unwrap(), d.clone());
        let g = GaussDiagram::from_planar(&d);
        prop_assert_eq!(gauss_from_json(&gauss_to_json(&g)).unwrap(), g);
    }

    #[test]
    fn gauss_code_round_trip(d in diagram(12), k in 0usize..24) {
        let g = GaussDiagram::from_planar(&d);
        let code = emit_gauss(&g);
        prop_assert!(parse_gauss(&code).unwrap().equal_up_to_rotation(&g));
        let r = g.rotate(k);
        prop_assert_eq!(emit_gauss(&r), code);
    }

    #[test]
    fn key_ignores_crossing_numbers(d in diagram(10), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..d.crossing_count()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let r = d.relabel(&perm);
        prop_assert_eq!(r.canonical_key(), d.canonical_key());
        prop_assert_eq!(r.writhe(), d.writhe());
        prop_assert_eq!(r.rotation_number(), d.rotation_number());
    }

    #[test]
    fn mirror_negates_writhe(d in diagram(10)) {
        let m = d.mirror();
        prop_assert_eq!(m.writhe(), -d.writhe());
        prop_assert_eq!(m.rotation_number(), d.rotation_number());
        prop_assert_eq!(m.mirror().canonical_key(), d.canonical_key());
    }

    #[test]
    fn rotation_parity(d in diagram(12)) {
        prop_assert_eq!((d.rotation_number() + d.crossing_count() as i32 + 1).rem_euclid(2), 0);
    }

    #[test]
    fn moves_are_valid_and_undoable((d, pick) in with_move(10)) {
        let moves = enumerate_moves(&d, MoveKinds::all());
        prop_assume!(!moves.is_empty());
        let m = moves[pick % moves.len()];
        let e = apply_move(&d, &m).unwrap();
        prop_assert!(e.validate().is_empty());
        prop_assert_eq!(e.crossing_count() as i32, d.crossing_count() as i32 + m.kind().crossing_delta());
        prop_assert!(
            common::fuses_strands(&d, &m) || common::undoable(&d, &e, m.kind()),
            "{} {:?} -> {}",
            emit_pd(&d),
            m.site,
            emit_pd(&e)
        );
    }

    #[test]
    fn stale_moves_are_refused((d, pick) in with_move(8)) {
        let moves = enumerate_moves(&d, MoveKinds::all());
        prop_assume!(moves.len() > 1);
        let m = moves[pick % moves.len()];
        let e = apply_move(&d, &m).unwrap();
        let other = moves[(pick + 1) % moves.len()];
        prop_assert!(apply_move(&e, &other).is_err());
    }

    #[test]
    fn omega1_omega2_keep_pattern_count((d, pick) in with_move(10)) {
        let moves = enumerate_moves(&d, MoveKinds::OMEGA1 | MoveKinds::OMEGA2);
        prop_assume!(!moves.is_empty());
        let e = apply_move(&d, &moves[pick % moves.len()]).unwrap();
        let p = figure5_pattern();
        prop_assert_eq!(
            count_pattern(&GaussDiagram::from_planar(&e), &p),
            count_pattern(&GaussDiagram::from_planar(&d), &p)
        );
    }

    #[test]
    fn only_omega1_changes_rotation((d, pick) in with_move(10)) {
        let moves = enumerate_moves(&d, MoveKinds::OMEGA2 | MoveKinds::OMEGA3);
        prop_assume!(!moves.is_empty());
        let m = moves[pick % moves.len()];
        let e = apply_move(&d, &m).unwrap();
        prop_assert_eq!(e.rotation_number(), d.rotation_number());
        prop_assert_eq!(e.writhe(), d.writhe());
    }

    #[test]
    fn counts_ignore_basepoint(d in diagram(10), k in 0usize..20) {
        let g = GaussDiagram::from_planar(&d);
        let r = g.rotate(k);
        let p = figure5_pattern();
        prop_assert_eq!(count_pattern(&r, &p), count_pattern(&g, &p));
        prop_assert_eq!(count_isolated_copies(&r, &g), 1);
    }

    #[test]
    fn reconstruction_matches_gauss(d in diagram(7)) {
        let g = GaussDiagram::from_planar(&d);
        let back = reconstruct_planar(&g).unwrap();
        prop_assert!(GaussDiagram::from_planar(&back).equal_up_to_rotation(&g));
    }

    #[test]
    fn unknot_is_a_sum_identity(d in diagram(10)) {
        prop_assume!(d.crossing_count() > 0);
        let u = PlanarDiagram::round_unknot();
        let s = connected_sum(&u, knotdiag::EdgeId(0), &d, splice_edge(&d)).unwrap();
        prop_assert_eq!(s.canonical_key(), d.canonical_key());
    }

    #[test]
    fn sum_adds_writhe_and_counts(a in diagram(6), b in diagram(6)) {
        prop_assume!(a.crossing_count() > 0 && b.crossing_count() > 0);
        let s = connected_sum(&a, splice_edge(&a), &b, splice_edge(&b)).unwrap();
        prop_assert_eq!(s.crossing_count(), a.crossing_count() + b.crossing_count());
        prop_assert_eq!(s.writhe(), a.writhe() + b.writhe());
        let g = |x: &PlanarDiagram| count_pattern(&GaussDiagram::from_planar(x), &figure5_pattern());
        prop_assert_eq!(g(&s), g(&a) + g(&b));
    }
}
