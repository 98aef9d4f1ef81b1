mod common;

use std::collections::BTreeSet;

use discrete_homotopy::audits::{
    inclusion, joinability_audit, projection_surjectivity_audit, prop2_crosscheck, uniformly_open_map,
    uniformly_open_subset, Joinability, Status, Surjectivity,
};
use discrete_homotopy::chains::{Budget, Chain, HomotopyContext, Verdict};
use discrete_homotopy::derived::{ClassOptions, DerivedOptions, DerivedSpace};
use discrete_homotopy::homology::path_vector;
use discrete_homotopy::io::{model_to_json, parse_json, parse_model, replay_document, to_stable_string};
use discrete_homotopy::paperlab::{
    build_hexagon_graph, build_hexagon_square, run_claims, ClaimOptions, ClaimStatus, Fixture, SEGMENTS,
};
use discrete_homotopy::rips::build_skeleton2;
use discrete_homotopy::UniformModel;

use common::{in_column_span, int};

fn idx(m: &UniformModel, p: &str) -> usize {
    m.point_index(p).unwrap()
}

#[test]
fn hexagon_squared_distances() {
    let m = build_hexagon_square(1).unwrap();
    // Hand evaluation of the embedding: unit hexagon around o, unit square over a-o.
    let table = [
        ("a", "o", "1"),
        ("a", "b", "1"),
        ("e", "f", "1"),
        ("a", "g", "1"),
        ("g", "h", "1"),
        ("h", "o", "1"),
        ("a", "h", "2"),
        ("g", "o", "2"),
        ("a", "c", "3"),
        ("a", "d", "4"),
        ("b", "e", "4"),
        ("g", "d", "5"),
        ("h", "b", "2"),
    ];
    for (x, y, v) in table {
        let d = m.dist2(idx(&m, x), idx(&m, y)).unwrap();
        assert_eq!(d.canonical(), v, "d²({x},{y})");
    }
    let m4 = build_hexagon_square(4).unwrap();
    assert_eq!(m4.len(), 36);
    assert_eq!(m4.dist2(idx(&m4, "a"), idx(&m4, "ag1")).unwrap().canonical(), "1/16");
    assert_eq!(m4.ladder().len(), 2);
}

#[test]
fn nine_point_rips_and_homology() {
    let m = build_hexagon_square(1).unwrap();
    let k = build_skeleton2(&m, 0).unwrap();
    assert_eq!(k.counts(), (9, 15, 6));
    let ctx = HomotopyContext::new(&m, 0).unwrap();
    let h = ctx.solver().h1();
    assert_eq!(h.betti1, 1);
    assert!(h.torsion.is_empty());
}

#[test]
fn square_side_and_hexagon_loop() {
    let m = build_hexagon_square(1).unwrap();
    let ctx = HomotopyContext::new(&m, 0).unwrap();
    let hex = Chain::parse(&m, 0, &["a", "b", "c", "d", "e", "f", "a"]).unwrap();
    let a = Chain::parse(&m, 0, &["a"]).unwrap();
    match ctx.decide(&hex, &a, &Budget::default()).unwrap() {
        Verdict::Equivalent(w) => {
            assert!(w.len() <= 64);
            w.verify(&m, &hex, &a).unwrap();
        }
        other => panic!("{}", other.label()),
    }
    let agho = Chain::parse(&m, 0, &["a", "g", "h", "o"]).unwrap();
    let ao = Chain::parse(&m, 0, &["a", "o"]).unwrap();
    match ctx.decide(&agho, &ao, &Budget::default()).unwrap() {
        Verdict::Inequivalent(cert) => {
            cert.verify(&m, 0).unwrap();
            let k = build_skeleton2(&m, 0).unwrap();
            let (_, d2) = k.boundary_matrices();
            assert!(!in_column_span(&d2, &path_vector(&k, &cert.loop_points).unwrap()));
        }
        other => panic!("{}", other.label()),
    }
}

#[test]
fn subdivided_square_side_is_coarsely_null() {
    let m = build_hexagon_square(2).unwrap();
    let ctx = HomotopyContext::new(&m, 0).unwrap();
    assert_eq!(ctx.solver().h1().betti1, 0);
    let agho = Chain::parse(&m, 0, &["a", "g", "h", "o"]).unwrap();
    let ao = Chain::parse(&m, 0, &["a", "o"]).unwrap();
    match ctx.decide(&agho, &ao, &Budget::default()).unwrap() {
        Verdict::Equivalent(w) => w.verify(&m, &agho, &ao).unwrap(),
        other => panic!("{}", other.label()),
    }
}

#[test]
fn graph_variant_derived_structure() {
    let m = build_hexagon_graph(1).unwrap();
    let ctx = HomotopyContext::new(&m, 0).unwrap();
    let space = DerivedSpace::build(&ctx, 1, idx(&m, "a"), &DerivedOptions::default()).unwrap();
    assert!(space.table.is_complete());
    assert!(space.realized.complete);
    assert_eq!(space.realized.classes.len(), 9);
    // E_A is exactly segment adjacency.
    let expected: BTreeSet<(usize, usize)> = SEGMENTS
        .iter()
        .map(|(x, y)| (idx(&m, x), idx(&m, y)))
        .map(|(i, j)| (i.min(j), i.max(j)))
        .collect();
    assert_eq!(space.ea.pairs, expected);
    assert_eq!(space.pullback(), space.star.pairs);
    // At o, only the square-side class is realized.
    let o = idx(&m, "o");
    let at_o: Vec<String> =
        space.realized.per_point[&o].iter().map(|&k| space.table.rep_names(&m, k)).collect();
    assert_eq!(at_o, ["a.g.h.o"]);
    // Derived models round-trip through JSON.
    let cm = space.class_model(&m).unwrap();
    let text = to_stable_string(&model_to_json(&cm));
    assert_eq!(parse_model(&text).unwrap().relation(0), cm.relation(0));
}

#[test]
fn pullback_identity_on_small_metric_fixture() {
    let m = build_hexagon_square(2).unwrap();
    let ctx = HomotopyContext::new(&m, 0).unwrap();
    let space = DerivedSpace::build(&ctx, 1, idx(&m, "a"), &DerivedOptions::default()).unwrap();
    assert!(space.fhat.unknown.is_empty() && space.star.unknown.is_empty());
    assert_eq!(space.pullback(), space.star.pairs);
    assert_eq!(projection_surjectivity_audit(&space), Surjectivity::Pass);
}

#[test]
fn class_tables_are_deterministic() {
    let m = build_hexagon_graph(1).unwrap();
    let ctx = HomotopyContext::new(&m, 0).unwrap();
    let opts = ClassOptions::default();
    let t1 = discrete_homotopy::derived::enumerate_classes(&ctx, 0, &opts).unwrap();
    let t2 = discrete_homotopy::derived::enumerate_classes(&ctx, 0, &opts).unwrap();
    assert_eq!(t1.entries(), t2.entries());
}

#[test]
fn graph_variant_claims_all_confirmed_and_replay() {
    let suite = run_claims(Fixture::Graph, 1, &ClaimOptions::default()).unwrap();
    for r in &suite.results {
        assert_eq!(r.status, ClaimStatus::Confirmed, "{}\n{}", r.id, suite.summary_table());
    }
    let text = to_stable_string(&suite.to_json());
    assert!(replay_document(&parse_json(&text).unwrap()).unwrap() >= 7);
}

#[test]
fn single_scale_claims_are_not_applicable() {
    let suite = run_claims(Fixture::Metric, 1, &ClaimOptions::default()).unwrap();
    let status: Vec<ClaimStatus> = suite.results.iter().map(|r| r.status).collect();
    assert_eq!(&status[..2], [ClaimStatus::Confirmed; 2]);
    assert!(status[2..].iter().all(|s| *s == ClaimStatus::Unknown));
}

#[test]
fn audit_examples() {
    let m = build_hexagon_square(1).unwrap();
    let two = m
        .with_ladder(vec![
            m.ladder()[0].clone(),
            discrete_homotopy::space::ScaleEntry {
                tag: "1/2".into(),
                kind: discrete_homotopy::space::ScaleKind::MetricThreshold(
                    discrete_homotopy::QuadRat::parse("1/4", 3).unwrap(),
                ),
            },
        ])
        .unwrap();
    // Isolated points at the fine scale: the precondition fails.
    assert!(matches!(joinability_audit(&two, 0, &Budget::default()).unwrap(), Joinability::Unknown { .. }));
    let sampled = build_hexagon_square(2).unwrap();
    match joinability_audit(&sampled, 0, &Budget::default()).unwrap() {
        Joinability::Pass { scale, witnesses } => {
            assert_eq!(sampled.scale_tag(scale), "1");
            assert_eq!(witnesses.len(), sampled.relation(scale).pairs().count());
        }
        other => panic!("{other:?}"),
    }
    // The square side is not a fine path homotopic to [a,o], so only `seg` works.
    let g = build_hexagon_graph(1).unwrap();
    match joinability_audit(&g, 0, &Budget::default()).unwrap() {
        Joinability::Pass { scale, .. } => assert_eq!(g.scale_tag(scale), "seg"),
        other => panic!("{other:?}"),
    }
    let o = idx(&two, "o");
    assert_eq!(uniformly_open_subset(&two, &[o]).unwrap().status(), Status::Pass);
    let (dom, f) = inclusion(&two, &[o]).unwrap();
    assert_eq!(uniformly_open_map(&f, &dom, &two).unwrap().status(), Status::Pass);

    // A straight segment is joinable and its classes are all realized.
    let pts = (0..5).map(|i| (format!("s{i}"), [int(i), int(0), int(0)])).collect();
    let seg = UniformModel::from_euclidean(3, pts, vec![("2".into(), int(4)), ("1".into(), int(1))]).unwrap();
    let ctx = HomotopyContext::new(&seg, 0).unwrap();
    let space = DerivedSpace::build(&ctx, 1, 0, &DerivedOptions::default()).unwrap();
    assert_eq!(projection_surjectivity_audit(&space), Surjectivity::Pass);
    assert!(prop2_crosscheck(&seg, 0, 0, &ClassOptions::default()).unwrap().consistent());

    let single = UniformModel::from_euclidean(3, vec![("p".into(), [int(0), int(0), int(0)])], vec![("1".into(), int(1))])
        .unwrap();
    let ctx = HomotopyContext::new(&single, 0).unwrap();
    let space = DerivedSpace::build(&ctx, 0, 0, &DerivedOptions::default()).unwrap();
    assert_eq!(projection_surjectivity_audit(&space), Surjectivity::Pass);

    // On the graph variant the direct class [a,o] is never realized.
    let g = build_hexagon_graph(1).unwrap();
    let ctx = HomotopyContext::new(&g, 0).unwrap();
    let space = DerivedSpace::build(&ctx, 1, idx(&g, "a"), &DerivedOptions::default()).unwrap();
    match projection_surjectivity_audit(&space) {
        Surjectivity::Fail { unrealized } => {
            let names: Vec<String> = unrealized.iter().map(|&k| space.table.rep_names(&g, k)).collect();
            assert!(names.contains(&"a.o".to_string()), "{names:?}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn disconnected_models_skip_the_crosscheck() {
    let pts = vec![("p".into(), [int(0), int(0), int(0)]), ("q".into(), [int(5), int(0), int(0)])];
    let m = UniformModel::from_euclidean(3, pts, vec![("1".into(), int(1))]).unwrap();
    let r = prop2_crosscheck(&m, 0, 0, &ClassOptions::default()).unwrap();
    assert!(r.precondition.is_some());
    assert!(r.audits().iter().all(|a| a.status == Status::Unknown));
}
