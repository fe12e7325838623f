use std::collections::HashSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use regfactor::algebra::{evaluate, evaluate_exact, expand_subgraph_count, reduce_full, FactorExpr};
use regfactor::ensemble::{enumerate_regular, sample_many, EnsembleSpec};
use regfactor::factors::{gamma, trace_stats, walk_types, FactorEvaluator};
use regfactor::graphs::io::{read_graphs, write_graph};
use regfactor::graphs::{
    aut_count, c4_count, canonicalize, count_subgraphs, injective_hom_count, overlay_classify,
    triangle_count, CanonicalShape, ComponentTag, EmbeddedGraph, Graph, OverlayMode,
};

fn random_graph(rng: &mut StdRng, n: usize, density: f64) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((i + 5, (i + 2) % 5 + 5));
    }
    Graph::from_edges(10, &edges)
}

#[test]
fn canonical_form_ignores_labels() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let g = random_graph(&mut rng, 7, 0.45);
        let mut perm: Vec<usize> = (0..7).collect();
        perm.shuffle(&mut rng);
        assert_eq!(canonicalize(&g).unwrap(), canonicalize(&g.permuted(&perm)).unwrap());
    }
}

#[test]
fn five_vertex_graphs_have_34_classes() {
    let pairs: Vec<(usize, usize)> = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
    let classes: HashSet<CanonicalShape> = (0u32..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| *e)
                .collect();
            canonicalize(&Graph::from_edges(5, &edges)).unwrap()
        })
        .collect();
    // the vertex count is fixed, so dropping isolated vertices merges nothing
    assert_eq!(classes.len(), 34);
}

#[test]
fn automorphism_counts() {
    assert_eq!(aut_count(&petersen()).unwrap(), 120);
    assert_eq!(aut_count(&Graph::complete(5)).unwrap(), 120);
    for k in 3..=8 {
        assert_eq!(aut_count(&Graph::cycle(k)).unwrap(), 2 * k as u64);
    }
    assert_eq!(aut_count(&Graph::star(4)).unwrap(), 24);
}

#[test]
fn subgraph_counts_against_hom_counts() {
    // N(g, h) aut(h) is the number of injective homomorphisms
    let mut rng = StdRng::seed_from_u64(5);
    let shapes = [Graph::cycle(3), Graph::cycle(4), Graph::path(4), Graph::star(3), Graph::complete(4)];
    for _ in 0..20 {
        let g = random_graph(&mut rng, 8, 0.5);
        for h in &shapes {
            let aut = aut_count(h).unwrap() as u128;
            assert_eq!(count_subgraphs(&g, h) * aut, injective_hom_count(&g, h));
        }
        assert_eq!(triangle_count(&g), count_subgraphs(&g, &Graph::cycle(3)));
        assert_eq!(c4_count(&g), count_subgraphs(&g, &Graph::cycle(4)));
    }
    assert_eq!(count_subgraphs(&Graph::complete(6), &Graph::cycle(3)), 20);
    assert_eq!(count_subgraphs(&Graph::complete(5), &Graph::cycle(4)), 15);
    assert_eq!(count_subgraphs(&petersen(), &Graph::cycle(5)), 12);
    assert_eq!(count_subgraphs(&petersen(), &Graph::cycle(4)), 0);
}

#[test]
fn edge_list_round_trip() {
    let mut rng = StdRng::seed_from_u64(3);
    let graphs: Vec<Graph> = (0..5).map(|_| random_graph(&mut rng, 9, 0.3)).collect();
    let mut buf = Vec::new();
    for g in &graphs {
        write_graph(&mut buf, g).unwrap();
    }
    assert_eq!(read_graphs(buf.as_slice()).unwrap(), graphs);
}

#[test]
fn enumeration_sizes() {
    assert_eq!(enumerate_regular(5, 2).unwrap().count(), 12);
    assert_eq!(enumerate_regular(6, 2).unwrap().count(), 70);
    assert_eq!(enumerate_regular(6, 3).unwrap().count(), 70);
    assert_eq!(enumerate_regular(7, 2).unwrap().count(), 465);
    assert!(enumerate_regular(6, 3).unwrap().all(|g| g.is_regular(3)));
}

#[test]
fn expansions_on_irregular_graphs() {
    let mut rng = StdRng::seed_from_u64(8);
    for s in ["C3", "C4", "P3", "S3", "0-1 1-2 2-0 2-3"] {
        let h: CanonicalShape = s.parse().unwrap();
        let e = expand_subgraph_count(&h.to_graph()).unwrap();
        for _ in 0..5 {
            let g = random_graph(&mut rng, 9, 0.5);
            let d = rng.gen_range(2..=6);
            let truth = count_subgraphs(&g, &h.to_graph()) as f64;
            let via = evaluate(&e, &g, d).unwrap();
            assert!((via - truth).abs() <= 1e-9 * truth.max(1.0), "{s}: {via} vs {truth}");
            assert!((evaluate_exact(&e, &g, d).unwrap().to_f64() - truth).abs() <= 1e-9 * truth.max(1.0));
        }
    }
}

#[test]
fn reductions_agree_on_sampled_regular_graphs() {
    let graphs = sample_many(&EnsembleSpec::new(14, 5, 2), 6, 2).unwrap();
    let shapes = ["P3", "P4", "S3", "0-1 1-2 2-0 2-3", "0-1 1-2 2-3 3-0 0-4", "0-1 2-3"];
    for s in shapes {
        let h: CanonicalShape = s.parse().unwrap();
        let reduced = reduce_full(&FactorExpr::gamma(h.clone())).unwrap();
        assert!(reduced.is_reduced(), "{s}: {reduced}");
        for g in &graphs {
            let direct = FactorEvaluator::new(g, 5).unwrap().gamma_generic(&h).unwrap();
            let via = evaluate(&reduced, g, 5).unwrap();
            assert!((via - direct).abs() <= 1e-9 * direct.abs().max(1.0), "{s}: {via} vs {direct}");
        }
    }
}

#[test]
fn walk_tables_count_all_closed_walks() {
    // closed walks of length l in K_n: tr((J - I)^l) = (n-1)^l + (n-1)(-1)^l
    for l in 1..=6 {
        let table = walk_types(l).unwrap();
        for n in [6u128, 9, 12] {
            let sign: i128 = if l % 2 == 0 { 1 } else { -1 };
            let want = (n - 1).pow(l as u32) as i128 + sign * (n as i128 - 1);
            assert_eq!(table.total_walks(n as usize) as i128, want, "l={l} n={n}");
        }
    }
}

#[test]
fn chi_traces_match_moments_on_regular_graphs() {
    // the edge density is exactly p, so off-diagonal chi entries have mean
    // zero and mean square one: tr(X) = 0, tr(X^2) = n(n-1)
    for g in enumerate_regular(6, 3).unwrap().take(10) {
        let t = trace_stats(&g, 3, 2).unwrap();
        assert!(t[0].abs() < 1e-12);
        assert!((t[1] - 30.0).abs() < 1e-9);
    }
    let g = petersen();
    let c5 = gamma(&g, 3, &CanonicalShape::cycle(5)).unwrap();
    assert!(c5.normalized.is_some());
}

#[test]
fn overlay_classification() {
    let c = EmbeddedGraph::cycle(&[0, 1, 2, 3]);
    let twice = overlay_classify(&[c.clone(), c.clone()], OverlayMode::MinDegreeTwo).unwrap();
    assert!(twice.equality);
    assert_eq!(twice.classification, vec![ComponentTag::PerfectDoubleOverlay]);

    let disjoint = EmbeddedGraph::cycle(&[4, 5, 6]);
    let apart = overlay_classify(&[c.clone(), disjoint], OverlayMode::MinDegreeTwo).unwrap();
    assert!(!apart.classification.contains(&ComponentTag::Unrecognized));

    let shifted = EmbeddedGraph::cycle(&[0, 1, 2, 4]);
    let partial = overlay_classify(&[c, shifted], OverlayMode::MinDegreeTwo).unwrap();
    assert!(partial.lhs <= partial.rhs);
    assert!(!partial.classification.contains(&ComponentTag::Unrecognized));
}
