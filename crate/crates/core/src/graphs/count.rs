use std::collections::BTreeMap;

use super::canon::{automorphism_count, Pattern};
use super::embed::{embedding_sum, product_pairs, Weights};
use super::graph::Graph;

/// Number of injective maps `V(f) -> V(h)` sending edges to edges.
pub fn injective_hom_count(h: &Graph, f: &Graph) -> u128 {
    let n = h.n();
    let mut a = vec![0i128; n * n];
    for (u, v) in h.edges() {
        a[u * n + v] = 1;
        a[v * n + u] = 1;
    }
    let p = Pattern::from_graph(f);
    let mut w = Weights::new(n, BTreeMap::from([(1u8, a)]));
    w.prepare_products(&product_pairs(&p));
    embedding_sum(&p, &w) as u128
}

/// `N(h, f)`: distinct (not necessarily induced) subgraphs of `h` isomorphic
/// to `f`. Isolated vertices of `f` are dropped first.
pub fn count_subgraphs(h: &Graph, f: &Graph) -> u128 {
    let f = f.strip_isolated();
    if f.n() == 0 {
        return 1;
    }
    if f.n() > h.n() || f.edge_count() > h.edge_count() {
        return 0;
    }
    if f.n() == 3 && f.edge_count() == 3 {
        return triangle_count(h);
    }
    if f.n() == 4 && f.edge_count() == 4 && f.is_regular(2) {
        return c4_count(h);
    }
    let aut = automorphism_count(&Pattern::from_graph(&f)) as u128;
    let hom = injective_hom_count(h, &f);
    debug_assert_eq!(hom % aut, 0);
    hom / aut
}

/// Triangles via common-neighbour counts over edges.
pub fn triangle_count(g: &Graph) -> u128 {
    let mut t = 0u128;
    for (u, v) in g.edges() {
        t += g.codegree(u, v) as u128;
    }
    t / 3
}

/// 4-cycles: each is counted once per diagonal pair.
pub fn c4_count(g: &Graph) -> u128 {
    let mut t = 0u128;
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            let c = g.codegree(u, v) as u128;
            t += c * c.saturating_sub(1) / 2;
        }
    }
    t / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_examples() {
        assert_eq!(count_subgraphs(&Graph::cycle(5), &Graph::path(5)), 5);
        assert_eq!(count_subgraphs(&Graph::complete(4), &Graph::cycle(3)), 4);
        assert_eq!(count_subgraphs(&Graph::cycle(6), &Graph::cycle(6)), 1);
        assert_eq!(count_subgraphs(&Graph::complete(4), &Graph::cycle(4)), 3);
        assert_eq!(count_subgraphs(&Graph::path(3), &Graph::cycle(3)), 0);
    }

    #[test]
    fn fast_paths_agree_with_embedding() {
        let g = Graph::from_edges(
            8,
            &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 1), (5, 6), (6, 7), (7, 5), (0, 5), (3, 0)],
        );
        let c3 = Graph::cycle(3);
        let c4 = Graph::cycle(4);
        assert_eq!(triangle_count(&g), injective_hom_count(&g, &c3) / 6);
        assert_eq!(c4_count(&g), injective_hom_count(&g, &c4) / 8);
    }
}
