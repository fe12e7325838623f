use std::collections::BTreeMap;
use std::fmt;

/// Simple labeled undirected graph on vertices `0..n`, stored as a dense
/// adjacency bitset so membership tests are O(1) at the sizes we sample.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph {
            n,
            words,
            bits: vec![0; words * n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(k: usize) -> Self {
        assert!(k >= 3, "cycles need at least 3 vertices");
        let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        Graph::from_edges(k, &edges)
    }

    /// Path on `k` vertices (so `k - 1` edges).
    pub fn path(k: usize) -> Self {
        assert!(k >= 2, "paths need at least 2 vertices");
        let edges: Vec<_> = (0..k - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(k, &edges)
    }

    /// Star with `leaves` leaves around vertex 0.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "self-loop {u}-{u}");
        assert!(u < self.n && v < self.n, "edge {u}-{v} out of range");
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] &= !(1 << (v % 64));
        self.bits[v * self.words + u / 64] &= !(1 << (u % 64));
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    pub fn is_regular(&self, d: usize) -> bool {
        (0..self.n).all(|u| self.degree(u) == d)
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(u).iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    /// Edges as normalized `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// Number of vertices with at least one incident edge.
    pub fn active_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&u| self.degree(u) > 0).collect()
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Number of common neighbours of `u` and `v`.
    pub fn codegree(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        let active = self.active_vertices();
        let Some(&start) = active.first() else {
            return true;
        };
        let mut seen = vec![false; self.n];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == active.len()
    }

    /// Relabel vertex `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// Drop isolated vertices, relabeling the rest densely in increasing order.
    pub fn strip_isolated(&self) -> Graph {
        let active = self.active_vertices();
        let mut index = vec![usize::MAX; self.n];
        for (i, &u) in active.iter().enumerate() {
            index[u] = i;
        }
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (index[u], index[v]))
            .collect();
        Graph::from_edges(active.len(), &edges)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, {:?})", self.n, self.edges())
    }
}

/// Labeled undirected multigraph: every stored pair has multiplicity >= 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n: usize,
    edges: BTreeMap<(usize, usize), u32>,
}

impl Multigraph {
    pub fn new(n: usize) -> Self {
        Multigraph {
            n,
            edges: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Add `mult` parallel copies of the edge `u-v`.
    pub fn add_edge(&mut self, u: usize, v: usize, mult: u32) {
        assert!(u != v, "self-loop {u}-{u}");
        assert!(u < self.n && v < self.n, "edge {u}-{v} out of range");
        if mult == 0 {
            return;
        }
        *self.edges.entry((u.min(v), u.max(v))).or_insert(0) += mult;
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        self.edges.get(&(u.min(v), u.max(v))).copied().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), u32)> + '_ {
        self.edges.iter().map(|(&e, &m)| (e, m))
    }

    /// Edge count with multiplicity.
    pub fn edge_count(&self) -> u32 {
        self.edges.values().sum()
    }

    pub fn distinct_edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Pairs of multiplicity exactly one.
    pub fn singleton_edges(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .filter(|(_, &m)| m == 1)
            .map(|(&e, _)| e)
            .collect()
    }

    pub fn active_vertices(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        for &(u, v) in self.edges.keys() {
            seen[u] = true;
            seen[v] = true;
        }
        (0..self.n).filter(|&u| seen[u]).collect()
    }

    /// Underlying simple graph.
    pub fn support(&self) -> Graph {
        let edges: Vec<_> = self.edges.keys().copied().collect();
        Graph::from_edges(self.n, &edges)
    }

    pub fn is_simple(&self) -> bool {
        self.edges.values().all(|&m| m == 1)
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut m = Multigraph::new(g.n());
        for (u, v) in g.edges() {
            m.add_edge(u, v, 1);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_shapes() {
        let c5 = Graph::cycle(5);
        assert!(c5.is_regular(2));
        assert_eq!(c5.edge_count(), 5);
        assert_eq!(Graph::path(4).edge_count(), 3);
        assert_eq!(Graph::star(3).degree(0), 3);
        assert_eq!(Graph::complete(4).complement().edge_count(), 0);
    }

    #[test]
    fn wide_bitsets() {
        let mut g = Graph::empty(130);
        g.add_edge(3, 129);
        g.add_edge(64, 65);
        assert!(g.has_edge(129, 3));
        assert_eq!(g.neighbors(129).collect::<Vec<_>>(), vec![3]);
        assert_eq!(g.edges(), vec![(3, 129), (64, 65)]);
        g.remove_edge(3, 129);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn strip_and_connectivity() {
        let g = Graph::from_edges(6, &[(1, 3), (3, 5)]);
        let s = g.strip_isolated();
        assert_eq!(s.n(), 3);
        assert_eq!(s.edges(), vec![(0, 1), (1, 2)]);
        assert!(g.is_connected());
        assert!(!Graph::from_edges(4, &[(0, 1), (2, 3)]).is_connected());
    }

    #[test]
    fn multigraph_singletons() {
        let mut m = Multigraph::new(4);
        m.add_edge(0, 1, 2);
        m.add_edge(2, 1, 1);
        m.add_edge(1, 2, 1);
        m.add_edge(2, 3, 1);
        assert_eq!(m.multiplicity(1, 2), 2);
        assert_eq!(m.singleton_edges(), vec![(2, 3)]);
        assert_eq!(m.edge_count(), 5);
    }
}
