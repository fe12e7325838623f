//! Canonical forms and automorphism counts for small (multi)graphs.
//!
//! Shapes never exceed a handful of vertices, so both routines search over
//! vertex permutations directly. Canonical labeling is a branch-and-bound
//! search for the relabeling whose row-major upper-triangular multiplicity
//! sequence is lexicographically greatest; for simple graphs this is the same
//! relabeling that yields the lexicographically least sorted edge list.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::graph::{Graph, Multigraph};
use crate::error::{Error, Result};

/// Non-isolated-vertex bound for the public canonicalization entry points.
pub const MAX_CANON_VERTICES: usize = 10;

/// Dense multiplicity matrix over a small vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    v: usize,
    mult: Vec<u8>,
}

impl Pattern {
    pub fn new(v: usize) -> Self {
        Pattern {
            v,
            mult: vec![0; v * v],
        }
    }

    #[inline]
    pub fn v(&self) -> usize {
        self.v
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> u8 {
        self.mult[a * self.v + b]
    }

    pub fn add(&mut self, a: usize, b: usize, m: u8) {
        assert!(a != b, "self-loop in pattern");
        self.mult[a * self.v + b] += m;
        self.mult[b * self.v + a] += m;
    }

    pub fn set(&mut self, a: usize, b: usize, m: u8) {
        assert!(a != b, "self-loop in pattern");
        self.mult[a * self.v + b] = m;
        self.mult[b * self.v + a] = m;
    }

    /// Number of distinct neighbours.
    pub fn degree(&self, a: usize) -> usize {
        (0..self.v).filter(|&b| self.get(a, b) > 0).count()
    }

    pub fn weighted_degree(&self, a: usize) -> u32 {
        (0..self.v).map(|b| self.get(a, b) as u32).sum()
    }

    /// `(a, b, multiplicity)` with `a < b`, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize, u8)> {
        let mut out = Vec::new();
        for a in 0..self.v {
            for b in a + 1..self.v {
                let m = self.get(a, b);
                if m > 0 {
                    out.push((a, b, m));
                }
            }
        }
        out
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut p = Pattern::new(g.n());
        for (u, v) in g.edges() {
            p.set(u, v, 1);
        }
        p
    }

    pub fn from_multigraph(m: &Multigraph) -> Self {
        let mut p = Pattern::new(m.n());
        for ((u, v), k) in m.edges() {
            p.set(u, v, u8::try_from(k).expect("multiplicity fits in u8"));
        }
        p
    }

    /// Remove isolated vertices.
    pub fn stripped(&self) -> Pattern {
        let keep: Vec<usize> = (0..self.v).filter(|&a| self.degree(a) > 0).collect();
        self.induced(&keep)
    }

    /// Sub-pattern on `keep`, relabeled `0..keep.len()` in the given order.
    pub fn induced(&self, keep: &[usize]) -> Pattern {
        let mut p = Pattern::new(keep.len());
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate().skip(i + 1) {
                let m = self.get(a, b);
                if m > 0 {
                    p.set(i, j, m);
                }
            }
        }
        p
    }

    /// Connected components as vertex lists (isolated vertices included as
    /// singletons).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.v];
        let mut out = Vec::new();
        for s in 0..self.v {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(a) = stack.pop() {
                for b in 0..self.v {
                    if !seen[b] && self.get(a, b) > 0 {
                        seen[b] = true;
                        comp.push(b);
                        stack.push(b);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    fn upper_key(&self, perm: &[usize]) -> Vec<u8> {
        let v = self.v;
        let mut key = Vec::with_capacity(v * (v.saturating_sub(1)) / 2);
        for j in 0..v {
            for l in j + 1..v {
                key.push(self.get(perm[j], perm[l]));
            }
        }
        key
    }
}

/// Canonical representative of an isolated-vertex-free (multi)graph shape.
///
/// Edges are `(a, b, multiplicity)` with `a < b`, sorted; vertex labels are
/// `0..vertices`. Two shapes compare equal iff the graphs are isomorphic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalShape {
    vertices: u8,
    edges: Vec<(u8, u8, u8)>,
}

impl CanonicalShape {
    /// The shape with no vertices; its graph factor is the constant 1.
    pub fn empty() -> Self {
        CanonicalShape {
            vertices: 0,
            edges: Vec::new(),
        }
    }

    pub fn of_pattern(p: &Pattern) -> CanonicalShape {
        let p = p.stripped();
        let perm = canonical_labeling(&p);
        let mut edges = Vec::new();
        for j in 0..p.v() {
            for l in j + 1..p.v() {
                let m = p.get(perm[j], perm[l]);
                if m > 0 {
                    edges.push((j as u8, l as u8, m));
                }
            }
        }
        CanonicalShape {
            vertices: p.v() as u8,
            edges,
        }
    }

    pub fn cycle(k: usize) -> Self {
        Self::of_pattern(&Pattern::from_graph(&Graph::cycle(k)))
    }

    pub fn path(k: usize) -> Self {
        Self::of_pattern(&Pattern::from_graph(&Graph::path(k)))
    }

    pub fn complete(k: usize) -> Self {
        Self::of_pattern(&Pattern::from_graph(&Graph::complete(k)))
    }

    pub fn star(leaves: usize) -> Self {
        Self::of_pattern(&Pattern::from_graph(&Graph::star(leaves)))
    }

    /// A single edge of multiplicity `m`.
    pub fn multi_edge(m: u8) -> Self {
        CanonicalShape {
            vertices: 2,
            edges: vec![(0, 1, m)],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices as usize
    }

    /// Edge count with multiplicity.
    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(|e| e.2 as usize).sum()
    }

    pub fn distinct_edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u8)> + '_ {
        self.edges
            .iter()
            .map(|&(a, b, m)| (a as usize, b as usize, m))
    }

    pub fn is_empty(&self) -> bool {
        self.vertices == 0
    }

    pub fn is_simple(&self) -> bool {
        self.edges.iter().all(|e| e.2 == 1)
    }

    pub fn to_pattern(&self) -> Pattern {
        let mut p = Pattern::new(self.vertex_count());
        for (a, b, m) in self.edges() {
            p.set(a, b, m);
        }
        p
    }

    pub fn to_graph(&self) -> Graph {
        let edges: Vec<_> = self.edges().map(|(a, b, _)| (a, b)).collect();
        Graph::from_edges(self.vertex_count(), &edges)
    }

    pub fn to_multigraph(&self) -> Multigraph {
        let mut m = Multigraph::new(self.vertex_count());
        for (a, b, k) in self.edges() {
            m.add_edge(a, b, k as u32);
        }
        m
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for (a, b, _) in self.edges() {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.to_pattern().components().len() <= 1
    }

    /// Connected with every vertex of degree 2.
    pub fn is_cycle(&self) -> bool {
        self.is_simple()
            && self.vertices >= 3
            && self.is_connected()
            && self.degrees().iter().all(|&d| d == 2)
    }

    pub fn is_star(&self) -> bool {
        let v = self.vertex_count();
        self.is_simple()
            && v >= 2
            && self.edges.len() == v - 1
            && self.degrees().iter().any(|&d| d == v - 1)
    }

    /// Connected, simple, minimum degree at least two: the reduced basis.
    pub fn is_basis(&self) -> bool {
        self.is_simple() && self.is_connected() && self.min_degree() >= 2
    }

    pub fn components(&self) -> Vec<CanonicalShape> {
        let p = self.to_pattern();
        let mut out: Vec<_> = p
            .components()
            .into_iter()
            .map(|c| CanonicalShape::of_pattern(&p.induced(&c)))
            .collect();
        out.sort();
        out
    }

    pub fn automorphisms(&self) -> u64 {
        automorphism_count(&self.to_pattern())
    }
}

impl fmt::Display for CanonicalShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.edges.is_empty() {
            return write!(f, "()");
        }
        for (i, (a, b, m)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}-{b}")?;
            if m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CanonicalShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for CanonicalShape {
    type Err = Error;

    /// Accepts `C5`, `P4`, `K4`, `S3` (star with 3 leaves), or an edge list
    /// such as `0-1,1-2 2-0` with optional `^m` multiplicities.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let named = |prefix: char| -> Option<usize> {
            s.strip_prefix(prefix)
                .and_then(|rest| rest.parse::<usize>().ok())
        };
        if let Some(k) = named('C') {
            if k < 3 {
                return Err(Error::Parse(format!("cycle C{k} needs k >= 3")));
            }
            return Ok(CanonicalShape::cycle(k));
        }
        if let Some(k) = named('P') {
            if k < 2 {
                return Err(Error::Parse(format!("path P{k} needs k >= 2")));
            }
            return Ok(CanonicalShape::path(k));
        }
        if let Some(k) = named('K') {
            if k < 2 {
                return Err(Error::Parse(format!("complete graph K{k} needs k >= 2")));
            }
            return Ok(CanonicalShape::complete(k));
        }
        if let Some(k) = named('S') {
            if k < 1 {
                return Err(Error::Parse("star needs at least one leaf".into()));
            }
            return Ok(CanonicalShape::star(k));
        }
        let mut edges = Vec::new();
        let mut max_label = 0;
        for tok in s.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let (pair, mult) = match tok.split_once('^') {
                Some((pair, m)) => (
                    pair,
                    m.parse::<u8>()
                        .map_err(|_| Error::Parse(format!("bad multiplicity in {tok:?}")))?,
                ),
                None => (tok, 1),
            };
            let (a, b) = pair
                .split_once('-')
                .ok_or_else(|| Error::Parse(format!("expected u-v, got {tok:?}")))?;
            let a: usize = a
                .parse()
                .map_err(|_| Error::Parse(format!("bad vertex in {tok:?}")))?;
            let b: usize = b
                .parse()
                .map_err(|_| Error::Parse(format!("bad vertex in {tok:?}")))?;
            if a == b {
                return Err(Error::Parse(format!("self-loop {tok:?}")));
            }
            max_label = max_label.max(a).max(b);
            edges.push((a, b, mult));
        }
        if edges.is_empty() {
            return Err(Error::Parse("empty edge list".into()));
        }
        if max_label >= 16 {
            return Err(Error::TooLarge {
                what: "shape label",
                found: max_label,
                limit: 15,
            });
        }
        let mut p = Pattern::new(max_label + 1);
        for (a, b, m) in edges {
            p.add(a, b, m);
        }
        Ok(CanonicalShape::of_pattern(&p))
    }
}

/// Canonical shape of `g` with its isolated vertices dropped.
pub fn canonicalize(g: &Graph) -> Result<CanonicalShape> {
    let active = g.active_vertices().len();
    if active > MAX_CANON_VERTICES {
        return Err(Error::TooLarge {
            what: "non-isolated vertices for canonicalization",
            found: active,
            limit: MAX_CANON_VERTICES,
        });
    }
    Ok(CanonicalShape::of_pattern(&Pattern::from_graph(g)))
}

pub fn canonicalize_multigraph(m: &Multigraph) -> Result<CanonicalShape> {
    let active = m.active_vertices().len();
    if active > MAX_CANON_VERTICES {
        return Err(Error::TooLarge {
            what: "non-isolated vertices for canonicalization",
            found: active,
            limit: MAX_CANON_VERTICES,
        });
    }
    Ok(CanonicalShape::of_pattern(&Pattern::from_multigraph(m)))
}

/// `|Aut(g)|` over all `n` vertices of `g`.
pub fn aut_count(g: &Graph) -> Result<u64> {
    if g.n() > MAX_CANON_VERTICES {
        return Err(Error::TooLarge {
            what: "vertices for automorphism counting",
            found: g.n(),
            limit: MAX_CANON_VERTICES,
        });
    }
    Ok(automorphism_count(&Pattern::from_graph(g)))
}

/// Relabeling `label -> vertex` maximizing the upper-triangular key.
pub fn canonical_labeling(p: &Pattern) -> Vec<usize> {
    struct Search<'a> {
        p: &'a Pattern,
        perm: Vec<usize>,
        used: Vec<bool>,
        best_key: Option<Vec<u8>>,
        best_perm: Vec<usize>,
        scratch: Vec<u8>,
    }

    impl Search<'_> {
        /// Compare the optimistic key prefix for the current partial labeling
        /// against the best complete key found so far.
        fn bound(&mut self) -> Ordering {
            let Some(best) = &self.best_key else {
                return Ordering::Greater;
            };
            let v = self.p.v();
            let k = self.perm.len();
            let mut pos = 0;
            for j in 0..k {
                let a = self.perm[j];
                self.scratch.clear();
                for l in j + 1..k {
                    self.scratch.push(self.p.get(a, self.perm[l]));
                }
                let mut rest: Vec<u8> = (0..v)
                    .filter(|&y| !self.used[y])
                    .map(|y| self.p.get(a, y))
                    .collect();
                rest.sort_unstable_by(|x, y| y.cmp(x));
                let skip = (j + 1).saturating_sub(k);
                self.scratch.extend(rest.into_iter().skip(skip));
                let seg = &best[pos..pos + self.scratch.len()];
                match self.scratch.as_slice().cmp(seg) {
                    Ordering::Equal => {}
                    other => return other,
                }
                pos += self.scratch.len();
            }
            Ordering::Equal
        }

        fn run(&mut self) {
            let v = self.p.v();
            if self.perm.len() == v {
                let key = self.p.upper_key(&self.perm);
                if self.best_key.as_ref().is_none_or(|b| key > *b) {
                    self.best_key = Some(key);
                    self.best_perm = self.perm.clone();
                }
                return;
            }
            for x in 0..v {
                if self.used[x] {
                    continue;
                }
                self.used[x] = true;
                self.perm.push(x);
                if self.bound() != Ordering::Less {
                    self.run();
                }
                self.perm.pop();
                self.used[x] = false;
            }
        }
    }

    let mut s = Search {
        p,
        perm: Vec::with_capacity(p.v()),
        used: vec![false; p.v()],
        best_key: None,
        best_perm: (0..p.v()).collect(),
        scratch: Vec::new(),
    };
    s.run();
    s.best_perm
}

/// Number of vertex permutations preserving every multiplicity.
pub fn automorphism_count(p: &Pattern) -> u64 {
    let v = p.v();
    let signature: Vec<Vec<u8>> = (0..v)
        .map(|a| {
            let mut row: Vec<u8> = (0..v).map(|b| p.get(a, b)).collect();
            row.sort_unstable();
            row
        })
        .collect();

    fn extend(
        p: &Pattern,
        sig: &[Vec<u8>],
        image: &mut Vec<usize>,
        used: &mut [bool],
    ) -> u64 {
        let i = image.len();
        if i == p.v() {
            return 1;
        }
        let mut total = 0;
        for x in 0..p.v() {
            if used[x] || sig[x] != sig[i] {
                continue;
            }
            if (0..i).any(|j| p.get(i, j) != p.get(x, image[j])) {
                continue;
            }
            used[x] = true;
            image.push(x);
            total += extend(p, sig, image, used);
            image.pop();
            used[x] = false;
        }
        total
    }

    extend(p, &signature, &mut Vec::with_capacity(v), &mut vec![false; v])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_perms(v: usize) -> Vec<Vec<usize>> {
        if v == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_perms(v - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, v - 1);
                out.push(q);
            }
        }
        out
    }

    /// Brute-force minimum sorted edge list over all relabelings.
    fn brute_min_edges(g: &Graph) -> Vec<(usize, usize)> {
        let s = g.strip_isolated();
        all_perms(s.n())
            .into_iter()
            .map(|perm| {
                let mut e: Vec<_> = s
                    .edges()
                    .into_iter()
                    .map(|(a, b)| {
                        let (x, y) = (perm[a], perm[b]);
                        (x.min(y), x.max(y))
                    })
                    .collect();
                e.sort_unstable();
                e
            })
            .min()
            .unwrap()
    }

    #[test]
    fn triangle_on_sparse_labels() {
        let g = Graph::from_edges(10, &[(5, 7), (7, 9), (5, 9)]);
        let c = canonicalize(&g).unwrap();
        assert_eq!(c.vertex_count(), 3);
        assert_eq!(c.to_string(), "0-1 0-2 1-2");
    }

    #[test]
    fn relabeled_paths_agree() {
        let a = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let b = Graph::from_edges(3, &[(2, 0), (0, 1)]);
        assert_eq!(canonicalize(&a).unwrap(), canonicalize(&b).unwrap());
    }

    #[test]
    fn c6_differs_from_two_triangles() {
        let c6 = Graph::cycle(6);
        let tt = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        assert_ne!(canonicalize(&c6).unwrap(), canonicalize(&tt).unwrap());
    }

    #[test]
    fn matches_brute_force_lex_min() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..300 {
            let v = rng.gen_range(2..=6);
            let mut g = Graph::empty(v);
            for a in 0..v {
                for b in a + 1..v {
                    if rng.gen_bool(0.5) {
                        g.add_edge(a, b);
                    }
                }
            }
            if g.edge_count() == 0 {
                continue;
            }
            let c = canonicalize(&g).unwrap();
            let edges: Vec<_> = c.edges().map(|(a, b, _)| (a, b)).collect();
            assert_eq!(edges, brute_min_edges(&g), "{g:?}");
        }
    }

    #[test]
    fn small_automorphism_groups() {
        assert_eq!(aut_count(&Graph::cycle(3)).unwrap(), 6);
        assert_eq!(aut_count(&Graph::path(4)).unwrap(), 2);
        assert_eq!(aut_count(&Graph::cycle(4)).unwrap(), 8);
        assert_eq!(aut_count(&Graph::complete(5)).unwrap(), 120);
        assert_eq!(aut_count(&Graph::star(3)).unwrap(), 6);
        assert_eq!(CanonicalShape::cycle(5).automorphisms(), 10);
    }

    #[test]
    fn multigraph_automorphisms() {
        // path a-b-c with a doubled b-c edge: no symmetry left
        let mut p = Pattern::new(3);
        p.set(0, 1, 1);
        p.set(1, 2, 2);
        assert_eq!(automorphism_count(&p), 1);
        assert_eq!(CanonicalShape::multi_edge(4).automorphisms(), 2);
    }

    #[test]
    fn too_many_vertices() {
        let g = Graph::path(11);
        assert!(matches!(canonicalize(&g), Err(Error::TooLarge { .. })));
        assert!(matches!(aut_count(&g), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn parse_names_and_edge_lists() {
        let c: CanonicalShape = "C4".parse().unwrap();
        assert_eq!(c, CanonicalShape::cycle(4));
        let e: CanonicalShape = "3-4,4-5 5-6,6-3".parse().unwrap();
        assert_eq!(e, c);
        let m: CanonicalShape = "0-1^2".parse().unwrap();
        assert_eq!(m, CanonicalShape::multi_edge(2));
        assert!(CanonicalShape::star(3).is_star());
        assert!(!CanonicalShape::path(4).is_star());
        assert!("0-0".parse::<CanonicalShape>().is_err());
    }
}
