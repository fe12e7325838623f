//! Weighted sums over injective embeddings of a small pattern into `0..n`.
//!
//! For a pattern `S` with edge multiplicities `m_ab` and symmetric weight
//! matrices `W_m` (zero diagonal), computes
//! `L_S = sum over injective phi of prod_{ab} W_{m_ab}[phi(a)][phi(b)]`.
//! Subgraph counts use 0/1 adjacency weights; graph factors use chi values.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use super::canon::Pattern;

pub trait Scalar:
    Copy + Send + Sync + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    fn zero() -> Self;
    fn from_count(k: usize) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_count(k: usize) -> Self {
        k as f64
    }
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
    fn from_count(k: usize) -> Self {
        k as i128
    }
}

/// A family of `n x n` symmetric weight matrices indexed by edge
/// multiplicity, with cached row sums and pairwise products.
#[derive(Clone, Debug)]
pub struct Weights<T> {
    n: usize,
    mats: BTreeMap<u8, Vec<T>>,
    rowsums: BTreeMap<u8, Vec<T>>,
    products: BTreeMap<(u8, u8), Vec<T>>,
}

/// Above this size the O(n^3) product cache costs more than it saves.
const PRODUCT_CACHE_MAX_N: usize = 384;

impl<T: Scalar> Weights<T> {
    /// `mats` maps multiplicity to a row-major matrix; diagonals must be zero.
    pub fn new(n: usize, mats: BTreeMap<u8, Vec<T>>) -> Self {
        let mut rowsums = BTreeMap::new();
        for (&m, w) in &mats {
            assert_eq!(w.len(), n * n, "weight matrix shape");
            debug_assert!((0..n).all(|i| w[i * n + i] == T::zero()));
            let rs: Vec<T> = (0..n)
                .map(|i| {
                    w[i * n..(i + 1) * n]
                        .iter()
                        .fold(T::zero(), |acc, &x| acc + x)
                })
                .collect();
            rowsums.insert(m, rs);
        }
        Weights {
            n,
            mats,
            rowsums,
            products: BTreeMap::new(),
        }
    }

    /// Cache `W_a * W_b` for every pair of multiplicities the pattern needs
    /// at a last vertex with two earlier neighbours.
    pub fn prepare_products(&mut self, pairs: &[(u8, u8)]) {
        if self.n > PRODUCT_CACHE_MAX_N {
            return;
        }
        let n = self.n;
        for &(a, b) in pairs {
            let key = (a.min(b), a.max(b));
            if self.products.contains_key(&key) {
                continue;
            }
            let (wa, wb) = (&self.mats[&key.0], &self.mats[&key.1]);
            let mut out = vec![T::zero(); n * n];
            for i in 0..n {
                for k in 0..n {
                    let x = wa[i * n + k];
                    if x == T::zero() {
                        continue;
                    }
                    let row_b = &wb[k * n..(k + 1) * n];
                    let row_o = &mut out[i * n..(i + 1) * n];
                    for (o, &y) in row_o.iter_mut().zip(row_b) {
                        *o = *o + x * y;
                    }
                }
            }
            self.products.insert(key, out);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn w(&self, m: u8) -> &[T] {
        &self.mats[&m]
    }
}

/// One step of the embedding order: the pattern vertex placed at this depth
/// and its already-placed neighbours as `(depth, multiplicity)`.
#[derive(Clone, Debug)]
struct Step {
    back: Vec<(usize, u8)>,
}

/// Order vertices greedily so each new vertex has as many placed neighbours
/// as possible; ties go to higher degree.
fn plan(p: &Pattern) -> Vec<Step> {
    let v = p.v();
    let mut placed: Vec<usize> = Vec::with_capacity(v);
    let mut is_placed = vec![false; v];
    while placed.len() < v {
        let best = (0..v)
            .filter(|&a| !is_placed[a])
            .max_by_key(|&a| {
                let back = placed.iter().filter(|&&b| p.get(a, b) > 0).count();
                (back, p.degree(a), std::cmp::Reverse(a))
            })
            .unwrap();
        is_placed[best] = true;
        placed.push(best);
    }
    placed
        .iter()
        .enumerate()
        .map(|(i, &a)| Step {
            back: (0..i)
                .filter_map(|j| {
                    let m = p.get(a, placed[j]);
                    (m > 0).then_some((j, m))
                })
                .collect(),
        })
        .collect()
}

/// Multiplicity pairs whose product matrix speeds up the final vertex.
pub fn product_pairs(p: &Pattern) -> Vec<(u8, u8)> {
    let steps = plan(p);
    match steps.last() {
        Some(s) if s.back.len() == 2 => vec![(s.back[0].1, s.back[1].1)],
        _ => Vec::new(),
    }
}

/// `L_S`: the weighted injective-embedding sum of `p` (vertices of `p` all
/// count, isolated ones included).
pub fn embedding_sum<T: Scalar>(p: &Pattern, w: &Weights<T>) -> T {
    let v = p.v();
    if v == 0 {
        return T::from_count(1);
    }
    if v > w.n {
        return T::zero();
    }
    let steps = plan(p);
    let mut phi = vec![0usize; v];
    let mut used = vec![false; w.n];
    descend(&steps, w, 0, T::from_count(1), &mut phi, &mut used)
}

fn descend<T: Scalar>(
    steps: &[Step],
    w: &Weights<T>,
    depth: usize,
    acc: T,
    phi: &mut [usize],
    used: &mut [bool],
) -> T {
    let n = w.n;
    let step = &steps[depth];
    if depth + 1 == steps.len() {
        return acc * last_vertex(step, w, depth, phi);
    }
    let mut total = T::zero();
    for x in 0..n {
        if used[x] {
            continue;
        }
        let mut f = acc;
        for &(j, m) in &step.back {
            f = f * w.w(m)[phi[j] * n + x];
        }
        if f == T::zero() {
            continue;
        }
        phi[depth] = x;
        used[x] = true;
        total = total + descend(steps, w, depth + 1, f, phi, used);
        used[x] = false;
    }
    total
}

/// Sum over the unused images of the final vertex, using row sums or cached
/// products minus the contributions of already-used vertices.
fn last_vertex<T: Scalar>(step: &Step, w: &Weights<T>, depth: usize, phi: &[usize]) -> T {
    let n = w.n;
    let assigned = &phi[..depth];
    match step.back.as_slice() {
        [] => T::from_count(n - depth),
        &[(j, m)] => {
            let row = &w.w(m)[phi[j] * n..(phi[j] + 1) * n];
            let mut s = w.rowsums[&m][phi[j]];
            for &y in assigned {
                s = s - row[y];
            }
            s
        }
        &[(j1, m1), (j2, m2)] => {
            let key = (m1.min(m2), m1.max(m2));
            let (r1, r2) = (
                &w.w(m1)[phi[j1] * n..(phi[j1] + 1) * n],
                &w.w(m2)[phi[j2] * n..(phi[j2] + 1) * n],
            );
            if let Some(prod) = w.products.get(&key) {
                let (a, b) = if m1 <= m2 {
                    (phi[j1], phi[j2])
                } else {
                    (phi[j2], phi[j1])
                };
                let mut s = prod[a * n + b];
                for &y in assigned {
                    s = s - r1[y] * r2[y];
                }
                s
            } else {
                let mut s = T::zero();
                for x in 0..n {
                    s = s + r1[x] * r2[x];
                }
                for &y in assigned {
                    s = s - r1[y] * r2[y];
                }
                s
            }
        }
        back => {
            let mut s = T::zero();
            'cand: for x in 0..n {
                if assigned.contains(&x) {
                    continue;
                }
                let mut f = T::from_count(1);
                for &(j, m) in back {
                    f = f * w.w(m)[phi[j] * n + x];
                    if f == T::zero() {
                        continue 'cand;
                    }
                }
                s = s + f;
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Graph;

    fn adjacency(g: &Graph) -> Weights<i128> {
        let n = g.n();
        let mut a = vec![0i128; n * n];
        for (u, v) in g.edges() {
            a[u * n + v] = 1;
            a[v * n + u] = 1;
        }
        let mut w = Weights::new(n, BTreeMap::from([(1u8, a)]));
        w.prepare_products(&[(1, 1)]);
        w
    }

    #[test]
    fn edgeless_pattern_is_falling_factorial() {
        let w = adjacency(&Graph::empty(6));
        assert_eq!(embedding_sum(&Pattern::new(3), &w), 6 * 5 * 4);
    }

    #[test]
    fn triangles_in_k5() {
        let w = adjacency(&Graph::complete(5));
        let p = Pattern::from_graph(&Graph::cycle(3));
        assert_eq!(embedding_sum(&p, &w), 60);
        let p4 = Pattern::from_graph(&Graph::complete(4));
        assert_eq!(embedding_sum(&p4, &w), 120);
    }

    #[test]
    fn product_cache_matches_direct() {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (4, 5), (5, 6), (6, 4), (3, 4)]);
        let n = g.n();
        let mut a = vec![0i128; n * n];
        for (u, v) in g.edges() {
            a[u * n + v] = 1;
            a[v * n + u] = 1;
        }
        let plain = Weights::new(n, BTreeMap::from([(1u8, a)]));
        let cached = adjacency(&g);
        for shape in [Graph::cycle(4), Graph::cycle(5), Graph::path(4), Graph::complete(3)] {
            let p = Pattern::from_graph(&shape);
            assert_eq!(embedding_sum(&p, &plain), embedding_sum(&p, &cached));
        }
    }
}
