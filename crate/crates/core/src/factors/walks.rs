//! Closed-walk types and the trace statistic `tr(X^l)` of the chi matrix.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use nalgebra::DMatrix;

use super::FactorEvaluator;
use crate::error::{Error, Result};
use crate::graphs::{
    canonicalize_multigraph, is_cycle_with_doubled_pendants, CanonicalShape, Graph, Multigraph,
};

pub const MAX_WALK_LENGTH: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WalkTag {
    /// The simple cycle on all `l` vertices.
    SimpleCycle,
    /// Underlying simple graph is a tree.
    Tree,
    /// A single or doubled cycle with pendant trees of doubled edges.
    CycleWithDoubledPendants,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkType {
    pub shape: CanonicalShape,
    /// Closed walks tracing one fixed embedded copy of `shape`.
    pub count: u64,
    pub tag: WalkTag,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkTypeTable {
    pub length: usize,
    pub types: Vec<WalkType>,
}

impl WalkTypeTable {
    pub fn coefficient(&self, shape: &CanonicalShape) -> Option<u64> {
        self.types
            .iter()
            .find(|t| &t.shape == shape)
            .map(|t| t.count)
    }

    /// Total closed walks without self-loops in `K_n`.
    pub fn total_walks(&self, n: usize) -> u128 {
        self.types
            .iter()
            .map(|t| {
                let v = t.shape.vertex_count();
                let falling: u128 = (0..v).map(|i| n.saturating_sub(i) as u128).product();
                t.count as u128 * falling / t.shape.automorphisms() as u128
            })
            .sum()
    }
}

/// Closed-walk multigraph types for length `l`, with per-copy walk counts.
pub fn walk_types(l: usize) -> Result<WalkTypeTable> {
    if l > MAX_WALK_LENGTH {
        return Err(Error::Unsupported(format!(
            "walk types are tabulated up to length {MAX_WALK_LENGTH}, got {l}"
        )));
    }
    static TABLES: OnceLock<Vec<WalkTypeTable>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| (0..=MAX_WALK_LENGTH).map(build_table).collect());
    Ok(tables[l].clone())
}

fn build_table(l: usize) -> WalkTypeTable {
    let mut counts: BTreeMap<CanonicalShape, u64> = BTreeMap::new();
    let mut walk = vec![0usize; l];
    if l >= 2 {
        let total = l.pow(l as u32);
        for code in 0..total {
            let mut c = code;
            for slot in walk.iter_mut() {
                *slot = c % l;
                c /= l;
            }
            if (0..l).any(|i| walk[i] == walk[(i + 1) % l]) {
                continue;
            }
            let mut m = Multigraph::new(l);
            for i in 0..l {
                m.add_edge(walk[i], walk[(i + 1) % l], 1);
            }
            let shape = canonicalize_multigraph(&m).expect("walk shapes are small");
            *counts.entry(shape).or_insert(0) += 1;
        }
    }
    let types = counts
        .into_iter()
        .map(|(shape, walks)| {
            let v = shape.vertex_count();
            let copies_num: u64 = (0..v).map(|i| (l - i) as u64).product();
            let count = walks * shape.automorphisms() / copies_num;
            let tag = tag_of(&shape, l);
            WalkType { shape, count, tag }
        })
        .collect();
    WalkTypeTable { length: l, types }
}

fn tag_of(shape: &CanonicalShape, l: usize) -> WalkTag {
    if shape.is_cycle() && shape.vertex_count() == l {
        return WalkTag::SimpleCycle;
    }
    if shape.distinct_edge_count() + 1 == shape.vertex_count() {
        return WalkTag::Tree;
    }
    if is_cycle_with_doubled_pendants(&shape.to_multigraph()) {
        return WalkTag::CycleWithDoubledPendants;
    }
    WalkTag::General
}

fn chi_dmatrix(ev: &FactorEvaluator) -> DMatrix<f64> {
    let f = ev.field();
    DMatrix::from_row_slice(f.n(), f.n(), f.chi_matrix())
}

fn trace_power(x: &DMatrix<f64>, l: usize) -> f64 {
    match l {
        0 => x.nrows() as f64,
        1 => x.trace(),
        _ => {
            let lo = l / 2;
            let hi = l - lo;
            let mut powers = vec![x.clone()];
            for _ in 1..hi {
                let next = powers.last().unwrap() * x;
                powers.push(next);
            }
            // tr(X^lo X^hi) for symmetric powers is an elementwise product sum
            powers[lo - 1].component_mul(&powers[hi - 1]).sum()
        }
    }
}

/// `tr(M^l) / (p(1-p))^{l/2}` for `M = A - pJ + pI`, i.e. the trace of the
/// l-th power of the chi matrix (zero diagonal).
pub fn trace_stat(g: &Graph, d: usize, l: usize) -> Result<f64> {
    if l == 0 {
        return Err(Error::Unsupported("trace power must be at least 1".into()));
    }
    let ev = FactorEvaluator::new(g, d)?;
    Ok(trace_power(&chi_dmatrix(&ev), l))
}

/// `tr(X^l)` for `l = 1..=max_l` from one chi matrix.
pub fn trace_stats(g: &Graph, d: usize, max_l: usize) -> Result<Vec<f64>> {
    if max_l == 0 {
        return Err(Error::Unsupported("trace power must be at least 1".into()));
    }
    let ev = FactorEvaluator::new(g, d)?;
    let x = chi_dmatrix(&ev);
    let half = max_l.div_ceil(2);
    let mut powers = vec![x.clone()];
    for _ in 1..half {
        let next = powers.last().unwrap() * &x;
        powers.push(next);
    }
    Ok((1..=max_l)
        .map(|l| {
            if l == 1 {
                x.trace()
            } else {
                let lo = l / 2;
                powers[lo - 1].component_mul(&powers[l - lo - 1]).sum()
            }
        })
        .collect())
}

/// `sum_G c_G gamma_G` over the walk types of length `l`.
pub fn trace_reconstruction(ev: &mut FactorEvaluator, l: usize) -> Result<f64> {
    let table = walk_types(l)?;
    let mut total = 0.0;
    for t in &table.types {
        total += t.count as f64 * ev.gamma_generic(&t.shape)?;
    }
    Ok(total)
}

pub(super) fn gamma_cycle_trace(ev: &mut FactorEvaluator, l: usize) -> Result<f64> {
    let table = walk_types(l)?;
    let mut rest = 0.0;
    let mut own = 0;
    for t in &table.types {
        if t.tag == WalkTag::SimpleCycle {
            own = t.count;
        } else {
            rest += t.count as f64 * ev.gamma_generic(&t.shape)?;
        }
    }
    let tr = trace_power(&chi_dmatrix(ev), l);
    Ok((tr - rest) / own as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_three_and_four() {
        let t3 = walk_types(3).unwrap();
        assert_eq!(t3.types.len(), 1);
        assert_eq!(t3.coefficient(&CanonicalShape::cycle(3)), Some(6));

        let t4 = walk_types(4).unwrap();
        let doubled_p3: CanonicalShape = "0-1^2 1-2^2".parse().unwrap();
        assert_eq!(t4.types.len(), 3);
        assert_eq!(t4.coefficient(&CanonicalShape::cycle(4)), Some(8));
        assert_eq!(t4.coefficient(&doubled_p3), Some(4));
        assert_eq!(t4.coefficient(&CanonicalShape::multi_edge(4)), Some(2));
    }

    #[test]
    fn cycle_coefficient_and_totals() {
        for l in 2..=6 {
            let t = walk_types(l).unwrap();
            if l >= 3 {
                assert_eq!(t.coefficient(&CanonicalShape::cycle(l)), Some(2 * l as u64));
            }
            for n in [l, l + 1, 9] {
                let m = n as i128 - 1;
                let expected = m.pow(l as u32) + if l % 2 == 0 { m } else { -m };
                assert_eq!(t.total_walks(n) as i128, expected, "l={l} n={n}");
            }
        }
        assert!(matches!(walk_types(7), Err(Error::Unsupported(_))));
    }

    #[test]
    fn five_walk_degenerate_types() {
        let t = walk_types(5).unwrap();
        let pendant: CanonicalShape = "0-1 0-2 1-2 2-3^2".parse().unwrap();
        let tripled: CanonicalShape = "0-1^3 0-2 1-2".parse().unwrap();
        assert!(t.coefficient(&pendant).is_some());
        assert!(t.coefficient(&tripled).is_some());
    }

    #[test]
    fn low_traces() {
        let g = Graph::cycle(5);
        assert!(trace_stat(&g, 2, 1).unwrap().abs() < 1e-12);
        assert!((trace_stat(&g, 2, 2).unwrap() - 20.0).abs() < 1e-9);
        assert!(trace_stat(&g, 2, 3).unwrap().abs() < 1e-9);
    }

    #[test]
    fn batched_traces_match() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        let all = trace_stats(&g, 2, 6).unwrap();
        for l in 1..=6 {
            assert!((all[l - 1] - trace_stat(&g, 2, l).unwrap()).abs() < 1e-9);
        }
    }
}
