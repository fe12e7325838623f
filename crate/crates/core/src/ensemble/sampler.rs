use rand::RngCore;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256StarStar;
use rayon::prelude::*;

use super::EnsembleSpec;
use crate::error::Result;
use crate::graphs::Graph;

/// Chains used by [`sample_many`] / [`sample_map`] unless told otherwise.
/// Output depends on this number, never on the thread count.
pub const DEFAULT_CHAINS: usize = 16;

/// Double-edge-swap Markov chain on d-regular graphs.
///
/// For `d > (n-1)/2` the chain runs on the complement (degree `n-1-d`) and
/// [`SwapChain::graph`] complements on the way out.
pub struct SwapChain {
    state: Graph,
    edges: Vec<(usize, usize)>,
    rng: Xoshiro256StarStar,
    complemented: bool,
    d_internal: usize,
}

impl SwapChain {
    /// Chain number `chain` for this spec: xoshiro256** seeded through
    /// splitmix64 from `spec.seed`, advanced by `chain` jumps of 2^128 steps.
    pub fn new(spec: &EnsembleSpec, chain: usize) -> Result<Self> {
        spec.validate()?;
        let complemented = 2 * spec.d > spec.n - 1;
        let d_internal = if complemented {
            spec.n - 1 - spec.d
        } else {
            spec.d
        };
        let state = circulant(spec.n, d_internal);
        let edges = state.edges();
        let mut rng = Xoshiro256StarStar::seed_from_u64(spec.seed);
        for _ in 0..chain {
            rng.jump();
        }
        Ok(SwapChain {
            state,
            edges,
            rng,
            complemented,
            d_internal,
        })
    }

    #[inline]
    fn below(&mut self, m: usize) -> usize {
        // multiply-shift on u64 keeps the draw independent of pointer width
        ((self.rng.next_u64() as u128 * m as u128) >> 64) as usize
    }

    /// One proposal; returns whether it was accepted.
    pub fn step(&mut self) -> bool {
        let m = self.edges.len();
        if m < 2 {
            return false;
        }
        let i = self.below(m);
        let mut j = self.below(m - 1);
        if j >= i {
            j += 1;
        }
        let (a, b) = self.edges[i];
        let (c, e) = self.edges[j];
        let (x, y) = if self.rng.next_u64() >> 63 == 0 {
            ((a, c), (b, e))
        } else {
            ((a, e), (b, c))
        };
        if x.0 == x.1
            || y.0 == y.1
            || self.state.has_edge(x.0, x.1)
            || self.state.has_edge(y.0, y.1)
        {
            return false;
        }
        self.state.remove_edge(a, b);
        self.state.remove_edge(c, e);
        self.state.add_edge(x.0, x.1);
        self.state.add_edge(y.0, y.1);
        self.edges[i] = (x.0.min(x.1), x.0.max(x.1));
        self.edges[j] = (y.0.min(y.1), y.0.max(y.1));
        debug_assert!([a, b, c, e]
            .iter()
            .all(|&v| self.state.degree(v) == self.d_internal));
        true
    }

    pub fn run(&mut self, swaps: u64) {
        for _ in 0..swaps {
            self.step();
        }
    }

    /// Current state in the requested ensemble.
    pub fn graph(&self) -> Graph {
        if self.complemented {
            self.state.complement()
        } else {
            self.state.clone()
        }
    }
}

/// Each vertex joined to its `floor(d/2)` nearest neighbours on either side
/// of a cycle, plus the antipodal matching when `d` is odd.
fn circulant(n: usize, d: usize) -> Graph {
    let mut g = Graph::empty(n);
    for v in 0..n {
        for k in 1..=d / 2 {
            g.add_edge(v, (v + k) % n);
        }
    }
    if d % 2 == 1 {
        for v in 0..n / 2 {
            g.add_edge(v, v + n / 2);
        }
    }
    debug_assert!(g.is_regular(d));
    g
}

/// One graph from chain 0 after burn-in.
pub fn sample_regular(spec: &EnsembleSpec) -> Result<Graph> {
    let mut chain = SwapChain::new(spec, 0)?;
    chain.run(spec.burn_in());
    Ok(chain.graph())
}

/// `count` samples mapped through `f`, split into `chains` contiguous blocks.
/// Block `c` comes from chain `c` (burn-in, then `thinning` swaps between
/// consecutive samples). Chains run in parallel; results are in block order.
pub fn sample_map<T, F>(spec: &EnsembleSpec, count: usize, chains: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Graph) -> T + Sync,
{
    spec.validate()?;
    let chains = chains.max(1);
    let blocks: Vec<(usize, usize)> = (0..chains)
        .map(|c| (c, count / chains + usize::from(c < count % chains)))
        .filter(|&(_, k)| k > 0)
        .collect();
    let per_chain: Vec<Result<Vec<T>>> = blocks
        .into_par_iter()
        .map(|(c, k)| {
            let mut chain = SwapChain::new(spec, c)?;
            chain.run(spec.burn_in());
            let mut out = Vec::with_capacity(k);
            for s in 0..k {
                if s > 0 {
                    chain.run(spec.thinning());
                }
                let g = chain.graph();
                debug_assert!(g.is_regular(spec.d));
                out.push(f(&g));
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::with_capacity(count);
    for block in per_chain {
        all.extend(block?);
    }
    Ok(all)
}

pub fn sample_many(spec: &EnsembleSpec, count: usize, chains: usize) -> Result<Vec<Graph>> {
    sample_map(spec, count, chains, Graph::clone)
}
