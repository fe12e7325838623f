//! The uniform law on `G(n,d)`: exhaustive enumeration for tiny instances
//! and a double-edge-swap chain for everything else.

mod enumerate;
mod sampler;

pub use enumerate::{enumerate_regular, RegularGraphIterator, ENUMERATION_LIMIT};
pub use sampler::{
    sample_many, sample_map, sample_regular, SwapChain, DEFAULT_CHAINS,
};

use crate::error::{Error, Result};

/// Parameters of one sampling run. `None` swap counts resolve to the
/// defaults `20 m ln m` and `2 m ln m` with `m = nd/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnsembleSpec {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub burn_in_swaps: Option<u64>,
    pub thinning_swaps: Option<u64>,
}

impl EnsembleSpec {
    pub fn new(n: usize, d: usize, seed: u64) -> Self {
        EnsembleSpec {
            n,
            d,
            seed,
            burn_in_swaps: None,
            thinning_swaps: None,
        }
    }

    pub fn with_burn_in(mut self, swaps: u64) -> Self {
        self.burn_in_swaps = Some(swaps);
        self
    }

    pub fn with_thinning(mut self, swaps: u64) -> Self {
        self.thinning_swaps = Some(swaps);
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_feasible(self.n, self.d)
    }

    pub fn edge_count(&self) -> usize {
        self.n * self.d / 2
    }

    /// `p = d/(n-1)`, required to lie strictly inside `(0,1)`.
    pub fn density(&self) -> Result<f64> {
        density(self.n, self.d)
    }

    fn m_ln_m(&self) -> f64 {
        let m = self.edge_count() as f64;
        if m <= 1.0 {
            0.0
        } else {
            m * m.ln()
        }
    }

    pub fn burn_in(&self) -> u64 {
        self.burn_in_swaps
            .unwrap_or_else(|| (20.0 * self.m_ln_m()).ceil() as u64)
    }

    pub fn thinning(&self) -> u64 {
        self.thinning_swaps
            .unwrap_or_else(|| (2.0 * self.m_ln_m()).ceil() as u64)
    }
}

/// Parameters of the complement ensemble `G(n, n-1-d)`.
pub fn complement_spec(spec: &EnsembleSpec) -> EnsembleSpec {
    EnsembleSpec {
        d: spec.n - 1 - spec.d,
        ..*spec
    }
}

pub fn check_feasible(n: usize, d: usize) -> Result<()> {
    if n == 0 || d >= n || (n * d) % 2 == 1 {
        return Err(Error::Infeasible { n, d });
    }
    Ok(())
}

pub fn density(n: usize, d: usize) -> Result<f64> {
    check_feasible(n, d)?;
    if d == 0 || d + 1 >= n {
        return Err(Error::DegenerateDensity { n, d });
    }
    Ok(d as f64 / (n - 1) as f64)
}
