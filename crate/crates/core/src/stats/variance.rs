//! Leading-order variance of subgraph counts in dense random regular graphs.

use std::fmt;

use crate::error::{Error, Result};
use crate::graphs::{aut_count, canonicalize, count_subgraphs, CanonicalShape, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarianceRegime {
    HasC3,
    HasC4NoC3,
    NoC3NoC4,
}

impl VarianceRegime {
    pub fn tag(&self) -> &'static str {
        match self {
            VarianceRegime::HasC3 => "has-C3",
            VarianceRegime::HasC4NoC3 => "has-C4-no-C3",
            VarianceRegime::NoC3NoC4 => "no-C3-no-C4",
        }
    }

    /// Power of `n` in the leading term, as an offset from `2 v(H)`.
    pub fn n_deficit(&self) -> i32 {
        match self {
            VarianceRegime::HasC3 => 3,
            VarianceRegime::HasC4NoC3 => 4,
            VarianceRegime::NoC3NoC4 => 5,
        }
    }
}

impl fmt::Display for VarianceRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormulaInputs {
    pub n_c3: u128,
    pub n_c4: u128,
    pub n_c5: u128,
    pub n_p4: u128,
    pub aut: u64,
    pub edges: usize,
    pub vertices: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VariancePrediction {
    pub shape: CanonicalShape,
    pub regime: VarianceRegime,
    pub n: usize,
    pub d: usize,
    pub leading: f64,
    pub inputs: FormulaInputs,
}

impl VariancePrediction {
    /// The correction is `O(n^{2v - k - 1/6})`; with a constant `c` fitted
    /// from data this is the relative band `c n^{-1/6}`.
    pub fn relative_error_budget(&self, c: f64) -> f64 {
        c * (self.n as f64).powf(-1.0 / 6.0)
    }

    pub fn regime_note(&self) -> String {
        let order = 2 * self.inputs.vertices as i32 - self.regime.n_deficit();
        format!("{}: leading term only, error O(n^({order} - 1/6))", self.regime)
    }
}

/// Leading variance of `X_H`, the number of copies of `h`, in `G(n, d)`.
pub fn predicted_variance(h: &Graph, n: usize, d: usize) -> Result<VariancePrediction> {
    let h = h.strip_isolated();
    if h.n() < 2 {
        return Err(Error::ShapeUnsupported("need at least two vertices".into()));
    }
    if !h.is_connected() {
        return Err(Error::ShapeUnsupported("variance formulas need a connected shape".into()));
    }
    let shape = canonicalize(&h)?;
    if shape.is_star() {
        return Err(Error::StarShape);
    }
    if d == 0 || d + 1 >= n {
        return Err(Error::DegenerateDensity { n, d });
    }
    let inputs = FormulaInputs {
        n_c3: count_subgraphs(&h, &Graph::cycle(3)),
        n_c4: count_subgraphs(&h, &Graph::cycle(4)),
        n_c5: count_subgraphs(&h, &Graph::cycle(5)),
        n_p4: count_subgraphs(&h, &Graph::path(4)),
        aut: aut_count(&h)?,
        edges: h.edge_count(),
        vertices: h.n(),
    };
    let p = d as f64 / (n - 1) as f64;
    let np = 1.0 - p;
    let e = inputs.edges as i32;
    let aut2 = (inputs.aut as f64).powi(2);
    let nf = n as f64;
    let (regime, core) = if inputs.n_c3 > 0 {
        let k = inputs.n_c3 as f64;
        (VarianceRegime::HasC3, 6.0 * k * k * p.powi(2 * e - 3) * np.powi(3))
    } else if inputs.n_c4 > 0 {
        let k = inputs.n_c4 as f64;
        (VarianceRegime::HasC4NoC3, 8.0 * k * k * p.powi(2 * e - 4) * np.powi(4))
    } else {
        let c5 = inputs.n_c5 as f64;
        let p4 = inputs.n_p4 as f64;
        (
            VarianceRegime::NoC3NoC4,
            10.0 * c5 * c5 * p.powi(2 * e - 5) * np.powi(5)
                + 6.0 * p4 * p4 * p.powi(2 * e - 3) * np.powi(3),
        )
    };
    let n_pow = nf.powi(2 * inputs.vertices as i32 - regime.n_deficit());
    Ok(VariancePrediction {
        shape,
        regime,
        n,
        d,
        leading: core * n_pow / aut2,
        inputs,
    })
}
