//! Deterministic identities checked over whole ensembles or graph lists.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::{evaluate, evaluate_exact_with, expand_subgraph_count, reduce_full, FactorExpr};
use crate::ensemble::enumerate_regular;
use crate::error::Result;
use crate::factors::{ExactEvaluator, FactorEvaluator};
use crate::graphs::{count_subgraphs, CanonicalShape, Graph};

/// Relative tolerance for floating-point identity checks.
pub const FLOAT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub n: usize,
    pub d: usize,
    pub checked: usize,
    pub failures: usize,
    /// Largest relative error seen (zero for exact checks that pass).
    pub max_error: f64,
}

impl IdentityCheck {
    fn new(name: impl Into<String>, n: usize, d: usize) -> Self {
        IdentityCheck {
            name: name.into(),
            n,
            d,
            checked: 0,
            failures: 0,
            max_error: 0.0,
        }
    }

    fn record_exact(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            self.max_error = f64::INFINITY;
        }
    }

    fn record_float(&mut self, got: f64, want: f64) {
        self.checked += 1;
        let err = (got - want).abs() / 1f64.max(want.abs());
        if !(err <= FLOAT_TOL) {
            self.failures += 1;
        }
        if err.is_nan() || err > self.max_error {
            self.max_error = if err.is_nan() { f64::INFINITY } else { err };
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checked > 0
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Checks that need the whole of `G(n, d)`: star counts, the constancy of
/// `X_P4 + 3 X_C3`, and `Var X_P4 = 9 Var X_C3` in exact arithmetic.
pub fn ensemble_identities(n: usize, d: usize) -> Result<Vec<IdentityCheck>> {
    let mut stars: Vec<IdentityCheck> = (2..=3)
        .map(|s| IdentityCheck::new(format!("star S{s} count = n C(d,{s})"), n, d))
        .collect();
    let mut constant = IdentityCheck::new("X_P4 + 3 X_C3 constant", n, d);
    let mut variance = IdentityCheck::new("Var X_P4 = 9 Var X_C3", n, d);
    let (c3, p4) = (Graph::cycle(3), Graph::path(4));
    let mut first: Option<u128> = None;
    let (mut sum3, mut sq3, mut sum4, mut sq4, mut count) =
        (BigInt::from(0), BigInt::from(0), BigInt::from(0), BigInt::from(0), 0u64);
    for g in enumerate_regular(n, d)? {
        for (i, check) in stars.iter_mut().enumerate() {
            let s = i + 2;
            check.record_exact(count_subgraphs(&g, &Graph::star(s)) == n as u128 * binomial(d, s));
        }
        let x3 = count_subgraphs(&g, &c3);
        let x4 = count_subgraphs(&g, &p4);
        let combo = x4 + 3 * x3;
        constant.record_exact(*first.get_or_insert(combo) == combo);
        sum3 += x3;
        sq3 += x3 * x3;
        sum4 += x4;
        sq4 += x4 * x4;
        count += 1;
    }
    // N * sum x^2 - (sum x)^2 is N^2 times the population variance
    let n_graphs = BigInt::from(count);
    let var3 = &n_graphs * &sq3 - &sum3 * &sum3;
    let var4 = &n_graphs * &sq4 - &sum4 * &sum4;
    variance.record_exact(var4 == BigInt::from(9) * var3);
    stars.push(constant);
    stars.push(variance);
    Ok(stars)
}

/// Expansions of `X_H`, cached per shape.
pub fn expansions(shapes: &[CanonicalShape]) -> Result<Vec<FactorExpr>> {
    shapes.iter().map(|h| expand_subgraph_count(&h.to_graph())).collect()
}

/// `X_H(g)` against its factor expansion, exactly and in floating point.
/// `d` only fixes the density `d / (n-1)`; `g` need not be regular.
pub fn expansion_identity(
    shapes: &[CanonicalShape],
    graphs: &[Graph],
    d: usize,
) -> Result<(IdentityCheck, IdentityCheck)> {
    let n = graphs.first().map_or(0, Graph::n);
    let mut exact = IdentityCheck::new("expansion identity (exact)", n, d);
    let mut float = IdentityCheck::new("expansion identity (float)", n, d);
    let exprs = expansions(shapes)?;
    let numeric: Vec<_> = exprs.iter().map(|e| e.at(n, d)).collect::<Result<_>>()?;
    for g in graphs {
        let mut ex = ExactEvaluator::new(g, d)?;
        let mut fl = FactorEvaluator::new(g, d)?;
        for (h, (e, num)) in shapes.iter().zip(exprs.iter().zip(&numeric)) {
            let truth = count_subgraphs(g, &h.to_graph());
            let lhs = ex.constant(BigRational::from_integer(BigInt::from(truth)));
            let rhs = evaluate_exact_with(e, &mut ex, n)?;
            exact.record_exact(lhs == rhs);
            float.record_float(num.evaluate(&mut fl)?, truth as f64);
        }
    }
    Ok((exact, float))
}

/// `gamma_H(g)` against the fully reduced expression on `d`-regular graphs.
pub fn reduction_identity(shape: &CanonicalShape, graphs: &[Graph], d: usize) -> Result<IdentityCheck> {
    let n = graphs.first().map_or(0, Graph::n);
    let mut check = IdentityCheck::new(format!("reduction of {shape}"), n, d);
    let reduced = reduce_full(&FactorExpr::gamma(shape.clone()))?;
    let num = reduced.at(n, d)?;
    for g in graphs {
        let mut ev = FactorEvaluator::new(g, d)?;
        let direct = ev.gamma_generic(shape)?;
        check.record_float(num.evaluate(&mut ev)?, direct);
    }
    Ok(check)
}

/// Same check through the one-shot API, for callers holding a single graph.
pub fn reduction_holds_on(shape: &CanonicalShape, g: &Graph, d: usize) -> Result<bool> {
    let reduced = reduce_full(&FactorExpr::gamma(shape.clone()))?;
    let direct = FactorEvaluator::new(g, d)?.gamma_generic(shape)?;
    let via = evaluate(&reduced, g, d)?;
    Ok((via - direct).abs() <= FLOAT_TOL * 1f64.max(direct.abs()))
}
