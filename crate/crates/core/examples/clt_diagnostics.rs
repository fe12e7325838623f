//! Normality diagnostics for normalized C3 and C4 factors at a moderate size.

use regfactor::ensemble::{sample_map, EnsembleSpec, DEFAULT_CHAINS};
use regfactor::factors::{gamma_with, FactorEvaluator};
use regfactor::graphs::CanonicalShape;
use regfactor::stats::{estimate_moments, normality_report};

fn main() -> regfactor::Result<()> {
    let (n, d) = (48, 24);
    let shapes = [CanonicalShape::cycle(3), CanonicalShape::cycle(4)];
    let rows = sample_map(&EnsembleSpec::new(n, d, 1), 600, DEFAULT_CHAINS, |g| {
        let mut ev = FactorEvaluator::new(g, d).unwrap();
        shapes
            .iter()
            .map(|h| gamma_with(&mut ev, h).unwrap().normalized.unwrap())
            .collect::<Vec<f64>>()
    })?;
    let acc = estimate_moments(2, &rows)?;
    let report = normality_report(&acc, &rows)?;
    for (h, c) in shapes.iter().zip(&report.coordinates) {
        println!(
            "{h}: mean {:+.3} var {:.3} KS {:.4} skew {:+.3} kurt {:+.3}",
            c.mean, c.variance, c.ks_distance, c.skewness, c.excess_kurtosis
        );
    }
    println!("max |corr| = {:.4}", report.max_abs_correlation());
    Ok(())
}
