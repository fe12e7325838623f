//! tr(X^l) against its closed-walk decomposition into graph factors.

use regfactor::ensemble::{sample_regular, EnsembleSpec};
use regfactor::factors::{trace_reconstruction, trace_stats, walk_types, FactorEvaluator};

fn main() -> regfactor::Result<()> {
    let (n, d) = (16, 7);
    let g = sample_regular(&EnsembleSpec::new(n, d, 5))?;
    let traces = trace_stats(&g, d, 6)?;
    let mut ev = FactorEvaluator::new(&g, d)?;
    for l in 3..=6 {
        let table = walk_types(l)?;
        let rebuilt = trace_reconstruction(&mut ev, l)?;
        println!(
            "l={l}: {} walk types, tr = {:.6}, rebuilt = {rebuilt:.6}",
            table.types.len(),
            traces[l - 1]
        );
    }
    Ok(())
}
