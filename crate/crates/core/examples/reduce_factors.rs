//! Reduce non-basis factors (pendant edges, stars, disjoint unions).

use regfactor::algebra::{reduce_full, FactorExpr};
use regfactor::graphs::CanonicalShape;

fn main() -> regfactor::Result<()> {
    for s in ["P3", "P4", "S3", "0-1 1-2 2-0 2-3", "0-1 1-2 2-0 3-4 4-5 5-3"] {
        let h: CanonicalShape = s.parse()?;
        println!("gamma[{s}] = {}", reduce_full(&FactorExpr::gamma(h))?);
    }
    Ok(())
}
