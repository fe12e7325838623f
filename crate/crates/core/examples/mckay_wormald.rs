//! Asymptotic count of d-regular graphs against exact enumeration.

use regfactor::ensemble::enumerate_regular;
use regfactor::stats::mw_count_estimate;

fn main() -> regfactor::Result<()> {
    for (n, d) in [(6, 3), (7, 2), (8, 3), (8, 4)] {
        let exact = enumerate_regular(n, d)?.count() as f64;
        let est = mw_count_estimate(n, d)?;
        println!("G({n},{d}): exact {exact}, estimate {:.1}, ratio {:.3}", est.exp(), est.exp() / exact);
    }
    Ok(())
}
