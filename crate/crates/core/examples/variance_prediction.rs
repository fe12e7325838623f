//! Leading-order variance of subgraph counts in each regime.

use regfactor::graphs::Graph;
use regfactor::stats::predicted_variance;

fn main() -> regfactor::Result<()> {
    let (n, d) = (200, 100);
    let shapes = [
        ("C3", Graph::cycle(3)),
        ("K4", Graph::complete(4)),
        ("C4", Graph::cycle(4)),
        ("C5", Graph::cycle(5)),
        ("C6", Graph::cycle(6)),
    ];
    for (name, h) in shapes {
        let v = predicted_variance(&h, n, d)?;
        println!("{name}: {:<14} Var ~ {:.6e}", v.regime.tag(), v.leading);
    }
    match predicted_variance(&Graph::star(3), n, d) {
        Err(e) => println!("S3: {e}"),
        Ok(v) => println!("S3: unexpected {v:?}"),
    }
    Ok(())
}
