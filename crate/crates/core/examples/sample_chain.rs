//! Double-edge-swap chain: draw from G(40, 9) and check degrees are kept.

use regfactor::ensemble::{sample_many, EnsembleSpec};
use regfactor::graphs::triangle_count;

fn main() -> regfactor::Result<()> {
    let spec = EnsembleSpec::new(40, 9, 17);
    let graphs = sample_many(&spec, 8, 4)?;
    for (i, g) in graphs.iter().enumerate() {
        assert!(g.is_regular(9));
        println!("sample {i}: {} edges, {} triangles", g.edge_count(), triangle_count(g));
    }
    Ok(())
}
