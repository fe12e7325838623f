//! Subgraph counts written as graph-factor expansions, then checked on a
//! graph that is not regular.

use regfactor::algebra::{evaluate, evaluate_exact, expand_subgraph_count};
use regfactor::graphs::{count_subgraphs, Graph};

fn main() -> regfactor::Result<()> {
    let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 2), (5, 6), (6, 0)]);
    for (name, h) in [("C3", Graph::cycle(3)), ("C4", Graph::cycle(4)), ("P4", Graph::path(4))] {
        let e = expand_subgraph_count(&h)?;
        println!(
            "{name}: {} terms; direct {}, float {:.9}, exact {}",
            e.len(),
            count_subgraphs(&g, &h),
            evaluate(&e, &g, 3)?,
            evaluate_exact(&e, &g, 3)?
        );
    }
    Ok(())
}
