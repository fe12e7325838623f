//! Canonical forms and automorphism counts of a few small shapes.

use regfactor::graphs::{aut_count, canonicalize, Graph};

fn main() -> regfactor::Result<()> {
    let relabelled = Graph::from_edges(5, &[(4, 2), (2, 0), (0, 3), (3, 4)]);
    for (name, g) in [
        ("C4", Graph::cycle(4)),
        ("C4 relabelled", relabelled),
        ("P4", Graph::path(4)),
        ("K4", Graph::complete(4)),
        ("S3", Graph::star(3)),
    ] {
        println!("{name:>14}: {:<24} aut = {}", canonicalize(&g)?.to_string(), aut_count(&g)?);
    }
    Ok(())
}
