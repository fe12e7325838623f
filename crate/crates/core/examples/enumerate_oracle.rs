//! Exhaustive enumeration of small G(n, d) and the triangle-count law on it.

use std::collections::BTreeMap;

use regfactor::ensemble::enumerate_regular;
use regfactor::graphs::triangle_count;

fn main() -> regfactor::Result<()> {
    for (n, d) in [(5, 2), (6, 3), (8, 3)] {
        let mut law: BTreeMap<u128, usize> = BTreeMap::new();
        let mut total = 0;
        for g in enumerate_regular(n, d)? {
            *law.entry(triangle_count(&g)).or_default() += 1;
            total += 1;
        }
        println!("|G({n},{d})| = {total}, triangle counts {law:?}");
    }
    Ok(())
}
