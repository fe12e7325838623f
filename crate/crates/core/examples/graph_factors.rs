//! Raw and normalized graph factors of one sampled graph.

use regfactor::ensemble::{sample_regular, EnsembleSpec};
use regfactor::factors::{gamma_with, FactorEvaluator};
use regfactor::graphs::CanonicalShape;

fn main() -> regfactor::Result<()> {
    let (n, d) = (30, 15);
    let g = sample_regular(&EnsembleSpec::new(n, d, 3))?;
    let mut ev = FactorEvaluator::new(&g, d)?;
    for s in ["C3", "C4", "C5", "K4", "P4"] {
        let h: CanonicalShape = s.parse()?;
        let v = gamma_with(&mut ev, &h)?;
        match v.normalized {
            Some(z) => println!("{s}: raw {:12.3}  normalized {z:+.4}", v.raw),
            None => println!("{s}: raw {:12.3}  (no normalization: not a basis shape)", v.raw),
        }
    }
    Ok(())
}
