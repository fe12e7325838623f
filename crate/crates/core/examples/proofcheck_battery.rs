//! Random-point checks of the analytic inequalities, plus the Gaussian band
//! threshold.

use regfactor::proofcheck::{gaussian_band_case, gaussian_band_threshold, run_battery, Lemma};

fn main() -> regfactor::Result<()> {
    for lemma in Lemma::ALL {
        let r = run_battery(lemma, 20_000, 42)?;
        println!(
            "{:<16} failures {}  tightest relative slack {:.3e} at {}",
            lemma.name(),
            r.failures,
            r.worst.relative_slack(),
            r.worst.input
        );
    }
    println!("band holds from m = {:.4}", gaussian_band_threshold());
    for m in [10.0, 52.0, 53.0, 100.0] {
        println!("m = {m}: holds {}", gaussian_band_case(m)?.holds());
    }
    Ok(())
}
