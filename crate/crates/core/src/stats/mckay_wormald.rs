use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Natural log of the main term of the dense McKay–Wormald enumeration
/// formula for `|G(n,d)|`, with `lambda = d/(n-1)` and the `O(n^-eps)`
/// correction set to zero.
pub fn mw_count_estimate(n: usize, d: usize) -> Result<f64> {
    if n < 2 || d == 0 || d + 1 >= n {
        return Err(Error::DegenerateDensity { n, d });
    }
    let (nf, df) = (n as f64, d as f64);
    let lam = df / (nf - 1.0);
    let inner = (2.0 * PI * nf).ln() + (df + 1.0) * lam.ln() + (nf - df) * (1.0 - lam).ln();
    let tail = (-1.0 + 10.0 * lam - 10.0 * lam * lam) / (12.0 * lam * (1.0 - lam));
    Ok(0.5 * 2f64.ln() - 0.5 * nf * inner + tail)
}

/// Same quantity via the second displayed form, written in terms of
/// `r = sqrt(lambda/(1-lambda))`. Agrees with [`mw_count_estimate`] to
/// rounding; kept as an internal cross-check.
pub fn mw_count_estimate_r_form(n: usize, d: usize) -> Result<f64> {
    if n < 2 || d == 0 || d + 1 >= n {
        return Err(Error::DegenerateDensity { n, d });
    }
    let (nf, df) = (n as f64, d as f64);
    let lam = df / (nf - 1.0);
    let r2 = lam / (1.0 - lam);
    let pairs = nf * (nf - 1.0) / 2.0;
    let tail = (-1.0 + 10.0 * lam - 10.0 * lam * lam) / (12.0 * lam * (1.0 - lam));
    Ok(pairs * (1.0 + r2).ln()
        - nf * ((2.0 * PI).ln() + 0.5 * df * r2.ln())
        + 0.5 * nf * (2.0 * PI / (lam * (1.0 - lam) * nf)).ln()
        + 0.5 * 2f64.ln()
        + tail)
}
