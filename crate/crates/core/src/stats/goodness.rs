//! Pearson chi-square test against the uniform law.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquareResult {
    pub fn rejects_at(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// Test that `counts` are draws from the uniform law on their cells.
pub fn chi_square_uniform(counts: &[u64]) -> Result<ChiSquareResult> {
    if counts.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: counts.len(),
        });
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let expected = total as f64 / counts.len() as f64;
    let statistic: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let dof = counts.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Numeric(e.to_string()))?;
    Ok(ChiSquareResult {
        statistic,
        dof,
        p_value: dist.sf(statistic),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfectly_flat() {
        let r = chi_square_uniform(&[10, 10, 10, 10]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.dof, 3);
        assert!((r.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lopsided_counts_reject() {
        // statistic 2 * 50^2 / 100 = 50 on one degree of freedom
        let r = chi_square_uniform(&[150, 50]).unwrap();
        assert_eq!(r.statistic, 50.0);
        assert!(r.rejects_at(1e-6));
    }

    #[test]
    fn known_quantile() {
        // P(chi2_1 > 3.841458820694124) = 0.05
        let r = chi_square_uniform(&[0, 0]).err();
        assert!(r.is_some());
        let dist = ChiSquared::new(1.0).unwrap();
        assert!((dist.sf(3.841458820694124) - 0.05).abs() < 1e-9);
    }
}
