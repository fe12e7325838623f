//! CLT diagnostics: KS distance, moment shape with jackknife errors,
//! correlations.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use statrs::distribution::{ContinuousCDF, Normal};

use super::moments::MomentAccumulator;
use crate::error::{Error, Result};

pub const MIN_NORMALITY_SAMPLES: usize = 500;

#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateDiagnostics {
    pub mean: f64,
    pub variance: f64,
    pub ks_distance: f64,
    pub skewness: f64,
    pub skewness_se: f64,
    pub excess_kurtosis: f64,
    pub excess_kurtosis_se: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalityReport {
    pub samples: usize,
    pub coordinates: Vec<CoordinateDiagnostics>,
    pub correlation: Vec<Vec<f64>>,
}

/// Upper limits for calling a sample "looks normal".
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalityThresholds {
    pub ks: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub correlation: f64,
}

impl Default for NormalityThresholds {
    fn default() -> Self {
        NormalityThresholds {
            ks: 0.05,
            skewness: 0.15,
            excess_kurtosis: 0.3,
            correlation: 0.1,
        }
    }
}

impl NormalityReport {
    pub fn max_abs_correlation(&self) -> f64 {
        let k = self.correlation.len();
        let mut worst: f64 = 0.0;
        for i in 0..k {
            for j in 0..i {
                worst = worst.max(self.correlation[i][j].abs());
            }
        }
        worst
    }

    pub fn passes(&self, t: &NormalityThresholds) -> bool {
        self.coordinates.iter().all(|c| {
            c.ks_distance < t.ks
                && c.skewness.abs() < t.skewness
                && c.excess_kurtosis.abs() < t.excess_kurtosis
        }) && self.max_abs_correlation() < t.correlation
    }
}

fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// Kolmogorov-Smirnov distance between the empirical law of `xs`, after
/// standardizing with the sample mean and standard deviation, and `N(0,1)`.
/// A constant sample is mapped to 0 and gives 1/2.
pub fn ks_distance_standardized(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n == 0 {
        return f64::NAN;
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = if n > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    let sd = var.sqrt();
    let mut z: Vec<f64> = xs
        .iter()
        .map(|x| if sd > 0.0 { (x - mean) / sd } else { 0.0 })
        .collect();
    z.sort_by(f64::total_cmp);
    ks_distance_sorted(&z, |x| standard_normal().cdf(x))
}

/// `sup |F_n - F|` for sorted `z`.
pub fn ks_distance_sorted<F: Fn(f64) -> f64>(z: &[f64], cdf: F) -> f64 {
    let n = z.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < z.len() {
        // ties jump together
        let mut j = i;
        while j + 1 < z.len() && z[j + 1] == z[i] {
            j += 1;
        }
        let f = cdf(z[i]);
        d = d.max(f - i as f64 / n).max((j + 1) as f64 / n - f);
        i = j + 1;
    }
    d
}

fn shape_moments(t1: f64, t2: f64, t3: f64, t4: f64, n: f64) -> (f64, f64) {
    // t_r are sums of r-th powers of deviations from some centre
    let d = t1 / n;
    let m2 = t2 / n - d * d;
    let m3 = t3 / n - 3.0 * d * t2 / n + 2.0 * d.powi(3);
    let m4 = t4 / n - 4.0 * d * t3 / n + 6.0 * d * d * t2 / n - 3.0 * d.powi(4);
    (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
}

fn jackknife_se(full_leave_one_out: &[f64]) -> f64 {
    let n = full_leave_one_out.len() as f64;
    let mean = full_leave_one_out.iter().sum::<f64>() / n;
    let ss: f64 = full_leave_one_out.iter().map(|t| (t - mean).powi(2)).sum();
    ((n - 1.0) / n * ss).sqrt()
}

/// Skewness and excess kurtosis with their delete-one jackknife standard
/// errors: `(skew, skew_se, kurt, kurt_se)`.
pub fn shape_with_jackknife(xs: &[f64]) -> (f64, f64, f64, f64) {
    let n = xs.len() as f64;
    let centre = xs.iter().sum::<f64>() / n;
    let dev: Vec<f64> = xs.iter().map(|x| x - centre).collect();
    let mut t = [0.0f64; 4];
    for &d in &dev {
        let d2 = d * d;
        t[0] += d;
        t[1] += d2;
        t[2] += d2 * d;
        t[3] += d2 * d2;
    }
    let (skew, kurt) = shape_moments(t[0], t[1], t[2], t[3], n);
    let mut skews = Vec::with_capacity(dev.len());
    let mut kurts = Vec::with_capacity(dev.len());
    for &d in &dev {
        let d2 = d * d;
        let (s, k) = shape_moments(t[0] - d, t[1] - d2, t[2] - d2 * d, t[3] - d2 * d2, n - 1.0);
        skews.push(s);
        kurts.push(k);
    }
    (skew, jackknife_se(&skews), kurt, jackknife_se(&kurts))
}

/// Diagnostics for `samples` (rows of one `k`-vector each). `acc` must have
/// been fed exactly these rows; it supplies means and covariances.
pub fn normality_report(acc: &MomentAccumulator, samples: &[Vec<f64>]) -> Result<NormalityReport> {
    if samples.len() < MIN_NORMALITY_SAMPLES {
        return Err(Error::InsufficientData {
            needed: MIN_NORMALITY_SAMPLES,
            got: samples.len(),
        });
    }
    if acc.count() as usize != samples.len() {
        return Err(Error::Config(format!(
            "accumulator holds {} samples but {} were retained",
            acc.count(),
            samples.len()
        )));
    }
    let k = acc.dim();
    let cov = acc.covariance_matrix()?;
    let mut coordinates = Vec::with_capacity(k);
    for i in 0..k {
        let col: Vec<f64> = samples.iter().map(|s| s[i]).collect();
        let (skewness, skewness_se, excess_kurtosis, excess_kurtosis_se) = shape_with_jackknife(&col);
        coordinates.push(CoordinateDiagnostics {
            mean: acc.mean(i)?,
            variance: cov[i][i],
            ks_distance: ks_distance_standardized(&col),
            skewness,
            skewness_se,
            excess_kurtosis,
            excess_kurtosis_se,
        });
    }
    let correlation = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let denom = (cov[i][i] * cov[j][j]).sqrt();
                    if i == j {
                        1.0
                    } else if denom > 0.0 {
                        cov[i][j] / denom
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    Ok(NormalityReport {
        samples: samples.len(),
        coordinates,
        correlation,
    })
}

/// One pair of independent standard normals by the Box-Muller transform.
pub fn box_muller<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    // 1 - U lies in (0, 1], so the log is finite
    let u1 = 1.0 - rng.gen::<f64>();
    let u2 = rng.gen::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    (r * theta.cos(), r * theta.sin())
}

pub fn normal_draws(seed: u64, count: usize) -> Vec<f64> {
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count + 1);
    while out.len() < count {
        let (a, b) = box_muller(&mut rng);
        out.push(a);
        out.push(b);
    }
    out.truncate(count);
    out
}

/// Empirical `level`-quantile of the standardized KS distance for `samples`
/// exact normal draws, over `reps` replications.
pub fn calibrate_ks_threshold(samples: usize, reps: usize, level: f64, seed: u64) -> f64 {
    let mut stats: Vec<f64> = (0..reps)
        .map(|r| ks_distance_standardized(&normal_draws(seed.wrapping_add(r as u64), samples)))
        .collect();
    stats.sort_by(f64::total_cmp);
    let idx = ((level * reps as f64).ceil() as usize).clamp(1, reps) - 1;
    stats[idx]
}

/// Smallest eigenvalue of a sample covariance with its jackknife error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenMargin {
    pub min_eigenvalue: f64,
    pub jackknife_se: f64,
}

fn min_eig(m: DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Unbiased covariance of the rows of `samples` and the delete-one jackknife
/// error of its smallest eigenvalue.
pub fn covariance_min_eigenvalue(samples: &[Vec<f64>]) -> Result<EigenMargin> {
    let n = samples.len();
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    let k = samples[0].len();
    let mut centre = vec![0.0; k];
    for s in samples {
        for (c, x) in centre.iter_mut().zip(s) {
            *c += x / n as f64;
        }
    }
    let dev: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| s.iter().zip(&centre).map(|(x, c)| x - c).collect())
        .collect();
    let mut sum = vec![0.0; k];
    let mut sq = DMatrix::<f64>::zeros(k, k);
    for d in &dev {
        for i in 0..k {
            sum[i] += d[i];
            for j in 0..k {
                sq[(i, j)] += d[i] * d[j];
            }
        }
    }
    let cov_of = |sum: &[f64], sq: &DMatrix<f64>, m: f64| {
        DMatrix::from_fn(k, k, |i, j| (sq[(i, j)] - sum[i] * sum[j] / m) / (m - 1.0))
    };
    let full = min_eig(cov_of(&sum, &sq, n as f64));
    let mut loo = Vec::with_capacity(n);
    for d in &dev {
        let s: Vec<f64> = sum.iter().zip(d).map(|(a, b)| a - b).collect();
        let q = DMatrix::from_fn(k, k, |i, j| sq[(i, j)] - d[i] * d[j]);
        loo.push(min_eig(cov_of(&s, &q, (n - 1) as f64)));
    }
    Ok(EigenMargin {
        min_eigenvalue: full,
        jackknife_se: jackknife_se(&loo),
    })
}
