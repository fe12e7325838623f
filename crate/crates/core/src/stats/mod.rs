//! Moments, CLT diagnostics, variance predictions and the regular-graph count.

mod goodness;
mod mckay_wormald;
mod moments;
mod normality;
mod variance;

pub use goodness::{chi_square_uniform, ChiSquareResult};
pub use mckay_wormald::{mw_count_estimate, mw_count_estimate_r_form};
pub use moments::{estimate_moments, MomentAccumulator, DEFAULT_MOMENT_DEGREE};
pub use normality::{
    box_muller, calibrate_ks_threshold, covariance_min_eigenvalue, ks_distance_sorted,
    ks_distance_standardized, normal_draws, normality_report, shape_with_jackknife,
    CoordinateDiagnostics, EigenMargin, NormalityReport, NormalityThresholds,
    MIN_NORMALITY_SAMPLES,
};
pub use variance::{predicted_variance, FormulaInputs, VariancePrediction, VarianceRegime};
