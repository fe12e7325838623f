use proptest::prelude::*;

use regfactor::proofcheck::{
    check_exp_estimate, check_gaussian_moment, check_quadratic_lower, check_quartic_upper, check_symmetric_sum,
};
use regfactor::stats::{
    chi_square_uniform, estimate_moments, ks_distance_standardized, normal_draws, MomentAccumulator,
};

fn rows(dim: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-1e3f64..1e3, dim), 2..60)
}

fn unit(len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, len).prop_filter_map("zero vector", |v| {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        (norm > 1e-6).then(|| v.iter().map(|x| x / norm).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn merge_is_exact(data in rows(2), split in 0usize..60) {
        let split = split.min(data.len());
        let whole = estimate_moments(2, &data).unwrap();
        let mut left = estimate_moments(2, &data[..split]).unwrap();
        left.merge(&estimate_moments(2, &data[split..]).unwrap());
        for e in [[1u8, 0], [0, 1], [2, 0], [1, 1], [3, 1], [0, 4]] {
            prop_assert_eq!(whole.power_sum(&e), left.power_sum(&e));
        }
        prop_assert_eq!(whole.count(), left.count());
    }

    #[test]
    fn moments_match_two_pass(data in rows(2)) {
        let acc = estimate_moments(2, &data).unwrap();
        let n = data.len() as f64;
        let mean: Vec<f64> = (0..2).map(|i| data.iter().map(|r| r[i]).sum::<f64>() / n).collect();
        let cov = data.iter().map(|r| (r[0] - mean[0]) * (r[1] - mean[1])).sum::<f64>() / (n - 1.0);
        let var0 = data.iter().map(|r| (r[0] - mean[0]).powi(2)).sum::<f64>() / (n - 1.0);
        prop_assert!((acc.mean(0).unwrap() - mean[0]).abs() <= 1e-9 * mean[0].abs().max(1.0));
        prop_assert!((acc.covariance(0, 1).unwrap() - cov).abs() <= 1e-9 * var0.max(1.0));
        prop_assert!((acc.variance(0).unwrap() - var0).abs() <= 1e-9 * var0.max(1.0));
        prop_assert_eq!(acc.covariance(0, 1).unwrap(), acc.covariance(1, 0).unwrap());
    }

    #[test]
    fn shifts_leave_central_moments_alone(data in prop::collection::vec(-50f64..50.0, 3..40), shift in -1e3f64..1e3) {
        let a = estimate_moments(1, data.iter().map(|x| [*x])).unwrap();
        let b = estimate_moments(1, data.iter().map(|x| [*x + shift])).unwrap();
        for r in 2..=4 {
            let (x, y) = (a.central_moment(0, r).unwrap(), b.central_moment(0, r).unwrap());
            prop_assert!((x - y).abs() <= 1e-6 * x.abs().max(1.0), "r={} {} {}", r, x, y);
        }
    }

    #[test]
    fn ks_distance_is_bounded(data in prop::collection::vec(-10f64..10.0, 2..200)) {
        let d = ks_distance_standardized(&data);
        prop_assert!((0.0..=1.0).contains(&d));
    }

    #[test]
    fn chi_square_of_equal_counts_is_zero(cells in 2usize..50, each in 1u64..1000) {
        let r = chi_square_uniform(&vec![each; cells]).unwrap();
        prop_assert_eq!(r.statistic, 0.0);
        prop_assert!(r.p_value > 0.999);
    }

    #[test]
    fn exp_estimate_holds(lambda in 0.0f64..=1.0, x in -std::f64::consts::PI..=std::f64::consts::PI) {
        prop_assert!(check_exp_estimate(lambda, x).unwrap().holds());
    }

    #[test]
    fn quadratic_and_quartic_bounds_hold(x in unit(1..=12)) {
        prop_assert!(check_quadratic_lower(&x).unwrap().holds());
        prop_assert!(check_quartic_upper(&x).unwrap().holds());
    }

    #[test]
    fn symmetric_sum_bounds_hold(x in unit(1..=10), k in 1u32..=6) {
        prop_assert!(check_symmetric_sum(&x, k).unwrap().holds());
    }

    #[test]
    fn gaussian_moment_bound_holds(log_m in -2f64..4.0, k in 0u32..=12) {
        prop_assert!(check_gaussian_moment(10f64.powf(log_m), k).unwrap().holds());
    }
}

#[test]
fn normal_draws_look_normal() {
    let xs = normal_draws(9, 20_000);
    let mut acc = MomentAccumulator::with_degree(1, 4);
    for x in &xs {
        acc.push(&[*x]).unwrap();
    }
    assert!(acc.mean(0).unwrap().abs() < 0.03);
    assert!((acc.variance(0).unwrap() - 1.0).abs() < 0.04);
    assert!(acc.skewness(0).unwrap().abs() < 0.06);
    assert!(acc.excess_kurtosis(0).unwrap().abs() < 0.12);
    assert!(ks_distance_standardized(&xs) < 0.015);
}
