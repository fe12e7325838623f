//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

use nalgebra::DMatrix;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use regfactor::algebra::{reduce_full, FactorExpr, Poly, RingElem};
use regfactor::ensemble::{enumerate_regular, sample_map, EnsembleSpec, DEFAULT_CHAINS};
use regfactor::experiment::{ensemble_identities, expansion_identity, reduction_identity};
use regfactor::factors::{
    gamma_with, normalization_constants, trace_reconstruction, trace_stat, walk_types, ExactEvaluator,
    FactorEvaluator,
};
use regfactor::graphs::{CanonicalShape, Graph};
use regfactor::proofcheck::{gaussian_band_case, gaussian_band_threshold, run_battery, Lemma};
use regfactor::stats::{
    chi_square_uniform, covariance_min_eigenvalue, estimate_moments, mw_count_estimate, normality_report,
    predicted_variance, MomentAccumulator, NormalityThresholds,
};

const SEED: u64 = 20_240_601;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn shapes(names: &[&str]) -> Vec<CanonicalShape> {
    names.iter().map(|s| s.parse().unwrap()).collect()
}

fn random_graph(rng: &mut StdRng, n: usize) -> Graph {
    // edge density itself random, so degree sequences vary widely
    let density: f64 = rng.gen_range(0.15..0.85);
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

fn expansion_identity_on_random_graphs() -> Verdict {
    let start = Instant::now();
    let hs = shapes(&["C3", "C4", "C5", "P4", "K4"]);
    let mut rng = StdRng::seed_from_u64(SEED);
    let (mut checked, mut exact_fail, mut float_fail, mut worst) = (0, 0, 0, 0.0f64);
    for _ in 0..100 {
        let g = random_graph(&mut rng, 12);
        let d = rng.gen_range(1..=10);
        let (exact, float) = expansion_identity(&hs, &[g], d).unwrap();
        checked += exact.checked;
        exact_fail += exact.failures;
        float_fail += float.failures;
        worst = worst.max(float.max_error);
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        exact_fail == 0 && float_fail == 0 && checked == 500 && secs < 60.0,
        format!(
            "{checked} (graph, shape) pairs; exact mismatches {exact_fail}, float mismatches {float_fail}, \
             worst relative error {worst:.2e}, {secs:.1}s"
        ),
    )
}

fn deterministic_identities() -> Verdict {
    let mut lines = Vec::new();
    let mut ok = true;
    for (n, d) in [(6, 3), (8, 3)] {
        for c in ensemble_identities(n, d).unwrap() {
            ok &= c.passed();
            lines.push(format!("G({n},{d}) {}: {}/{}", c.name, c.checked - c.failures, c.checked));
        }
    }
    verdict(ok, lines.join("; "))
}

fn reduction_soundness() -> Verdict {
    // closed forms: gamma_P3 = -n(n-1)/2, gamma_P4 = -3 gamma_C3 - c n(n-1)/2
    let pairs = RingElem::from_poly(Poly::falling(0, 2).scale(&BigRational::new(1.into(), 2.into())));
    let p3 = reduce_full(&FactorExpr::gamma(CanonicalShape::path(3))).unwrap();
    let p4 = reduce_full(&FactorExpr::gamma(CanonicalShape::path(4))).unwrap();
    let forms_ok = p3.len() == 1
        && p3.constant() == -&pairs
        && p4.len() == 2
        && p4.coefficient(&[CanonicalShape::cycle(3)]) == RingElem::int(-3)
        && p4.constant() == -&(&RingElem::c() * &pairs);

    let g63: Vec<Graph> = enumerate_regular(6, 3).unwrap().collect();
    // the constant as usually printed, +(2p-1)n(n-1)/(2q), has the wrong sign;
    // measure how far it lands from the direct value
    let printed_gap = {
        let (n, p) = (6.0f64, 0.6f64);
        let q = (p * (1.0 - p)).sqrt();
        let mut ev = FactorEvaluator::new(&g63[0], 3).unwrap();
        let direct = ev.gamma_generic(&CanonicalShape::path(4)).unwrap();
        let c3 = ev.gamma_generic(&CanonicalShape::cycle(3)).unwrap();
        (-3.0 * c3 + (2.0 * p - 1.0) * n * (n - 1.0) / (2.0 * q) - direct).abs()
    };
    let g20 = sample_map(&EnsembleSpec::new(20, 10, SEED), 50, DEFAULT_CHAINS, Graph::clone).unwrap();
    let mut ok = forms_ok;
    let mut parts = vec![
        format!("closed forms (P4 constant -(2p-1)n(n-1)/(2q)) match: {forms_ok}"),
        format!("with +(2p-1)n(n-1)/(2q) instead the gap to direct gamma_P4 on G(6,3) is {printed_gap:.4}"),
    ];
    for s in [CanonicalShape::path(3), CanonicalShape::path(4)] {
        for (graphs, d) in [(&g63, 3), (&g20, 10)] {
            let c = reduction_identity(&s, graphs, d).unwrap();
            ok &= c.passed();
            parts.push(format!(
                "{} on G({},{d}): {}/{} within 1e-9 (worst {:.1e})",
                s,
                graphs[0].n(),
                c.checked - c.failures,
                c.checked,
                c.max_error
            ));
        }
    }
    verdict(ok, parts.join("; "))
}

fn sampler_uniformity() -> Verdict {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, d, outcomes, samples) in [(5, 2, 12, 12_000), (6, 3, 70, 70_000)] {
        let index: HashMap<Graph, usize> = enumerate_regular(n, d)
            .unwrap()
            .enumerate()
            .map(|(i, g)| (g, i))
            .collect();
        let spec = EnsembleSpec::new(n, d, SEED);
        let hits = sample_map(&spec, samples, DEFAULT_CHAINS, |g| index[g]).unwrap();
        let mut counts = vec![0u64; index.len()];
        for h in hits {
            counts[h] += 1;
        }
        let r = chi_square_uniform(&counts).unwrap();
        ok &= index.len() == outcomes && !r.rejects_at(0.01);
        parts.push(format!(
            "G({n},{d}): {} outcomes, chi2 = {:.2} on {} dof, p = {:.4}",
            index.len(),
            r.statistic,
            r.dof,
            r.p_value
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(ok && secs < 300.0, format!("{}; {secs:.1}s", parts.join("; ")))
}

fn variance_trend() -> Verdict {
    let c3 = Graph::cycle(3);
    let mut ratios = Vec::new();
    let mut parts = Vec::new();
    for n in [64usize, 128, 192] {
        let d = n / 2;
        let xs = sample_map(&EnsembleSpec::new(n, d, SEED), 2000, DEFAULT_CHAINS, |g| {
            regfactor::graphs::triangle_count(g) as f64
        })
        .unwrap();
        let acc = estimate_moments(1, xs.iter().map(|x| [*x])).unwrap();
        let pred = predicted_variance(&c3, n, d).unwrap().leading;
        let ratio = acc.variance(0).unwrap() / pred;
        ratios.push(ratio);
        parts.push(format!("n={n}: ratio {ratio:.4}"));
    }
    let dev: Vec<f64> = ratios.iter().map(|r| (r - 1.0).abs()).collect();
    let in_band = (0.85..=1.15).contains(&ratios[2]);
    let monotone = dev.windows(2).all(|w| w[1] <= w[0]);
    verdict(
        in_band && monotone,
        format!("{}; n=192 in band: {in_band}; |ratio-1| non-increasing: {monotone}", parts.join(", ")),
    )
}

/// One pass over G(128, 64): raw and normalized gamma for C3 and C4, and
/// adjacency traces tr(A^3), tr(A^4), tr(A^5).
struct LargeSample {
    raw: Vec<[f64; 2]>,
    normalized: Vec<Vec<f64>>,
    traces: Vec<Vec<f64>>,
}

fn large_sample() -> &'static LargeSample {
    static CELL: OnceLock<LargeSample> = OnceLock::new();
    CELL.get_or_init(|| {
        let (n, d) = (128, 64);
        let hs = shapes(&["C3", "C4"]);
        let rows = sample_map(&EnsembleSpec::new(n, d, SEED), 2000, DEFAULT_CHAINS, |g| {
            let mut ev = FactorEvaluator::new(g, d).unwrap();
            let v: Vec<_> = hs.iter().map(|h| gamma_with(&mut ev, h).unwrap()).collect();
            let a = DMatrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 });
            let a2 = &a * &a;
            let a3 = &a2 * &a;
            let traces = vec![
                a2.component_mul(&a).sum(),
                a2.component_mul(&a2).sum(),
                a3.component_mul(&a2).sum(),
            ];
            (
                [v[0].raw, v[1].raw],
                vec![v[0].normalized.unwrap(), v[1].normalized.unwrap()],
                traces,
            )
        })
        .unwrap();
        let mut s = LargeSample {
            raw: Vec::new(),
            normalized: Vec::new(),
            traces: Vec::new(),
        };
        for (r, z, t) in rows {
            s.raw.push(r);
            s.normalized.push(z);
            s.traces.push(t);
        }
        s
    })
}

fn clt_diagnostics() -> Verdict {
    let s = large_sample();
    let acc = estimate_moments(2, s.normalized.iter()).unwrap();
    let report = normality_report(&acc, &s.normalized).unwrap();
    let shape_ok = report.passes(&NormalityThresholds::default());
    let n = 128.0f64;
    let c4: Vec<f64> = s.raw.iter().map(|r| r[1]).collect();
    let mut acc4 = MomentAccumulator::with_degree(1, 2);
    for x in &c4 {
        acc4.push(&[*x]).unwrap();
    }
    let mean = acc4.mean(0).unwrap();
    let se = (acc4.variance(0).unwrap() / c4.len() as f64).sqrt();
    let (shift, _) = normalization_constants(&CanonicalShape::cycle(4), 128).unwrap();
    assert_eq!(shift, 2.0 * n * n / 8.0);
    let z = (mean - shift) / se;
    let mut parts: Vec<String> = ["C3", "C4"]
        .iter()
        .zip(&report.coordinates)
        .map(|(name, c)| {
            format!(
                "{name}: var {:.3}, KS {:.4}, skew {:+.4} (SE {:.3}), ex.kurt {:+.4}",
                c.variance, c.ks_distance, c.skewness, c.skewness_se, c.excess_kurtosis
            )
        })
        .collect();
    parts.push(format!("corr {:+.4}", report.correlation[0][1]));
    parts.push(format!("E[gamma_C4] = {mean:.1} vs {shift:.1} ({z:+.2} SE)"));
    verdict(shape_ok && z.abs() <= 3.0, parts.join("; "))
}

fn oracle_expectations() -> Verdict {
    let (n, d) = (8usize, 3usize);
    let (c3, c4) = (CanonicalShape::cycle(3), CanonicalShape::cycle(4));
    let mut sums: Option<[regfactor::algebra::QuadValue; 2]> = None;
    let mut count = 0u64;
    for g in enumerate_regular(n, d).unwrap() {
        let mut ev = ExactEvaluator::new(&g, d).unwrap();
        let v3 = ev.gamma(&c3).unwrap();
        let v4 = ev.gamma(&c4).unwrap();
        sums = Some(match sums {
            None => [v3, v4],
            Some([a, b]) => [&a + &v3, &b + &v4],
        });
        count += 1;
    }
    let [s3, s4] = sums.unwrap();
    // gamma sums the chi-product over every embedded copy
    let copies3 = (n * (n - 1) * (n - 2) / 6) as f64;
    let copies4 = (n * (n - 1) * (n - 2) * (n - 3) / 8) as f64;
    let e3 = s3.to_f64() / count as f64 / copies3;
    let e4 = s4.to_f64() / count as f64 / copies4;
    let nf = n as f64;
    let (lo, hi) = (2.0 / (3.0 * nf * nf), 6.0 / (nf * nf));
    let band = e4 >= lo && e4 <= hi;
    let order = e3.abs() < e4.abs();
    verdict(
        band && order,
        format!(
            "over {count} graphs: E[chi_C4] = {e4:.5} in [{lo:.5}, {hi:.5}]: {band}; \
             |E[chi_C3]| = {:.5} < |E[chi_C4]|: {order}",
            e3.abs()
        ),
    )
}

fn trace_decomposition() -> Verdict {
    let mut worst = 0.0f64;
    let mut checked = 0;
    for g in enumerate_regular(6, 3).unwrap() {
        let mut ev = FactorEvaluator::new(&g, 3).unwrap();
        for l in 3..=6 {
            let t = trace_stat(&g, 3, l).unwrap();
            let r = trace_reconstruction(&mut ev, l).unwrap();
            worst = worst.max((t - r).abs() / t.abs().max(1.0));
            checked += 1;
        }
    }
    let coeffs_ok = (3..=6).all(|l| {
        walk_types(l).unwrap().coefficient(&CanonicalShape::cycle(l)) == Some(2 * l as u64)
    });
    let s = large_sample();
    let margin = covariance_min_eigenvalue(&s.traces).unwrap();
    let pd = margin.min_eigenvalue > 0.0 && margin.min_eigenvalue > margin.jackknife_se;
    verdict(
        worst <= 1e-9 && checked == 280 && coeffs_ok && pd,
        format!(
            "{checked} trace checks, worst relative gap {worst:.1e}; C_l coefficient 2l: {coeffs_ok}; \
             cov(tr A^3..5) smallest eigenvalue {:.4e} vs jackknife SE {:.4e}",
            margin.min_eigenvalue, margin.jackknife_se
        ),
    )
}

fn proofcheck_battery() -> Verdict {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for lemma in Lemma::ALL {
        let r = run_battery(lemma, 1_000_000, SEED).unwrap();
        ok &= r.passed();
        parts.push(format!("{}: {} violations", lemma.name(), r.failures));
    }
    let m0 = gaussian_band_threshold();
    for m in [10.0, 100.0, 1000.0, 10_000.0] {
        let c = gaussian_band_case(m).unwrap();
        ok &= c.holds();
        parts.push(format!(
            "band at m={m}: integral/sqrt(pi/m) = {:.4} vs [{:.4}, {:.4}] {}",
            c.middle.unwrap() / (std::f64::consts::PI / m).sqrt(),
            1.0 - 2.0 / m,
            1.0 + 2.0 / m,
            if c.holds() { "ok" } else { "VIOLATED" }
        ));
    }
    parts.push(format!("empirical m0 = {m0:.2}"));
    let secs = start.elapsed().as_secs_f64();
    verdict(ok && secs < 120.0, format!("{}; {secs:.1}s", parts.join("; ")))
}

fn mckay_wormald() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, d) in [(6, 3), (8, 3)] {
        let exact = enumerate_regular(n, d).unwrap().count() as f64;
        let est = mw_count_estimate(n, d).unwrap();
        let gap = est - exact.ln();
        ok &= gap.abs() <= 0.36;
        parts.push(format!(
            "G({n},{d}): log estimate {est:.4} vs ln {exact} = {:.4} (gap {gap:+.4})",
            exact.ln()
        ));
    }
    verdict(ok, parts.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("expansion identity", expansion_identity_on_random_graphs),
        ("deterministic ensemble identities", deterministic_identities),
        ("reduction soundness", reduction_soundness),
        ("sampler uniformity", sampler_uniformity),
        ("variance trend", variance_trend),
        ("CLT diagnostics", clt_diagnostics),
        ("oracle expectations", oracle_expectations),
        ("trace decomposition", trace_decomposition),
        ("proofcheck battery", proofcheck_battery),
        ("regular graph count estimate", mckay_wormald),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            verdict(false, format!("panicked: {msg}"))
        });
        let tag = if v.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {tag} {name} ({:.1}s): {}",
            i + 1,
            start.elapsed().as_secs_f64(),
            v.detail
        );
        if !v.passed {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
