//! Numeric checks of the elementary inequalities behind the count formula.
//!
//! Each check evaluates both sides at one point and reports the slack
//! `rhs - lhs` (for two-sided statements, the smaller of the two slacks).

mod quadrature;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub use quadrature::{integrate, Integral};

/// Half-width of the integration window in the Gaussian integral bounds.
pub const WINDOW: f64 = PI / 16.0;
pub const QUADRATURE_TOL: f64 = 1e-10;
/// Slack tolerance relative to `max(1, |lhs|, |rhs|)`.
pub const SLACK_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lemma {
    /// `|1 + l(e^{ix} - 1)|` against `exp(-l(1-l)x^2/2 + l(1-l)x^4/24)`.
    ExpEstimate,
    /// `sum_{j<k} (x_j + x_k)^2 >= (l - 2) sum x_j^2`.
    QuadraticLower,
    /// `sum_{j<k} (x_j + x_k)^4 <= 8 (l - 1) sum x_j^4`.
    QuarticUpper,
    /// `int exp(-m x^2 + m x^4) = (1 +- 2/m) sqrt(pi/m)` for large `m`.
    GaussianBand,
    /// `int |x|^k exp(-m x^2 + m x^4) <= sqrt(2 pi) k^{k/2} m^{-(k+1)/2}`.
    GaussianMoment,
    /// `k! e_k(x^2) <= (sum x^2)^k <= k! e_k(x^2) + C(k,2) max x^2 (sum x^2)^{k-1}`.
    SymmetricSum,
}

impl Lemma {
    pub const ALL: [Lemma; 6] = [
        Lemma::ExpEstimate,
        Lemma::QuadraticLower,
        Lemma::QuarticUpper,
        Lemma::GaussianBand,
        Lemma::GaussianMoment,
        Lemma::SymmetricSum,
    ];

    /// Short numeric id used on the command line and in reports.
    pub fn id(&self) -> &'static str {
        match self {
            Lemma::ExpEstimate => "2.1",
            Lemma::QuadraticLower => "2.2a",
            Lemma::QuarticUpper => "2.2b",
            Lemma::GaussianBand => "2.3",
            Lemma::GaussianMoment => "2.4",
            Lemma::SymmetricSum => "2.5",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Lemma::ExpEstimate => "exp-estimate",
            Lemma::QuadraticLower => "quadratic-lower",
            Lemma::QuarticUpper => "quartic-upper",
            Lemma::GaussianBand => "gaussian-band",
            Lemma::GaussianMoment => "gaussian-moment",
            Lemma::SymmetricSum => "symmetric-sum",
        }
    }

    fn index(&self) -> u64 {
        Lemma::ALL.iter().position(|l| l == self).unwrap() as u64
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Lemma {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Lemma::ALL
            .iter()
            .find(|l| l.id() == s || l.name() == s)
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown inequality {s:?}")))
    }
}

/// `"all"`, one id, or a comma-separated list.
pub fn parse_lemma_list(s: &str) -> Result<Vec<Lemma>> {
    if s == "all" {
        return Ok(Lemma::ALL.to_vec());
    }
    s.split(',').map(|t| t.trim().parse()).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum LemmaInput {
    ExpEstimate { lambda: f64, x: f64 },
    Vector { x: Vec<f64> },
    Gaussian { m: f64 },
    GaussianMoment { m: f64, k: u32 },
    SymmetricSum { x: Vec<f64>, k: u32 },
}

impl fmt::Display for LemmaInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |x: &[f64]| x.iter().map(|v| format!("{v:.6e}")).collect::<Vec<_>>().join(";");
        match self {
            LemmaInput::ExpEstimate { lambda, x } => write!(f, "lambda={lambda:.17e} x={x:.17e}"),
            LemmaInput::Vector { x } => write!(f, "x=[{}]", join(x)),
            LemmaInput::Gaussian { m } => write!(f, "m={m:.17e}"),
            LemmaInput::GaussianMoment { m, k } => write!(f, "m={m:.17e} k={k}"),
            LemmaInput::SymmetricSum { x, k } => write!(f, "k={k} x=[{}]", join(x)),
        }
    }
}

/// One evaluated instance. Two-sided statements read
/// `lhs <= middle <= rhs`; one-sided ones have no middle.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityCase {
    pub lemma: Lemma,
    pub input: LemmaInput,
    pub lhs: f64,
    pub middle: Option<f64>,
    pub rhs: f64,
    pub slack: f64,
    /// For the exp estimate: gap between the two forms of the modulus.
    pub internal_gap: Option<f64>,
}

impl InequalityCase {
    fn one_sided(lemma: Lemma, input: LemmaInput, lhs: f64, rhs: f64) -> Self {
        InequalityCase {
            lemma,
            input,
            lhs,
            middle: None,
            rhs,
            slack: rhs - lhs,
            internal_gap: None,
        }
    }

    fn two_sided(lemma: Lemma, input: LemmaInput, lhs: f64, middle: f64, rhs: f64) -> Self {
        InequalityCase {
            lemma,
            input,
            lhs,
            middle: Some(middle),
            rhs,
            slack: (middle - lhs).min(rhs - middle),
            internal_gap: None,
        }
    }

    /// Largest magnitude involved. No floor of one: the moment integrals are
    /// far below one and an absolute tolerance would hide violations there.
    pub fn scale(&self) -> f64 {
        f64::MIN_POSITIVE
            .max(self.lhs.abs())
            .max(self.rhs.abs())
            .max(self.middle.map_or(0.0, f64::abs))
    }

    /// Slack divided by [`scale`](Self::scale).
    pub fn relative_slack(&self) -> f64 {
        self.slack / self.scale()
    }

    pub fn holds(&self) -> bool {
        self.relative_slack() >= -SLACK_TOL
            && self.internal_gap.map_or(true, |g| g <= SLACK_TOL * self.scale())
    }
}

pub fn check_exp_estimate(lambda: f64, x: f64) -> Result<InequalityCase> {
    if !(0.0..=1.0).contains(&lambda) || !(x.abs() <= PI) {
        return Err(Error::DomainViolation(format!(
            "need 0 <= lambda <= 1 and |x| <= pi, got lambda={lambda}, x={x}"
        )));
    }
    let re = 1.0 + lambda * (x.cos() - 1.0);
    let im = lambda * x.sin();
    let direct = re.hypot(im);
    let s = lambda * (1.0 - lambda);
    let closed = (1.0 - 2.0 * s * (1.0 - x.cos())).max(0.0).sqrt();
    let x2 = x * x;
    let bound = (-0.5 * s * x2 + s * x2 * x2 / 24.0).exp();
    let mut c = InequalityCase::one_sided(Lemma::ExpEstimate, LemmaInput::ExpEstimate { lambda, x }, closed, bound);
    c.internal_gap = Some((direct - closed).abs());
    Ok(c)
}

fn vector_domain(x: &[f64]) -> Result<()> {
    if x.is_empty() || x.iter().any(|v| !v.is_finite()) {
        return Err(Error::DomainViolation("need a nonempty finite vector".into()));
    }
    Ok(())
}

pub fn check_quadratic_lower(x: &[f64]) -> Result<InequalityCase> {
    vector_domain(x)?;
    let l = x.len();
    let mut pairs = 0.0;
    for j in 0..l {
        for k in j + 1..l {
            pairs += (x[j] + x[k]).powi(2);
        }
    }
    let sq: f64 = x.iter().map(|v| v * v).sum();
    Ok(InequalityCase::one_sided(
        Lemma::QuadraticLower,
        LemmaInput::Vector { x: x.to_vec() },
        (l as f64 - 2.0) * sq,
        pairs,
    ))
}

pub fn check_quartic_upper(x: &[f64]) -> Result<InequalityCase> {
    vector_domain(x)?;
    let l = x.len();
    let mut pairs = 0.0;
    for j in 0..l {
        for k in j + 1..l {
            pairs += (x[j] + x[k]).powi(4);
        }
    }
    let q: f64 = x.iter().map(|v| v.powi(4)).sum();
    Ok(InequalityCase::one_sided(
        Lemma::QuarticUpper,
        LemmaInput::Vector { x: x.to_vec() },
        pairs,
        8.0 * (l as f64 - 1.0) * q,
    ))
}

/// `int_{-w}^{w} |x|^k exp(-m x^2 + m x^4) dx` with `w = pi/16`.
pub fn gaussian_window_integral(m: f64, k: u32, rel_tol: f64) -> Result<f64> {
    let f = |x: f64| {
        let x2 = x * x;
        x.powi(k as i32) * (-m * x2 + m * x2 * x2).exp()
    };
    let abs_tol = if rel_tol > 0.0 { 0.0 } else { QUADRATURE_TOL / 2.0 };
    Ok(2.0 * integrate(f, 0.0, WINDOW, abs_tol, rel_tol)?.value)
}

/// The band check at any `m > 0`, with no threshold on `m`.
pub fn gaussian_band_case(m: f64) -> Result<InequalityCase> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::DomainViolation(format!("need m > 0, got {m}")));
    }
    let value = gaussian_window_integral(m, 0, 0.0)?;
    let centre = (PI / m).sqrt();
    Ok(InequalityCase::two_sided(
        Lemma::GaussianBand,
        LemmaInput::Gaussian { m },
        (1.0 - 2.0 / m) * centre,
        value,
        (1.0 + 2.0 / m) * centre,
    ))
}

const BAND_SCAN_MAX: f64 = 1e4;

/// Smallest `m` beyond which the band holds, found by a geometric scan of
/// `[1, 10^4]` for the last failure and bisection up to the next grid point.
pub fn gaussian_band_threshold() -> f64 {
    static M0: OnceLock<f64> = OnceLock::new();
    *M0.get_or_init(|| {
        let holds = |m: f64| gaussian_band_case(m).map(|c| c.holds()).unwrap_or(false);
        let steps: usize = 400;
        let ratio = BAND_SCAN_MAX.powf(1.0 / steps as f64);
        let grid: Vec<f64> = (0..=steps).map(|i| ratio.powi(i as i32)).collect();
        let last_fail = match grid.iter().rposition(|&m| !holds(m)) {
            Some(i) => i,
            None => return 1.0,
        };
        let (mut lo, mut hi) = (grid[last_fail], grid[(last_fail + 1).min(steps)]);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if holds(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    })
}

pub fn check_gaussian_band(m: f64) -> Result<InequalityCase> {
    let m0 = gaussian_band_threshold();
    if !(m >= m0) {
        return Err(Error::DomainViolation(format!(
            "band is only claimed for m >= m0 = {m0:.6}, got {m}"
        )));
    }
    gaussian_band_case(m)
}

pub fn check_gaussian_moment(m: f64, k: u32) -> Result<InequalityCase> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::DomainViolation(format!("need m > 0, got {m}")));
    }
    let value = gaussian_window_integral(m, k, 1e-11)?;
    let kf = k as f64;
    // k^{k/2} with 0^0 = 1
    let kk = if k == 0 { 1.0 } else { kf.powf(kf / 2.0) };
    let bound = (2.0 * PI).sqrt() * kk * m.powf(-(kf + 1.0) / 2.0);
    Ok(InequalityCase::one_sided(
        Lemma::GaussianMoment,
        LemmaInput::GaussianMoment { m, k },
        value,
        bound,
    ))
}

/// Elementary symmetric polynomial `e_k(y)`.
fn elementary_symmetric(y: &[f64], k: usize) -> f64 {
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for &v in y {
        for j in (1..=k).rev() {
            e[j] += e[j - 1] * v;
        }
    }
    e[k]
}

pub fn check_symmetric_sum(x: &[f64], k: u32) -> Result<InequalityCase> {
    vector_domain(x)?;
    if k == 0 {
        return Err(Error::DomainViolation("need k >= 1".into()));
    }
    let y: Vec<f64> = x.iter().map(|v| v * v).collect();
    let fact: f64 = (1..=k).map(f64::from).product();
    let lower = fact * elementary_symmetric(&y, k as usize);
    let total: f64 = y.iter().sum();
    let max = y.iter().cloned().fold(0.0, f64::max);
    let kf = k as f64;
    let upper = lower + kf * (kf - 1.0) / 2.0 * max * total.powi(k as i32 - 1);
    Ok(InequalityCase::two_sided(
        Lemma::SymmetricSum,
        LemmaInput::SymmetricSum { x: x.to_vec(), k },
        lower,
        total.powi(k as i32),
        upper,
    ))
}

/// Dispatch on the input variant.
pub fn check_inequality(lemma: Lemma, input: &LemmaInput) -> Result<InequalityCase> {
    match (lemma, input) {
        (Lemma::ExpEstimate, LemmaInput::ExpEstimate { lambda, x }) => check_exp_estimate(*lambda, *x),
        (Lemma::QuadraticLower, LemmaInput::Vector { x }) => check_quadratic_lower(x),
        (Lemma::QuarticUpper, LemmaInput::Vector { x }) => check_quartic_upper(x),
        (Lemma::GaussianBand, LemmaInput::Gaussian { m }) => check_gaussian_band(*m),
        (Lemma::GaussianMoment, LemmaInput::GaussianMoment { m, k }) => check_gaussian_moment(*m, *k),
        (Lemma::SymmetricSum, LemmaInput::SymmetricSum { x, k }) => check_symmetric_sum(x, *k),
        _ => Err(Error::DomainViolation(format!("input {input} does not fit {}", lemma.name()))),
    }
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.gen::<f64>() * (hi.ln() - lo.ln())).exp()
}

fn unit_vector<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

/// A random point of the lemma's domain.
pub fn random_input<R: Rng>(lemma: Lemma, rng: &mut R) -> LemmaInput {
    match lemma {
        Lemma::ExpEstimate => LemmaInput::ExpEstimate {
            lambda: rng.gen_range(0.0..=1.0),
            x: rng.gen_range(-PI..=PI),
        },
        Lemma::QuadraticLower | Lemma::QuarticUpper => {
            let len = rng.gen_range(1..=12);
            LemmaInput::Vector { x: unit_vector(rng, len) }
        }
        Lemma::GaussianBand => LemmaInput::Gaussian {
            m: log_uniform(rng, gaussian_band_threshold(), BAND_SCAN_MAX),
        },
        Lemma::GaussianMoment => LemmaInput::GaussianMoment {
            m: log_uniform(rng, 1e-2, BAND_SCAN_MAX),
            k: rng.gen_range(0..=12),
        },
        Lemma::SymmetricSum => {
            let len = rng.gen_range(1..=10);
            LemmaInput::SymmetricSum {
                x: unit_vector(rng, len),
                k: rng.gen_range(1..=6),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatteryResult {
    pub lemma: Lemma,
    pub trials: usize,
    pub failures: usize,
    /// Case with the smallest relative slack.
    pub worst: InequalityCase,
}

impl BatteryResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

const BATTERY_CHUNK: usize = 4096;

fn chunk_seed(seed: u64, lemma: Lemma, chunk: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (lemma.index() << 56) ^ chunk
}

/// `trials` random points; chunks are seeded by index so the outcome does
/// not depend on the thread count.
pub fn run_battery(lemma: Lemma, trials: usize, seed: u64) -> Result<BatteryResult> {
    if trials == 0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let chunks = trials.div_ceil(BATTERY_CHUNK);
    let parts: Vec<(usize, InequalityCase)> = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<(usize, InequalityCase)> {
            let mut rng = Xoshiro256StarStar::seed_from_u64(chunk_seed(seed, lemma, c as u64));
            let len = BATTERY_CHUNK.min(trials - c * BATTERY_CHUNK);
            let mut failures = 0;
            let mut worst: Option<InequalityCase> = None;
            for _ in 0..len {
                let case = check_inequality(lemma, &random_input(lemma, &mut rng))?;
                if !case.holds() {
                    failures += 1;
                }
                if worst.as_ref().map_or(true, |w| case.relative_slack() < w.relative_slack()) {
                    worst = Some(case);
                }
            }
            Ok((failures, worst.expect("nonempty chunk")))
        })
        .collect::<Result<_>>()?;
    let failures = parts.iter().map(|p| p.0).sum();
    let worst = parts
        .into_iter()
        .map(|p| p.1)
        .min_by(|a, b| a.relative_slack().total_cmp(&b.relative_slack()))
        .unwrap();
    Ok(BatteryResult {
        lemma,
        trials,
        failures,
        worst,
    })
}
