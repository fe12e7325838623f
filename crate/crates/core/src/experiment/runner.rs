use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use super::config::{Command, ExperimentConfig};
use super::identities::{ensemble_identities, expansion_identity, reduction_identity, IdentityCheck};
use super::report::{emit_report, format_float, Cell, Table};
use crate::algebra::{expand_subgraph_count, reduce_full, FactorExpr};
use crate::ensemble::{enumerate_regular, sample_map, EnsembleSpec};
use crate::error::{Error, Result};
use crate::factors::{gamma_with, trace_stats, FactorEvaluator};
use crate::graphs::io::{read_graphs, write_graph};
use crate::graphs::{count_subgraphs, CanonicalShape, Graph};
use crate::proofcheck::{gaussian_band_threshold, parse_lemma_list, run_battery};
use crate::stats::{
    covariance_min_eigenvalue, ks_distance_standardized, predicted_variance, MomentAccumulator,
};

/// Graphs per ensemble used for the expansion and reduction checks of
/// `verify-identities`.
const IDENTITY_GRAPH_LIMIT: usize = 200;

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub command: Command,
    /// False when a check ran but failed (exit status 3).
    pub success: bool,
    pub outputs: Vec<PathBuf>,
    pub records: usize,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.success {
            0
        } else {
            3
        }
    }
}

enum Product {
    Records(String, usize),
    Table(Table),
    /// Human-readable table on stdout plus the machine-readable one.
    Checked(Table, String),
    Text(String),
}

struct Produced {
    product: Product,
    success: bool,
}

impl Produced {
    fn ok(product: Product) -> Self {
        Produced { product, success: true }
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    run_experiment_to(cfg, &mut lock)
}

/// Run `cfg`, writing to `cfg.out` when set and to `stdout` otherwise.
pub fn run_experiment_to(cfg: &ExperimentConfig, stdout: &mut dyn Write) -> Result<RunOutcome> {
    cfg.validate()?;
    let started = Instant::now();
    let threads = cfg.effective_threads()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let produced = pool.install(|| produce(cfg))?;

    let mut outputs = Vec::new();
    let records;
    {
        let mut file_sink;
        let sink: &mut dyn Write = match &cfg.out {
            Some(path) => {
                file_sink = BufWriter::new(File::create(path)?);
                outputs.push(path.clone());
                &mut file_sink
            }
            None => stdout,
        };
        records = match &produced.product {
            Product::Records(text, count) => {
                sink.write_all(text.as_bytes())?;
                *count
            }
            Product::Table(t) => {
                emit_report(t, cfg.format, sink)?;
                t.len()
            }
            Product::Checked(t, _) => {
                if cfg.out.is_some() {
                    emit_report(t, cfg.format, sink)?;
                }
                t.len()
            }
            Product::Text(text) => {
                sink.write_all(text.as_bytes())?;
                1
            }
        };
        sink.flush()?;
    }
    if let Product::Checked(_, text) = &produced.product {
        stdout.write_all(text.as_bytes())?;
        stdout.flush()?;
    }
    if let Some(path) = &cfg.out {
        let mut manifest_path = path.clone().into_os_string();
        manifest_path.push(".manifest.json");
        let manifest_path = PathBuf::from(manifest_path);
        let manifest = serde_json::json!({
            "config": cfg,
            "version": env!("CARGO_PKG_VERSION"),
            "threads": pool.current_num_threads(),
            "wall_clock_seconds": started.elapsed().as_secs_f64(),
            "records": records,
            "success": produced.success,
            "outputs": [path],
        });
        let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Numeric(e.to_string()))?;
        std::fs::write(&manifest_path, text + "\n")?;
        outputs.push(manifest_path);
    }
    Ok(RunOutcome {
        command: cfg.command,
        success: produced.success,
        outputs,
        records,
    })
}

fn produce(cfg: &ExperimentConfig) -> Result<Produced> {
    match cfg.command {
        Command::Enumerate => enumerate(cfg),
        Command::Sample => sample(cfg),
        Command::Factors => factors(cfg),
        Command::Reduce => reduce(cfg),
        Command::VarianceReport => variance_report(cfg),
        Command::TraceStats => trace_report(cfg),
        Command::Proofcheck => proofcheck(cfg),
        Command::VerifyIdentities => verify_identities(cfg),
    }
}

fn spec_for(cfg: &ExperimentConfig, n: usize, d: usize) -> EnsembleSpec {
    let mut spec = EnsembleSpec::new(n, d, cfg.seed);
    if let Some(b) = cfg.burn_in {
        spec = spec.with_burn_in(b);
    }
    if let Some(t) = cfg.thin {
        spec = spec.with_thinning(t);
    }
    spec
}

fn record_of(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_graph(&mut buf, g).expect("writing to memory");
    String::from_utf8(buf).expect("ASCII record")
}

fn enumerate(cfg: &ExperimentConfig) -> Result<Produced> {
    let mut text = String::new();
    let mut count = 0;
    for (n, d) in cfg.ensemble_pairs()? {
        let before = count;
        for g in enumerate_regular(n, d)? {
            text.push_str(&record_of(&g));
            count += 1;
        }
        log::info!("G({n},{d}): {} graphs", count - before);
    }
    Ok(Produced::ok(Product::Records(text, count)))
}

fn sample(cfg: &ExperimentConfig) -> Result<Produced> {
    let mut text = String::new();
    let mut count = 0;
    for (n, d) in cfg.ensemble_pairs()? {
        let recs = sample_map(&spec_for(cfg, n, d), cfg.samples, cfg.chains, record_of)?;
        count += recs.len();
        text.extend(recs);
    }
    Ok(Produced::ok(Product::Records(text, count)))
}

fn factors(cfg: &ExperimentConfig) -> Result<Produced> {
    let path = cfg.graph.as_ref().expect("validated");
    let graphs = read_graphs(std::io::BufReader::new(File::open(path)?))?;
    let shapes = if cfg.shapes.is_empty() {
        ["C3", "C4", "C5", "P4"].iter().map(|s| s.parse()).collect::<Result<Vec<CanonicalShape>>>()?
    } else {
        cfg.parsed_shapes()?
    };
    let mut table = Table::new(&["graph", "n", "d", "shape", "raw", "expectation_shift", "scale", "normalized"]);
    for (i, g) in graphs.iter().enumerate() {
        let d = match cfg.d {
            Some(d) => d,
            None => {
                let d = g.degree(0);
                if !g.is_regular(d) {
                    return Err(Error::Config(format!("graph {i} is not regular; pass --d")));
                }
                d
            }
        };
        let mut ev = FactorEvaluator::new(g, d)?;
        for s in &shapes {
            let v = gamma_with(&mut ev, s)?;
            table.push(vec![
                i.into(),
                g.n().into(),
                d.into(),
                s.to_string().into(),
                v.raw.into(),
                v.expectation_shift.into(),
                v.scale.into(),
                v.normalized.into(),
            ]);
        }
    }
    Ok(Produced::ok(Product::Table(table)))
}

fn reduce(cfg: &ExperimentConfig) -> Result<Produced> {
    let shape = cfg.parsed_shapes()?.remove(0);
    let start = if cfg.expand {
        expand_subgraph_count(&shape.to_graph())?
    } else {
        FactorExpr::gamma(shape)
    };
    Ok(Produced::ok(Product::Text(format!("{}\n", reduce_full(&start)?))))
}

fn shape_moments(xs: &[f64]) -> Result<(f64, f64, f64, f64)> {
    let mut acc = MomentAccumulator::with_degree(1, 4);
    for &x in xs {
        acc.push(&[x])?;
    }
    if xs.len() < 2 {
        return Ok((f64::NAN, f64::NAN, f64::NAN, f64::NAN));
    }
    Ok((
        acc.variance(0)?,
        ks_distance_standardized(xs),
        acc.skewness(0)?,
        acc.excess_kurtosis(0)?,
    ))
}

fn variance_report(cfg: &ExperimentConfig) -> Result<Produced> {
    let shape = cfg.parsed_shapes()?.remove(0);
    let h = shape.to_graph();
    let mut table = Table::new(&[
        "n",
        "d",
        "p",
        "empirical_var",
        "predicted_var",
        "ratio",
        "ks_distance",
        "skew",
        "ex_kurtosis",
    ]);
    for (n, d) in cfg.ensemble_pairs()? {
        let prediction = predicted_variance(&h, n, d)?;
        let xs = sample_map(&spec_for(cfg, n, d), cfg.samples, cfg.chains, |g| {
            count_subgraphs(g, &h) as f64
        })?;
        let (var, ks, skew, kurt) = shape_moments(&xs)?;
        table.push(vec![
            n.into(),
            d.into(),
            (d as f64 / (n - 1) as f64).into(),
            var.into(),
            prediction.leading.into(),
            (var / prediction.leading).into(),
            ks.into(),
            skew.into(),
            kurt.into(),
        ]);
    }
    Ok(Produced::ok(Product::Table(table)))
}

fn trace_report(cfg: &ExperimentConfig) -> Result<Produced> {
    let lmax = cfg.max_length;
    let mut table = Table::new(&[
        "n",
        "d",
        "ell",
        "mean",
        "variance",
        "ks_distance",
        "skew",
        "ex_kurtosis",
        "min_eigenvalue",
        "min_eigenvalue_se",
    ]);
    for (n, d) in cfg.ensemble_pairs()? {
        let rows = sample_map(&spec_for(cfg, n, d), cfg.samples, cfg.chains, |g| {
            trace_stats(g, d, lmax).map(|t| t[2..].to_vec())
        })?
        .into_iter()
        .collect::<Result<Vec<Vec<f64>>>>()?;
        let k = lmax - 2;
        let cols: Vec<Vec<f64>> = (0..k).map(|i| rows.iter().map(|r| r[i]).collect()).collect();
        let mut stats = Vec::with_capacity(k);
        for col in &cols {
            let mean = col.iter().sum::<f64>() / col.len().max(1) as f64;
            let (var, ks, skew, kurt) = shape_moments(col)?;
            stats.push((mean, var, ks, skew, kurt));
        }
        // covariance of the standardized traces, i.e. their correlation
        let standardized: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| (0..k).map(|i| (r[i] - stats[i].0) / stats[i].1.sqrt()).collect())
            .collect();
        let margin = covariance_min_eigenvalue(&standardized).ok();
        for (i, (mean, var, ks, skew, kurt)) in stats.into_iter().enumerate() {
            table.push(vec![
                n.into(),
                d.into(),
                (i + 3).into(),
                mean.into(),
                var.into(),
                ks.into(),
                skew.into(),
                kurt.into(),
                margin.map(|m| m.min_eigenvalue).into(),
                margin.map(|m| m.jackknife_se).into(),
            ]);
        }
    }
    Ok(Produced::ok(Product::Table(table)))
}

fn text_table(table: &Table) -> String {
    let cells: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| r.iter().map(Cell::render).collect())
        .collect();
    let widths: Vec<usize> = (0..table.columns.len())
        .map(|j| {
            cells
                .iter()
                .map(|r| r[j].len())
                .chain([table.columns[j].len()])
                .max()
                .unwrap()
        })
        .collect();
    let line = |r: &[String]| {
        r.iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = line(&table.columns) + "\n";
    for r in &cells {
        out += &(line(r) + "\n");
    }
    out
}

fn proofcheck(cfg: &ExperimentConfig) -> Result<Produced> {
    let lemmas = parse_lemma_list(&cfg.lemma)?;
    let mut table = Table::new(&[
        "lemma",
        "name",
        "trials",
        "failures",
        "worst_slack",
        "worst_relative_slack",
        "worst_input",
        "status",
    ]);
    let mut success = true;
    for lemma in lemmas {
        let r = run_battery(lemma, cfg.trials, cfg.seed)?;
        success &= r.passed();
        table.push(vec![
            lemma.id().into(),
            lemma.name().into(),
            r.trials.into(),
            r.failures.into(),
            r.worst.slack.into(),
            r.worst.relative_slack().into(),
            r.worst.input.to_string().into(),
            (if r.passed() { "pass" } else { "FAIL" }).into(),
        ]);
    }
    let mut text = text_table(&table);
    if table.rows.iter().any(|r| r[1] == Cell::from("gaussian-band")) {
        text += &format!(
            "gaussian-band threshold m0 = {} (empirical)\n",
            format_float(gaussian_band_threshold())
        );
    }
    Ok(Produced {
        product: Product::Checked(table, text),
        success,
    })
}

fn verify_identities(cfg: &ExperimentConfig) -> Result<Produced> {
    let pairs = if cfg.n_list.is_empty() {
        vec![(6, 3), (8, 3)]
    } else {
        cfg.ensemble_pairs()?
    };
    let shapes = if cfg.shapes.is_empty() {
        vec![CanonicalShape::cycle(3), CanonicalShape::cycle(4), CanonicalShape::path(4)]
    } else {
        cfg.parsed_shapes()?
    };
    let mut checks: Vec<IdentityCheck> = Vec::new();
    for (n, d) in pairs {
        checks.extend(ensemble_identities(n, d)?);
        let graphs: Vec<Graph> = enumerate_regular(n, d)?.take(IDENTITY_GRAPH_LIMIT).collect();
        let (exact, float) = expansion_identity(&shapes, &graphs, d)?;
        checks.push(exact);
        checks.push(float);
        for s in [CanonicalShape::path(3), CanonicalShape::path(4)] {
            checks.push(reduction_identity(&s, &graphs, d)?);
        }
    }
    let mut table = Table::new(&["identity", "n", "d", "checked", "failures", "max_error", "status"]);
    let mut success = true;
    for c in &checks {
        success &= c.passed();
        table.push(vec![
            c.name.clone().into(),
            c.n.into(),
            c.d.into(),
            c.checked.into(),
            c.failures.into(),
            c.max_error.into(),
            (if c.passed() { "pass" } else { "FAIL" }).into(),
        ]);
    }
    let text = text_table(&table);
    Ok(Produced {
        product: Product::Checked(table, text),
        success,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(cfg: &ExperimentConfig) -> (RunOutcome, String) {
        let mut out = Vec::new();
        let o = run_experiment_to(cfg, &mut out).unwrap();
        (o, String::from_utf8(out).unwrap())
    }

    #[test]
    fn enumerate_prints_records() {
        let mut cfg = ExperimentConfig::new(Command::Enumerate);
        cfg.apply("n", "6").unwrap();
        cfg.apply("d", "3").unwrap();
        let (o, text) = run(&cfg);
        assert_eq!(o.records, 70);
        let graphs = read_graphs(text.as_bytes()).unwrap();
        assert_eq!(graphs.len(), 70);
        assert!(graphs.iter().all(|g| g.is_regular(3)));
    }

    #[test]
    fn reduce_prints_expression() {
        let mut cfg = ExperimentConfig::new(Command::Reduce);
        cfg.apply("shape", "P3").unwrap();
        let (_, text) = run(&cfg);
        assert_eq!(text.lines().count(), 1);
        assert!(text.ends_with("| const\n"));
    }

    #[test]
    fn proofcheck_table() {
        let mut cfg = ExperimentConfig::new(Command::Proofcheck);
        cfg.apply("lemma", "2.1").unwrap();
        cfg.apply("trials", "1000").unwrap();
        let (o, text) = run(&cfg);
        assert_eq!(o.exit_code(), 0);
        assert!(text.contains("exp-estimate") && text.contains("pass"));
    }

    #[test]
    fn format_json_output() {
        let mut cfg = ExperimentConfig::new(Command::VarianceReport);
        for (k, v) in [("shape", "C3"), ("n-list", "12"), ("samples", "4"), ("format", "json")] {
            cfg.apply(k, v).unwrap();
        }
        let (_, text) = run(&cfg);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v[0]["n"], 12);
        assert_eq!(v[0]["d"], 6);
    }
}
