use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use regfactor::experiment::{run_experiment, Command, ExperimentConfig};

#[derive(Parser)]
#[command(name = "regfactor", version, about = "Graph factors and subgraph statistics of random regular graphs")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Every d-regular graph on n labelled vertices, as edge-list records
    Enumerate(Flags),
    /// Edge-switch chain samples, as edge-list records
    Sample(Flags),
    /// Graph factors of each graph in an edge-list file
    Factors(Flags),
    /// Reduce gamma_H (or X_H with --expand) to the basis
    Reduce(Flags),
    /// Empirical against predicted variance of X_H
    VarianceReport(Flags),
    /// Moments of tr(X^l) and the smallest eigenvalue of their correlation
    TraceStats(Flags),
    /// Random-point battery for the analytic inequalities
    Proofcheck(Flags),
    /// Exact identities over small enumerated ensembles
    VerifyIdentities(Flags),
}

/// Flags shared by all subcommands; each overrides the config file.
#[derive(Args)]
struct Flags {
    /// Key/value or JSON config file
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "n")]
    n: Option<String>,
    #[arg(long)]
    n_list: Option<String>,
    #[arg(long = "d")]
    d: Option<String>,
    /// fixed, half or n-over-log
    #[arg(long)]
    d_rule: Option<String>,
    /// Name (C5, P4, K4, S3) or edge list such as "0-1 1-2 2-0"
    #[arg(long)]
    shape: Option<String>,
    /// Comma-separated names, or `;`-separated edge lists
    #[arg(long)]
    shapes: Option<String>,
    #[arg(long, visible_alias = "count")]
    samples: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    threads: Option<String>,
    #[arg(long)]
    chains: Option<String>,
    #[arg(long)]
    burn_in: Option<String>,
    #[arg(long)]
    thin: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// Edge-list file
    #[arg(long)]
    graph: Option<String>,
    /// all, an id such as 2.3, a name such as gaussian-band, or a list
    #[arg(long)]
    lemma: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    max_length: Option<String>,
    #[arg(long)]
    expand: bool,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let opts = [
            ("n", &self.n),
            ("n-list", &self.n_list),
            ("d", &self.d),
            ("d-rule", &self.d_rule),
            ("shape", &self.shape),
            ("shapes", &self.shapes),
            ("samples", &self.samples),
            ("seed", &self.seed),
            ("threads", &self.threads),
            ("chains", &self.chains),
            ("burn-in", &self.burn_in),
            ("thin", &self.thin),
            ("out", &self.out),
            ("format", &self.format),
            ("graph", &self.graph),
            ("lemma", &self.lemma),
            ("trials", &self.trials),
            ("max-length", &self.max_length),
        ];
        let mut out: Vec<_> = opts
            .into_iter()
            .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
            .collect();
        if self.expand {
            out.push(("expand", "true".into()));
        }
        out
    }
}

fn build(cli: Cli) -> regfactor::Result<ExperimentConfig> {
    let (command, flags) = match cli.command {
        Sub::Enumerate(f) => (Command::Enumerate, f),
        Sub::Sample(f) => (Command::Sample, f),
        Sub::Factors(f) => (Command::Factors, f),
        Sub::Reduce(f) => (Command::Reduce, f),
        Sub::VarianceReport(f) => (Command::VarianceReport, f),
        Sub::TraceStats(f) => (Command::TraceStats, f),
        Sub::Proofcheck(f) => (Command::Proofcheck, f),
        Sub::VerifyIdentities(f) => (Command::VerifyIdentities, f),
    };
    let mut cfg = match &flags.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.command = command;
    for (k, v) in flags.pairs() {
        cfg.apply(k, &v)?;
    }
    Ok(cfg)
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let code = match build(cli).and_then(|cfg| run_experiment(&cfg)) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
