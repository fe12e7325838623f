//! Configuration, orchestration and reports behind the command line tool.

mod config;
mod identities;
mod report;
mod runner;

pub use config::{split_shape_list, Command, DRule, ExperimentConfig, OutputFormat, THREADS_ENV};
pub use identities::{
    ensemble_identities, expansion_identity, expansions, reduction_holds_on, reduction_identity,
    IdentityCheck, FLOAT_TOL,
};
pub use report::{emit_report, format_float, read_csv_report, Cell, Table};
pub use runner::{run_experiment, run_experiment_to, RunOutcome};
