use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what}: {found} exceeds the supported limit of {limit}")]
    TooLarge {
        what: &'static str,
        found: usize,
        limit: usize,
    },

    #[error("no {d}-regular graph on {n} vertices (need d <= n-1 and d*n even)")]
    Infeasible { n: usize, d: usize },

    #[error("density d/(n-1) must lie strictly between 0 and 1 (n={n}, d={d})")]
    DegenerateDensity { n: usize, d: usize },

    #[error("coefficient has a pole at the evaluation point")]
    PoleAtEvaluation,

    #[error("unsupported shape: {0}")]
    ShapeUnsupported(String),

    #[error("shape has {vertices} vertices but the ensemble only has {n}")]
    ShapeTooLargeForEnsemble { vertices: usize, n: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("lemma hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("stars have a deterministic count; no variance prediction")]
    StarShape,

    #[error("need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("input outside the lemma's domain: {0}")]
    DomainViolation(String),

    #[error("exact arithmetic would overflow: {0}")]
    Overflow(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("I/O failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status: 2 for bad input or configuration, 3 for
    /// numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Overflow(_) | Error::Numeric(_) | Error::PoleAtEvaluation => 3,
            _ => 2,
        }
    }
}
