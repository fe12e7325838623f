pub mod algebra;
pub mod ensemble;
pub mod error;
pub mod experiment;
pub mod factors;
pub mod graphs;
pub mod proofcheck;
pub mod stats;

pub use error::{Error, Result};
