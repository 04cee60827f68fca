//! Batch front end for `irsa-core`: JSON experiment configurations in,
//! CSV or JSON result tables out.

pub mod config;
pub mod error;
pub mod experiment;
pub mod table;

pub use config::ExperimentConfig;
pub use error::CliError;
pub use experiment::run_experiment;
pub use table::{Cell, Format, Provenance, ResultTable};
