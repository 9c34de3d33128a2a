//! Configuration, experiment orchestration and output emission for the
//! `hypercell` binary (and for driving runs programmatically).

pub mod config;
pub mod output;
pub mod runner;

pub use config::{AtomSpec, DistSpec, ExperimentConfig, ExperimentKind, MixturePartSpec};
pub use output::{CheckResult, EstimateRow, RunManifest};
pub use runner::{
    format_check_report, run, run_checked, run_conditioned_campaign, run_inball_campaign,
    run_window_campaign, truncation_cap,
};

use crate::estimators::EstimatorError;
use crate::samplers::SampleError;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("sampling failed: {0}")]
    Sample(#[from] SampleError),
    #[error("estimation failed: {0}")]
    Estimator(#[from] EstimatorError),
    #[error("{failed} of {total} registered checks failed")]
    CheckFailed { failed: usize, total: usize },
}
