//! Experiment harness around `wavedens`: configuration, Monte Carlo drivers and report files.

pub mod cli;
pub mod config;
pub mod experiments;
pub mod output;
pub mod selftest;

pub use config::ExperimentConfig;

/// Bad flags, config files or out-of-range settings. Maps to exit code 2.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);
