//! Experiment runner around the LOCAL-model toolkit: configs in, CSV and
//! JSON artifacts out, exit codes reporting verdicts.

pub mod config;
pub mod report;
pub mod runners;

pub use config::ExperimentConfig;
pub use runners::{generate_graph, run_experiment, Verdict};
