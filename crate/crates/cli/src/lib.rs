//! Experiment orchestration for `randspec`: configuration files, seeded
//! multi-replica runs with CSV outputs and a checksummed `manifest.json`,
//! edge-list import and run-to-run comparison.

pub mod config;
mod error;
pub mod experiment;
pub mod import;

pub use config::{ConfigLayer, Ensemble, ExperimentConfig, Profile};
pub use error::{CliError, Result};
pub use experiment::{compare_runs, run_experiment, run_experiment_with, Comparison, RunManifest, Stages};
pub use import::import_graph;
