//! Experiment runner: configuration file, subcommands and CSV outputs.

pub mod app;
pub mod commands;
pub mod config;

pub use app::{Cli, Command};
pub use config::{ConfigError, ExperimentConfig};
