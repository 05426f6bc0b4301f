//! Library half of the `gqw` command: run-file parsing, scenario execution and
//! validation suites.

pub mod config;
pub mod run;
pub mod suites;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{parse_config, ConfigError, RunConfig, Scenario};
pub use run::{run_scenario, RunSummary};
pub use suites::{validate, Report, Suite};

/// Environment variable that overrides `outputDir` from the run file.
pub const OUTPUT_DIR_ENV: &str = "GQW_OUTPUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] gqw_core::Error),
    #[error("cannot read run file {}: {source}", path.display())]
    ConfigFile { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("validation failed")]
    ValidationFailed,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ValidationFailed => 1,
            CliError::Core(_) | CliError::Io { .. } => 2,
            CliError::Config(_) | CliError::ConfigFile { .. } => 3,
        }
    }
}
