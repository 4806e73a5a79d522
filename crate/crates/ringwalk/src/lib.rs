//! Configuration, reports and subcommands for the `ringwalk` binary.

pub mod commands;
pub mod config;
pub mod output;
pub mod report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("config line {line}, field `{field}`: {msg}")]
    ConfigField { line: usize, field: String, msg: String },
    #[error("invalid `{field}`: {msg}")]
    Invalid { field: String, msg: String },
    #[error("ring: {0}")]
    Ring(String),
    #[error("{0}")]
    Compute(String),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    pub fn invalid(field: &str, msg: String) -> CliError {
        CliError::Invalid { field: field.into(), msg }
    }
}
