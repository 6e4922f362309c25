//! Command-line front end for `densecode-core`: JSON configuration, text,
//! JSON and CSV output with matching parsers, and the validation suite.

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod oracle;
pub mod validate;

pub use commands::{Layer, Output, OutputFormat, RunConfig};
pub use error::CliError;
