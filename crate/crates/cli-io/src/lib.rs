//! Configuration, dispatch and scan I/O for the `stueckelberg` command line.

pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod schema;
pub mod selftest;

pub use config::{Config, Value};
pub use error::{CliError, ConfigError};
pub use output::{read_config_source, read_scan, write_scan, Format};
pub use run::{execute, prepare, RunOutput};
pub use schema::{schema_for, Experiment};
pub use selftest::run_selftest;
