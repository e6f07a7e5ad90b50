//! Experiment runner: parses sectioned config files, runs one backend over
//! its sweep and emits CSV or JSON tables with a metadata record.

pub mod compare;
pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{parse_config, BackendConfig, ExperimentConfig};
pub use error::{CliError, CliResult};
pub use output::{Cell, Format, Metadata, Table};
pub use run::{config_hash, run, RunOutput};
