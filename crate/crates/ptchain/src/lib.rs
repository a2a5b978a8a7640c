//! Configuration, data emission and the `ptchain` command line on top of
//! `ptchain-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod frequency;
pub mod output;
pub mod parallel;

pub use cli::run;
pub use config::RunConfig;
pub use error::{CliError, CliResult};
pub use frequency::{frequency_extract, FrequencyEstimate};
pub use output::emit_phase_table;
pub use parallel::Rayon;
