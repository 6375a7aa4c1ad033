//! Front end for the `tad` binary: scenario files, result records and the
//! five subcommands. Every numeric output is written with 17 significant
//! digits so identical inputs give byte-identical files.

pub mod commands;
pub mod error;
pub mod format;
pub mod record;
pub mod scenario_file;

pub use error::CliError;
pub use scenario_file::ScenarioFile;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
