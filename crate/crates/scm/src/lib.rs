//! File formats, run configuration and drivers around [`scm_core`].

pub mod config;
pub mod error;
pub mod fcidump;
pub mod manifest;
pub mod paulifile;
pub mod pipeline;
pub mod report;
pub mod run;

pub use config::RunConfig;
pub use error::{CliError, ParseError, Result};
pub use pipeline::{Block, ConstraintInput, Padding};
