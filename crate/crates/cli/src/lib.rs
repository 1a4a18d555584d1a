//! Library half of the `simroots` command-line tool.
//!
//! The binary is a thin wrapper around [`commands::run`]; everything it
//! prints or writes is produced here so it can be tested in-process.

pub mod commands;
pub mod error;
pub mod reports;
pub mod spectrum_io;
pub mod sweep;
pub mod verify;

pub use error::{CliError, CliResult};
