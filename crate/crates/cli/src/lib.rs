//! Command implementations behind the `tspipe` binary, exposed as a
//! library so integration tests can drive them directly.

pub mod commands;

pub use commands::{cmd_run, cmd_run_online, cmd_train, cmd_validate, CliError};
