//! Command-line front end: argument definitions, record encodings and the
//! command implementations behind the `parking` binary.

pub mod args;
pub mod commands;
pub mod output;

pub use args::Cli;
pub use commands::{run, CliError, Status};
