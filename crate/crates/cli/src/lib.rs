//! Command-line front end: input formats, reports and subcommands.

pub mod cli;
pub mod parse;
pub mod report;

pub use cli::{run, Output, EXIT_CAP, EXIT_EXCLUDED, EXIT_INPUT, EXIT_OK};
