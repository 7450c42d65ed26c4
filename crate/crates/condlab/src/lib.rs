//! Command line front end and file formats for `condlab-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod manifest;
pub mod output;
pub mod parallel;
pub mod plot;

pub use cli::run;
pub use error::{CliError, CliResult};
