//! Batch front end for `genent`: state construction, purity evaluation,
//! model sweeps, oracle cross-checks and exponent fits, with CSV and JSON
//! output.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod spec;

pub use error::{CliError, Result};
