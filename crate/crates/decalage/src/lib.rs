//! Command-line front end: JSON problem documents, value tables,
//! cross-method verification and condition reports.

pub mod cache;
pub mod cli;
pub mod commands;
pub mod document;
pub mod error;
pub mod render;

pub use crate::cli::Cli;
pub use crate::commands::run;
pub use crate::document::{Problem, ProblemDocument};
pub use crate::error::CliError;
