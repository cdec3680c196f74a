//! Command-line front end and file formats for `secant-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod json;
pub mod pattern;
pub mod poly_file;

pub use cli::run;
