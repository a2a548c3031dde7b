//! File formats, reports and the command-line front end for `mkstar-core`.

pub mod cli;
pub mod dot;
pub mod format;
pub mod report;

pub use cli::run;
