//! File formats, embedded data, reports and the command-line front end for
//! the `wdp_core` library.

pub mod catalog;
pub mod cli;
pub mod expr;
pub mod format;
pub mod report;
