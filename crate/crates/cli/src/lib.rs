//! Command-line front end: catalog runs, parameter sweeps and reports.

pub mod args;
pub mod report;
pub mod runner;
