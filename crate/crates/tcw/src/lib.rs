//! Command-line front end, text formats and reports for `tcw-core`.

pub mod cli;
pub mod config;
pub mod report;
pub mod suite;
pub mod textfmt;
