//! Library half of the `bregkit` command: configuration, suites and report output.

pub mod catalog;
pub mod cli;
pub mod config;
pub mod report;
pub mod suites;
