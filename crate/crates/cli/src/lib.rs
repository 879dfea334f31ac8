//! Library half of the `blaschke` command-line tool.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
