//! Command-line front end and file formats for `contomech-core`.

pub mod config;
pub mod ensemble;
pub mod output;
pub mod scenarios;
pub mod snapshot;
pub mod units;
