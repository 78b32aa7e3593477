//! Library half of the `rebits` binary, so the integration tests can reach the
//! config and output types.

pub mod config;
pub mod output;
pub mod runner;
