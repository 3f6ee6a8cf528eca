//! Reproduction harness for the `phasefn` library: accuracy and timing tables,
//! coefficient decay data, and verification suites, all written as CSV.

pub mod bench;
pub mod config;
pub mod decay;
pub mod qspec;
pub mod verify;

pub use config::Config;
