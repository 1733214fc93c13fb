//! Std companion to `lcricci-core`: seeded sampling, verification suites, reports and the CLI.

pub mod cli;
pub mod report;
pub mod sampling;
pub mod suite;
pub mod tensor;

pub use lcricci_core as core;
