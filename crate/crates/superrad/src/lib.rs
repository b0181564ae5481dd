//! Driver for collective cross-cavity superradiance runs: parameter sweeps,
//! quantum trajectories and entropies written as CSV tables with a JSON manifest.

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
pub mod parallel;
pub mod table;

pub use error::{Error, Result};
