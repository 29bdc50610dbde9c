//! Configuration, material database, output files and the command line.

pub mod cli;
pub mod config;
pub mod error;
pub mod materials;
pub mod output;

pub use config::{load_config, parse_config, OutputPaths, Provenance, RunConfig, SweepPlan};
pub use error::{ConfigError, ConfigResult};
pub use materials::{GasProfile, MaterialDatabase, MaterialEntry, DATABASE_ENV};
pub use output::{emit_optimize, emit_sweep, execute_sweep, EmitError};
