//! Parameter sweeps and geometry optimization over the loss models.

pub mod nelder_mead;
mod optimize;
mod scenario;
mod sweep;

pub use optimize::{
    optimize_geometry, Constraint, DesignSpace, Objective, OptimizationResult, Stage, TraceEntry,
};
pub use scenario::{ModeTable, Scenario};
pub use sweep::{
    mode_sweep, run_sweep, run_sweep_family, sweep_tables_to_csv, sweep_tables_to_json, ModeRow,
    SweepAxis, SweepRow, SweepSpec, SweepTable,
};
