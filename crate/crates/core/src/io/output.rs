use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{Provenance, RunConfig, SweepPlan};
use super::error::ConfigError;
use crate::error::Result;
use crate::explorer::{
    optimize_geometry, run_sweep, run_sweep_family, sweep_tables_to_csv, sweep_tables_to_json,
    OptimizationResult, SweepTable,
};

#[derive(Debug)]
pub enum EmitError {
    /// The run configuration cannot drive this command.
    Invalid(ConfigError),
    /// Writing an output file failed.
    Write(ConfigError),
    Model(crate::Error),
}

impl From<crate::Error> for EmitError {
    fn from(e: crate::Error) -> Self {
        EmitError::Model(e)
    }
}

impl std::fmt::Display for EmitError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EmitError::Invalid(e) | EmitError::Write(e) => e.fmt(f),
            EmitError::Model(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for EmitError {}

fn write(path: &Path, contents: &str) -> std::result::Result<(), EmitError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| io_error(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| io_error(path, e))
}

fn io_error(path: &Path, e: std::io::Error) -> EmitError {
    EmitError::Write(ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("record serializes");
    s.push('\n');
    s
}

pub fn execute_sweep(plan: &SweepPlan) -> Result<Vec<SweepTable>> {
    match &plan.series {
        Some((axis, values)) => run_sweep_family(&plan.spec, *axis, values),
        None => Ok(vec![run_sweep(&plan.spec)?]),
    }
}

#[derive(Serialize)]
struct ProvenanceFile<'a> {
    provenance: &'a Provenance,
}

/// Writes `<stem>_sweep.csv`, `<stem>_sweep.json` and `<stem>_provenance.json`.
pub fn emit_sweep(
    config: &RunConfig,
    plan: &SweepPlan,
    dir: &Path,
) -> std::result::Result<Vec<PathBuf>, EmitError> {
    let tables = execute_sweep(plan)?;
    let stem = &config.output.stem;
    let csv = dir.join(format!("{stem}_sweep.csv"));
    let json = dir.join(format!("{stem}_sweep.json"));
    let prov = dir.join(format!("{stem}_provenance.json"));
    write(&csv, &sweep_tables_to_csv(&tables))?;
    let mut body = sweep_tables_to_json(&tables);
    body.push('\n');
    write(&json, &body)?;
    write(
        &prov,
        &to_pretty_json(&ProvenanceFile {
            provenance: &config.provenance,
        }),
    )?;
    Ok(vec![csv, json, prov])
}

#[derive(Serialize)]
struct OptimumFile<'a> {
    objective: crate::explorer::Objective,
    objective_value: f64,
    geometry: &'a crate::physics::Geometry,
    budget: &'a crate::physics::QBudget,
    evaluations: usize,
}

/// Writes `<stem>_optimum.json`, `<stem>_trace.jsonl` and `<stem>_provenance.json`.
pub fn emit_optimize(
    config: &RunConfig,
    dir: &Path,
) -> std::result::Result<(OptimizationResult, Vec<PathBuf>), EmitError> {
    let space = config.optimize.as_ref().ok_or_else(|| {
        EmitError::Invalid(ConfigError::validation(
            "optimize",
            "config has no [optimize] stanza",
        ))
    })?;
    let result = optimize_geometry(space)?;
    let stem = &config.output.stem;
    let optimum = dir.join(format!("{stem}_optimum.json"));
    let trace = dir.join(format!("{stem}_trace.jsonl"));
    let prov = dir.join(format!("{stem}_provenance.json"));
    write(
        &optimum,
        &to_pretty_json(&OptimumFile {
            objective: result.objective,
            objective_value: result.objective_value,
            geometry: &result.geometry,
            budget: &result.budget,
            evaluations: result.trace.len(),
        }),
    )?;
    write(&trace, &result.trace_jsonl())?;
    write(
        &prov,
        &to_pretty_json(&ProvenanceFile {
            provenance: &config.provenance,
        }),
    )?;
    Ok((result, vec![optimum, trace, prov]))
}
