use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scenario::{ModeTable, Scenario};
use crate::error::{Error, Result};
use crate::physics::{
    mode_shape_nodes, GasEnvironment, Geometry, Material, QBudget, SphereRadiusRule,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Pressure,
    Length,
    Width,
    Mode,
}

impl SweepAxis {
    pub fn column(&self) -> &'static str {
        match self {
            SweepAxis::Pressure => "pressure_pa",
            SweepAxis::Length => "length_m",
            SweepAxis::Width => "width_m",
            SweepAxis::Mode => "mode",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub fixed: Scenario,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::invalid("sweep.values", "must not be empty"));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("sweep.values", "must be finite"));
        }
        if self.values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid(
                "sweep.values",
                "must be strictly increasing",
            ));
        }
        if self.axis == SweepAxis::Mode {
            for &v in &self.values {
                let index = mode_index(v)?;
                self.fixed.modes.mode(index)?;
            }
        }
        Ok(())
    }

    /// The fixed scenario with the swept parameter replaced by `value`.
    pub fn scenario_at(&self, value: f64) -> Result<Scenario> {
        let mut s = self.fixed.clone();
        match self.axis {
            SweepAxis::Pressure => s.gas = s.gas.with_pressure(value),
            SweepAxis::Length => s.geometry.length = value,
            SweepAxis::Width => s.geometry.width = value,
            SweepAxis::Mode => s.mode_index = mode_index(value)?,
        }
        Ok(s)
    }
}

fn mode_index(v: f64) -> Result<u32> {
    if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as u32)
    } else {
        Err(Error::invalid(
            "sweep.values",
            format!("{v} is not a mode index"),
        ))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub budget: Result<QBudget>,
}

/// One evaluated sweep; `series` tags tables that belong to a family of curves.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub series: Option<(SweepAxis, f64)>,
    pub rows: Vec<SweepRow>,
}

/// Evaluates every sweep value independently. Per-point failures are kept in
/// the row; only an invalid spec aborts.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let rows = spec
        .values
        .par_iter()
        .map(|&value| SweepRow {
            value,
            budget: spec.scenario_at(value).and_then(|s| s.evaluate()),
        })
        .collect();
    Ok(SweepTable {
        axis: spec.axis,
        series: None,
        rows,
    })
}

/// Runs `spec` once per series value (e.g. one pressure sweep per length).
pub fn run_sweep_family(
    spec: &SweepSpec,
    series_axis: SweepAxis,
    series: &[f64],
) -> Result<Vec<SweepTable>> {
    if series_axis == spec.axis {
        return Err(Error::invalid(
            "sweep.series.axis",
            "must differ from the swept axis",
        ));
    }
    series
        .iter()
        .map(|&sv| {
            let base = SweepSpec {
                axis: series_axis,
                values: vec![sv],
                fixed: spec.fixed.clone(),
            }
            .scenario_at(sv)?;
            let per = SweepSpec {
                fixed: base,
                ..spec.clone()
            };
            let mut table = run_sweep(&per)?;
            table.series = Some((series_axis, sv));
            Ok(table)
        })
        .collect()
}

const CSV_COLUMNS: &str = "regime,resonant_frequency_hz,q_air,q_support,q_ted,q_others,q_total,min_detectable_mass_kg,error";

/// CSV with fixed column order; lossless channels print as `inf`.
pub fn sweep_tables_to_csv(tables: &[SweepTable]) -> String {
    let mut out = String::new();
    let series_col = tables.iter().find_map(|t| t.series.map(|(a, _)| a));
    let Some(axis) = tables.first().map(|t| t.axis) else {
        return out;
    };
    if let Some(sa) = series_col {
        let _ = write!(out, "{},", sa.column());
    }
    let _ = writeln!(out, "{},{}", axis.column(), CSV_COLUMNS);
    for t in tables {
        for row in &t.rows {
            if series_col.is_some() {
                match t.series {
                    Some((_, v)) => {
                        let _ = write!(out, "{},", fmt_num(v));
                    }
                    None => out.push(','),
                }
            }
            let _ = write!(out, "{},", fmt_num(row.value));
            match &row.budget {
                Ok(b) => {
                    let others = b.q_others.map(|q| fmt_q(q.value())).unwrap_or_default();
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},",
                        b.regime.as_str(),
                        fmt_num(b.resonant_frequency),
                        fmt_q(b.q_air.value()),
                        fmt_q(b.q_support.value()),
                        fmt_q(b.q_ted.value()),
                        others,
                        fmt_q(b.q_total.value()),
                        fmt_num(b.min_detectable_mass),
                    );
                }
                Err(e) => {
                    let msg = e.to_string().replace([',', '\n'], ";");
                    let _ = writeln!(out, ",,,,,,,,{msg}");
                }
            }
        }
    }
    out
}

fn fmt_q(q: f64) -> String {
    if q.is_infinite() {
        "inf".to_string()
    } else {
        fmt_num(q)
    }
}

/// Shortest round-trip form, switching to exponent notation for very small or large magnitudes.
fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-3..1e9).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

#[derive(Serialize)]
struct RowRecord<'a> {
    axis: SweepAxis,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    series_axis: Option<SweepAxis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    series_value: Option<f64>,
    budget: Option<&'a QBudget>,
    error: Option<String>,
}

/// JSON array with one record per row, in table order.
pub fn sweep_tables_to_json(tables: &[SweepTable]) -> String {
    let records: Vec<RowRecord> = tables
        .iter()
        .flat_map(|t| {
            t.rows.iter().map(move |row| RowRecord {
                axis: t.axis,
                value: row.value,
                series_axis: t.series.map(|(a, _)| a),
                series_value: t.series.map(|(_, v)| v),
                budget: row.budget.as_ref().ok(),
                error: row.budget.as_ref().err().map(|e| e.to_string()),
            })
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("sweep records serialize")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeRow {
    pub mode: u32,
    pub budget: QBudget,
    /// Interior node positions x/L; empty for the fundamental.
    pub nodes: Vec<f64>,
}

/// Per-mode budgets and node points for one cantilever.
pub fn mode_sweep(
    geometry: &Geometry,
    material: &Material,
    gas: &GasEnvironment,
    modes: &[u32],
    table: &ModeTable,
    radius_rule: SphereRadiusRule,
) -> Result<Vec<ModeRow>> {
    let specs = modes
        .iter()
        .map(|&n| table.mode(n))
        .collect::<Result<Vec<_>>>()?;
    let mut scenario = Scenario::new(*geometry, material.clone(), *gas);
    scenario.modes = table.clone();
    scenario.radius_rule = radius_rule;
    specs
        .iter()
        .map(|spec| {
            let s = Scenario {
                mode_index: spec.index,
                ..scenario.clone()
            };
            let nodes = match mode_shape_nodes(spec) {
                Ok(nodes) => nodes,
                Err(Error::NoInteriorNodes { .. }) => Vec::new(),
                Err(e) => return Err(e),
            };
            Ok(ModeRow {
                mode: spec.index,
                budget: s.evaluate()?,
                nodes,
            })
        })
        .collect()
}
