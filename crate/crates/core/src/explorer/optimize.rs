//! Constrained cantilever geometry optimization: grid scan, then Nelder–Mead
//! refinement from the best feasible cell.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::nelder_mead::{minimize, NelderMeadOptions};
use super::scenario::Scenario;
use crate::error::{Error, Result};
use crate::physics::{Geometry, QBudget};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    MaxQTotal,
    MinDetectableMass,
}

impl Objective {
    /// Value to minimize.
    fn cost(&self, budget: &QBudget) -> f64 {
        match self {
            Objective::MaxQTotal => -budget.q_total.value(),
            Objective::MinDetectableMass => budget.min_detectable_mass,
        }
    }

    /// User-facing objective value (Q_total or kg).
    pub fn value(&self, budget: &QBudget) -> f64 {
        match self {
            Objective::MaxQTotal => budget.q_total.value(),
            Objective::MinDetectableMass => budget.min_detectable_mass,
        }
    }
}

/// Feasibility predicate on a candidate design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Constraint {
    /// f0 ≥ value [Hz]
    MinFrequency(f64),
    /// f0 ≤ value [Hz]
    MaxFrequency(f64),
    /// L·W ≤ value [m²]
    MaxFootprint(f64),
    /// Q_total ≥ value
    MinQTotal(f64),
}

impl Constraint {
    pub fn satisfied(&self, geometry: &Geometry, budget: &QBudget) -> bool {
        match *self {
            Constraint::MinFrequency(f) => budget.resonant_frequency >= f,
            Constraint::MaxFrequency(f) => budget.resonant_frequency <= f,
            Constraint::MaxFootprint(a) => geometry.footprint() <= a,
            Constraint::MinQTotal(q) => budget.q_total.value() >= q,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignSpace {
    /// [m], inclusive
    pub length_range: (f64, f64),
    /// [m], inclusive
    pub width_range: (f64, f64),
    /// Fixed by the process [m].
    pub thickness: f64,
    pub constraints: Vec<Constraint>,
    pub objective: Objective,
    /// Everything but length and width; its thickness is overridden.
    pub template: Scenario,
    /// Points per axis of the coarse scan.
    pub grid: usize,
    /// Number of Nelder–Mead restarts after the scan (0 disables refinement).
    pub refinement_stages: usize,
    pub refinement: NelderMeadOptions,
}

impl DesignSpace {
    pub fn new(
        template: Scenario,
        length_range: (f64, f64),
        width_range: (f64, f64),
        objective: Objective,
    ) -> Self {
        DesignSpace {
            length_range,
            width_range,
            thickness: template.geometry.thickness,
            constraints: Vec::new(),
            objective,
            template,
            grid: 32,
            refinement_stages: 1,
            refinement: NelderMeadOptions {
                max_iterations: 400,
                x_tolerance: 1e-9,
                initial_step: 1.0 / 31.0,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [
            ("length_range", self.length_range),
            ("width_range", self.width_range),
        ] {
            if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi >= lo) {
                return Err(Error::invalid(
                    format!("optimize.{name}"),
                    format!("[{lo}, {hi}] must be a non-empty positive interval"),
                ));
            }
        }
        crate::error::require_positive("optimize.thickness", self.thickness)?;
        if self.grid == 0 {
            return Err(Error::invalid("optimize.grid", "must be at least 1"));
        }
        Ok(())
    }

    /// Maps unit coordinates to a geometry.
    pub fn geometry_at(&self, u_length: f64, u_width: f64) -> Geometry {
        let lerp = |(lo, hi): (f64, f64), u: f64| lo + (hi - lo) * u;
        Geometry {
            length: lerp(self.length_range, u_length),
            width: lerp(self.width_range, u_width),
            thickness: self.thickness,
        }
    }

    /// Budget of a candidate if it is valid and satisfies every constraint.
    pub fn evaluate_feasible(&self, geometry: Geometry) -> Option<QBudget> {
        geometry.validate().ok()?;
        let budget = self.template.with_geometry(geometry).evaluate().ok()?;
        self.constraints
            .iter()
            .all(|c| c.satisfied(&geometry, &budget))
            .then_some(budget)
    }

    pub fn cost(&self, geometry: Geometry) -> f64 {
        self.evaluate_feasible(geometry)
            .map(|b| self.objective.cost(&b))
            .unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Grid,
    NelderMead,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub stage: Stage,
    pub length: f64,
    pub width: f64,
    pub feasible: bool,
    /// Objective value (Q_total or kg); absent for rejected points.
    pub objective: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub geometry: Geometry,
    pub budget: QBudget,
    pub objective: Objective,
    pub objective_value: f64,
    pub trace: Vec<TraceEntry>,
}

impl OptimizationResult {
    /// One JSON object per evaluation, newline separated.
    pub fn trace_jsonl(&self) -> String {
        let mut out = String::new();
        for entry in &self.trace {
            out.push_str(&serde_json::to_string(entry).expect("trace entry serializes"));
            out.push('\n');
        }
        out
    }
}

fn axis_points(range: (f64, f64), n: usize) -> Vec<f64> {
    if range.0 == range.1 || n == 1 {
        vec![0.0]
    } else {
        (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
    }
}

pub fn optimize_geometry(space: &DesignSpace) -> Result<OptimizationResult> {
    space.validate()?;
    let ul = axis_points(space.length_range, space.grid);
    let uw = axis_points(space.width_range, space.grid);
    let cells: Vec<(f64, f64)> = ul
        .iter()
        .flat_map(|&a| uw.iter().map(move |&b| (a, b)))
        .collect();

    let evaluate = |u: (f64, f64), stage: Stage| {
        let g = space.geometry_at(u.0, u.1);
        let budget = space.evaluate_feasible(g);
        let entry = TraceEntry {
            stage,
            length: g.length,
            width: g.width,
            feasible: budget.is_some(),
            objective: budget.as_ref().map(|b| space.objective.value(b)),
        };
        (g, budget, entry)
    };

    let scanned: Vec<_> = cells
        .par_iter()
        .map(|&u| evaluate(u, Stage::Grid))
        .collect();
    let mut trace: Vec<TraceEntry> = scanned.iter().map(|s| s.2).collect();

    let mut best: Option<(Geometry, QBudget, f64, (f64, f64))> = None;
    for ((g, budget, _), &u) in scanned.into_iter().zip(&cells) {
        if let Some(b) = budget {
            let c = space.objective.cost(&b);
            if best.as_ref().is_none_or(|(_, _, bc, _)| c < *bc) {
                best = Some((g, b, c, u));
            }
        }
    }
    let Some(mut best) = best else {
        return Err(Error::InfeasibleSpace { grid: space.grid });
    };

    // degenerate axes are held fixed during refinement
    let free_l = space.length_range.0 != space.length_range.1;
    let free_w = space.width_range.0 != space.width_range.1;
    let to_unit = |x: &[f64], anchor: (f64, f64)| {
        let mut it = x.iter();
        let a = if free_l {
            *it.next().unwrap()
        } else {
            anchor.0
        };
        let b = if free_w {
            *it.next().unwrap()
        } else {
            anchor.1
        };
        (a, b)
    };

    for _ in 0..space.refinement_stages {
        if !(free_l || free_w) {
            break;
        }
        let anchor = best.3;
        let mut start = Vec::new();
        if free_l {
            start.push(anchor.0);
        }
        if free_w {
            start.push(anchor.1);
        }
        let mut refined_trace = Vec::new();
        let minimum = minimize(&start, space.refinement, |x| {
            let u = to_unit(x, anchor);
            let (_, budget, entry) = evaluate(u, Stage::NelderMead);
            refined_trace.push(entry);
            budget
                .map(|b| space.objective.cost(&b))
                .unwrap_or(f64::INFINITY)
        });
        trace.extend(refined_trace);
        if minimum.value < best.2 {
            let u = to_unit(&minimum.x, anchor);
            let (g, budget, _) = evaluate(u, Stage::NelderMead);
            if let Some(b) = budget {
                best = (g, b, minimum.value, u);
            }
        }
    }

    let (geometry, budget, _, _) = best;
    Ok(OptimizationResult {
        objective_value: space.objective.value(&budget),
        geometry,
        budget,
        objective: space.objective,
        trace,
    })
}
