mod common;

use cantilever_q::explorer::*;
use cantilever_q::physics::{Regime, SphereRadiusRule};
use cantilever_q::Error;
use common::*;

const ORACLE_GRID: usize = 256;

/// Optimizer result against the exhaustive grid: at least as good within
/// `1e-6` and located within two oracle cells on each axis.
fn check_against_oracle(space: &DesignSpace) -> Result<(), String> {
    let result = optimize_geometry(space).map_err(|e| e.to_string())?;
    let (oracle_cost, ol, ow) =
        grid_oracle(space, ORACLE_GRID).ok_or("oracle found no feasible point")?;
    let cost = cost_of(result.objective, result.objective_value);
    if cost > oracle_cost + 1e-6 * oracle_cost.abs() {
        return Err(format!(
            "optimizer cost {cost} worse than oracle {oracle_cost}"
        ));
    }
    let cell = |range: (f64, f64)| (range.1 - range.0) / (ORACLE_GRID - 1) as f64;
    let dl = (result.geometry.length - ol).abs();
    let dw = (result.geometry.width - ow).abs();
    if dl > 2.0 * cell(space.length_range) + 1e-18 || dw > 2.0 * cell(space.width_range) + 1e-18 {
        return Err(format!(
            "optimum ({}, {}) far from oracle ({ol}, {ow})",
            result.geometry.length, result.geometry.width
        ));
    }
    Ok(())
}

#[test]
fn shipped_regression_cases_match_grid_oracle() {
    let cases = regression_cases();
    assert_eq!(cases.len(), 3);
    for (name, cfg) in cases {
        let space = cfg.optimize.expect("regression case has [optimize]");
        check_against_oracle(&space).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn trace_records_every_evaluation_and_the_optimum_is_feasible() {
    let (_, cfg) = regression_cases().remove(0);
    let space = cfg.optimize.unwrap();
    let result = optimize_geometry(&space).unwrap();
    let grid_entries = result
        .trace
        .iter()
        .filter(|e| e.stage == Stage::Grid)
        .count();
    assert_eq!(grid_entries, space.grid * space.grid);
    assert!(result.trace.iter().any(|e| e.stage == Stage::NelderMead));
    for e in &result.trace {
        assert_eq!(e.feasible, e.objective.is_some());
        assert!(e.length >= space.length_range.0 && e.length <= space.length_range.1);
        assert!(e.width >= space.width_range.0 && e.width <= space.width_range.1);
    }
    let best = result
        .trace
        .iter()
        .filter_map(|e| e.objective.map(|v| cost_of(space.objective, v)))
        .fold(f64::INFINITY, f64::min);
    assert_eq!(best, cost_of(space.objective, result.objective_value));
    assert!(space.evaluate_feasible(result.geometry).is_some());
    assert_eq!(result.trace_jsonl().lines().count(), result.trace.len());
}

#[test]
fn degenerate_range_collapses_to_one_dimension() {
    let (_, cfg) = regression_cases().remove(0);
    let mut space = cfg.optimize.unwrap();
    space.width_range = (40e-6, 40e-6);
    let result = optimize_geometry(&space).unwrap();
    assert_eq!(result.geometry.width, 40e-6);
    assert!(result.trace.iter().all(|e| e.width == 40e-6));
    check_against_oracle(&space).unwrap();
}

#[test]
fn infeasible_space_is_reported() {
    let (_, cfg) = regression_cases().remove(0);
    let mut space = cfg.optimize.unwrap();
    space.constraints = vec![Constraint::MinFrequency(1e12)];
    assert!(matches!(
        optimize_geometry(&space),
        Err(Error::InfeasibleSpace { .. })
    ));
}

#[test]
fn max_q_prefers_widest_beam_when_sphere_radius_is_fixed() {
    let mut template = Scenario::new(beam(200.0, 30.0, 5.0), silicon(), air(101_325.0));
    template.radius_rule = SphereRadiusRule::Explicit(30e-6);
    let space = DesignSpace::new(
        template,
        (200e-6, 200e-6),
        (10e-6, 60e-6),
        Objective::MaxQTotal,
    );
    let result = optimize_geometry(&space).unwrap();
    assert!(
        rel(result.geometry.width, 60e-6) < 1e-9,
        "{}",
        result.geometry.width
    );
}

#[test]
fn pressure_sweep_is_monotone_and_labels_regimes() {
    let mut fixed = Scenario::new(beam(100.0, 30.0, 5.0), silicon(), air(1.0));
    fixed.radius_rule = SphereRadiusRule::WidthFactor(1.0);
    let values: Vec<f64> = (0..=40)
        .map(|i| 10f64.powf(-1.0 + 6.0 * i as f64 / 40.0))
        .collect();
    let table = run_sweep(&SweepSpec {
        axis: SweepAxis::Pressure,
        values,
        fixed,
    })
    .unwrap();
    let budgets: Vec<_> = table
        .rows
        .iter()
        .map(|r| r.budget.as_ref().unwrap())
        .collect();
    for w in budgets.windows(2) {
        assert!(w[1].q_total.value() < w[0].q_total.value());
        assert!(w[1].q_air.value() < w[0].q_air.value());
    }
    assert_eq!(budgets.first().unwrap().regime, Regime::Molecular);
    assert_eq!(budgets.last().unwrap().regime, Regime::Viscous);
}

#[test]
fn calibrated_beam_q_falls_from_10_pa_to_atmosphere() {
    let fixed = shipped_config("pressure_series.toml").scenario;
    let values: Vec<f64> = (0..=60)
        .map(|i| 10.0 * (101.2e3f64 / 10.0).powf(i as f64 / 60.0))
        .collect();
    let table = run_sweep(&SweepSpec {
        axis: SweepAxis::Pressure,
        values,
        fixed,
    })
    .unwrap();
    let q: Vec<f64> = table
        .rows
        .iter()
        .map(|r| r.budget.as_ref().unwrap().q_total.value())
        .collect();
    assert!(q.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn sweep_family_emits_one_table_per_series_value() {
    let fixed = Scenario::new(beam(100.0, 30.0, 5.0), silicon(), air(100.0));
    let spec = SweepSpec {
        axis: SweepAxis::Pressure,
        values: vec![10.0, 100.0, 1000.0],
        fixed,
    };
    let tables = run_sweep_family(&spec, SweepAxis::Length, &[100e-6, 150e-6, 200e-6]).unwrap();
    assert_eq!(tables.len(), 3);
    let csv = sweep_tables_to_csv(&tables);
    let mut lines = csv.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("length_m,pressure_pa,regime,"));
    assert_eq!(lines.count(), 9);
    let json: serde_json::Value = serde_json::from_str(&sweep_tables_to_json(&tables)).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 9);
}

#[test]
fn failing_rows_are_reported_inline() {
    let fixed = Scenario::new(beam(100.0, 30.0, 5.0), silicon(), air(100.0));
    // 20 µm is narrower than the 30 µm width, so the geometry is rejected
    let table = run_sweep(&SweepSpec {
        axis: SweepAxis::Length,
        values: vec![20e-6, 100e-6],
        fixed,
    })
    .unwrap();
    assert!(table.rows[0].budget.is_err());
    assert!(table.rows[1].budget.is_ok());
    let csv = sweep_tables_to_csv(&[table]);
    let bad = csv.lines().nth(1).unwrap();
    assert!(
        bad.ends_with(|c: char| c.is_alphanumeric() || c == '`'),
        "{bad}"
    );
}

#[test]
fn mode_sweep_reports_nodes_and_needs_constants() {
    let g = beam(300.0, 50.0, 5.0);
    let mut table = ModeTable::default();
    table.insert(2, 0.173).unwrap();
    table.insert(3, 0.064).unwrap();
    let rows = mode_sweep(
        &g,
        &silicon(),
        &air(101_325.0),
        &[1, 2, 3],
        &table,
        SphereRadiusRule::WidthFactor(1.0),
    )
    .unwrap();
    let nodes: Vec<usize> = rows.iter().map(|r| r.nodes.len()).collect();
    assert_eq!(nodes, vec![0, 1, 2]);
    assert!(rows
        .windows(2)
        .all(|w| w[1].budget.q_total.value() > w[0].budget.q_total.value()));
    assert!(matches!(
        mode_sweep(
            &g,
            &silicon(),
            &air(101_325.0),
            &[4],
            &table,
            SphereRadiusRule::default()
        ),
        Err(Error::MissingModeConstant { mode: 4 })
    ));
}

#[test]
fn sweeps_are_deterministic() {
    let fixed = Scenario::new(beam(100.0, 30.0, 5.0), silicon(), air(100.0));
    let spec = SweepSpec {
        axis: SweepAxis::Width,
        values: (10..=40).map(|w| w as f64 * 1e-6).collect(),
        fixed,
    };
    let a = sweep_tables_to_csv(&[run_sweep(&spec).unwrap()]);
    let b = sweep_tables_to_csv(&[run_sweep(&spec).unwrap()]);
    assert_eq!(a, b);
}
