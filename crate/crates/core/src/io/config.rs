//! Declarative TOML run configuration with strict schema and default provenance.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::error::{ConfigError, ConfigResult};
use super::materials::MaterialDatabase;
use crate::error::Error;
use crate::explorer::{
    Constraint, DesignSpace, ModeTable, Objective, Scenario, SweepAxis, SweepSpec,
};
use crate::physics::constants::{KNUDSEN_MOLECULAR_LIMIT, KNUDSEN_VISCOUS_LIMIT};
use crate::physics::{Geometry, Quality, SphereRadiusRule};

pub const DEFAULT_PRESSURE: f64 = 101_325.0;
pub const DEFAULT_TEMPERATURE: f64 = 300.0;
pub const DEFAULT_GAS: &str = "air";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    material: String,
    geometry: Geometry,
    #[serde(default)]
    gas: RawGas,
    #[serde(default)]
    mode: RawMode,
    #[serde(default)]
    sphere: RawSphere,
    #[serde(default)]
    model: RawModel,
    sweep: Option<RawSweep>,
    optimize: Option<RawOptimize>,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGas {
    profile: Option<String>,
    pressure: Option<f64>,
    temperature: Option<f64>,
    viscosity: Option<f64>,
    molar_mass: Option<f64>,
    molecule_diameter: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMode {
    index: Option<u32>,
    #[serde(default)]
    support_constants: BTreeMap<String, f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSphere {
    radius_factor: Option<f64>,
    radius: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    q_others: Option<f64>,
    frequency_resolution_factor: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRange {
    start: f64,
    stop: f64,
    points: usize,
    spacing: Option<Spacing>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeries {
    axis: SweepAxis,
    values: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis: SweepAxis,
    values: Option<Vec<f64>>,
    range: Option<RawRange>,
    series: Option<RawSeries>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptimize {
    length_range: [f64; 2],
    width_range: [f64; 2],
    objective: Objective,
    #[serde(default)]
    constraints: Vec<Constraint>,
    grid: Option<usize>,
    refinement_stages: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
    stem: Option<String>,
}

/// Sweep stanza: one primary sweep, optionally repeated per series value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub spec: SweepSpec,
    pub series: Option<(SweepAxis, Vec<f64>)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputPaths {
    pub dir: PathBuf,
    pub stem: String,
}

/// What was taken from the file, what was defaulted and which model rules apply.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub config_source: String,
    pub material: String,
    pub material_source_note: String,
    pub defaults_applied: BTreeMap<String, String>,
    pub model_rules: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub sweep: Option<SweepPlan>,
    pub optimize: Option<DesignSpace>,
    pub output: OutputPaths,
    pub provenance: Provenance,
}

fn validation(err: Error) -> ConfigError {
    match err {
        Error::InvalidParameter { field, reason } => ConfigError::validation(field, reason),
        Error::MissingModeConstant { mode } => ConfigError::validation(
            "mode.support_constants",
            format!("no support-loss constant configured for mode {mode}"),
        ),
        other => ConfigError::validation("config", other.to_string()),
    }
}

pub fn load_config(path: &Path, db: &MaterialDatabase) -> ConfigResult<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".to_string());
    parse_config(&text, db, &path.display().to_string(), &stem)
}

pub fn parse_config(
    text: &str,
    db: &MaterialDatabase,
    source: &str,
    default_stem: &str,
) -> ConfigResult<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::from_toml(&e, text))?;
    let mut defaults = BTreeMap::new();
    let mut note_default = |key: &str, value: String| {
        defaults.insert(key.to_string(), value);
    };

    let entry = db.entries.get(&raw.material).ok_or_else(|| {
        ConfigError::validation(
            "material",
            format!(
                "unknown material `{}` (known: {})",
                raw.material,
                db.entries.keys().cloned().collect::<Vec<_>>().join(", ")
            ),
        )
    })?;
    let material = entry.material.clone();
    raw.geometry.validate().map_err(validation)?;

    let profile_name = raw.gas.profile.clone().unwrap_or_else(|| {
        note_default("gas.profile", DEFAULT_GAS.to_string());
        DEFAULT_GAS.to_string()
    });
    let profile = db.gas(&profile_name)?;
    let pressure = raw.gas.pressure.unwrap_or_else(|| {
        note_default("gas.pressure", format!("{DEFAULT_PRESSURE} Pa"));
        DEFAULT_PRESSURE
    });
    let temperature = raw.gas.temperature.unwrap_or_else(|| {
        note_default("gas.temperature", format!("{DEFAULT_TEMPERATURE} K"));
        DEFAULT_TEMPERATURE
    });
    let mut gas = profile.environment(pressure, temperature);
    match raw.gas.viscosity {
        Some(v) => gas.viscosity = v,
        None => note_default(
            "gas.viscosity",
            format!("{} Pa s (profile `{profile_name}`)", gas.viscosity),
        ),
    }
    match raw.gas.molar_mass {
        Some(v) => gas.molar_mass = v,
        None => note_default(
            "gas.molar_mass",
            format!("{} kg/mol (profile `{profile_name}`)", gas.molar_mass),
        ),
    }
    match raw.gas.molecule_diameter {
        Some(v) => gas.molecule_diameter = v,
        None => note_default(
            "gas.molecule_diameter",
            format!("{} m (profile `{profile_name}`)", gas.molecule_diameter),
        ),
    }
    gas.validate().map_err(validation)?;

    let mut modes = ModeTable::default();
    for (key, &c) in &raw.mode.support_constants {
        let index: u32 = key.parse().map_err(|_| {
            ConfigError::validation(
                format!("mode.support_constants.{key}"),
                "key must be a mode index",
            )
        })?;
        modes.insert(index, c).map_err(|e| match e {
            Error::InvalidParameter { reason, .. } => {
                ConfigError::validation(format!("mode.support_constants.{key}"), reason)
            }
            other => validation(other),
        })?;
    }
    if !raw.mode.support_constants.contains_key("1") {
        note_default("mode.support_constants.1", "2.081".to_string());
    }
    let mode_index = raw.mode.index.unwrap_or_else(|| {
        note_default("mode.index", "1".to_string());
        1
    });
    modes.mode(mode_index).map_err(|e| match e {
        Error::InvalidParameter { reason, .. } => ConfigError::validation("mode.index", reason),
        other => validation(other),
    })?;

    let radius_rule = match (raw.sphere.radius_factor, raw.sphere.radius) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::validation(
                "sphere",
                "set either radius_factor or radius, not both",
            ))
        }
        (Some(f), None) => SphereRadiusRule::WidthFactor(f),
        (None, Some(r)) => SphereRadiusRule::Explicit(r),
        (None, None) => {
            note_default("sphere.radius_factor", "0.5 (R = W/2)".to_string());
            SphereRadiusRule::default()
        }
    };
    radius_rule.resolve(&raw.geometry).map_err(validation)?;

    let q_others = raw
        .model
        .q_others
        .map(|q| {
            Quality::new(q).map_err(|e| ConfigError::validation("model.q_others", e.to_string()))
        })
        .transpose()?;
    let frequency_resolution_factor = raw.model.frequency_resolution_factor.unwrap_or_else(|| {
        note_default("model.frequency_resolution_factor", "1".to_string());
        1.0
    });
    if !(frequency_resolution_factor.is_finite() && frequency_resolution_factor > 0.0) {
        return Err(ConfigError::validation(
            "model.frequency_resolution_factor",
            "must be finite and > 0",
        ));
    }

    let scenario = Scenario {
        geometry: raw.geometry,
        material,
        gas,
        mode_index,
        modes,
        radius_rule,
        q_others,
        frequency_resolution_factor,
    };

    let sweep = raw
        .sweep
        .map(|s| build_sweep(s, &scenario, &mut note_default))
        .transpose()?;
    let optimize = raw
        .optimize
        .map(|o| build_optimize(o, &scenario, &mut note_default))
        .transpose()?;

    let output = OutputPaths {
        dir: raw.output.dir.unwrap_or_else(|| {
            note_default("output.dir", "out".to_string());
            PathBuf::from("out")
        }),
        stem: raw.output.stem.unwrap_or_else(|| {
            note_default("output.stem", default_stem.to_string());
            default_stem.to_string()
        }),
    };

    let provenance = Provenance {
        config_source: source.to_string(),
        material: raw.material.clone(),
        material_source_note: entry.source_note.clone(),
        defaults_applied: defaults,
        model_rules: model_rules(&scenario),
    };

    Ok(RunConfig {
        scenario,
        sweep,
        optimize,
        output,
        provenance,
    })
}

fn build_sweep(
    raw: RawSweep,
    scenario: &Scenario,
    note_default: &mut impl FnMut(&str, String),
) -> ConfigResult<SweepPlan> {
    let values = match (raw.values, raw.range) {
        (Some(v), None) => v,
        (None, Some(r)) => {
            let spacing = r.spacing.unwrap_or_else(|| {
                let s = if raw.axis == SweepAxis::Pressure {
                    Spacing::Log
                } else {
                    Spacing::Linear
                };
                note_default("sweep.range.spacing", format!("{s:?}").to_lowercase());
                s
            });
            expand_range(&r, spacing)?
        }
        _ => {
            return Err(ConfigError::validation(
                "sweep",
                "exactly one of `values` or `range` must be given",
            ))
        }
    };
    let spec = SweepSpec {
        axis: raw.axis,
        values,
        fixed: scenario.clone(),
    };
    spec.validate().map_err(validation)?;
    let series = match raw.series {
        Some(s) => {
            if s.axis == raw.axis {
                return Err(ConfigError::validation(
                    "sweep.series.axis",
                    "must differ from sweep.axis",
                ));
            }
            if s.values.is_empty() {
                return Err(ConfigError::validation(
                    "sweep.series.values",
                    "must not be empty",
                ));
            }
            // every series member must itself be a valid operating point
            for &v in &s.values {
                let probe = SweepSpec {
                    axis: s.axis,
                    values: vec![v],
                    fixed: scenario.clone(),
                };
                probe.validate().map_err(|e| match e {
                    Error::InvalidParameter { reason, .. } => {
                        ConfigError::validation("sweep.series.values", reason)
                    }
                    other => validation(other),
                })?;
                let at = probe.scenario_at(v).map_err(validation)?;
                at.geometry
                    .validate()
                    .map_err(|e| ConfigError::validation("sweep.series.values", e.to_string()))?;
            }
            Some((s.axis, s.values))
        }
        None => None,
    };
    Ok(SweepPlan { spec, series })
}

fn expand_range(r: &RawRange, spacing: Spacing) -> ConfigResult<Vec<f64>> {
    if r.points < 2 {
        return Err(ConfigError::validation(
            "sweep.range.points",
            "must be at least 2",
        ));
    }
    if !(r.start.is_finite() && r.stop.is_finite() && r.stop > r.start) {
        return Err(ConfigError::validation(
            "sweep.range",
            "requires finite start < stop",
        ));
    }
    let n = r.points;
    let values = match spacing {
        Spacing::Linear => (0..n)
            .map(|i| r.start + (r.stop - r.start) * i as f64 / (n - 1) as f64)
            .collect(),
        Spacing::Log => {
            if r.start <= 0.0 {
                return Err(ConfigError::validation(
                    "sweep.range.start",
                    "log spacing requires start > 0",
                ));
            }
            let (a, b) = (r.start.ln(), r.stop.ln());
            let mut v: Vec<f64> = (0..n)
                .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                .collect();
            v[0] = r.start;
            v[n - 1] = r.stop;
            v
        }
    };
    Ok(values)
}

fn build_optimize(
    raw: RawOptimize,
    scenario: &Scenario,
    note_default: &mut impl FnMut(&str, String),
) -> ConfigResult<DesignSpace> {
    let mut space = DesignSpace::new(
        scenario.clone(),
        (raw.length_range[0], raw.length_range[1]),
        (raw.width_range[0], raw.width_range[1]),
        raw.objective,
    );
    space.constraints = raw.constraints;
    match raw.grid {
        Some(g) => space.grid = g,
        None => note_default("optimize.grid", space.grid.to_string()),
    }
    match raw.refinement_stages {
        Some(s) => space.refinement_stages = s,
        None => note_default(
            "optimize.refinement_stages",
            space.refinement_stages.to_string(),
        ),
    }
    if space.grid > 1 {
        space.refinement.initial_step = 1.0 / (space.grid - 1) as f64;
    }
    space.validate().map_err(validation)?;
    Ok(space)
}

fn model_rules(s: &Scenario) -> BTreeMap<String, String> {
    let mut rules = BTreeMap::new();
    rules.insert("sphere_radius".into(), s.radius_rule.describe());
    rules.insert(
        "boundary_layer".into(),
        "delta = sqrt(2 mu / (rho_gas omega)), rho_gas = P M / (R_gas T)".into(),
    );
    rules.insert(
        "ted_relaxation_time".into(),
        "tau = t^2 C_V / (pi^2 kappa)".into(),
    );
    rules.insert(
        "knudsen_thresholds".into(),
        format!(
            "Kn = lambda / W; viscous below {KNUDSEN_VISCOUS_LIMIT}, molecular above {KNUDSEN_MOLECULAR_LIMIT}, log-log interpolation in log(Kn) between"
        ),
    );
    rules.insert(
        "mean_free_path".into(),
        format!(
            "lambda = k_B T / (sqrt(2) pi d^2 P), d = {} m",
            s.gas.molecule_diameter
        ),
    );
    rules.insert(
        "support_constants".into(),
        s.modes
            .constants()
            .iter()
            .map(|(k, v)| format!("{k}: {v}"))
            .collect::<Vec<_>>()
            .join(", "),
    );
    rules.insert(
        "frequency_resolution".into(),
        format!("delta_f_min = {} * f0 / Q", s.frequency_resolution_factor),
    );
    rules
}
