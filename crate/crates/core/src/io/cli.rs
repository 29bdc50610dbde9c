//! `cantq` command line. Exit codes: 0 success, 1 usage or validation
//! error, 2 computation error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use super::config::load_config;
use super::error::ConfigError;
use super::materials::MaterialDatabase;
use super::output::{emit_optimize, emit_sweep, to_pretty_json, EmitError};
use crate::physics::{mode_shape_nodes, ModeSpec};
use crate::response::{fit_half_power_above, fit_lorentzian, FrequencySweep};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_COMPUTATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cantq",
    version,
    about = "Quality-factor models for resonant microcantilever mass sensors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    HalfPower,
    Lorentzian,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the loss budget of the configured operating point as JSON.
    Point {
        #[arg(short, long)]
        config: PathBuf,
    },
    /// Run the configured sweep and write CSV/JSON tables.
    Sweep {
        #[arg(short, long)]
        config: PathBuf,
        /// Overrides `output.dir` from the config.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run the configured geometry optimization and write the optimum and trace.
    Optimize {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Fit a resonance peak in a two-column sweep CSV and print the fit as JSON.
    Fit {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Lorentzian)]
        method: MethodArg,
        /// Known additive baseline for the half-power estimate.
        #[arg(long, default_value_t = 0.0)]
        baseline: f64,
    },
    /// Print node positions (x/L) of a flexural mode.
    Nodes {
        #[arg(short, long)]
        mode: u32,
    },
    /// List the material database.
    Materials,
}

enum Failure {
    Validation(String),
    Computation(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<EmitError> for Failure {
    fn from(e: EmitError) -> Self {
        match e {
            EmitError::Invalid(e) => Failure::Validation(e.to_string()),
            EmitError::Write(e) => Failure::Computation(e.to_string()),
            EmitError::Model(e) => Failure::Computation(e.to_string()),
        }
    }
}

fn computation(e: crate::Error) -> Failure {
    Failure::Computation(e.to_string())
}

/// Runs the CLI against explicit streams and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{rendered}");
                    EXIT_VALIDATION
                }
            };
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::Validation(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_VALIDATION
        }
        Err(Failure::Computation(msg)) => {
            let _ = writeln!(stderr, "computation failed: {msg}");
            EXIT_COMPUTATION
        }
    }
}

#[derive(Serialize)]
struct NodesRecord {
    mode: u32,
    eigenvalue: f64,
    nodes: Vec<f64>,
}

#[derive(Serialize)]
struct MaterialListing<'a> {
    materials: Vec<MaterialRow<'a>>,
    gases: &'a std::collections::BTreeMap<String, super::materials::GasProfile>,
}

#[derive(Serialize)]
struct MaterialRow<'a> {
    name: &'a str,
    #[serde(flatten)]
    entry: &'a super::materials::MaterialEntry,
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    let emit = |out: &mut dyn Write, text: &str| {
        out.write_all(text.as_bytes())
            .map_err(|e| Failure::Computation(format!("writing to stdout: {e}")))
    };
    match command {
        Command::Point { config } => {
            let db = MaterialDatabase::from_env()?;
            let cfg = load_config(&config, &db)?;
            let budget = cfg.scenario.evaluate().map_err(computation)?;
            emit(stdout, &to_pretty_json(&budget))
        }
        Command::Sweep { config, out_dir } => {
            let db = MaterialDatabase::from_env()?;
            let cfg = load_config(&config, &db)?;
            let plan = cfg
                .sweep
                .as_ref()
                .ok_or_else(|| Failure::Validation("config has no [sweep] stanza".into()))?;
            let dir = out_dir.unwrap_or_else(|| cfg.output.dir.clone());
            let written = emit_sweep(&cfg, plan, &dir)?;
            for path in written {
                emit(stdout, &format!("{}\n", path.display()))?;
            }
            Ok(())
        }
        Command::Optimize { config, out_dir } => {
            let db = MaterialDatabase::from_env()?;
            let cfg = load_config(&config, &db)?;
            let dir = out_dir.unwrap_or_else(|| cfg.output.dir.clone());
            let (_, written) = emit_optimize(&cfg, &dir)?;
            for path in written {
                emit(stdout, &format!("{}\n", path.display()))?;
            }
            Ok(())
        }
        Command::Fit {
            input,
            method,
            baseline,
        } => {
            let text = std::fs::read_to_string(&input).map_err(|e| {
                Failure::Validation(format!("cannot read {}: {e}", input.display()))
            })?;
            let sweep =
                FrequencySweep::from_csv(&text).map_err(|e| Failure::Validation(e.to_string()))?;
            let initial = fit_half_power_above(&sweep, baseline).map_err(computation)?;
            let fit = match method {
                MethodArg::HalfPower => initial,
                MethodArg::Lorentzian => fit_lorentzian(&sweep, &initial).map_err(computation)?,
            };
            emit(stdout, &to_pretty_json(&fit))
        }
        Command::Nodes { mode } => {
            if mode == 0 {
                return Err(Failure::Validation("mode index starts at 1".into()));
            }
            // node positions do not depend on the support constant
            let spec = ModeSpec::new(mode, 1.0).map_err(|e| Failure::Validation(e.to_string()))?;
            let nodes = match mode_shape_nodes(&spec) {
                Ok(n) => n,
                Err(crate::Error::NoInteriorNodes { .. }) => Vec::new(),
                Err(e) => return Err(computation(e)),
            };
            emit(
                stdout,
                &to_pretty_json(&NodesRecord {
                    mode,
                    eigenvalue: spec.eigenvalue,
                    nodes,
                }),
            )
        }
        Command::Materials => {
            let db = MaterialDatabase::from_env()?;
            let listing = MaterialListing {
                materials: db
                    .entries
                    .iter()
                    .map(|(name, entry)| MaterialRow { name, entry })
                    .collect(),
                gases: &db.gases,
            };
            emit(stdout, &to_pretty_json(&listing))
        }
    }
}
