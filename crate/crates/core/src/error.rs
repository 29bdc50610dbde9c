use thiserror::Error;

use crate::response::PeakFit;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures raised by the model, fitting and exploration layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {field}: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("viscous and molecular air-damping models are undefined at zero pressure")]
    ZeroPressure,

    #[error(
        "material `{material}` has no thermal conductivity; thermoelastic loss cannot be evaluated"
    )]
    MissingThermalData { material: String },

    #[error("composite Q requires at least one channel")]
    EmptyChannelList,

    #[error("mode {mode} has no interior node points")]
    NoInteriorNodes { mode: u32 },

    #[error("no support-loss constant configured for mode {mode}")]
    MissingModeConstant { mode: u32 },

    #[error("frequency sweep has {points} points, at least {required} are required")]
    InsufficientData { points: usize, required: usize },

    #[error("frequency sweep is malformed: {0}")]
    MalformedSweep(String),

    #[error("response maximum lies on the sweep boundary")]
    NoPeak,

    #[error("half-power crossing falls outside the swept band")]
    BandwidthUnresolved,

    #[error("least-squares fit did not converge after {iterations} iterations")]
    NonConvergence {
        iterations: usize,
        best: Box<PeakFit>,
    },

    #[error("no feasible design point found on the {grid}x{grid} scan grid")]
    InfeasibleSpace { grid: usize },
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub(crate) fn require_positive(field: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            field,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}
