use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Result};
use crate::physics::{q_total, Channel, Quality};

/// Loss not explained by the modeled channels: 1/Q_others = 1/Q_measured − Σ 1/Q_i.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualQ {
    pub q_others: Quality,
    /// Composite of the modeled channels alone.
    pub q_modeled: Quality,
    /// `false` when the model already predicts as much loss as was measured
    /// (or more); `q_others` is then the lossless sentinel.
    pub consistent: bool,
}

impl ResidualQ {
    /// Share of the measured dissipation attributed to the residual channel,
    /// Q_measured / Q_others.
    pub fn share(&self, measured_q: f64) -> f64 {
        measured_q * self.q_others.dissipation()
    }
}

pub fn extract_residual_q(measured_q: f64, modeled: &[Channel]) -> Result<ResidualQ> {
    require_positive("measured_q", measured_q)?;
    let q_modeled = if modeled.is_empty() {
        Quality::LOSSLESS
    } else {
        q_total(modeled)?
    };
    let residual = 1.0 / measured_q - q_modeled.dissipation();
    Ok(ResidualQ {
        q_others: Quality::from_dissipation(residual),
        q_modeled,
        consistent: residual > 0.0,
    })
}
