//! Mass responsivity of a resonant cantilever.

use super::types::{Geometry, Material};
use crate::error::{require_positive, Result};

/// ρ·L·W·t [kg].
pub fn beam_mass(geometry: &Geometry, material: &Material) -> f64 {
    material.density * geometry.volume()
}

/// Minimum detectable mass Δm = 2·m0·Δf_min/f0, with Δf_min = factor·f0/Q.
///
/// The resolution factor turns the proportionality into a number; 1 means
/// the resolvable shift equals one resonance linewidth.
pub fn mass_sensitivity(m0: f64, f0: f64, q: f64, frequency_resolution_factor: f64) -> Result<f64> {
    require_positive("m0", m0)?;
    require_positive("f0", f0)?;
    require_positive("q", q)?;
    require_positive("frequency_resolution_factor", frequency_resolution_factor)?;
    let min_shift = frequency_resolution_factor * f0 / q;
    Ok(2.0 * m0 * min_shift / f0)
}
