//! Per-channel quality factors: air damping, support loss and thermoelastic loss.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use super::constants::{BOLTZMANN, KNUDSEN_MOLECULAR_LIMIT, KNUDSEN_VISCOUS_LIMIT};
use super::modes::{resonant_frequency, ModeSpec};
use super::types::{GasEnvironment, Geometry, Material, SphereModelParams};
use crate::error::{require_positive, Error, Result};

/// Gas-damping regime selected by the Knudsen number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Viscous,
    Transition,
    Molecular,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Viscous => "viscous",
            Regime::Transition => "transition",
            Regime::Molecular => "molecular",
        }
    }
}

/// Mean free path λ = k_B·T / (√2·π·d²·P) [m]. Infinite at zero pressure.
pub fn mean_free_path(gas: &GasEnvironment) -> f64 {
    let d = gas.molecule_diameter;
    BOLTZMANN * gas.temperature / (SQRT_2 * PI * d * d * gas.pressure)
}

/// Kn = λ / W.
pub fn knudsen_number(geometry: &Geometry, gas: &GasEnvironment) -> f64 {
    mean_free_path(gas) / geometry.width
}

/// Stokes boundary-layer thickness δ = sqrt(2μ / (ρ_gas·ω)) [m].
pub fn boundary_layer_thickness(gas: &GasEnvironment, angular_frequency: f64) -> f64 {
    (2.0 * gas.viscosity / (gas.density() * angular_frequency)).sqrt()
}

/// Oscillating-sphere viscous damping for an explicit boundary-layer thickness.
///
/// Q = (k_n² / 12π√3) · sqrt(ρE) · W·t² / (L·R·(1 + R/δ)·μ)
pub fn viscous_q_with_layer(
    geometry: &Geometry,
    material: &Material,
    viscosity: f64,
    mode: &ModeSpec,
    effective_radius: f64,
    boundary_layer: f64,
) -> f64 {
    let k2 = mode.eigenvalue * mode.eigenvalue;
    let r = effective_radius;
    k2 / (12.0 * PI * 3f64.sqrt())
        * material.stiffness_density_root()
        * geometry.width
        * geometry.thickness
        * geometry.thickness
        / (geometry.length * r * (1.0 + r / boundary_layer) * viscosity)
}

/// Viscous-regime air damping; δ is rebuilt from the mode frequency and gas state.
pub fn q_air_viscous(
    geometry: &Geometry,
    material: &Material,
    gas: &GasEnvironment,
    mode: &ModeSpec,
    sphere: &SphereModelParams,
) -> Result<f64> {
    if gas.pressure == 0.0 {
        return Err(Error::ZeroPressure);
    }
    let omega = 2.0 * PI * resonant_frequency(geometry, material, mode);
    let delta = boundary_layer_thickness(gas, omega);
    Ok(viscous_q_with_layer(
        geometry,
        material,
        gas.viscosity,
        mode,
        sphere.effective_radius,
        delta,
    ))
}

/// Free-molecular air damping.
///
/// Q = sqrt(3π/128) · sqrt(R_gas·T/M) · k_n² · sqrt(ρE) · (t/L)² / P
pub fn q_air_molecular(
    geometry: &Geometry,
    material: &Material,
    gas: &GasEnvironment,
    mode: &ModeSpec,
) -> Result<f64> {
    if gas.pressure == 0.0 {
        return Err(Error::ZeroPressure);
    }
    let k2 = mode.eigenvalue * mode.eigenvalue;
    let thermal_speed = (gas.gas_constant * gas.temperature / gas.molar_mass).sqrt();
    let aspect = geometry.thickness / geometry.length;
    Ok((3.0 * PI / 128.0).sqrt()
        * thermal_speed
        * k2
        * material.stiffness_density_root()
        * aspect
        * aspect
        / gas.pressure)
}

/// Regime-aware air damping.
///
/// Viscous below Kn = 0.01, molecular above Kn = 10, log-log interpolation
/// in log(Kn) between the two. Zero pressure is lossless and molecular.
pub fn q_air(
    geometry: &Geometry,
    material: &Material,
    gas: &GasEnvironment,
    mode: &ModeSpec,
    sphere: &SphereModelParams,
) -> Result<(f64, Regime)> {
    if gas.pressure == 0.0 {
        return Ok((f64::INFINITY, Regime::Molecular));
    }
    let kn = knudsen_number(geometry, gas);
    if kn < KNUDSEN_VISCOUS_LIMIT {
        return Ok((
            q_air_viscous(geometry, material, gas, mode, sphere)?,
            Regime::Viscous,
        ));
    }
    if kn > KNUDSEN_MOLECULAR_LIMIT {
        return Ok((
            q_air_molecular(geometry, material, gas, mode)?,
            Regime::Molecular,
        ));
    }
    let viscous = q_air_viscous(geometry, material, gas, mode, sphere)?;
    let molecular = q_air_molecular(geometry, material, gas, mode)?;
    let s =
        (kn / KNUDSEN_VISCOUS_LIMIT).ln() / (KNUDSEN_MOLECULAR_LIMIT / KNUDSEN_VISCOUS_LIMIT).ln();
    let q = ((1.0 - s) * viscous.ln() + s * molecular.ln()).exp();
    Ok((q, Regime::Transition))
}

/// Clamped-end support loss Q = C · (L/t)³.
pub fn q_support(geometry: &Geometry, mode: &ModeSpec) -> Result<f64> {
    require_positive("mode.support_loss_constant", mode.support_loss_constant)?;
    Ok(mode.support_loss_constant * geometry.slenderness().powi(3))
}

/// Zener relaxation time of the first thermal mode across the thickness,
/// τ = t²·C_V / (π²·κ) [s].
pub fn thermal_relaxation_time(geometry: &Geometry, material: &Material) -> Result<f64> {
    let kappa = material.conductivity()?;
    Ok(
        geometry.thickness * geometry.thickness * material.heat_capacity_volumetric
            / (PI * PI * kappa),
    )
}

/// Thermoelastic damping, Q = (C_V / (E·α²·T₀)) · (1 + (ωτ)²) / (ωτ).
pub fn q_ted(
    geometry: &Geometry,
    material: &Material,
    frequency: f64,
    ambient_temperature: f64,
) -> Result<f64> {
    require_positive("frequency", frequency)?;
    require_positive("ambient_temperature", ambient_temperature)?;
    let tau = thermal_relaxation_time(geometry, material)?;
    let x = 2.0 * PI * frequency * tau;
    let strength =
        material.youngs_modulus * material.thermal_expansion.powi(2) * ambient_temperature
            / material.heat_capacity_volumetric;
    Ok((1.0 + x * x) / (x * strength))
}
