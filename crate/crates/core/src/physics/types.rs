//! Domain types describing a cantilever operating point.

use serde::{Deserialize, Serialize};

use super::constants::{AIR_MOLAR_MASS, AIR_MOLECULE_DIAMETER, GAS_CONSTANT};
use crate::error::{require_positive, Error, Result};

/// Elastic, thermal and inertial properties of the beam material.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Material {
    pub name: String,
    /// Young's modulus [Pa].
    pub youngs_modulus: f64,
    /// Mass density [kg/m³].
    pub density: f64,
    /// Linear thermal expansion coefficient [1/K].
    pub thermal_expansion: f64,
    /// Heat capacity per unit volume [J/(m³·K)].
    pub heat_capacity_volumetric: f64,
    /// Thermal conductivity [W/(m·K)]. Required for thermoelastic loss.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thermal_conductivity: Option<f64>,
}

impl Material {
    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::invalid("material.name", "must not be empty"));
        }
        require_positive("material.youngs_modulus", self.youngs_modulus)?;
        require_positive("material.density", self.density)?;
        require_positive("material.thermal_expansion", self.thermal_expansion)?;
        require_positive(
            "material.heat_capacity_volumetric",
            self.heat_capacity_volumetric,
        )?;
        if let Some(k) = self.thermal_conductivity {
            require_positive("material.thermal_conductivity", k)?;
        }
        Ok(())
    }

    pub(crate) fn conductivity(&self) -> Result<f64> {
        self.thermal_conductivity
            .ok_or_else(|| Error::MissingThermalData {
                material: self.name.clone(),
            })
    }

    /// Acoustic impedance-like group `sqrt(ρ·E)` shared by both air-damping models.
    pub fn stiffness_density_root(&self) -> f64 {
        (self.density * self.youngs_modulus).sqrt()
    }
}

/// Rectangular cantilever dimensions [m].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    pub length: f64,
    pub width: f64,
    pub thickness: f64,
}

/// Below this length/thickness ratio the slender-beam models lose validity.
pub const MIN_SLENDERNESS: f64 = 2.0;

impl Geometry {
    pub fn new(length: f64, width: f64, thickness: f64) -> Result<Self> {
        let g = Geometry {
            length,
            width,
            thickness,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("geometry.length", self.length)?;
        require_positive("geometry.width", self.width)?;
        require_positive("geometry.thickness", self.thickness)?;
        if self.thickness > self.width {
            return Err(Error::invalid(
                "geometry.thickness",
                format!("thickness {} exceeds width {}", self.thickness, self.width),
            ));
        }
        if self.width > self.length {
            return Err(Error::invalid(
                "geometry.width",
                format!("width {} exceeds length {}", self.width, self.length),
            ));
        }
        Ok(())
    }

    pub fn slenderness(&self) -> f64 {
        self.length / self.thickness
    }

    /// `false` when L/t < 2; evaluation still proceeds but the result is flagged.
    pub fn is_slender(&self) -> bool {
        self.slenderness() >= MIN_SLENDERNESS
    }

    pub fn volume(&self) -> f64 {
        self.length * self.width * self.thickness
    }

    pub fn footprint(&self) -> f64 {
        self.length * self.width
    }
}

/// State of the gas surrounding the resonator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasEnvironment {
    /// [Pa]
    pub pressure: f64,
    /// [K]; also the equilibrium temperature of the beam.
    pub temperature: f64,
    /// Dynamic viscosity [Pa·s].
    pub viscosity: f64,
    /// [kg/mol]
    pub molar_mass: f64,
    /// Kinetic molecule diameter for the mean free path [m].
    pub molecule_diameter: f64,
    /// [J/(mol·K)]
    pub gas_constant: f64,
}

impl GasEnvironment {
    /// Dry air at the given pressure and temperature, viscosity 1.81e-5 Pa·s.
    pub fn air(pressure: f64, temperature: f64) -> Self {
        GasEnvironment {
            pressure,
            temperature,
            viscosity: 1.81e-5,
            molar_mass: AIR_MOLAR_MASS,
            molecule_diameter: AIR_MOLECULE_DIAMETER,
            gas_constant: GAS_CONSTANT,
        }
    }

    pub fn with_pressure(mut self, pressure: f64) -> Self {
        self.pressure = pressure;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.pressure.is_finite() && self.pressure >= 0.0) {
            return Err(Error::invalid(
                "gas.pressure",
                format!("must be finite and >= 0, got {}", self.pressure),
            ));
        }
        require_positive("gas.temperature", self.temperature)?;
        require_positive("gas.viscosity", self.viscosity)?;
        require_positive("gas.molar_mass", self.molar_mass)?;
        require_positive("gas.molecule_diameter", self.molecule_diameter)?;
        require_positive("gas.gas_constant", self.gas_constant)?;
        Ok(())
    }

    /// Ideal-gas mass density [kg/m³].
    pub fn density(&self) -> f64 {
        self.pressure * self.molar_mass / (self.gas_constant * self.temperature)
    }
}

/// Calibration of the oscillating-sphere air-damping model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereModelParams {
    /// Effective sphere radius R [m].
    pub effective_radius: f64,
}

impl SphereModelParams {
    pub fn new(effective_radius: f64) -> Result<Self> {
        require_positive("sphere.effective_radius", effective_radius)?;
        Ok(SphereModelParams { effective_radius })
    }
}

/// How the effective sphere radius is derived for a given geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphereRadiusRule {
    /// R = factor · W.
    WidthFactor(f64),
    /// Fixed R [m], independent of geometry.
    Explicit(f64),
}

impl Default for SphereRadiusRule {
    fn default() -> Self {
        SphereRadiusRule::WidthFactor(0.5)
    }
}

impl SphereRadiusRule {
    pub fn resolve(&self, geometry: &Geometry) -> Result<SphereModelParams> {
        match *self {
            SphereRadiusRule::WidthFactor(f) => {
                require_positive("sphere.radius_factor", f)?;
                SphereModelParams::new(f * geometry.width)
            }
            SphereRadiusRule::Explicit(r) => SphereModelParams::new(r),
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            SphereRadiusRule::WidthFactor(f) => format!("R = {f} * W"),
            SphereRadiusRule::Explicit(r) => format!("R = {r} m"),
        }
    }
}
