use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::physics::constants::FUNDAMENTAL_SUPPORT_CONSTANT;
use crate::physics::{
    GasEnvironment, Geometry, Material, ModeSpec, OperatingPoint, QBudget, Quality,
    SphereRadiusRule,
};

/// Support-loss constants keyed by mode index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeTable(BTreeMap<u32, f64>);

impl Default for ModeTable {
    /// Only the fundamental constant is known a priori; higher modes must be supplied.
    fn default() -> Self {
        ModeTable(BTreeMap::from([(1, FUNDAMENTAL_SUPPORT_CONSTANT)]))
    }
}

impl ModeTable {
    pub fn new(constants: BTreeMap<u32, f64>) -> Result<Self> {
        for (&index, &c) in &constants {
            ModeSpec::new(index, c)?;
        }
        Ok(ModeTable(constants))
    }

    pub fn insert(&mut self, index: u32, constant: f64) -> Result<()> {
        ModeSpec::new(index, constant)?;
        self.0.insert(index, constant);
        Ok(())
    }

    pub fn mode(&self, index: u32) -> Result<ModeSpec> {
        let c = self
            .0
            .get(&index)
            .copied()
            .ok_or(Error::MissingModeConstant { mode: index })?;
        ModeSpec::new(index, c)
    }

    pub fn constants(&self) -> &BTreeMap<u32, f64> {
        &self.0
    }
}

/// A complete operating-point template whose geometry, pressure or mode
/// can be varied by sweeps and the optimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub geometry: Geometry,
    pub material: Material,
    pub gas: GasEnvironment,
    pub mode_index: u32,
    pub modes: ModeTable,
    pub radius_rule: SphereRadiusRule,
    pub q_others: Option<Quality>,
    pub frequency_resolution_factor: f64,
}

impl Scenario {
    pub fn new(geometry: Geometry, material: Material, gas: GasEnvironment) -> Self {
        Scenario {
            geometry,
            material,
            gas,
            mode_index: 1,
            modes: ModeTable::default(),
            radius_rule: SphereRadiusRule::default(),
            q_others: None,
            frequency_resolution_factor: 1.0,
        }
    }

    pub fn point(&self) -> Result<OperatingPoint> {
        self.geometry.validate()?;
        Ok(OperatingPoint {
            geometry: self.geometry,
            material: self.material.clone(),
            gas: self.gas,
            mode: self.modes.mode(self.mode_index)?,
            sphere: self.radius_rule.resolve(&self.geometry)?,
            q_others: self.q_others,
            frequency_resolution_factor: self.frequency_resolution_factor,
        })
    }

    pub fn evaluate(&self) -> Result<QBudget> {
        self.point()?.evaluate()
    }

    pub fn with_geometry(&self, geometry: Geometry) -> Self {
        Scenario {
            geometry,
            ..self.clone()
        }
    }
}
