use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::error::{ConfigError, ConfigResult};
use crate::physics::constants::GAS_CONSTANT;
use crate::physics::{GasEnvironment, Material};

/// Environment variable naming an alternative database file.
pub const DATABASE_ENV: &str = "CANTQ_MATERIALS";

const BUILTIN: &str = include_str!("../../data/materials.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialRecord {
    source_note: String,
    youngs_modulus: f64,
    density: f64,
    thermal_expansion: f64,
    heat_capacity_volumetric: f64,
    #[serde(default)]
    thermal_conductivity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasProfile {
    pub source_note: String,
    pub molar_mass: f64,
    pub viscosity: f64,
    pub molecule_diameter: f64,
}

impl GasProfile {
    pub fn environment(&self, pressure: f64, temperature: f64) -> GasEnvironment {
        GasEnvironment {
            pressure,
            temperature,
            viscosity: self.viscosity,
            molar_mass: self.molar_mass,
            molecule_diameter: self.molecule_diameter,
            gas_constant: GAS_CONSTANT,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatabaseFile {
    #[serde(default)]
    materials: BTreeMap<String, MaterialRecord>,
    #[serde(default)]
    gases: BTreeMap<String, GasProfile>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaterialEntry {
    pub material: Material,
    pub source_note: String,
}

/// Named materials and gas profiles, validated on load.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialDatabase {
    pub entries: BTreeMap<String, MaterialEntry>,
    pub gases: BTreeMap<String, GasProfile>,
}

impl MaterialDatabase {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("bundled material database is valid")
    }

    /// The file named by `CANTQ_MATERIALS` if set, the bundled database otherwise.
    pub fn from_env() -> ConfigResult<Self> {
        match std::env::var_os(DATABASE_ENV) {
            Some(path) => Self::load(Path::new(&path)),
            None => Ok(Self::builtin()),
        }
    }

    pub fn load(path: &Path) -> ConfigResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> ConfigResult<Self> {
        let file: DatabaseFile =
            toml::from_str(text).map_err(|e| ConfigError::from_toml(&e, text))?;
        let mut entries = BTreeMap::new();
        for (name, r) in file.materials {
            let material = Material {
                name: name.clone(),
                youngs_modulus: r.youngs_modulus,
                density: r.density,
                thermal_expansion: r.thermal_expansion,
                heat_capacity_volumetric: r.heat_capacity_volumetric,
                thermal_conductivity: r.thermal_conductivity,
            };
            material
                .validate()
                .map_err(|e| ConfigError::validation(format!("materials.{name}"), e.to_string()))?;
            entries.insert(
                name,
                MaterialEntry {
                    material,
                    source_note: r.source_note,
                },
            );
        }
        for (name, g) in &file.gases {
            g.environment(101_325.0, 300.0)
                .validate()
                .map_err(|e| ConfigError::validation(format!("gases.{name}"), e.to_string()))?;
        }
        Ok(MaterialDatabase {
            entries,
            gases: file.gases,
        })
    }

    pub fn material(&self, name: &str) -> ConfigResult<&Material> {
        self.entries.get(name).map(|e| &e.material).ok_or_else(|| {
            ConfigError::validation(
                "material",
                format!(
                    "unknown material `{name}` (known: {})",
                    self.entries.keys().cloned().collect::<Vec<_>>().join(", ")
                ),
            )
        })
    }

    pub fn gas(&self, name: &str) -> ConfigResult<&GasProfile> {
        self.gases.get(name).ok_or_else(|| {
            ConfigError::validation(
                "gas.profile",
                format!(
                    "unknown gas profile `{name}` (known: {})",
                    self.gases.keys().cloned().collect::<Vec<_>>().join(", ")
                ),
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_database_has_silicon_and_air() {
        let db = MaterialDatabase::builtin();
        let si = db.material("silicon").unwrap();
        assert_eq!(si.youngs_modulus, 169e9);
        assert_eq!(si.density, 2330.0);
        assert_eq!(db.gas("air").unwrap().molar_mass, 0.028964);
        assert!(db.material("unobtainium").is_err());
    }

    #[test]
    fn invalid_entry_is_rejected_on_load() {
        let text = r#"
[materials.bad]
source_note = "x"
youngs_modulus = -1.0
density = 1.0
thermal_expansion = 1.0
heat_capacity_volumetric = 1.0
"#;
        let err = MaterialDatabase::parse(text).unwrap_err();
        assert!(err.to_string().contains("materials.bad"), "{err}");
    }

    #[test]
    fn unknown_database_keys_are_errors() {
        let text = "[materials.x]\nsource_note = \"\"\nyoungs_modulus = 1.0\ndensity = 1.0\nthermal_expansion = 1.0\nheat_capacity_volumetric = 1.0\npoisson = 0.3\n";
        assert!(matches!(
            MaterialDatabase::parse(text),
            Err(ConfigError::Parse { .. })
        ));
    }
}
