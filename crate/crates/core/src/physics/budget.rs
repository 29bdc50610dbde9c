//! Composite quality factor and per-point loss budgets.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::dissipation::{q_air, q_support, q_ted, Regime};
use super::modes::{resonant_frequency, ModeSpec};
use super::sensitivity::{beam_mass, mass_sensitivity};
use super::types::{GasEnvironment, Geometry, Material, SphereModelParams};
use crate::error::{Error, Result};

/// A positive quality factor, or the lossless sentinel (+∞).
///
/// Serialized as a plain number, or as the string `"lossless"`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Quality(f64);

impl Quality {
    pub const LOSSLESS: Quality = Quality(f64::INFINITY);

    pub fn new(q: f64) -> Result<Self> {
        if q > 0.0 && !q.is_nan() {
            Ok(Quality(q))
        } else {
            Err(Error::invalid(
                "q",
                format!("must be > 0 or lossless, got {q}"),
            ))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_lossless(self) -> bool {
        self.0.is_infinite()
    }

    /// 1/Q; zero for the lossless sentinel.
    pub fn dissipation(self) -> f64 {
        if self.is_lossless() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    pub fn from_dissipation(loss: f64) -> Self {
        if loss <= 0.0 {
            Quality::LOSSLESS
        } else {
            Quality(1.0 / loss)
        }
    }
}

impl fmt::Display for Quality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_lossless() {
            f.write_str("lossless")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for Quality {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_lossless() {
            s.serialize_str("lossless")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Quality {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct QualityVisitor;

        impl Visitor<'_> for QualityVisitor {
            type Value = Quality;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a positive number or \"lossless\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Quality, E> {
                Quality::new(v).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Quality, E> {
                self.visit_f64(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Quality, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Quality, E> {
                match v {
                    "lossless" | "inf" => Ok(Quality::LOSSLESS),
                    other => Err(E::custom(format!("unexpected Q value `{other}`"))),
                }
            }
        }

        d.deserialize_any(QualityVisitor)
    }
}

/// A labelled loss channel.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    pub label: String,
    pub q: Quality,
}

impl Channel {
    pub fn new(label: impl Into<String>, q: Quality) -> Self {
        Channel {
            label: label.into(),
            q,
        }
    }
}

/// Harmonic sum 1/Q = Σ 1/Q_i; lossless channels contribute nothing.
pub fn q_total(channels: &[Channel]) -> Result<Quality> {
    if channels.is_empty() {
        return Err(Error::EmptyChannelList);
    }
    let loss: f64 = channels.iter().map(|c| c.q.dissipation()).sum();
    Ok(Quality::from_dissipation(loss))
}

/// Full loss budget of one operating point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QBudget {
    pub q_air: Quality,
    pub q_support: Quality,
    pub q_ted: Quality,
    pub q_others: Option<Quality>,
    pub q_total: Quality,
    pub regime: Regime,
    /// [Hz]
    pub resonant_frequency: f64,
    /// Beam mass ρ·L·W·t [kg].
    pub mass: f64,
    /// Minimum detectable mass at the configured resolution factor [kg].
    pub min_detectable_mass: f64,
    pub warnings: Vec<String>,
}

impl QBudget {
    pub fn channels(&self) -> Vec<Channel> {
        let mut out = vec![
            Channel::new("air", self.q_air),
            Channel::new("support", self.q_support),
            Channel::new("ted", self.q_ted),
        ];
        if let Some(q) = self.q_others {
            out.push(Channel::new("others", q));
        }
        out
    }

    /// Fraction of the total dissipation carried by a channel (Q_total / Q_i).
    pub fn share(&self, q: Quality) -> f64 {
        q.dissipation() * self.q_total.value()
    }
}

/// Everything needed to evaluate one point of the model.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatingPoint {
    pub geometry: Geometry,
    pub material: Material,
    pub gas: GasEnvironment,
    pub mode: ModeSpec,
    pub sphere: SphereModelParams,
    /// Additional residual channel (coating, surface loss), if known.
    pub q_others: Option<Quality>,
    pub frequency_resolution_factor: f64,
}

impl OperatingPoint {
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.material.validate()?;
        self.gas.validate()?;
        crate::error::require_positive(
            "frequency_resolution_factor",
            self.frequency_resolution_factor,
        )
    }

    pub fn evaluate(&self) -> Result<QBudget> {
        self.validate()?;
        let g = &self.geometry;
        let m = &self.material;
        let frequency = resonant_frequency(g, m, &self.mode);
        let (air, regime) = q_air(g, m, &self.gas, &self.mode, &self.sphere)?;
        let q_air = Quality::new(air)?;
        let q_support = Quality::new(q_support(g, &self.mode)?)?;
        let q_ted = Quality::new(q_ted(g, m, frequency, self.gas.temperature)?)?;

        let mut channels = vec![
            Channel::new("air", q_air),
            Channel::new("support", q_support),
            Channel::new("ted", q_ted),
        ];
        if let Some(q) = self.q_others {
            channels.push(Channel::new("others", q));
        }
        let total = q_total(&channels)?;

        let mass = beam_mass(g, m);
        let min_detectable_mass = if total.is_lossless() {
            0.0
        } else {
            mass_sensitivity(
                mass,
                frequency,
                total.value(),
                self.frequency_resolution_factor,
            )?
        };

        let mut warnings = Vec::new();
        if !g.is_slender() {
            warnings.push(format!(
                "length/thickness = {:.3} is below 2; slender-beam models are outside their validity range",
                g.slenderness()
            ));
        }

        Ok(QBudget {
            q_air,
            q_support,
            q_ted,
            q_others: self.q_others,
            q_total: total,
            regime,
            resonant_frequency: frequency,
            mass,
            min_detectable_mass,
            warnings,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: f64) -> Quality {
        Quality::new(v).unwrap()
    }

    #[test]
    fn equal_pair_halves() {
        let total = q_total(&[Channel::new("a", q(2000.0)), Channel::new("b", q(2000.0))]).unwrap();
        assert_eq!(total.value(), 1000.0);
    }

    #[test]
    fn lossless_channels_are_identity() {
        let channels = [
            Channel::new("a", q(1234.5)),
            Channel::new("b", Quality::LOSSLESS),
            Channel::new("c", Quality::LOSSLESS),
        ];
        assert_eq!(q_total(&channels).unwrap().value(), 1234.5);
        let all = [Channel::new("x", Quality::LOSSLESS)];
        assert!(q_total(&all).unwrap().is_lossless());
    }

    #[test]
    fn empty_channel_list_rejected() {
        assert_eq!(q_total(&[]), Err(Error::EmptyChannelList));
    }

    #[test]
    fn quality_rejects_non_positive() {
        assert!(Quality::new(0.0).is_err());
        assert!(Quality::new(-3.0).is_err());
        assert!(Quality::new(f64::NAN).is_err());
        assert!(Quality::new(f64::INFINITY).unwrap().is_lossless());
    }

    #[test]
    fn quality_json_forms() {
        assert_eq!(serde_json::to_string(&q(12.5)).unwrap(), "12.5");
        assert_eq!(
            serde_json::to_string(&Quality::LOSSLESS).unwrap(),
            "\"lossless\""
        );
        let back: Quality = serde_json::from_str("\"lossless\"").unwrap();
        assert!(back.is_lossless());
        let back: Quality = serde_json::from_str("7279").unwrap();
        assert_eq!(back.value(), 7279.0);
        assert!(serde_json::from_str::<Quality>("-1").is_err());
    }
}
