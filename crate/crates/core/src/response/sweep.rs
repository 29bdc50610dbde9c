use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Minimum number of points accepted by the peak fitters.
pub const MIN_FIT_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub frequency: f64,
    pub amplitude: f64,
}

/// Amplitude response sampled on a strictly increasing frequency grid.
///
/// `metadata` is a free-form operating-point descriptor (geometry id,
/// pressure, mode ...) that round-trips through the `#`-prefixed CSV header.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FrequencySweep {
    points: Vec<SweepPoint>,
    pub metadata: BTreeMap<String, String>,
}

impl FrequencySweep {
    pub fn new(points: Vec<SweepPoint>) -> Result<Self> {
        validate_points(&points)?;
        Ok(FrequencySweep {
            points,
            metadata: BTreeMap::new(),
        })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .map(|(frequency, amplitude)| SweepPoint {
                    frequency,
                    amplitude,
                })
                .collect(),
        )
    }

    pub fn with_metadata(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.insert(key.into(), value.to_string());
        self
    }

    pub fn points(&self) -> &[SweepPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.frequency)
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.amplitude)
    }

    pub fn frequency_range(&self) -> Option<(f64, f64)> {
        Some((
            self.points.first()?.frequency,
            self.points.last()?.frequency,
        ))
    }

    pub(crate) fn require_fit_points(&self) -> Result<()> {
        if self.points.len() < MIN_FIT_POINTS {
            return Err(Error::InsufficientData {
                points: self.points.len(),
                required: MIN_FIT_POINTS,
            });
        }
        Ok(())
    }

    /// Two-column CSV (`frequency_hz,amplitude`) preceded by `# key: value` lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        out.push_str("frequency_hz,amplitude\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{}", p.frequency, p.amplitude);
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut metadata = BTreeMap::new();
        let mut points = Vec::new();
        let mut saw_header = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                if let Some((k, v)) = meta.split_once(':') {
                    metadata.insert(k.trim().to_string(), v.trim().to_string());
                }
                continue;
            }
            if !saw_header && line.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
                saw_header = true;
                continue;
            }
            let mut cols = line.split(',');
            let (Some(f), Some(a), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(Error::MalformedSweep(format!(
                    "line {}: expected two columns",
                    lineno + 1
                )));
            };
            let parse = |s: &str| {
                s.trim().parse::<f64>().map_err(|e| {
                    Error::MalformedSweep(format!("line {}: `{}`: {e}", lineno + 1, s.trim()))
                })
            };
            points.push(SweepPoint {
                frequency: parse(f)?,
                amplitude: parse(a)?,
            });
        }
        let mut sweep = FrequencySweep::new(points)?;
        sweep.metadata = metadata;
        Ok(sweep)
    }
}

fn validate_points(points: &[SweepPoint]) -> Result<()> {
    for (i, p) in points.iter().enumerate() {
        if !(p.frequency.is_finite() && p.frequency >= 0.0) {
            return Err(Error::MalformedSweep(format!(
                "point {i}: frequency {} is not a finite non-negative value",
                p.frequency
            )));
        }
        if !(p.amplitude.is_finite() && p.amplitude >= 0.0) {
            return Err(Error::MalformedSweep(format!(
                "point {i}: amplitude {} must be finite and >= 0",
                p.amplitude
            )));
        }
    }
    if let Some(i) = points
        .windows(2)
        .position(|w| w[1].frequency <= w[0].frequency)
    {
        return Err(Error::MalformedSweep(format!(
            "frequencies must be strictly increasing (points {i} and {})",
            i + 1
        )));
    }
    Ok(())
}
