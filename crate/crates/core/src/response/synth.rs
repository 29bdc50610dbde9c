use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::sweep::{FrequencySweep, SweepPoint};
use crate::error::{require_positive, Error, Result};

/// Driven damped oscillator amplitude |H(f)| = A / sqrt((1 − r²)² + (r/Q)²), r = f/f0.
pub fn oscillator_amplitude(frequency: f64, f0: f64, q: f64, amplitude: f64) -> f64 {
    let r = frequency / f0;
    let d = (1.0 - r * r).powi(2) + (r / q).powi(2);
    amplitude / d.sqrt()
}

/// Evenly spaced grid of `points` frequencies spanning `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        n => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Grid centred on `f0` covering ± `half_widths` linewidths (f0/Q each).
pub fn resonance_grid(f0: f64, q: f64, half_widths: f64, points: usize) -> Vec<f64> {
    let span = half_widths * f0 / q;
    linear_grid(f0 - span, f0 + span, points)
}

/// Synthetic peak: oscillator response plus baseline plus seeded Gaussian noise.
///
/// Noisy samples are clipped at zero to keep amplitudes physical. The same
/// seed always reproduces the same sweep.
pub fn synthesize_peak(
    f0: f64,
    q: f64,
    amplitude: f64,
    baseline: f64,
    grid: &[f64],
    noise_rms: f64,
    seed: u64,
) -> Result<FrequencySweep> {
    require_positive("f0", f0)?;
    require_positive("q", q)?;
    require_positive("amplitude", amplitude)?;
    if grid.is_empty() {
        return Err(Error::invalid(
            "grid",
            "must contain at least one frequency",
        ));
    }
    if !(noise_rms.is_finite() && noise_rms >= 0.0) {
        return Err(Error::invalid("noise_rms", "must be finite and >= 0"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise =
        Normal::new(0.0, noise_rms).map_err(|e| Error::invalid("noise_rms", e.to_string()))?;
    let points = grid
        .iter()
        .map(|&frequency| {
            let clean = oscillator_amplitude(frequency, f0, q, amplitude) + baseline;
            let jitter = if noise_rms > 0.0 {
                noise.sample(&mut rng)
            } else {
                0.0
            };
            SweepPoint {
                frequency,
                amplitude: (clean + jitter).max(0.0),
            }
        })
        .collect();
    Ok(FrequencySweep::new(points)?
        .with_metadata("synthetic_f0_hz", f0)
        .with_metadata("synthetic_q", q)
        .with_metadata("noise_rms", noise_rms)
        .with_metadata("seed", seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resonance_amplification_equals_q() {
        let sweep = synthesize_peak(1e5, 500.0, 2.0, 0.1, &[1e5], 0.0, 0).unwrap();
        let a = sweep.points()[0].amplitude;
        assert!((a - (2.0 * 500.0 + 0.1)).abs() < 1e-9);
    }

    #[test]
    fn static_limit_is_amplitude_plus_baseline() {
        let sweep = synthesize_peak(1e5, 500.0, 2.0, 0.1, &[1e-3], 0.0, 0).unwrap();
        assert!((sweep.points()[0].amplitude - 2.1).abs() < 1e-12);
    }

    #[test]
    fn fixed_seed_is_bit_reproducible() {
        let grid = resonance_grid(6.88e5, 7279.0, 4.0, 64);
        let a = synthesize_peak(6.88e5, 7279.0, 1.0, 0.0, &grid, 10.0, 42).unwrap();
        let b = synthesize_peak(6.88e5, 7279.0, 1.0, 0.0, &grid, 10.0, 42).unwrap();
        let c = synthesize_peak(6.88e5, 7279.0, 1.0, 0.0, &grid, 10.0, 43).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_ne!(a.to_csv(), c.to_csv());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(synthesize_peak(0.0, 1.0, 1.0, 0.0, &[1.0], 0.0, 0).is_err());
        assert!(synthesize_peak(1.0, 1.0, 1.0, 0.0, &[], 0.0, 0).is_err());
        assert!(synthesize_peak(1.0, 1.0, 1.0, 0.0, &[1.0], -1.0, 0).is_err());
    }
}
