//! Q extraction from a sampled resonance: half-power bandwidth and a
//! Levenberg–Marquardt least-squares refinement of the oscillator model.

use std::f64::consts::SQRT_2;

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use super::sweep::FrequencySweep;
use super::synth::oscillator_amplitude;
use crate::error::{require_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    HalfPower,
    LorentzianLs,
}

/// Estimated resonance parameters.
///
/// For the least-squares method `amplitude_peak` is the model's static gain A
/// (the response at f0 is A·Q); for half-power it is the interpolated peak
/// height above the baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakFit {
    pub f0: f64,
    pub q: f64,
    pub amplitude_peak: f64,
    pub baseline: f64,
    pub residual_rms: f64,
    pub method: FitMethod,
}

/// Half-power (−3 dB) estimate with the baseline taken as zero.
pub fn fit_half_power(sweep: &FrequencySweep) -> Result<PeakFit> {
    fit_half_power_above(sweep, 0.0)
}

/// Half-power estimate after subtracting a known baseline.
///
/// Near resonance the inverse power z = 1/y² of an oscillator is a parabola
/// in frequency, so the samples above half the maximum are fitted with a
/// weighted quadratic in z: its vertex gives f0 and the peak, and the
/// half-power points lie where z doubles. Sweeps with too few samples in that
/// window fall back to a three-point vertex and linearly interpolated
/// crossings of peak/√2.
pub fn fit_half_power_above(sweep: &FrequencySweep, baseline: f64) -> Result<PeakFit> {
    sweep.require_fit_points()?;
    let pts = sweep.points();
    let y: Vec<f64> = pts.iter().map(|p| p.amplitude - baseline).collect();
    let x: Vec<f64> = pts.iter().map(|p| p.frequency).collect();

    let imax = y
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .ok_or(Error::NoPeak)?;
    if imax == 0 || imax == y.len() - 1 || y[imax] <= 0.0 {
        return Err(Error::NoPeak);
    }

    let (f0, peak, f_lo, f_hi) = match inverse_power_fit(&x, &y, imax) {
        Some(r) => r,
        None => interpolated_crossings(&x, &y, imax)?,
    };

    let q = f0 / (f_hi - f_lo);
    let fit = PeakFit {
        f0,
        q,
        amplitude_peak: peak,
        baseline,
        residual_rms: 0.0,
        method: FitMethod::HalfPower,
    };
    // residual against the oscillator curve implied by (f0, Q, peak)
    let gain = peak / q;
    let residual_rms = rms(pts
        .iter()
        .map(|p| p.amplitude - baseline - oscillator_amplitude(p.frequency, f0, q, gain)));
    Ok(PeakFit {
        residual_rms,
        ..fit
    })
}

/// Fraction of the maximum bounding the inverse-power window.
const WINDOW_LEVEL: f64 = 0.5;
const MIN_WINDOW_POINTS: usize = 7;

/// (f0, peak, f_lo, f_hi) from a weighted quadratic fit of 1/y².
fn inverse_power_fit(x: &[f64], y: &[f64], imax: usize) -> Option<(f64, f64, f64, f64)> {
    let floor = WINDOW_LEVEL * y[imax];
    let mut lo = imax;
    while lo > 0 && y[lo - 1] >= floor {
        lo -= 1;
    }
    let mut hi = imax;
    while hi + 1 < y.len() && y[hi + 1] >= floor {
        hi += 1;
    }
    // the window must be bounded by samples below the floor on both sides
    if hi + 1 - lo < MIN_WINDOW_POINTS || lo == 0 || hi + 1 == y.len() {
        return None;
    }
    let centre = x[imax];
    let scale = 0.5 * (x[hi] - x[lo]);
    let mut ata = nalgebra::Matrix3::<f64>::zeros();
    let mut atz = nalgebra::Vector3::<f64>::zeros();
    let y_ref = y[imax];
    for i in lo..=hi {
        let u = (x[i] - centre) / scale;
        let yn = y[i] / y_ref;
        let z = 1.0 / (yn * yn);
        // var(z) ∝ 1/y⁶
        let w = yn.powi(6);
        let row = nalgebra::Vector3::new(1.0, u, u * u);
        ata += w * row * row.transpose();
        atz += w * z * row;
    }
    let c = ata.lu().solve(&atz)?;
    if c[2].is_nan() || c[2] <= 0.0 {
        return None;
    }
    let u0 = -c[1] / (2.0 * c[2]);
    let z_min = c[0] - c[1] * c[1] / (4.0 * c[2]);
    if z_min.is_nan() || z_min <= 0.0 || u0.abs() > 1.0 {
        return None;
    }
    let half = (z_min / c[2]).sqrt();
    let f0 = centre + u0 * scale;
    let peak = y_ref / z_min.sqrt();
    Some((f0, peak, f0 - half * scale, f0 + half * scale))
}

fn interpolated_crossings(x: &[f64], y: &[f64], imax: usize) -> Result<(f64, f64, f64, f64)> {
    let (f0, peak) = parabolic_vertex(
        (x[imax - 1], y[imax - 1]),
        (x[imax], y[imax]),
        (x[imax + 1], y[imax + 1]),
    );
    let level = peak / SQRT_2;
    let lo = (0..imax)
        .rev()
        .find(|&j| y[j] < level)
        .ok_or(Error::BandwidthUnresolved)?;
    let hi = (imax + 1..y.len())
        .find(|&j| y[j] < level)
        .ok_or(Error::BandwidthUnresolved)?;
    let f_lo = crossing(x[lo], y[lo], x[lo + 1], y[lo + 1], level);
    let f_hi = crossing(x[hi - 1], y[hi - 1], x[hi], y[hi], level);
    Ok((f0, peak, f_lo, f_hi))
}

fn parabolic_vertex(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> (f64, f64) {
    // Lagrange form centred on b for numerical stability
    let (x0, y0) = (a.0 - b.0, a.1);
    let (x2, y2) = (c.0 - b.0, c.1);
    let y1 = b.1;
    let d0 = (y0 - y1) / x0;
    let d2 = (y2 - y1) / x2;
    let curvature = (d2 - d0) / (x2 - x0);
    let slope = d0 - curvature * x0;
    if curvature >= 0.0 {
        return b;
    }
    let dx = -slope / (2.0 * curvature);
    let dx = dx.clamp(x0, x2);
    (b.0 + dx, y1 + slope * dx + curvature * dx * dx)
}

fn crossing(x0: f64, y0: f64, x1: f64, y1: f64, level: f64) -> f64 {
    x0 + (level - y0) * (x1 - x0) / (y1 - y0)
}

fn rms(residuals: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = residuals.fold((0.0, 0usize), |(s, n), r| (s + r * r, n + 1));
    if n == 0 {
        0.0
    } else {
        (sum / n as f64).sqrt()
    }
}

/// Stopping rule for [`fit_lorentzian_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsOptions {
    pub max_iterations: usize,
    pub relative_step: f64,
}

impl Default for LsOptions {
    fn default() -> Self {
        LsOptions {
            max_iterations: 200,
            relative_step: 1e-9,
        }
    }
}

/// Least-squares fit of (f0, Q, A, baseline) starting from `initial`.
pub fn fit_lorentzian(sweep: &FrequencySweep, initial: &PeakFit) -> Result<PeakFit> {
    fit_lorentzian_with(sweep, initial, LsOptions::default())
}

pub fn fit_lorentzian_with(
    sweep: &FrequencySweep,
    initial: &PeakFit,
    options: LsOptions,
) -> Result<PeakFit> {
    sweep.require_fit_points()?;
    require_positive("initial.f0", initial.f0)?;
    require_positive("initial.q", initial.q)?;

    let xs: Vec<f64> = sweep.frequencies().collect();
    let ys: Vec<f64> = sweep.amplitudes().collect();

    let gain0 = match initial.method {
        FitMethod::HalfPower => initial.amplitude_peak / initial.q,
        FitMethod::LorentzianLs => initial.amplitude_peak,
    };
    let peak_scale = ys
        .iter()
        .cloned()
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut theta = Vector4::new(
        initial.f0,
        initial.q,
        gain0.max(f64::MIN_POSITIVE),
        initial.baseline,
    );
    // Parameters are stepped in units of (linewidth, Q, A, peak height) so the
    // normal equations stay well conditioned.
    let scale = Vector4::new(
        initial.f0 / initial.q,
        initial.q,
        gain0.abs().max(peak_scale / initial.q),
        peak_scale,
    );

    let mut cost = sum_sq(&xs, &ys, &theta);
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < options.max_iterations {
        iterations += 1;
        let (jtj, jtr) = normal_equations(&xs, &ys, &theta, &scale);
        let mut accepted = false;
        while lambda < 1e30 {
            let mut lhs = jtj;
            for i in 0..4 {
                lhs[(i, i)] += lambda * jtj[(i, i)].max(1e-300);
            }
            let Some(step) = lhs.lu().solve(&jtr) else {
                lambda *= 10.0;
                continue;
            };
            let candidate = theta + step.component_mul(&scale);
            if candidate[0] <= 0.0 || candidate[1] <= 0.0 || candidate[2] <= 0.0 {
                lambda *= 10.0;
                continue;
            }
            let candidate_cost = sum_sq(&xs, &ys, &candidate);
            if candidate_cost <= cost {
                let small = (0..4).all(|i| {
                    let delta = (candidate[i] - theta[i]).abs();
                    let reference = if i == 3 {
                        theta[i].abs() + peak_scale
                    } else {
                        theta[i].abs()
                    };
                    delta <= options.relative_step * reference
                });
                theta = candidate;
                cost = candidate_cost;
                lambda = (lambda / 10.0).max(1e-12);
                accepted = true;
                if small {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if converged {
            break;
        }
        if !accepted {
            // no downhill step exists at any damping: already at the floating-point optimum
            converged = true;
            break;
        }
    }

    let fit = PeakFit {
        f0: theta[0],
        q: theta[1],
        amplitude_peak: theta[2],
        baseline: theta[3],
        residual_rms: (cost / xs.len() as f64).sqrt(),
        method: FitMethod::LorentzianLs,
    };
    if converged {
        Ok(fit)
    } else {
        Err(Error::NonConvergence {
            iterations,
            best: Box::new(fit),
        })
    }
}

fn model(f: f64, theta: &Vector4<f64>) -> f64 {
    oscillator_amplitude(f, theta[0], theta[1], theta[2]) + theta[3]
}

fn sum_sq(xs: &[f64], ys: &[f64], theta: &Vector4<f64>) -> f64 {
    xs.iter()
        .zip(ys)
        .map(|(&f, &y)| (y - model(f, theta)).powi(2))
        .sum()
}

/// JᵀJ and Jᵀr in scaled coordinates.
fn normal_equations(
    xs: &[f64],
    ys: &[f64],
    theta: &Vector4<f64>,
    scale: &Vector4<f64>,
) -> (Matrix4<f64>, Vector4<f64>) {
    let (f0, q, gain) = (theta[0], theta[1], theta[2]);
    let mut jtj = Matrix4::zeros();
    let mut jtr = Vector4::zeros();
    for (&f, &y) in xs.iter().zip(ys) {
        let r = f / f0;
        let one_minus = 1.0 - r * r;
        let d = one_minus * one_minus + (r / q).powi(2);
        let inv_sqrt = 1.0 / d.sqrt();
        let inv_d32 = inv_sqrt / d;
        let dd_dr = -4.0 * r * one_minus + 2.0 * r / (q * q);
        // ∂r/∂f0 = −r/f0
        let d_f0 = 0.5 * gain * inv_d32 * dd_dr * r / f0;
        let d_q = gain * r * r * inv_d32 / (q * q * q);
        let d_gain = inv_sqrt;
        let row = Vector4::new(d_f0, d_q, d_gain, 1.0).component_mul(scale);
        let resid = y - (gain * inv_sqrt + theta[3]);
        jtj += row * row.transpose();
        jtr += row * resid;
    }
    (jtj, jtr)
}
