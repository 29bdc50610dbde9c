//! Synthetic frequency responses, peak fitting and residual-loss extraction.

mod fit;
mod residual;
mod sweep;
mod synth;

pub use fit::{
    fit_half_power, fit_half_power_above, fit_lorentzian, fit_lorentzian_with, FitMethod,
    LsOptions, PeakFit,
};
pub use residual::{extract_residual_q, ResidualQ};
pub use sweep::{FrequencySweep, SweepPoint, MIN_FIT_POINTS};
pub use synth::{linear_grid, oscillator_amplitude, resonance_grid, synthesize_peak};
