//! Clamped-free Euler–Bernoulli flexural modes.
//!
//! Eigenvalues are the positive roots of `1 + cos(k)·cosh(k) = 0`. The
//! root finder works on the equivalent `cos(k) + sech(k) = 0`, which stays
//! O(1) for every mode instead of growing like `cosh(k)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::constants::FUNDAMENTAL_SUPPORT_CONSTANT;
use super::types::{Geometry, Material};
use crate::error::{Error, Result};

/// A resonant mode together with the constants the loss models need.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    pub index: u32,
    /// Dimensionless eigenvalue k_n.
    pub eigenvalue: f64,
    /// Support-loss constant C in (0, 2.081].
    pub support_loss_constant: f64,
}

impl ModeSpec {
    pub fn new(index: u32, support_loss_constant: f64) -> Result<Self> {
        if index == 0 {
            return Err(Error::invalid("mode.index", "mode index starts at 1"));
        }
        if !(support_loss_constant > 0.0 && support_loss_constant <= FUNDAMENTAL_SUPPORT_CONSTANT) {
            return Err(Error::invalid(
                "mode.support_loss_constant",
                format!(
                    "must lie in (0, {FUNDAMENTAL_SUPPORT_CONSTANT}], got {support_loss_constant}"
                ),
            ));
        }
        Ok(ModeSpec {
            index,
            eigenvalue: mode_eigenvalue(index),
            support_loss_constant,
        })
    }

    /// First flexural mode with C = 2.081.
    pub fn fundamental() -> Self {
        ModeSpec {
            index: 1,
            eigenvalue: mode_eigenvalue(1),
            support_loss_constant: FUNDAMENTAL_SUPPORT_CONSTANT,
        }
    }
}

fn scaled_characteristic(k: f64) -> f64 {
    k.cos() + 1.0 / k.cosh()
}

/// n-th positive root of the clamped-free characteristic equation.
///
/// The n-th root lies in `[(n-1)π, nπ]`; `cos(mπ) + sech(mπ)` alternates in
/// sign for m = 0, 1, 2, ... so the bracket is always valid. Bisection runs
/// until the interval stops shrinking in floating point.
///
/// # Panics
/// Panics if `n == 0`.
pub fn mode_eigenvalue(n: u32) -> f64 {
    assert!(n >= 1, "mode index starts at 1");
    let mut lo = (n - 1) as f64 * PI;
    let mut hi = n as f64 * PI;
    let mut f_lo = scaled_characteristic(lo);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = scaled_characteristic(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    // pick whichever endpoint has the smaller residual
    if scaled_characteristic(lo).abs() <= scaled_characteristic(hi).abs() {
        lo
    } else {
        hi
    }
}

/// f_n = (k_n² / 2π) · (t / L²) · sqrt(E / 12ρ)  [Hz].
pub fn resonant_frequency(geometry: &Geometry, material: &Material, mode: &ModeSpec) -> f64 {
    let k = mode.eigenvalue;
    k * k / (2.0 * PI) * geometry.thickness / (geometry.length * geometry.length)
        * (material.youngs_modulus / (12.0 * material.density)).sqrt()
}

/// Clamped-free mode shape φ_n as a function of x/L.
///
/// The hyperbolic part is rearranged around `1 − σ` so the `cosh − σ·sinh`
/// cancellation never happens explicitly; high modes stay accurate.
#[derive(Debug, Clone, Copy)]
pub struct ModeShape {
    k: f64,
    sigma: f64,
    one_minus_sigma: f64,
}

impl ModeShape {
    pub fn new(mode: &ModeSpec) -> Self {
        let k = mode.eigenvalue;
        let denom = k.sinh() + k.sin();
        let sigma = (k.cosh() + k.cos()) / denom;
        // sinh k − cosh k = −e^{−k}
        let one_minus_sigma = (-(-k).exp() + k.sin() - k.cos()) / denom;
        ModeShape {
            k,
            sigma,
            one_minus_sigma,
        }
    }

    /// φ(x̂) = (cosh kx̂ − cos kx̂) − σ(sinh kx̂ − sin kx̂).
    pub fn eval(&self, x_hat: f64) -> f64 {
        let z = self.k * x_hat;
        // cosh z − σ sinh z = ((1−σ) e^z + (1+σ) e^−z) / 2
        let hyperbolic = 0.5 * (self.one_minus_sigma * z.exp() + (1.0 + self.sigma) * (-z).exp());
        hyperbolic - z.cos() + self.sigma * z.sin()
    }
}

/// Interior zeros of φ_n on (0, 1), in increasing order, each to 1e-9 or better.
pub fn mode_shape_nodes(mode: &ModeSpec) -> Result<Vec<f64>> {
    if mode.index < 2 {
        return Err(Error::NoInteriorNodes { mode: mode.index });
    }
    let shape = ModeShape::new(mode);
    let cells = 64 * mode.index as usize;
    let mut nodes = Vec::with_capacity(mode.index as usize - 1);
    // skip x̂ = 0 where φ has a double zero
    let mut a = 1.0 / cells as f64;
    let mut fa = shape.eval(a);
    for i in 2..=cells {
        let b = i as f64 / cells as f64;
        let fb = shape.eval(b);
        if fa == 0.0 {
            nodes.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            nodes.push(bisect(|x| shape.eval(x), a, b, fa));
        }
        a = b;
        fa = fb;
    }
    Ok(nodes)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn silicon() -> Material {
        Material {
            name: "si".into(),
            youngs_modulus: 169e9,
            density: 2330.0,
            thermal_expansion: 2.6e-6,
            heat_capacity_volumetric: 1.631e6,
            thermal_conductivity: Some(148.0),
        }
    }

    #[test]
    fn first_three_eigenvalues() {
        assert!((mode_eigenvalue(1) - 1.875_104_068_711_961).abs() < 1e-12);
        assert!((mode_eigenvalue(2) - 4.694_091_132_974_175).abs() < 1e-12);
        assert!((mode_eigenvalue(3) - 7.854_757_438_237_613).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_approach_half_odd_multiples_of_pi() {
        for n in [10u32, 50, 200, 1000] {
            let asymptote = (n as f64 - 0.5) * PI;
            assert!((mode_eigenvalue(n) - asymptote).abs() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn frequency_of_reference_beam() {
        let g = Geometry::new(100e-6, 30e-6, 5e-6).unwrap();
        let f = resonant_frequency(&g, &silicon(), &ModeSpec::fundamental());
        assert!((f - 6.8788e5).abs() / 6.8788e5 < 1e-4, "{f}");
    }

    #[test]
    fn frequency_scales_with_eigenvalue_squared_and_inverse_length_squared() {
        let m = silicon();
        let g = Geometry::new(100e-6, 30e-6, 5e-6).unwrap();
        let f1 = resonant_frequency(&g, &m, &ModeSpec::fundamental());
        let f2 = resonant_frequency(&g, &m, &ModeSpec::new(2, 0.2).unwrap());
        let ratio = (mode_eigenvalue(2) / mode_eigenvalue(1)).powi(2);
        assert!((f2 / f1 - ratio).abs() < 1e-12);
        assert!((ratio - 6.267).abs() < 1e-3);
        let g2 = Geometry::new(200e-6, 30e-6, 5e-6).unwrap();
        let f_long = resonant_frequency(&g2, &m, &ModeSpec::fundamental());
        assert_eq!(f1 / f_long, 4.0);
    }

    #[test]
    fn mode_spec_rejects_out_of_range_constants() {
        assert!(ModeSpec::new(1, 2.081).is_ok());
        assert!(ModeSpec::new(1, 2.1).is_err());
        assert!(ModeSpec::new(1, 0.0).is_err());
        assert!(ModeSpec::new(0, 1.0).is_err());
    }

    #[test]
    fn mode_shape_clamped_end_and_free_end_behaviour() {
        let shape = ModeShape::new(&ModeSpec::fundamental());
        assert!(shape.eval(0.0).abs() < 1e-14);
        // fundamental mode tip deflection is 2 in this normalization
        assert!((shape.eval(1.0).abs() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn fundamental_has_no_nodes() {
        assert_eq!(
            mode_shape_nodes(&ModeSpec::fundamental()),
            Err(Error::NoInteriorNodes { mode: 1 })
        );
    }

    #[test]
    fn second_mode_node_near_0783() {
        let nodes = mode_shape_nodes(&ModeSpec::new(2, 0.2).unwrap()).unwrap();
        assert_eq!(nodes.len(), 1);
        assert!((nodes[0] - 0.783_444_550_500_559).abs() < 1e-9);
    }

    #[test]
    fn high_mode_shape_stays_bounded() {
        let mode = ModeSpec::new(20, 0.01).unwrap();
        let shape = ModeShape::new(&mode);
        for i in 0..=100 {
            assert!(shape.eval(i as f64 / 100.0).abs() < 2.5);
        }
        assert_eq!(mode_shape_nodes(&mode).unwrap().len(), 19);
    }
}
