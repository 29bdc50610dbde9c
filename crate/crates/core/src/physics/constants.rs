//! Physical constants (CODATA 2018 exact values).

/// Boltzmann constant [J/K].
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Molar gas constant [J/(mol·K)].
pub const GAS_CONSTANT: f64 = 8.314_462_618_153_24;

/// Molar mass of dry air [kg/mol].
pub const AIR_MOLAR_MASS: f64 = 0.028_964;

/// Kinetic diameter of an air molecule used for the mean free path [m].
pub const AIR_MOLECULE_DIAMETER: f64 = 3.7e-10;

/// Support-loss constant of the fundamental flexural mode.
pub const FUNDAMENTAL_SUPPORT_CONSTANT: f64 = 2.081;

/// Knudsen number below which the continuum (viscous) air model applies.
pub const KNUDSEN_VISCOUS_LIMIT: f64 = 0.01;

/// Knudsen number above which the free-molecular air model applies.
pub const KNUDSEN_MOLECULAR_LIMIT: f64 = 10.0;
