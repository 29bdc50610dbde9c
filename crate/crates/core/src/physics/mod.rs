//! Closed-form beam dynamics and dissipation models.

pub mod budget;
pub mod constants;
pub mod dissipation;
pub mod modes;
pub mod sensitivity;
pub mod types;

pub use budget::{q_total, Channel, OperatingPoint, QBudget, Quality};
pub use dissipation::{
    boundary_layer_thickness, knudsen_number, mean_free_path, q_air, q_air_molecular,
    q_air_viscous, q_support, q_ted, thermal_relaxation_time, viscous_q_with_layer, Regime,
};
pub use modes::{mode_eigenvalue, mode_shape_nodes, resonant_frequency, ModeShape, ModeSpec};
pub use sensitivity::{beam_mass, mass_sensitivity};
pub use types::{GasEnvironment, Geometry, Material, SphereModelParams, SphereRadiusRule};
