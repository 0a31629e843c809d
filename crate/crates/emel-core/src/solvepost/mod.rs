//! Forward solves and post-processing of the coupled scattering problem.
//!
//! [`solve`] turns an assembled system and a load vector into a
//! [`CoupledSolution`] through a residual-checked sparse LU; the rest of the
//! module interprets that solution: pointwise field evaluation, surface
//! Cauchy data and exterior representation, far-field patterns, the
//! interface energy balance, VTK export, and manufactured solutions for
//! convergence studies.

pub mod energy;
pub mod farfield;
pub mod fields;
pub mod solve;

pub use energy::{energy_balance, EnergyBalanceReport};
pub use farfield::{
    direction_grid, far_field, far_field_direction, far_field_from_cauchy, FarFieldPattern,
};
pub use fields::{evaluate_fields, CauchyData, FieldSample};
pub use solve::{solve, CoupledSolution, FactorizedSystem, FieldNorms, RESIDUAL_TOL};
