//! Forward solver and verification harness for time-harmonic electromagnetic
//! scattering by a bounded elastic body.
//!
//! The scatterer occupies a bounded domain `D` governed by the Navier
//! equations of linear elasticity; the exterior carries a time-harmonic
//! Maxwell field (time convention `e^{-iωt}`). The electromagnetic field does
//! not penetrate the body: the two systems are coupled only through a pair of
//! transmission conditions on the interface `∂D`, weighted by complex
//! constants `b1`, `b2`,
//!
//! ```text
//!   T u − b1 ν×H = f1,          ν×u + (b2/iκ) ν×curl H = f2   on ∂D,
//! ```
//!
//! where `T` is the elastic traction operator and `ν` the outward normal of
//! `D`. The exterior problem is truncated on a sphere `S_R` by the exact
//! electric-to-magnetic Calderón map expanded in vector spherical harmonics.
//!
//! Crate layout mirrors the pipeline:
//!
//! - [`materials`] — stiffness tensors, densities, background medium,
//!   coupling-constant admissibility;
//! - [`kernels`] — special functions, fundamental solution, incident fields;
//! - [`geometry`] — tetrahedral meshes, boundary quadrature, probe sequences;
//! - [`dtn`] — the truncated Calderón map on `S_R`;
//! - [`fem`] — edge/nodal spaces and assembly of the coupled variational form;
//! - [`solvepost`] — sparse solve, field evaluation, far fields, energy checks;
//! - [`inverseprobe`] — mixed reciprocity, probe-sequence data, boundary
//!   indicator experiments.

pub mod dtn;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod inverseprobe;
pub mod kernels;
pub mod materials;
pub mod solvepost;

pub use error::Error;
pub use materials::{BackgroundMedium, CouplingConstants, MassDensityField, StiffnessTensor};

/// Convenience alias used throughout: double-precision complex scalar.
pub type C64 = num_complex::Complex64;

/// Real 3-vector alias (geometry and material code).
pub type Vec3 = nalgebra::Vector3<f64>;

/// Complex 3-vector alias (field values).
pub type CVec3 = nalgebra::Vector3<num_complex::Complex64>;
