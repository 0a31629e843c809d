//! Finite-element discretization of the coupled scattering system: Nédélec
//! edge elements for the magnetic field on the shell, vector P1 elements for
//! the displacement on the body, interface coupling through tangential
//! traces, and the truncated exterior map folded in as a bordered block of
//! spherical-mode unknowns.

pub mod assemble;
pub mod auxiliary;
pub mod spaces;

pub use assemble::{
    assemble_coupled, assemble_rhs, incident_traces, AssemblyOptions, BlockLayout, CoupledSystem,
};
pub use auxiliary::assemble_auxiliary;
pub use spaces::{EdgeSpace, VectorNodalSpace};
