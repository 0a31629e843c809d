//! Crate-wide error type.
//!
//! Every fallible operation returns [`Error`]; variants carry enough context
//! to name the violated precondition or invariant in diagnostics.

use thiserror::Error;

/// Errors reported by solver construction, mesh ingestion and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid material parameters (e.g. non-positive shear modulus).
    #[error("invalid material: {0}")]
    InvalidMaterial(String),

    /// A stiffness tensor failed the minor/major symmetry requirements.
    #[error("stiffness tensor violates symmetry: {0}")]
    SymmetryViolation(String),

    /// `b1·b2 = 0`: the transmission conditions degenerate.
    #[error("degenerate coupling constants: b1*b2 = 0")]
    DegenerateCoupling,

    /// Coupling constants fail the admissibility predicates required by the
    /// solver entry points.
    #[error("inadmissible coupling constants: {0}")]
    InadmissibleCoupling(String),

    /// Mesh file I/O failure.
    #[error("mesh i/o: {0}")]
    MeshIo(#[from] std::io::Error),

    /// Mesh file violated the expected format.
    #[error("mesh parse error at line {line}: {message}")]
    MeshParse { line: usize, message: String },

    /// A structural mesh invariant failed on load.
    #[error("mesh invariant violated: {0}")]
    MeshInvariant(String),

    /// Probe sequence construction failed (points land in wrong regions).
    #[error("probe sequence: {0}")]
    ProbeSequence(String),

    /// Kernel evaluated too close to its singular point.
    #[error("evaluation within {dist:.3e} of a kernel singularity")]
    NearSingularity { dist: f64 },

    /// Invalid spherical-harmonic or Hankel order.
    #[error("invalid order: {0}")]
    InvalidOrder(String),

    /// A field that must be tangential has a normal component.
    #[error("field not tangential: |n·f| = {ratio:.3e} of |f| exceeds {tol:.1e}")]
    NotTangential { ratio: f64, tol: f64 },

    /// Expansion orders of operator and operand disagree.
    #[error("trace expansion order mismatch: operator N={op}, operand N={operand}")]
    OrderMismatch { op: usize, operand: usize },

    /// The sparse factorization failed (singular or structurally deficient
    /// matrix); usually signals a pathological frequency or a broken mesh.
    #[error("linear solver breakdown: {0}")]
    SolverBreakdown(String),

    /// Algebraic residual of a solve exceeded its contract.
    #[error("solver residual {res:.3e} exceeds tolerance {tol:.1e}")]
    ResidualTooLarge { res: f64, tol: f64 },

    /// Point lies outside both mesh regions.
    #[error("point ({x:.6}, {y:.6}, {z:.6}) outside the meshed domain")]
    PointOutsideDomain { x: f64, y: f64, z: f64 },

    /// Generic input validation failure.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
