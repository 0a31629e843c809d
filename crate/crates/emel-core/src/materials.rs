//! Material data for the coupled elastic–electromagnetic problem.
//!
//! The body is a linearly elastic solid with stiffness tensor `C` and mass
//! density `ρ`; the exterior is a homogeneous dielectric background with
//! wave number `κ = ω·√(ε₀μ₀)`. Interface transmission is weighted by two
//! complex coupling constants `(b1, b2)` which must satisfy
//!
//! ```text
//!   Re(b1·conj(b2)) = 0   and   Im(b1·conj(b2)) < 0
//! ```
//!
//! for the forward problem to be uniquely solvable; solver entry points
//! require both predicates.

use nalgebra::{Matrix3, Matrix6, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{CVec3, Vec3};

/// Map a symmetric index pair `(i,j)` to its Voigt slot `0..6`.
///
/// Ordering: `11, 22, 33, 23, 13, 12` (zero-based pairs).
const VOIGT_PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1)];

fn voigt_index(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (1, 2) => 3,
        (0, 2) => 4,
        (0, 1) => 5,
        _ => unreachable!("indices must be < 3"),
    }
}

/// Fourth-order elastic stiffness tensor `C_ijkl` (real entries, Pa).
///
/// Stored with full 81-entry access; constructors guarantee the minor and
/// major symmetries `C_ijkl = C_jikl = C_ijlk = C_klij`. Ellipticity is not a
/// construction invariant — validation entry points reject tensors whose
/// [`legendre_constant`](Self::legendre_constant) is non-positive, which
/// keeps deliberately broken tensors constructible for testing.
#[derive(Debug, Clone, PartialEq)]
pub struct StiffnessTensor {
    entries: [f64; 81],
}

impl StiffnessTensor {
    /// Isotropic tensor `C_ijkl = λ δ_ij δ_kl + μ (δ_ik δ_jl + δ_il δ_jk)`.
    ///
    /// Requires `μ > 0` and `3λ + 2μ > 0` (positive shear and bulk response).
    pub fn isotropic(lambda: f64, mu: f64) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(Error::InvalidMaterial(format!("shear modulus mu = {mu} must be positive")));
        }
        if !(3.0 * lambda + 2.0 * mu > 0.0) {
            return Err(Error::InvalidMaterial(format!(
                "bulk response 3*lambda + 2*mu = {} must be positive",
                3.0 * lambda + 2.0 * mu
            )));
        }
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        let mut entries = [0.0; 81];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        entries[StiffnessTensor::flat(i, j, k, l)] =
                            lambda * d(i, j) * d(k, l) + mu * (d(i, k) * d(j, l) + d(i, l) * d(j, k));
                    }
                }
            }
        }
        Ok(Self { entries })
    }

    /// Build from the 21 upper-triangle entries of the 6×6 Voigt matrix
    /// `C_IJ`, row-major (`C_11, C_12, …, C_16, C_22, …, C_66`).
    ///
    /// The result satisfies all symmetries by construction.
    pub fn from_voigt_upper(upper: &[f64; 21]) -> Self {
        let mut voigt = [[0.0; 6]; 6];
        let mut it = upper.iter();
        for i in 0..6 {
            for j in i..6 {
                let v = *it.next().expect("21 entries");
                voigt[i][j] = v;
                voigt[j][i] = v;
            }
        }
        let mut entries = [0.0; 81];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        entries[StiffnessTensor::flat(i, j, k, l)] =
                            voigt[voigt_index(i, j)][voigt_index(k, l)];
                    }
                }
            }
        }
        Self { entries }
    }

    /// Build from arbitrary entries, verifying the symmetry invariant.
    pub fn from_entries(entries: [f64; 81]) -> Result<Self> {
        let t = Self { entries };
        t.verify_symmetry()?;
        Ok(t)
    }

    #[inline]
    fn flat(i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * 3 + j) * 3 + k) * 3 + l
    }

    /// Entry accessor `C_ijkl` (zero-based indices, all `< 3`).
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.entries[Self::flat(i, j, k, l)]
    }

    /// Check `C_ijkl = C_jikl = C_ijlk = C_klij` for every index tuple.
    pub fn verify_symmetry(&self) -> Result<()> {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let c = self.get(i, j, k, l);
                        for (name, other) in [
                            ("C_jikl", self.get(j, i, k, l)),
                            ("C_ijlk", self.get(i, j, l, k)),
                            ("C_klij", self.get(k, l, i, j)),
                        ] {
                            if c != other {
                                return Err(Error::SymmetryViolation(format!(
                                    "C_{i}{j}{k}{l} = {c} but {name} = {other}"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Legendre ellipticity constant: the largest `c0` with
    /// `Σ C_ijkl a_ij a_kl ≥ c0 Σ |a_ij|²` over symmetric matrices `a`.
    ///
    /// Computed as the smallest eigenvalue of the 6×6 Voigt quadratic-form
    /// matrix, generalized against the Frobenius metric (off-diagonal slots
    /// carry weight 2). Callers must reject tensors with `c0 ≤ 0`.
    pub fn legendre_constant(&self) -> Result<f64> {
        self.verify_symmetry()?;
        // M such that Q(a) = vᵀ M v for v = (a11, a22, a33, a23, a13, a12):
        // sum C over all (i,j) representatives of each Voigt slot.
        let mut m = Matrix6::<f64>::zeros();
        for (bi, &(i, j)) in VOIGT_PAIRS.iter().enumerate() {
            for (bj, &(k, l)) in VOIGT_PAIRS.iter().enumerate() {
                let mut s = self.get(i, j, k, l);
                if bi >= 3 {
                    s += self.get(j, i, k, l);
                }
                if bj >= 3 {
                    s += self.get(i, j, l, k);
                }
                if bi >= 3 && bj >= 3 {
                    s += self.get(j, i, l, k);
                }
                m[(bi, bj)] = s;
            }
        }
        // Frobenius norm metric N = diag(1,1,1,2,2,2); generalized problem
        // M v = c N v reduced symmetrically by N^{-1/2}.
        let mut scaled = m;
        for bi in 0..6 {
            for bj in 0..6 {
                let wi = if bi >= 3 { std::f64::consts::SQRT_2 } else { 1.0 };
                let wj = if bj >= 3 { std::f64::consts::SQRT_2 } else { 1.0 };
                scaled[(bi, bj)] /= wi * wj;
            }
        }
        let eig = nalgebra::SymmetricEigen::new(scaled);
        Ok(eig.eigenvalues.min())
    }

    /// Stress from a (complex) displacement gradient:
    /// `σ_ij = Σ_kl C_ijkl ∂u_k/∂x_l`.
    pub fn stress(&self, grad_u: &Matrix3<Complex64>) -> Matrix3<Complex64> {
        let mut sigma = Matrix3::<Complex64>::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = Complex64::ZERO;
                for k in 0..3 {
                    for l in 0..3 {
                        s += self.get(i, j, k, l) * grad_u[(k, l)];
                    }
                }
                sigma[(i, j)] = s;
            }
        }
        sigma
    }

    /// Traction `(T u)_i = Σ_j ν_j σ_ij` for outward normal `ν`.
    pub fn traction(&self, grad_u: &Matrix3<Complex64>, nu: &Vec3) -> CVec3 {
        let sigma = self.stress(grad_u);
        let nu_c = Vector3::new(
            Complex64::new(nu.x, 0.0),
            Complex64::new(nu.y, 0.0),
            Complex64::new(nu.z, 0.0),
        );
        sigma * nu_c
    }
}

/// Homogeneous exterior electromagnetic background.
///
/// The wave number is always derived, never stored: `κ = ω·√(ε₀μ₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackgroundMedium {
    eps0: f64,
    mu0: f64,
    omega: f64,
}

impl BackgroundMedium {
    /// Requires all three of `ε₀`, `μ₀`, `ω` strictly positive.
    pub fn new(eps0: f64, mu0: f64, omega: f64) -> Result<Self> {
        for (name, v) in [("eps0", eps0), ("mu0", mu0), ("omega", omega)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidMaterial(format!("{name} = {v} must be positive and finite")));
            }
        }
        Ok(Self { eps0, mu0, omega })
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Wave number `κ = ω·√(ε₀μ₀)`.
    pub fn kappa(&self) -> f64 {
        self.omega * (self.eps0 * self.mu0).sqrt()
    }
}

/// Piecewise-constant positive mass density on the body, one value per
/// BODY tetrahedron.
#[derive(Debug, Clone, PartialEq)]
pub struct MassDensityField {
    values: Vec<f64>,
}

impl MassDensityField {
    /// Uniform density over `n_cells` body cells.
    pub fn uniform(rho: f64, n_cells: usize) -> Result<Self> {
        Self::from_values(vec![rho; n_cells])
    }

    /// Per-cell densities; every value must be positive and finite.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidMaterial("density field needs at least one cell".into()));
        }
        if let Some(bad) = values.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidMaterial(format!("density {bad} must be positive and finite")));
        }
        Ok(Self { values })
    }

    /// Density on body cell `cell` (index into the BODY tet list).
    #[inline]
    pub fn value(&self, cell: usize) -> f64 {
        self.values[cell]
    }

    pub fn n_cells(&self) -> usize {
        self.values.len()
    }

    /// `‖ρ‖_∞` over all cells.
    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Which admissibility predicates a coupling pair satisfies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilityReport {
    /// `b1·conj(b2)`.
    pub product: Complex64,
    /// `Re(b1·conj(b2)) = 0` within `1e-12·|b1||b2|`.
    pub re_vanishes: bool,
    /// `Im(b1·conj(b2)) < 0`.
    pub im_negative: bool,
}

impl AdmissibilityReport {
    /// Solver entry points require both predicates.
    pub fn admissible(&self) -> bool {
        self.re_vanishes && self.im_negative
    }
}

/// Interface coupling constants `(b1, b2)` of the transmission conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingConstants {
    b1: Complex64,
    b2: Complex64,
}

impl CouplingConstants {
    /// Relative tolerance for the `Re(b1·conj(b2)) = 0` predicate.
    pub const RE_TOLERANCE: f64 = 1e-12;

    /// Rejects degenerate pairs with `b1·b2 = 0`.
    pub fn new(b1: Complex64, b2: Complex64) -> Result<Self> {
        if b1 * b2 == Complex64::ZERO {
            return Err(Error::DegenerateCoupling);
        }
        Ok(Self { b1, b2 })
    }

    pub fn b1(&self) -> Complex64 {
        self.b1
    }

    pub fn b2(&self) -> Complex64 {
        self.b2
    }

    /// Evaluate both admissibility predicates on `b1·conj(b2)`.
    pub fn check_admissible(&self) -> AdmissibilityReport {
        let product = self.b1 * self.b2.conj();
        let scale = self.b1.norm() * self.b2.norm();
        AdmissibilityReport {
            product,
            re_vanishes: product.re.abs() <= Self::RE_TOLERANCE * scale,
            im_negative: product.im < 0.0,
        }
    }

    /// True iff both predicates hold; required by all solve paths.
    pub fn is_admissible(&self) -> bool {
        self.check_admissible().admissible()
    }

    /// Return an error naming the violated predicate unless admissible.
    pub fn require_admissible(&self) -> Result<()> {
        let report = self.check_admissible();
        if report.admissible() {
            return Ok(());
        }
        let mut reasons = Vec::new();
        if !report.re_vanishes {
            reasons.push(format!("Re(b1*conj(b2)) = {:.3e} != 0", report.product.re));
        }
        if !report.im_negative {
            reasons.push(format!("Im(b1*conj(b2)) = {:.3e} not < 0", report.product.im));
        }
        Err(Error::InadmissibleCoupling(reasons.join("; ")))
    }
}
