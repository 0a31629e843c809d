//! Fundamental solution of the Helmholtz operator and incident fields.
//!
//! All fields use the time convention `e^{-iωt}`, so the outgoing
//! fundamental solution is
//!
//! ```text
//!   Φ(x,z) = e^{iκ|x−z|} / (4π|x−z|),
//! ```
//!
//! and incident pairs satisfy `curl E = iκH`, `curl H = −iκE` away from
//! sources. The electric-dipole incident field is the magnetic field
//! `H = c·curl(q Φ(·,z))` with `c` normalizing `‖curl(q Φ(·,z))‖_{L²(∂D)}`
//! to one; its electric partner follows from `E = −(1/iκ) curl H`, with
//! `curl curl` expanded through the Hessian of `Φ` via
//! `curl curl (qΦ) = κ² q Φ + (Hess Φ) q`.

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{CVec3, Vec3};

/// Distance below which kernel evaluation is refused as singular.
pub const SINGULARITY_GUARD: f64 = 1e-12;

fn to_complex(v: &Vec3) -> CVec3 {
    CVec3::new(v.x.into(), v.y.into(), v.z.into())
}

/// Outgoing Helmholtz fundamental solution with first and second
/// derivatives in `x`: `(Φ, ∇Φ, Hess Φ)`.
pub fn fundamental_solution(x: &Vec3, z: &Vec3, kappa: f64) -> Result<(Complex64, CVec3, Matrix3<Complex64>)> {
    let d = x - z;
    let r = d.norm();
    if r < SINGULARITY_GUARD {
        return Err(Error::NearSingularity { dist: r });
    }
    let rhat = d / r;
    let ik = Complex64::new(0.0, kappa);
    let phi = (ik * r).exp() / (4.0 * std::f64::consts::PI * r);
    // Φ'(r) = (iκ − 1/r)Φ, Φ''(r) = ((iκ − 1/r)² + 1/r²)Φ
    let g1 = (ik - 1.0 / r) * phi;
    let g2 = ((ik - 1.0 / r) * (ik - 1.0 / r) + 1.0 / (r * r)) * phi;
    let grad = to_complex(&rhat) * g1;
    let mut hess = Matrix3::<Complex64>::zeros();
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            hess[(i, j)] = g2 * rhat[i] * rhat[j] + g1 * (delta - rhat[i] * rhat[j]) / r;
        }
    }
    Ok((phi, grad, hess))
}

/// Incident plane-wave pair
/// `H = curl(p e^{iκ x·d}) = iκ (d×p) e^{iκ x·d}`,
/// `E = −(1/iκ) curl H = −iκ (d×(d×p)) e^{iκ x·d}`.
pub fn plane_wave(x: &Vec3, d: &Vec3, p: &Vec3, kappa: f64) -> Result<(CVec3, CVec3)> {
    if (d.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!("|d| = {} must be 1", d.norm())));
    }
    let ik = Complex64::new(0.0, kappa);
    let phase = (ik * x.dot(d)).exp();
    let h = to_complex(&d.cross(p)) * (ik * phase);
    let e = to_complex(&d.cross(&d.cross(p))) * (-ik * phase);
    Ok((e, h))
}

/// Normalized electric point dipole at `z` with moment `q`.
///
/// `c` is `1/‖curl(qΦ(·,z))‖_{L²(∂D)}`; it depends on the interface
/// geometry and quadrature used to compute it, which the constructor
/// records implicitly by taking the value rather than recomputing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectricDipole {
    /// Source location (off `∂D`).
    pub z: Vec3,
    /// Dipole moment.
    pub q: Vec3,
    /// Normalization constant (`> 0`; `1.0` for an unnormalized dipole).
    pub c: f64,
}

impl ElectricDipole {
    /// Unnormalized dipole (`c = 1`).
    pub fn raw(z: Vec3, q: Vec3) -> Self {
        Self { z, q, c: 1.0 }
    }

    /// Dipole with a precomputed normalization constant.
    pub fn normalized(z: Vec3, q: Vec3, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidInput(format!("dipole normalization c = {c} must be positive")));
        }
        Ok(Self { z, q, c })
    }
}

/// Incident dipole pair at `x`:
/// `H = c · ∇Φ(x,z) × q`, `E = −(1/iκ) curl H = −(1/iκ) c (κ² q Φ + Hess(Φ) q)`.
pub fn dipole_pair(x: &Vec3, dip: &ElectricDipole, kappa: f64) -> Result<(CVec3, CVec3)> {
    let (phi, grad, hess) = fundamental_solution(x, &dip.z, kappa)?;
    let q = to_complex(&dip.q);
    let h = grad.cross(&q) * Complex64::from(dip.c);
    let curl_h = (q * (phi * kappa * kappa) + hess * q) * Complex64::from(dip.c);
    let e = curl_h * (-1.0 / Complex64::new(0.0, kappa));
    Ok((e, h))
}

/// Closed-form far field of the normalized dipole:
/// `H∞(x̂) = c (iκ/4π)(x̂×q) e^{−iκ x̂·z}`, `E∞ = H∞ × x̂`.
pub fn dipole_far_field(dip: &ElectricDipole, kappa: f64, xhat: &Vec3) -> (CVec3, CVec3) {
    let ik = Complex64::new(0.0, kappa);
    let amp = Complex64::from(dip.c) * ik / (4.0 * std::f64::consts::PI) * (-ik * xhat.dot(&dip.z)).exp();
    let h_inf = to_complex(&xhat.cross(&dip.q)) * amp;
    let e_inf = h_inf.cross(&to_complex(xhat));
    (e_inf, h_inf)
}

/// Incident excitation: plane wave or normalized electric dipole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IncidentField {
    /// `H = curl(p e^{iκ x·d})` with unit propagation direction `d`.
    PlaneWave { d: Vec3, p: Vec3 },
    /// Point dipole, see [`ElectricDipole`].
    Dipole(ElectricDipole),
}

impl IncidentField {
    /// Validated plane wave (`|d| = 1`).
    pub fn plane_wave(d: Vec3, p: Vec3) -> Result<Self> {
        if (d.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("|d| = {} must be 1", d.norm())));
        }
        Ok(Self::PlaneWave { d, p })
    }

    /// Incident pair `(E, H)` at a point.
    pub fn eval(&self, x: &Vec3, kappa: f64) -> Result<(CVec3, CVec3)> {
        match self {
            Self::PlaneWave { d, p } => plane_wave(x, d, p, kappa),
            Self::Dipole(dip) => dipole_pair(x, dip, kappa),
        }
    }

    /// `curl H` at a point (needed for the transmission data `f2`).
    pub fn curl_h(&self, x: &Vec3, kappa: f64) -> Result<CVec3> {
        // curl H = −iκ E for both variants (Maxwell away from sources).
        let (e, _) = self.eval(x, kappa)?;
        Ok(e * Complex64::new(0.0, -kappa))
    }
}
