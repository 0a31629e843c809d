//! Far-field patterns of the scattered electromagnetic field.
//!
//! Both far-field components are synthesized from tangential Cauchy data on
//! a closed surface enclosing the scatterer:
//!
//! ```text
//! E∞(x̂) = (iκ/4π) x̂ × ∫ [ ν×E(y) + (ν×H(y)) × x̂ ] e^{−iκ x̂·y} ds(y)
//! H∞(x̂) = (iκ/4π) x̂ × ∫ [ ν×H(y) − (ν×E(y)) × x̂ ] e^{−iκ x̂·y} ds(y)
//! ```
//!
//! The two integrals are evaluated independently, so the exact relation
//! `H∞ = x̂ × E∞` becomes a measurable consistency check of the data rather
//! than a definition; [`FarFieldPattern::relation_defect`] reports it.
//! Tangentiality `x̂ · E∞ = 0` holds by construction (each pattern is an
//! `x̂ ×` of something).
//!
//! The integral is surface-independent for radiating fields, so patterns
//! synthesized from interface data and from outer-sphere data of the same
//! field must agree to quadrature accuracy — a test pins that down.

use rayon::prelude::*;
use std::io::Write;

use crate::error::{Error, Result};
use crate::geometry::quadrature::sphere_gauss_grid;
use crate::geometry::{Boundary, TetMesh};
use crate::solvepost::{CauchyData, CoupledSolution};
use crate::{C64, CVec3, Vec3};

/// Scattered far-field samples over a set of unit directions.
#[derive(Debug, Clone)]
pub struct FarFieldPattern {
    directions: Vec<Vec3>,
    e_inf: Vec<CVec3>,
    h_inf: Vec<CVec3>,
}

impl FarFieldPattern {
    /// Observation directions (unit vectors).
    pub fn directions(&self) -> &[Vec3] {
        &self.directions
    }

    /// Electric far field per direction.
    pub fn e_inf(&self) -> &[CVec3] {
        &self.e_inf
    }

    /// Magnetic far field per direction.
    pub fn h_inf(&self) -> &[CVec3] {
        &self.h_inf
    }

    /// Worst violation of `x̂ · E∞ = 0` and `x̂ · H∞ = 0` relative to the
    /// largest sample. Zero to rounding by construction.
    pub fn tangentiality_defect(&self) -> f64 {
        let scale = self.scale();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for (i, d) in self.directions.iter().enumerate() {
            let de = self.e_inf[i].x * d.x + self.e_inf[i].y * d.y + self.e_inf[i].z * d.z;
            let dh = self.h_inf[i].x * d.x + self.h_inf[i].y * d.y + self.h_inf[i].z * d.z;
            worst = worst.max(de.norm()).max(dh.norm());
        }
        worst / scale
    }

    /// Worst violation of the far-field relation `H∞ = x̂ × E∞`, relative
    /// to the largest sample. Both sides are synthesized by independent
    /// integrals, so this measures the quality of the Cauchy data.
    pub fn relation_defect(&self) -> f64 {
        let scale = self.scale();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for (i, d) in self.directions.iter().enumerate() {
            let dc = CVec3::new(C64::from(d.x), C64::from(d.y), C64::from(d.z));
            worst = worst.max((self.h_inf[i] - dc.cross(&self.e_inf[i])).norm());
        }
        worst / scale
    }

    /// Largest sample magnitude over both fields.
    pub fn scale(&self) -> f64 {
        self.e_inf
            .iter()
            .chain(&self.h_inf)
            .map(|v| v.norm())
            .fold(0.0f64, f64::max)
    }

    /// Weighted relative L² distance to another pattern over the same
    /// directions, `‖E∞−E∞'‖_w / ‖E∞‖_w` with the same for `H` under the
    /// same normalization.
    pub fn weighted_distance(&self, other: &Self, weights: &[f64]) -> Result<f64> {
        if other.directions.len() != self.directions.len()
            || weights.len() != self.directions.len()
        {
            return Err(Error::InvalidInput(format!(
                "pattern sizes {} / {} / {} weights do not match",
                self.directions.len(),
                other.directions.len(),
                weights.len()
            )));
        }
        let mut diff = 0.0;
        let mut norm = 0.0;
        for i in 0..weights.len() {
            diff += weights[i]
                * ((self.e_inf[i] - other.e_inf[i]).norm_squared()
                    + (self.h_inf[i] - other.h_inf[i]).norm_squared());
            norm += weights[i]
                * (self.e_inf[i].norm_squared() + self.h_inf[i].norm_squared());
        }
        if norm == 0.0 {
            return Ok(if diff == 0.0 { 0.0 } else { f64::INFINITY });
        }
        Ok((diff / norm).sqrt())
    }

    /// Write the pattern as RFC-4180 CSV: spherical angles of the direction
    /// followed by real and imaginary parts of the three components of
    /// `E∞` and `H∞`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "theta,phi,e1_re,e1_im,e2_re,e2_im,e3_re,e3_im,h1_re,h1_im,h2_re,h2_im,h3_re,h3_im"
        )?;
        for (i, d) in self.directions.iter().enumerate() {
            let theta = d.z.clamp(-1.0, 1.0).acos();
            let phi = d.y.atan2(d.x);
            let e = &self.e_inf[i];
            let h = &self.h_inf[i];
            writeln!(
                w,
                "{theta},{phi},{},{},{},{},{},{},{},{},{},{},{},{}",
                e.x.re, e.x.im, e.y.re, e.y.im, e.z.re, e.z.im,
                h.x.re, h.x.im, h.y.re, h.y.im, h.z.re, h.z.im
            )?;
        }
        Ok(())
    }
}

/// Far field of one direction from Cauchy data, `(E∞, H∞)` by the two
/// independent surface integrals.
pub fn far_field_direction(data: &CauchyData, xhat: &Vec3) -> Result<(CVec3, CVec3)> {
    if (xhat.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "observation direction must be unit, |x̂| = {}",
            xhat.norm()
        )));
    }
    let kappa = data.kappa();
    let quad = data.quad();
    let (nu_x_e, nu_x_h) = data.traces();
    let ik = C64::new(0.0, kappa);
    let amp = ik / C64::from(4.0 * std::f64::consts::PI);
    let xc = CVec3::new(C64::from(xhat.x), C64::from(xhat.y), C64::from(xhat.z));

    let mut e_acc = CVec3::zeros();
    let mut h_acc = CVec3::zeros();
    for i in 0..quad.points.len() {
        let phase = (-ik * xhat.dot(&quad.points[i])).exp() * quad.weights[i];
        e_acc += (nu_x_e[i] + nu_x_h[i].cross(&xc)) * phase;
        h_acc += (nu_x_h[i] - nu_x_e[i].cross(&xc)) * phase;
    }
    Ok((xc.cross(&e_acc) * amp, xc.cross(&h_acc) * amp))
}

/// Far-field pattern over a direction set (directions evaluated in
/// parallel, output in input order).
pub fn far_field_from_cauchy(data: &CauchyData, directions: &[Vec3]) -> Result<FarFieldPattern> {
    let samples: Vec<(CVec3, CVec3)> = directions
        .par_iter()
        .map(|d| far_field_direction(data, d))
        .collect::<Result<_>>()?;
    let (e_inf, h_inf) = samples.into_iter().unzip();
    Ok(FarFieldPattern { directions: directions.to_vec(), e_inf, h_inf })
}

/// Far-field pattern of a solved scattered field, synthesized from its
/// Cauchy data on the outer sphere with an order-2 surface rule.
pub fn far_field(
    mesh: &TetMesh,
    sol: &CoupledSolution,
    directions: &[Vec3],
) -> Result<FarFieldPattern> {
    let data = CauchyData::from_solution(mesh, sol, Boundary::Sphere, 2)?;
    far_field_from_cauchy(&data, directions)
}

/// Gauss–Legendre × uniform direction grid with quadrature weights for
/// weighted far-field norms (`n_theta · n_phi` unit directions).
pub fn direction_grid(n_theta: usize, n_phi: usize) -> (Vec<Vec3>, Vec<f64>) {
    let quad = sphere_gauss_grid(n_theta, n_phi, 1.0);
    (quad.points, quad.weights)
}
