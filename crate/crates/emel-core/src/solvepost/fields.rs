//! Pointwise field evaluation and surface Cauchy data.
//!
//! Inside the meshed domain a solution is read off directly from the finite
//! element spaces: displacement in the body, magnetic field in the shell,
//! and the electric field recovered elementwise as `E = −(1/iκ) curl H`
//! (constant per tet for the lowest-order edge space). There is no
//! electromagnetic field inside the body and no displacement in the shell,
//! so a sample is an enum, not a pair of maybe-zero vectors.
//!
//! Outside the meshed region the fields are reconstructed from tangential
//! Cauchy data `(ν×E, ν×H)` on a closed surface through the radiating
//! boundary representation
//!
//! ```text
//! E(x) = ∫ ∇ₓΦ×(ν×E) − (1/iκ) (κ²Φ (ν×H) + Hess Φ · (ν×H)) ds
//! H(x) = ∫ ∇ₓΦ×(ν×H) + (1/iκ) (κ²Φ (ν×E) + Hess Φ · (ν×E)) ds
//! ```
//!
//! which is exact for radiating fields at points exterior to the surface and
//! far smoother than the piecewise-constant finite-element curl. The same
//! Cauchy data later drives the far-field map.

use crate::error::{Error, Result};
use crate::fem::assemble::cross_rc;
use crate::fem::spaces::barycentric_in;
use crate::geometry::quadrature::SurfaceQuadrature;
use crate::geometry::{Boundary, Region, TetMesh};
use crate::kernels::waves::fundamental_solution;
use crate::solvepost::CoupledSolution;
use crate::{C64, CVec3, Vec3};

/// Field values at one point of the meshed domain.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldSample {
    /// Point in the elastic body: displacement only, there is no
    /// electromagnetic field in `D`.
    Elastic { u: CVec3 },
    /// Point in the shell: magnetic field and the elementwise electric
    /// field `E = −(1/iκ) curl H`.
    Electromagnetic { h: CVec3, e: CVec3 },
}

/// Evaluate the solution at each point. Every point must lie in the meshed
/// ball; the first point outside aborts with its coordinates.
pub fn evaluate_fields(
    mesh: &TetMesh,
    sol: &CoupledSolution,
    points: &[Vec3],
) -> Result<Vec<FieldSample>> {
    let e_factor = -C64::new(0.0, sol.kappa()).inv();
    points
        .iter()
        .map(|p| {
            let (tet, bary) = mesh
                .locate(p)
                .ok_or(Error::PointOutsideDomain { x: p.x, y: p.y, z: p.z })?;
            Ok(match mesh.tets[tet].1 {
                Region::Body => FieldSample::Elastic {
                    u: sol.nodal().eval(mesh, sol.u_coeffs(), tet, &bary),
                },
                Region::Shell => {
                    let h = sol.edge().eval(mesh, sol.h_coeffs(), tet, &bary);
                    let e = sol.edge().eval_curl(mesh, sol.h_coeffs(), tet) * e_factor;
                    FieldSample::Electromagnetic { h, e }
                }
            })
        })
        .collect()
}

/// Tangential Cauchy data `(ν×E, ν×H)` sampled on a closed surface
/// quadrature, ready for exterior evaluation and far-field synthesis.
#[derive(Debug, Clone)]
pub struct CauchyData {
    quad: SurfaceQuadrature,
    nu_x_e: Vec<CVec3>,
    nu_x_h: Vec<CVec3>,
    kappa: f64,
    /// Representative facet diameter, the scale of the near-surface guard.
    h_facet: f64,
}

impl CauchyData {
    /// Extract Cauchy data of a solved scattered field on one tagged
    /// surface. The traces are taken from the shell side (the side carrying
    /// the electromagnetic unknowns), with `ν×E = −(1/iκ) ν×curl H`
    /// elementwise.
    pub fn from_solution(
        mesh: &TetMesh,
        sol: &CoupledSolution,
        tag: Boundary,
        order: usize,
    ) -> Result<Self> {
        let quad = mesh.surface_quadrature(tag, order)?;
        let tagged = mesh.tagged_facets(tag);
        let e_factor = -C64::new(0.0, sol.kappa()).inv();

        // Shell-side owner tet and its constant curl, cached per facet.
        let owners: Vec<usize> = tagged
            .iter()
            .map(|&k| mesh.facet_adjacent(k).1)
            .collect();
        let curls: Vec<CVec3> = owners
            .iter()
            .map(|&t| sol.edge().eval_curl(mesh, sol.h_coeffs(), t) * e_factor)
            .collect();

        let mut nu_x_e = Vec::with_capacity(quad.points.len());
        let mut nu_x_h = Vec::with_capacity(quad.points.len());
        for i in 0..quad.points.len() {
            let f = quad.facets[i];
            let tet = owners[f];
            let bary = barycentric_in(mesh, tet, &quad.points[i]);
            let h = sol.edge().eval(mesh, sol.h_coeffs(), tet, &bary);
            let n = &quad.normals[i];
            nu_x_e.push(cross_rc(n, &curls[f]));
            nu_x_h.push(cross_rc(n, &h));
        }
        Ok(Self::assemble(quad, nu_x_e, nu_x_h, sol.kappa()))
    }

    /// Cauchy data from externally supplied full fields at the quadrature
    /// points (analytic reference fields, manufactured data). Lengths must
    /// match the quadrature.
    pub fn from_samples(
        quad: SurfaceQuadrature,
        e: &[CVec3],
        h: &[CVec3],
        kappa: f64,
    ) -> Result<Self> {
        if e.len() != quad.points.len() || h.len() != quad.points.len() {
            return Err(Error::InvalidInput(format!(
                "{} quadrature points but {} E and {} H samples",
                quad.points.len(),
                e.len(),
                h.len()
            )));
        }
        if !(kappa > 0.0) {
            return Err(Error::InvalidInput(format!("wave number {kappa} must be positive")));
        }
        let nu_x_e = quad.normals.iter().zip(e).map(|(n, v)| cross_rc(n, v)).collect();
        let nu_x_h = quad.normals.iter().zip(h).map(|(n, v)| cross_rc(n, v)).collect();
        Ok(Self::assemble(quad, nu_x_e, nu_x_h, kappa))
    }

    fn assemble(quad: SurfaceQuadrature, nu_x_e: Vec<CVec3>, nu_x_h: Vec<CVec3>, kappa: f64) -> Self {
        // Facet diameter from the largest per-point weight: an order-`o`
        // rule carries weight ≈ area/points, and diam² ≈ 4·area/√3 for the
        // near-equilateral facets produced by the mesh generator.
        let w_max = quad.weights.iter().cloned().fold(0.0f64, f64::max);
        let h_facet = (4.0 * 3.0 * w_max / 3.0f64.sqrt()).sqrt();
        Self { quad, nu_x_e, nu_x_h, kappa, h_facet }
    }

    /// The quadrature this data lives on.
    pub fn quad(&self) -> &SurfaceQuadrature {
        &self.quad
    }

    /// Tangential traces `(ν×E, ν×H)` at the quadrature points.
    pub fn traces(&self) -> (&[CVec3], &[CVec3]) {
        (&self.nu_x_e, &self.nu_x_h)
    }

    /// Wave number of the radiating field.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Evaluate `(E, H)` at a point exterior to the surface through the
    /// boundary representation. Points closer to the surface than half a
    /// facet diameter are rejected — the quadrature cannot resolve the
    /// near-singular kernel there.
    pub fn evaluate_exterior(&self, x: &Vec3) -> Result<(CVec3, CVec3)> {
        let dist = self
            .quad
            .points
            .iter()
            .map(|y| (x - y).norm())
            .fold(f64::INFINITY, f64::min);
        if dist < 0.5 * self.h_facet {
            return Err(Error::NearSingularity { dist });
        }

        let ik_inv = C64::new(0.0, self.kappa).inv();
        let k2 = self.kappa * self.kappa;
        let mut e = CVec3::zeros();
        let mut h = CVec3::zeros();
        for i in 0..self.quad.points.len() {
            let (phi, grad, hess) = fundamental_solution(x, &self.quad.points[i], self.kappa)?;
            let w = C64::from(self.quad.weights[i]);
            let me = &self.nu_x_e[i];
            let mh = &self.nu_x_h[i];
            let curl_e = grad.cross(me);
            let curl_h = grad.cross(mh);
            let curlcurl_h = mh * (phi * k2) + hess * mh;
            let curlcurl_e = me * (phi * k2) + hess * me;
            e += (curl_e - curlcurl_h * ik_inv) * w;
            h += (curl_h + curlcurl_e * ik_inv) * w;
        }
        Ok((e, h))
    }
}
