//! Interface energy balance of a solved scattering problem.
//!
//! For admissible transmission constants (`Re(b1·conj(b2)) = 0`,
//! `Im(b1·conj(b2)) < 0`) the total fields exchange no active power across
//! the interface:
//!
//! ```text
//! Re ∫_{∂D} (ν × conj(E_tot)) · H_tot ds = 0.
//! ```
//!
//! The discrete solution reproduces this up to consistency error, which
//! makes the normalized ratio a cheap a-posteriori check of the solve and
//! of the coupling signs. Both total traces come from the solution itself:
//! the electric one through the transmission condition
//! `ν×E_tot = (1/b2) ν×u` (body side), the magnetic one as the shell
//! scattered field plus the analytic incident field. A sign error anywhere
//! in the chain shows up as a ratio of order one that refinement does not
//! shrink; inadmissible constants break the identity outright.

use crate::error::Result;
use crate::fem::assemble::cross_rc;
use crate::fem::spaces::barycentric_in;
use crate::geometry::{Boundary, TetMesh};
use crate::kernels::IncidentField;
use crate::solvepost::CoupledSolution;
use crate::{C64, CVec3};

/// Outcome of [`energy_balance`]: the complex interface power integral, the
/// size of the integrand, and their ratio.
#[derive(Debug, Clone, Copy)]
pub struct EnergyBalanceReport {
    /// `∫_{∂D} (ν × conj(E_tot)) · H_tot ds`.
    pub interface_flux: C64,
    /// `∫_{∂D} |ν × E_tot| |H_tot| ds`, the scale the flux is judged
    /// against.
    pub normalization: f64,
    /// `|Re interface_flux| / normalization`; defined as zero for the zero
    /// solution. Never exceeds one.
    pub ratio: f64,
}

/// Evaluate the interface power balance of a solved problem under the
/// incident field it was driven by. Uses an order-2 interface rule; the
/// displacement trace is taken from the body side, the magnetic trace from
/// the shell side.
pub fn energy_balance(
    mesh: &TetMesh,
    sol: &CoupledSolution,
    inc: &IncidentField,
) -> Result<EnergyBalanceReport> {
    let quad = mesh.surface_quadrature(Boundary::Interface, 2)?;
    let tagged = mesh.tagged_facets(Boundary::Interface);
    let inv_b2 = sol.bc().b2().inv();
    let kappa = sol.kappa();

    let mut flux = C64::new(0.0, 0.0);
    let mut normalization = 0.0;
    for i in 0..quad.points.len() {
        let x = &quad.points[i];
        let n = &quad.normals[i];
        let facet = tagged[quad.facets[i]];
        let (body_tet, shell_tet) = mesh.facet_adjacent(facet);
        let body_tet = body_tet.expect("interface facets always have a body side");

        let u = sol.nodal().eval(mesh, sol.u_coeffs(), body_tet, &barycentric_in(mesh, body_tet, x));
        let nu_x_e_tot = cross_rc(n, &u) * inv_b2;

        let h_s =
            sol.edge().eval(mesh, sol.h_coeffs(), shell_tet, &barycentric_in(mesh, shell_tet, x));
        let (_, h_i) = inc.eval(x, kappa)?;
        let h_tot: CVec3 = h_s + h_i;

        let w = quad.weights[i];
        flux += C64::from(w)
            * (nu_x_e_tot.x.conj() * h_tot.x
                + nu_x_e_tot.y.conj() * h_tot.y
                + nu_x_e_tot.z.conj() * h_tot.z);
        normalization += w * nu_x_e_tot.norm() * h_tot.norm();
    }

    let ratio = if normalization > 0.0 { flux.re.abs() / normalization } else { 0.0 };
    Ok(EnergyBalanceReport { interface_flux: flux, normalization, ratio })
}
