//! The regularized auxiliary transmission system on a bounded domain.
//!
//! Both fields live on the same domain `Ω` (realized as the BODY region of
//! the mesh): given volume data `ξ1, ξ2` and boundary data `h1, h2`, find
//! `(H, u)` with
//!
//! ```text
//! curl curl H + H = ξ1          in Ω
//! ∇·(Ĉ:∇u) − u   = ξ2          in Ω
//! T̂u − b̂1 ν×H                = h1  on ∂Ω
//! ν×curl H + (iκ/b̂2) ν×u     = h2  on ∂Ω
//! ```
//!
//! The zeroth-order terms have the *coercive* sign (`+H`, `−u`), so with
//! `Im(b̂1·b̄̂2) < 0` the sesquilinear form
//!
//! ```text
//! Â((u,H),(v,w)) = ∫_Ω [curl H·curl w̄ + H·w̄]
//!                + (−iκ)/(b̂1·b̄̂2) ∫_Ω [ℰ̂(u,v̄) + u·v̄]
//!                + (iκ/b̂2) ⟨γ_t w̄, γ_T u⟩_∂Ω
//!                + (iκ/b̄̂2) ⟨γ_t H, γ_T v̄⟩_∂Ω
//! ```
//!
//! has a positive-definite Hermitian part — no interior resonance can make
//! it singular, which is exactly why the uniqueness machinery routes its
//! density argument through this system instead of the physical one. The
//! load functional is
//!
//! ```text
//! F̂(v,w) = (−iκ)/(b̂1·b̄̂2) ⟨h1, v̄⟩ − ⟨h2, γ_T w̄⟩
//!        + ∫_Ω ξ1·w̄ + (iκ)/(b̂1·b̄̂2) ∫_Ω ξ2·v̄.
//! ```
//!
//! Assembly reuses the volume and interface-coupling kernels of the
//! scattering system verbatim; the only differences are the block factors,
//! the region both spaces live on, and the absence of the exterior map.

use crate::error::{Error, Result};
use crate::fem::assemble::{
    elastic_volume_triplets, interface_coupling_triplets, maxwell_volume_triplets,
    AssemblyOptions, BlockLayout, CoupledSystem,
};
use crate::fem::spaces::{
    barycentric_in, tet_gradients, whitney_values, EdgeSpace, VectorNodalSpace,
};
use crate::geometry::quadrature::{tet_rule, triangle_rule};
use crate::geometry::{Boundary, Region, TetMesh};
use crate::materials::{CouplingConstants, StiffnessTensor};
use crate::{C64, CVec3, Vec3};

use faer::sparse::SparseColMat;

/// Assemble the auxiliary system and its load vector on the BODY region of
/// `mesh`. The data closures receive interior points (`ξ`) or boundary
/// points with the outward normal (`h`); `h2` must be tangential.
///
/// Requires `Im(b̂1·b̄̂2) < 0` (the full admissibility condition with
/// `Re(b̂1·b̄̂2) = 0` is *not* needed here).
#[allow(clippy::too_many_arguments)]
pub fn assemble_auxiliary(
    mesh: &TetMesh,
    stiffness: &StiffnessTensor,
    bc: &CouplingConstants,
    kappa: f64,
    xi1: &dyn Fn(&Vec3) -> CVec3,
    xi2: &dyn Fn(&Vec3) -> CVec3,
    h1: &dyn Fn(&Vec3, &Vec3) -> CVec3,
    h2: &dyn Fn(&Vec3, &Vec3) -> CVec3,
    opts: &AssemblyOptions,
) -> Result<(CoupledSystem, Vec<C64>)> {
    let product = bc.b1() * bc.b2().conj();
    if product.im >= 0.0 {
        return Err(Error::InadmissibleCoupling(format!(
            "auxiliary system needs Im(b̂1·b̄̂2) < 0, got {product}"
        )));
    }
    if kappa <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "auxiliary system needs a positive wave number, got {kappa}"
        )));
    }

    let nodal = VectorNodalSpace::new(mesh, Region::Body);
    let edge = EdgeSpace::new(mesh, Region::Body);
    let nu = nodal.dim();
    let ne = edge.dim();
    let layout = BlockLayout { elastic: 0..nu, maxwell: nu..nu + ne, modes: nu + ne..nu + ne };

    let ik = C64::i() * kappa;
    let alpha = -ik / product; // (−iκ)/(b̂1·b̄̂2)
    let one = C64::new(1.0, 0.0);

    let mut trips =
        elastic_volume_triplets(mesh, &nodal, stiffness, alpha, &|_| alpha, layout.elastic.start);
    trips.extend(maxwell_volume_triplets(mesh, &edge, one, one, layout.maxwell.start));
    trips.extend(interface_coupling_triplets(
        mesh,
        &nodal,
        &edge,
        opts.interface_quadrature_order,
        ik / bc.b2().conj(),
        ik / bc.b2(),
        layout.elastic.start,
        layout.maxwell.start,
    )?);

    let dim = layout.dim();
    let matrix = SparseColMat::try_new_from_triplets(dim, dim, &trips)
        .map_err(|e| Error::SolverBreakdown(format!("sparse assembly failed: {e:?}")))?;

    // Load vector: volume terms by the degree-2 tet rule, boundary terms by
    // the interface facet rule.
    let mut rhs = vec![C64::new(0.0, 0.0); dim];
    let (tet_pts, tet_wts) = tet_rule(2)?;
    for &ti in nodal.tets() {
        let (tverts, _) = mesh.tets[ti];
        let (g, vol) = tet_gradients(mesh, ti);
        let signs = edge.signs(ti).unwrap();
        let dofs = edge.tet_dofs(ti).unwrap();
        let verts = [
            mesh.vertices[tverts[0]],
            mesh.vertices[tverts[1]],
            mesh.vertices[tverts[2]],
            mesh.vertices[tverts[3]],
        ];
        for (lam, w) in tet_pts.iter().zip(&tet_wts) {
            let x = lam[0] * verts[0] + lam[1] * verts[1] + lam[2] * verts[2] + lam[3] * verts[3];
            let weight = vol * w;
            let x1 = xi1(&x);
            let x2 = xi2(&x);
            let wv = whitney_values(&g, lam, &signs);
            for e in 0..6 {
                let pair = x1[0] * wv[e][0] + x1[1] * wv[e][1] + x1[2] * wv[e][2];
                rhs[layout.maxwell.start + dofs[e].0] += pair * weight;
            }
            for a in 0..4 {
                let slot = nodal.vertex_slot(tverts[a]).unwrap();
                for c in 0..3 {
                    rhs[layout.elastic.start + 3 * slot + c] +=
                        (ik / product) * x2[c] * (weight * lam[a]);
                }
            }
        }
    }

    let (bary, wts) = triangle_rule(opts.interface_quadrature_order)?;
    let mut h2_scale = 0.0f64;
    let mut h2_normal = 0.0f64;
    for k in mesh.tagged_facets(Boundary::Interface) {
        let tb = mesh.facet_adjacent(k).0.ok_or_else(|| {
            Error::MeshInvariant("interface facet without a body-side tet".into())
        })?;
        let tri = mesh.facet_vertices(k);
        let area = mesh.facet_area(k);
        let nrm = mesh.facet_normal(k);
        let (tverts, _) = mesh.tets[tb];
        let (g, _) = tet_gradients(mesh, tb);
        let signs = edge.signs(tb).unwrap();
        let dofs = edge.tet_dofs(tb).unwrap();
        for (b, w) in bary.iter().zip(&wts) {
            let x = b[0] * tri[0] + b[1] * tri[1] + b[2] * tri[2];
            let weight = w * area;
            let v1 = h1(&x, &nrm);
            let v2 = h2(&x, &nrm);
            h2_scale = h2_scale.max(v2.norm());
            h2_normal =
                h2_normal.max((v2[0] * nrm[0] + v2[1] * nrm[1] + v2[2] * nrm[2]).norm());
            let lam = barycentric_in(mesh, tb, &x);
            for a in 0..4 {
                let slot = nodal.vertex_slot(tverts[a]).unwrap();
                for c in 0..3 {
                    rhs[layout.elastic.start + 3 * slot + c] += alpha * v1[c] * (weight * lam[a]);
                }
            }
            let wv = whitney_values(&g, &lam, &signs);
            for e in 0..6 {
                let wt = wv[e] - nrm * wv[e].dot(&nrm);
                let pair = v2[0] * wt[0] + v2[1] * wt[1] + v2[2] * wt[2];
                rhs[layout.maxwell.start + dofs[e].0] -= pair * weight;
            }
        }
    }
    if h2_scale > 0.0 && h2_normal / h2_scale > 1e-8 {
        return Err(Error::NotTangential { ratio: h2_normal / h2_scale, tol: 1e-8 });
    }

    Ok((
        CoupledSystem {
            matrix,
            layout,
            nodal,
            edge,
            dtn: None,
            kappa,
            bc: bc.clone(),
        },
        rhs,
    ))
}
