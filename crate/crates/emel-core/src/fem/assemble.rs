//! Assembly of the coupled scattering system.
//!
//! The discrete unknown is `x = [u | H | c]`:
//!
//! * `u` — vector P1 displacement coefficients on the body (space `Q_h`),
//! * `H` — Nédélec edge coefficients of the magnetic field on the shell
//!   (space `X_h`),
//! * `c` — the `2·N(N+2)` coefficients of the tangential trace `x̂ × H` on
//!   the truncation sphere in the orthonormal vector spherical-harmonic
//!   basis, appended as bordered unknowns so the nonlocal exterior map stays
//!   a sparse block instead of densifying the edge–edge coupling.
//!
//! With `γ_t v = ν × v` (ν outward from the body) and `γ_T` the tangential
//! trace, the sesquilinear form reads
//!
//! ```text
//! 𝒜((u,H),(v,w)) =  (−iκ)/(b1·b̄2) ∫_D [ℰ(u, v̄) − ρω² u·v̄]
//!                 + (iκ/b̄2) ⟨γ_t H, γ_T v̄⟩_∂D
//!                 − ∫_shell [curl H · curl w̄ − κ² H·w̄]
//!                 − iκ ⟨G_e(x̂×H), γ_T w̄⟩_S_R
//!                 + (iκ/b2) ⟨γ_t w̄, γ_T u⟩_∂D
//! ```
//!
//! where `ℰ(u,v) = C_ijkl ∂u_k/∂x_l ∂v_i/∂x_j` and `G_e` is the exterior
//! Calderón (capacity) map. The matrix rows/columns follow [`BlockLayout`];
//! the border rows enforce `T₁·H − G·c = 0`, the weighted least-squares
//! projection of the sphere trace onto the harmonic basis (`G` the Gram
//! matrix of the basis over the faceted sphere), and the Maxwell rows carry
//! the exterior map as `−iκ·T₂ᵀ·M·c` with `M` the mode-diagonal multiplier
//! table of the [`DtNOperator`].
//!
//! All surface integrals use flat-facet rules: tangential traces against a
//! facet are exact for the Whitney basis (the cross product with the facet
//! normal annihilates the normal component), so the only geometric crime is
//! the usual `O(h²)` faceting of the curved surfaces.

use std::ops::Range;

use faer::sparse::{SparseColMat, Triplet};
use rayon::prelude::*;

use crate::dtn::DtNOperator;
use crate::error::{Error, Result};
use crate::fem::spaces::{
    barycentric_in, tet_gradients, whitney_curls, whitney_values, EdgeSpace, VectorNodalSpace,
    LOCAL_EDGES,
};
use crate::geometry::quadrature::triangle_rule;
use crate::geometry::{Boundary, Region, SurfaceQuadrature, TetMesh};
use crate::kernels::{eval_tangential_basis, mode_count, mode_from_index, IncidentField};
use crate::materials::{BackgroundMedium, CouplingConstants, MassDensityField, StiffnessTensor};
use crate::{C64, CVec3, Vec3};

/// Quadrature and admissibility switches for [`assemble_coupled`].
#[derive(Debug, Clone)]
pub struct AssemblyOptions {
    /// Drop the interface coupling blocks entirely (the elastic and Maxwell
    /// problems then decouple; used by block-structure diagnostics).
    pub include_interface_coupling: bool,
    /// Assemble even when `(b1, b2)` violates the admissibility condition
    /// `Re(b1·b̄2) = 0 ∧ Im(b1·b̄2) < 0` (used by the energy-balance
    /// experiments that demonstrate what inadmissibility breaks).
    pub allow_inadmissible: bool,
    /// Facet rule order for the interface coupling and load integrals. The
    /// coupling integrands are quadratic in the barycentric coordinates, so
    /// the default order 2 integrates them exactly.
    pub interface_quadrature_order: usize,
    /// Facet rule order for the sphere trace moments. Order 4 resolves the
    /// highest harmonic oscillation (degree ≈ 15) against the linear basis
    /// on each facet; the residual error is dominated by the `O(h²)`
    /// faceting of the sphere either way.
    pub sphere_quadrature_order: usize,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        Self {
            include_interface_coupling: true,
            allow_inadmissible: false,
            interface_quadrature_order: 2,
            sphere_quadrature_order: 4,
        }
    }
}

/// Index ranges of the three unknown blocks inside the assembled matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    /// Displacement coefficients (3 per body vertex).
    pub elastic: Range<usize>,
    /// Edge coefficients of the magnetic field.
    pub maxwell: Range<usize>,
    /// Sphere-trace mode coefficients (`2·N(N+2)`; empty for systems
    /// without an exterior map).
    pub modes: Range<usize>,
}

impl BlockLayout {
    /// Dimension of the finite-element part `Q_h × X_h`.
    pub fn fe_dim(&self) -> usize {
        self.elastic.len() + self.maxwell.len()
    }

    /// Full matrix dimension including the bordered mode unknowns.
    pub fn dim(&self) -> usize {
        self.fe_dim() + self.modes.len()
    }
}

/// The assembled sparse system together with the spaces that give its rows
/// and columns meaning.
#[derive(Debug, Clone)]
pub struct CoupledSystem {
    pub matrix: SparseColMat<usize, C64>,
    pub layout: BlockLayout,
    pub nodal: VectorNodalSpace,
    pub edge: EdgeSpace,
    /// Exterior map folded into the border block; `None` for the auxiliary
    /// (bounded-domain) system.
    pub dtn: Option<DtNOperator>,
    pub kappa: f64,
    pub bc: CouplingConstants,
}

impl CoupledSystem {
    /// Dimension of the finite-element part (`dim Q_h + dim X_h`).
    pub fn fe_dim(&self) -> usize {
        self.layout.fe_dim()
    }

    /// Full system dimension.
    pub fn dim(&self) -> usize {
        self.layout.dim()
    }
}

/// `ν × v` for a real normal and a complex vector.
pub(crate) fn cross_rc(n: &Vec3, v: &CVec3) -> CVec3 {
    CVec3::new(
        v[2] * n[1] - v[1] * n[2],
        v[0] * n[2] - v[2] * n[0],
        v[1] * n[0] - v[0] * n[1],
    )
}

/// `∫_K λ_a λ_b = |K| (1 + δ_ab) / 20`, the P1 mass kernel.
#[inline]
fn p1_moment(vol: f64, a: usize, b: usize) -> f64 {
    vol * if a == b { 2.0 } else { 1.0 } / 20.0
}

/// Triplets of the elastic volume block
/// `stiff_factor · ∫ ℰ(φ_b e_d, φ_a e_c) + mass_factor(cell) · δ_cd ∫ φ_a φ_b`
/// over the tets of `nodal`, with `cell` the position of the tet in
/// [`VectorNodalSpace::tets`] order.
pub(crate) fn elastic_volume_triplets(
    mesh: &TetMesh,
    nodal: &VectorNodalSpace,
    stiffness: &StiffnessTensor,
    stiff_factor: C64,
    mass_factor: &(dyn Fn(usize) -> C64 + Sync),
    offset: usize,
) -> Vec<Triplet<usize, usize, C64>> {
    let blocks: Vec<Vec<Triplet<usize, usize, C64>>> = nodal
        .tets()
        .par_iter()
        .enumerate()
        .map(|(cell, &ti)| {
            let (t, _) = mesh.tets[ti];
            let (g, vol) = tet_gradients(mesh, ti);
            let mf = mass_factor(cell);
            let slots: Vec<usize> = t.iter().map(|&v| nodal.vertex_slot(v).unwrap()).collect();
            let mut out = Vec::with_capacity(144);
            for a in 0..4 {
                for b in 0..4 {
                    let mass = p1_moment(vol, a, b);
                    for c in 0..3 {
                        for d in 0..3 {
                            let mut e = 0.0;
                            for j in 0..3 {
                                for l in 0..3 {
                                    e += stiffness.get(c, j, d, l) * g[a][j] * g[b][l];
                                }
                            }
                            let mut v = stiff_factor * (vol * e);
                            if c == d {
                                v += mf * mass;
                            }
                            out.push(Triplet::new(
                                offset + 3 * slots[a] + c,
                                offset + 3 * slots[b] + d,
                                v,
                            ));
                        }
                    }
                }
            }
            out
        })
        .collect();
    // Serial concatenation in tet order keeps the triplet stream, and hence
    // the summed matrix, bit-identical across thread counts.
    blocks.into_iter().flatten().collect()
}

/// Triplets of the edge-element volume block
/// `curl_factor · ∫ curl w_k · curl w_m + mass_factor · ∫ w_k · w_m`
/// over the tets of `edge`. Both element integrals are exact closed forms.
pub(crate) fn maxwell_volume_triplets(
    mesh: &TetMesh,
    edge: &EdgeSpace,
    curl_factor: C64,
    mass_factor: C64,
    offset: usize,
) -> Vec<Triplet<usize, usize, C64>> {
    let blocks: Vec<Vec<Triplet<usize, usize, C64>>> = edge
        .tets()
        .par_iter()
        .map(|&ti| {
            let (g, vol) = tet_gradients(mesh, ti);
            let dofs = edge.tet_dofs(ti).unwrap();
            let signs = {
                let mut s = [0.0; 6];
                for (k, &(_, sgn)) in dofs.iter().enumerate() {
                    s[k] = sgn;
                }
                s
            };
            let curls = whitney_curls(&g, &signs);
            let mut out = Vec::with_capacity(36);
            for k in 0..6 {
                for m in 0..6 {
                    let (a, b) = LOCAL_EDGES[k];
                    let (c, d) = LOCAL_EDGES[m];
                    // ∫ w_k·w_m expanded through the P1 moments.
                    let mass = signs[k]
                        * signs[m]
                        * (p1_moment(vol, a, c) * g[b].dot(&g[d])
                            - p1_moment(vol, a, d) * g[b].dot(&g[c])
                            - p1_moment(vol, b, c) * g[a].dot(&g[d])
                            + p1_moment(vol, b, d) * g[a].dot(&g[c]));
                    let v = curl_factor * (vol * curls[k].dot(&curls[m])) + mass_factor * mass;
                    out.push(Triplet::new(offset + dofs[k].0, offset + dofs[m].0, v));
                }
            }
            out
        })
        .collect();
    blocks.into_iter().flatten().collect()
}

/// Triplets of the interface coupling blocks. With
/// `S[(a,c), e] = ∫_∂D (ν × w_e) · e_c φ_a ds` (ν outward from the body),
/// the entry `u_row_factor · S` is placed at `(u-row, H-col)` and
/// `h_row_factor · S` at `(H-row, u-col)`; the shared `S` makes the two
/// blocks structural transposes of one another.
///
/// The edge-side tet of each facet follows the region of `edge`: the shell
/// owner for the scattering system, the body owner for the auxiliary system
/// (where both fields live on the body).
pub(crate) fn interface_coupling_triplets(
    mesh: &TetMesh,
    nodal: &VectorNodalSpace,
    edge: &EdgeSpace,
    order: usize,
    u_row_factor: C64,
    h_row_factor: C64,
    u_offset: usize,
    h_offset: usize,
) -> Result<Vec<Triplet<usize, usize, C64>>> {
    let (bary, wts) = triangle_rule(order)?;
    let mut out = Vec::new();
    for k in mesh.tagged_facets(Boundary::Interface) {
        let (body, shell) = mesh.facet_adjacent(k);
        let tb = body.ok_or_else(|| {
            Error::MeshInvariant("interface facet without a body-side tet".into())
        })?;
        let te = match edge.region() {
            Region::Shell => shell,
            Region::Body => tb,
        };
        let tri = mesh.facet_vertices(k);
        let area = mesh.facet_area(k);
        let nu = mesh.facet_normal(k);
        let (tb_verts, _) = mesh.tets[tb];
        let u_slots: Vec<usize> =
            tb_verts.iter().map(|&v| nodal.vertex_slot(v).unwrap()).collect();
        let dofs = edge.tet_dofs(te).unwrap();
        let signs = edge.signs(te).unwrap();
        let (ge, _) = tet_gradients(mesh, te);

        // S accumulated per facet: 4 vertices × 3 components × 6 edges.
        let mut s = [[[0.0f64; 6]; 3]; 4];
        for (b, w) in bary.iter().zip(&wts) {
            let x = b[0] * tri[0] + b[1] * tri[1] + b[2] * tri[2];
            let weight = w * area;
            let lam_b = barycentric_in(mesh, tb, &x);
            let lam_e = barycentric_in(mesh, te, &x);
            let wv = whitney_values(&ge, &lam_e, &signs);
            for (e, we) in wv.iter().enumerate() {
                let nxw = nu.cross(we);
                for a in 0..4 {
                    let phi = lam_b[a];
                    for c in 0..3 {
                        s[a][c][e] += weight * phi * nxw[c];
                    }
                }
            }
        }
        for a in 0..4 {
            for c in 0..3 {
                let row_u = u_offset + 3 * u_slots[a] + c;
                for e in 0..6 {
                    let col_h = h_offset + dofs[e].0;
                    let sv = s[a][c][e];
                    out.push(Triplet::new(row_u, col_h, u_row_factor * sv));
                    out.push(Triplet::new(col_h, row_u, h_row_factor * sv));
                }
            }
        }
    }
    Ok(out)
}

/// Border and exterior-map triplets: the trace-projection rows
/// `T₁·H − G·c = 0` and the Maxwell-row exterior column `−iκ·T₂ᵀ·(M c)`.
fn sphere_border_triplets(
    mesh: &TetMesh,
    edge: &EdgeSpace,
    dtn: &DtNOperator,
    order: usize,
    layout: &BlockLayout,
) -> Result<Vec<Triplet<usize, usize, C64>>> {
    let n_max = dtn.order();
    let k1 = mode_count(n_max);
    let k2 = 2 * k1;
    let radius = dtn.radius();
    let minus_ik = -C64::i() * dtn.kappa();
    let (bary, wts) = triangle_rule(order)?;

    // Local index over the edges that touch the sphere (all six edges of
    // each owner tet; off-facet edges contribute zero moments but keep the
    // pattern symmetric with the exterior column).
    let facets = mesh.tagged_facets(Boundary::Sphere);
    let mut local_of: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut local_edges: Vec<usize> = Vec::new();
    for &k in &facets {
        let (_, ts) = mesh.facet_adjacent(k);
        for &(dof, _) in edge.tet_dofs(ts).unwrap() {
            local_of.entry(dof).or_insert_with(|| {
                local_edges.push(dof);
                local_edges.len() - 1
            });
        }
    }
    let n_loc = local_edges.len();

    // Dense accumulation of the trace moments and the basis Gram matrix.
    let mut t1 = vec![C64::new(0.0, 0.0); k2 * n_loc]; // B_k · (ν × w_e)
    let mut t2 = vec![C64::new(0.0, 0.0); k2 * n_loc]; // B_k · w_e,T
    let mut gram = vec![C64::new(0.0, 0.0); k2 * k2];

    for &k in &facets {
        let (_, ts) = mesh.facet_adjacent(k);
        let tri = mesh.facet_vertices(k);
        let area = mesh.facet_area(k);
        let nu = mesh.facet_normal(k);
        let dofs = edge.tet_dofs(ts).unwrap();
        let signs = edge.signs(ts).unwrap();
        let (ge, _) = tet_gradients(mesh, ts);
        for (b, w) in bary.iter().zip(&wts) {
            let x = b[0] * tri[0] + b[1] * tri[1] + b[2] * tri[2];
            let weight = w * area;
            let xhat = x / x.norm();
            let (_, us, vs) = eval_tangential_basis(n_max, &xhat);
            let lam = barycentric_in(mesh, ts, &x);
            let wv = whitney_values(&ge, &lam, &signs);
            // Facet-tangential part of each edge function and its rotation.
            let mut wt = [Vec3::zeros(); 6];
            let mut nxw = [Vec3::zeros(); 6];
            for e in 0..6 {
                wt[e] = wv[e] - nu * wv[e].dot(&nu);
                nxw[e] = nu.cross(&wv[e]);
            }
            for m in 0..k1 {
                let bu = us[m] / radius;
                let bv = vs[m] / radius;
                for e in 0..6 {
                    let le = local_of[&dofs[e].0];
                    t1[m * n_loc + le] += C64::new(weight * bu.dot(&nxw[e]), 0.0);
                    t1[(m + k1) * n_loc + le] += C64::new(weight * bv.dot(&nxw[e]), 0.0);
                    t2[m * n_loc + le] += C64::new(weight * bu.dot(&wt[e]), 0.0);
                    t2[(m + k1) * n_loc + le] += C64::new(weight * bv.dot(&wt[e]), 0.0);
                }
            }
            // Gram of the (near-orthonormal) basis over the faceted sphere;
            // upper triangle, mirrored below.
            for i in 0..k2 {
                let bi = if i < k1 { us[i] / radius } else { vs[i - k1] / radius };
                for j in i..k2 {
                    let bj = if j < k1 { us[j] / radius } else { vs[j - k1] / radius };
                    gram[i * k2 + j] += C64::new(weight * bi.dot(&bj), 0.0);
                }
            }
        }
    }
    for i in 0..k2 {
        for j in 0..i {
            gram[i * k2 + j] = gram[j * k2 + i];
        }
    }

    let mut out = Vec::with_capacity(2 * k2 * n_loc + k2 * k2);
    // Border rows: T₁·H − G·c = 0.
    for m in 0..k2 {
        let row = layout.modes.start + m;
        for le in 0..n_loc {
            out.push(Triplet::new(row, layout.maxwell.start + local_edges[le], t1[m * n_loc + le]));
        }
        for j in 0..k2 {
            out.push(Triplet::new(row, layout.modes.start + j, -gram[m * k2 + j]));
        }
    }
    // Exterior column on the Maxwell rows: the form term
    // −iκ ⟨G_e(x̂×H), γ_T w̄⟩ with G_e(x̂×H) = Σ_m (M c)_m B_m. The
    // multiplier table swaps the two families: mode column m < K feeds the
    // V-family output m+K through g_u(n), and column m ≥ K feeds the
    // U-family output m−K through g_v(n).
    for m in 0..k2 {
        let (n, _) = mode_from_index(m % k1);
        let (g, src) = if m < k1 { (dtn.g_u(n), m + k1) } else { (dtn.g_v(n), m - k1) };
        let col = layout.modes.start + m;
        for le in 0..n_loc {
            let v = minus_ik * g * t2[src * n_loc + le];
            out.push(Triplet::new(layout.maxwell.start + local_edges[le], col, v));
        }
    }
    Ok(out)
}

/// Assemble the coupled scattering system on a validated two-region mesh.
///
/// `rho` must carry one cell value per body tet, indexed in body-tet (mesh)
/// order; the exterior map `dtn` must match the medium wave number and the
/// mesh truncation radius.
pub fn assemble_coupled(
    mesh: &TetMesh,
    stiffness: &StiffnessTensor,
    rho: &MassDensityField,
    medium: &BackgroundMedium,
    bc: &CouplingConstants,
    dtn: &DtNOperator,
    opts: &AssemblyOptions,
) -> Result<CoupledSystem> {
    if !opts.allow_inadmissible {
        bc.require_admissible()?;
    }
    let kappa = medium.kappa();
    if (dtn.kappa() - C64::new(kappa, 0.0)).norm() > 1e-10 * kappa.max(1.0) {
        return Err(Error::InvalidInput(format!(
            "exterior map wave number {} does not match the medium κ = {kappa}",
            dtn.kappa()
        )));
    }
    if (dtn.radius() - mesh.radius()).abs() > 1e-9 * mesh.radius() {
        return Err(Error::InvalidInput(format!(
            "exterior map radius {} does not match the mesh radius {}",
            dtn.radius(),
            mesh.radius()
        )));
    }

    let nodal = VectorNodalSpace::new(mesh, Region::Body);
    let edge = EdgeSpace::new(mesh, Region::Shell);
    if rho.n_cells() != nodal.tets().len() {
        return Err(Error::InvalidInput(format!(
            "density field has {} cells but the body has {} tets",
            rho.n_cells(),
            nodal.tets().len()
        )));
    }

    let k2 = 2 * mode_count(dtn.order());
    let nu = nodal.dim();
    let ne = edge.dim();
    let layout = BlockLayout {
        elastic: 0..nu,
        maxwell: nu..nu + ne,
        modes: nu + ne..nu + ne + k2,
    };

    let b1 = bc.b1();
    let b2 = bc.b2();
    let ik = C64::i() * kappa;
    let fs = -ik / (b1 * b2.conj());
    let omega2 = medium.omega() * medium.omega();

    let mut trips = elastic_volume_triplets(
        mesh,
        &nodal,
        stiffness,
        fs,
        &|cell| fs * (-omega2 * rho.value(cell)),
        layout.elastic.start,
    );
    trips.extend(maxwell_volume_triplets(
        mesh,
        &edge,
        -C64::new(1.0, 0.0),
        C64::new(kappa * kappa, 0.0),
        layout.maxwell.start,
    ));
    if opts.include_interface_coupling {
        trips.extend(interface_coupling_triplets(
            mesh,
            &nodal,
            &edge,
            opts.interface_quadrature_order,
            ik / b2.conj(),
            ik / b2,
            layout.elastic.start,
            layout.maxwell.start,
        )?);
    }
    trips.extend(sphere_border_triplets(
        mesh,
        &edge,
        dtn,
        opts.sphere_quadrature_order,
        &layout,
    )?);

    let dim = layout.dim();
    let matrix = SparseColMat::try_new_from_triplets(dim, dim, &trips)
        .map_err(|e| Error::SolverBreakdown(format!("sparse assembly failed: {e:?}")))?;

    Ok(CoupledSystem {
        matrix,
        layout,
        nodal,
        edge,
        dtn: Some(dtn.clone()),
        kappa,
        bc: bc.clone(),
    })
}

/// Transmission traces of an incident electromagnetic field on a surface
/// quadrature: `f1 = b1 ν × H^i` and `f2 = b2 ν × E^i = −(b2/iκ) ν × curl H^i`,
/// evaluated at each quadrature point.
///
/// These are the data that make the scattered field `H^s` solve the general
/// transmission problem: subtracting the incident field from the physical
/// conditions `Tu = b1 ν×H` and `ν×u = b2 ν×E` on the total field leaves
/// exactly `(f1, f2)` on the right-hand side.
pub fn incident_traces(
    inc: &IncidentField,
    quad: &SurfaceQuadrature,
    bc: &CouplingConstants,
    kappa: f64,
) -> Result<(Vec<CVec3>, Vec<CVec3>)> {
    let mut f1 = Vec::with_capacity(quad.points.len());
    let mut f2 = Vec::with_capacity(quad.points.len());
    for (x, n) in quad.points.iter().zip(&quad.normals) {
        let (e, h) = inc.eval(x, kappa)?;
        f1.push(cross_rc(n, &h) * bc.b1());
        f2.push(cross_rc(n, &e) * bc.b2());
    }
    Ok((f1, f2))
}

/// Galerkin load vector for transmission data `(f1, f2)` given at the points
/// of the interface quadrature `quad` (built by
/// `mesh.surface_quadrature(Interface, ·)`, so `quad.facets` indexes the
/// interface facets in `mesh.tagged_facets(Interface)` order):
///
/// ```text
/// ℱ(v, w) = (−iκ)/(b1·b̄2) ⟨f1, v̄⟩_∂D − (iκ/b2) ⟨f2, γ_T w̄⟩_∂D
/// ```
///
/// Rejects `f2` with a relative normal component above `1e-8` — the datum
/// is a tangential trace, and a normal part would silently change the
/// problem being solved.
pub fn assemble_rhs(
    mesh: &TetMesh,
    system: &CoupledSystem,
    quad: &SurfaceQuadrature,
    f1: &[CVec3],
    f2: &[CVec3],
) -> Result<Vec<C64>> {
    if f1.len() != quad.points.len() || f2.len() != quad.points.len() {
        return Err(Error::InvalidInput(format!(
            "trace data length {}/{} does not match the {} quadrature points",
            f1.len(),
            f2.len(),
            quad.points.len()
        )));
    }
    let scale = f2.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    if scale > 0.0 {
        let worst = f2
            .iter()
            .zip(&quad.normals)
            .map(|(v, n)| (v[0] * n[0] + v[1] * n[1] + v[2] * n[2]).norm())
            .fold(0.0f64, f64::max);
        let ratio = worst / scale;
        if ratio > 1e-8 {
            return Err(Error::NotTangential { ratio, tol: 1e-8 });
        }
    }

    let interface = mesh.tagged_facets(Boundary::Interface);
    let b1 = system.bc.b1();
    let b2 = system.bc.b2();
    let ik = C64::i() * system.kappa;
    let fu = -ik / (b1 * b2.conj());
    let fh = -ik / b2;

    let mut rhs = vec![C64::new(0.0, 0.0); system.dim()];
    let mut cached: Option<(usize, usize, usize)> = None; // (local facet, body tet, edge tet)
    for (i, &fi) in quad.facets.iter().enumerate() {
        let (tb, te) = match cached {
            Some((f, tb, te)) if f == fi => (tb, te),
            _ => {
                let k = interface[fi];
                let (body, shell) = mesh.facet_adjacent(k);
                let tb = body.ok_or_else(|| {
                    Error::MeshInvariant("interface facet without a body-side tet".into())
                })?;
                let te = match system.edge.region() {
                    Region::Shell => shell,
                    Region::Body => tb,
                };
                cached = Some((fi, tb, te));
                (tb, te)
            }
        };
        let x = quad.points[i];
        let n = quad.normals[i];
        let w = quad.weights[i];

        let lam_b = barycentric_in(mesh, tb, &x);
        let (tverts, _) = mesh.tets[tb];
        for a in 0..4 {
            let slot = system.nodal.vertex_slot(tverts[a]).unwrap();
            for c in 0..3 {
                rhs[system.layout.elastic.start + 3 * slot + c] +=
                    fu * f1[i][c] * (w * lam_b[a]);
            }
        }

        let lam_e = barycentric_in(mesh, te, &x);
        let (ge, _) = tet_gradients(mesh, te);
        let signs = system.edge.signs(te).unwrap();
        let dofs = system.edge.tet_dofs(te).unwrap();
        let wv = whitney_values(&ge, &lam_e, &signs);
        for e in 0..6 {
            let wt = wv[e] - n * wv[e].dot(&n);
            let pair = f2[i][0] * wt[0] + f2[i][1] * wt[1] + f2[i][2] * wt[2];
            rhs[system.layout.maxwell.start + dofs[e].0] += fh * pair * w;
        }
    }
    Ok(rhs)
}
