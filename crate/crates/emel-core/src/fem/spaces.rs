//! Discrete spaces on the two-region tetrahedral mesh.
//!
//! Two families are used throughout:
//!
//! * [`EdgeSpace`] — lowest-order Nédélec (Whitney edge) elements for the
//!   magnetic field, conforming in `H(curl)`. One degree of freedom per mesh
//!   edge of the chosen region, valued as the circulation `∫_e H · dl` along
//!   the edge directed from its lower to its higher vertex index.
//! * [`VectorNodalSpace`] — componentwise linear (P1) elements for the
//!   elastic displacement, conforming in `H¹`. Three degrees of freedom per
//!   vertex of the chosen region, ordered `3·vertex + component`.
//!
//! Both spaces are restricted to one mesh [`Region`]: the displacement lives
//! on the body, the magnetic field on the shell for the scattering system and
//! on the body for the regularized auxiliary system. All local evaluation is
//! in barycentric coordinates; gradients of the barycentric functions are
//! constant per tet and computed once via [`tet_gradients`].

use std::collections::HashMap;

use nalgebra::Matrix3;

use crate::geometry::{Region, TetMesh};
use crate::{C64, Vec3};

/// Local edges of a tetrahedron as index pairs into its vertex list, in the
/// fixed order used by every per-tet degree-of-freedom table.
pub const LOCAL_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Gradients of the four barycentric coordinate functions of tet `i`
/// (constant vectors) together with the tet volume.
pub fn tet_gradients(mesh: &TetMesh, i: usize) -> ([Vec3; 4], f64) {
    let (t, _) = mesh.tets[i];
    let v = [
        mesh.vertices[t[0]],
        mesh.vertices[t[1]],
        mesh.vertices[t[2]],
        mesh.vertices[t[3]],
    ];
    let vol = mesh.tet_volume(i);
    // ∇λ_a = (scaled inward normal of the opposite face); the cross product
    // of two face edges is ordered so the gradient points toward vertex a.
    let mut grads = [Vec3::zeros(); 4];
    for a in 0..4 {
        let [p, q, r] = match a {
            0 => [v[1], v[3], v[2]],
            1 => [v[0], v[2], v[3]],
            2 => [v[0], v[3], v[1]],
            _ => [v[0], v[1], v[2]],
        };
        grads[a] = (q - p).cross(&(r - p)) / (6.0 * vol);
    }
    (grads, vol)
}

/// Barycentric coordinates of `x` inside tet `i` (no containment check; the
/// result is exact for the affine map and may carry tiny negatives for points
/// on the boundary of the tet).
pub fn barycentric_in(mesh: &TetMesh, i: usize, x: &Vec3) -> [f64; 4] {
    let (t, _) = mesh.tets[i];
    let v = [
        mesh.vertices[t[0]],
        mesh.vertices[t[1]],
        mesh.vertices[t[2]],
        mesh.vertices[t[3]],
    ];
    let vol = mesh.tet_volume(i);
    let sub = |a: Vec3, b: Vec3, c: Vec3, d: Vec3| (b - a).cross(&(c - a)).dot(&(d - a)) / 6.0;
    [
        sub(*x, v[1], v[2], v[3]) / vol,
        sub(v[0], *x, v[2], v[3]) / vol,
        sub(v[0], v[1], *x, v[3]) / vol,
        sub(v[0], v[1], v[2], *x) / vol,
    ]
}

/// Values of the six Whitney edge functions at a barycentric point, given the
/// per-tet sign table (`w_k = s_k (λ_i ∇λ_j − λ_j ∇λ_i)` over [`LOCAL_EDGES`]).
pub fn whitney_values(grads: &[Vec3; 4], lambda: &[f64; 4], signs: &[f64; 6]) -> [Vec3; 6] {
    let mut w = [Vec3::zeros(); 6];
    for (k, &(i, j)) in LOCAL_EDGES.iter().enumerate() {
        w[k] = signs[k] * (lambda[i] * grads[j] - lambda[j] * grads[i]);
    }
    w
}

/// Curls of the six Whitney edge functions (constant per tet):
/// `curl w_k = 2 s_k ∇λ_i × ∇λ_j`.
pub fn whitney_curls(grads: &[Vec3; 4], signs: &[f64; 6]) -> [Vec3; 6] {
    let mut c = [Vec3::zeros(); 6];
    for (k, &(i, j)) in LOCAL_EDGES.iter().enumerate() {
        c[k] = 2.0 * signs[k] * grads[i].cross(&grads[j]);
    }
    c
}

/// Lowest-order Nédélec space over the tets of one region.
///
/// Global degrees of freedom are the region's mesh edges, identified by their
/// `(lo, hi)` vertex pair and numbered in lexicographic order. The basis
/// function of an edge is oriented lo → hi regardless of how each adjacent
/// tet lists the two vertices; the per-tet sign table absorbs the local
/// orientation so tangential traces match across shared faces (conformity is
/// spot-checked in the tests).
#[derive(Debug, Clone)]
pub struct EdgeSpace {
    region: Region,
    /// Mesh ids of the tets carrying this space, in mesh order.
    tets: Vec<usize>,
    /// Mesh tet id → slot in `tets`.
    tet_slot: Vec<Option<usize>>,
    /// Global edges as `(lo, hi)` vertex pairs, in dof order.
    edges: Vec<(usize, usize)>,
    /// Per region tet: `(dof, sign)` for the six local edges of [`LOCAL_EDGES`].
    dof_table: Vec<[(usize, f64); 6]>,
}

impl EdgeSpace {
    pub fn new(mesh: &TetMesh, region: Region) -> Self {
        let tets: Vec<usize> =
            (0..mesh.tets.len()).filter(|&i| mesh.tets[i].1 == region).collect();
        let mut tet_slot = vec![None; mesh.tets.len()];
        for (slot, &i) in tets.iter().enumerate() {
            tet_slot[i] = Some(slot);
        }

        let mut edges: Vec<(usize, usize)> = tets
            .iter()
            .flat_map(|&i| {
                let (t, _) = mesh.tets[i];
                LOCAL_EDGES.iter().map(move |&(a, b)| {
                    let (p, q) = (t[a], t[b]);
                    (p.min(q), p.max(q))
                })
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let index: HashMap<(usize, usize), usize> =
            edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();

        let dof_table = tets
            .iter()
            .map(|&i| {
                let (t, _) = mesh.tets[i];
                let mut row = [(0usize, 0.0f64); 6];
                for (k, &(a, b)) in LOCAL_EDGES.iter().enumerate() {
                    let (p, q) = (t[a], t[b]);
                    let dof = index[&(p.min(q), p.max(q))];
                    row[k] = (dof, if p < q { 1.0 } else { -1.0 });
                }
                row
            })
            .collect();

        Self { region, tets, tet_slot, edges, dof_table }
    }

    /// Number of degrees of freedom (region edges).
    pub fn dim(&self) -> usize {
        self.edges.len()
    }

    pub fn region(&self) -> Region {
        self.region
    }

    /// Mesh ids of the tets carrying this space.
    pub fn tets(&self) -> &[usize] {
        &self.tets
    }

    /// Global edges in dof order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `(dof, sign)` table of a tet given by its **mesh** id; `None` when the
    /// tet belongs to the other region.
    pub fn tet_dofs(&self, mesh_tet: usize) -> Option<&[(usize, f64); 6]> {
        self.tet_slot[mesh_tet].map(|s| &self.dof_table[s])
    }

    /// Signs of the six local edges of a region tet (slot order).
    pub fn signs(&self, mesh_tet: usize) -> Option<[f64; 6]> {
        self.tet_dofs(mesh_tet).map(|row| {
            let mut s = [0.0; 6];
            for (k, &(_, sign)) in row.iter().enumerate() {
                s[k] = sign;
            }
            s
        })
    }

    /// Evaluate the field with the given coefficient vector at a barycentric
    /// point of a region tet (mesh id). Panics if the tet is outside the
    /// region or the coefficient vector is too short.
    pub fn eval(&self, mesh: &TetMesh, coeffs: &[C64], mesh_tet: usize, lambda: &[f64; 4]) -> nalgebra::Vector3<C64> {
        let row = self.tet_dofs(mesh_tet).expect("tet outside the edge space region");
        let (grads, _) = tet_gradients(mesh, mesh_tet);
        let signs = self.signs(mesh_tet).unwrap();
        let w = whitney_values(&grads, lambda, &signs);
        let mut out = nalgebra::Vector3::<C64>::zeros();
        for (k, &(dof, _)) in row.iter().enumerate() {
            out += w[k].map(|c| C64::new(c, 0.0)) * coeffs[dof];
        }
        out
    }

    /// Evaluate the (piecewise constant) curl of the field on a region tet.
    pub fn eval_curl(&self, mesh: &TetMesh, coeffs: &[C64], mesh_tet: usize) -> nalgebra::Vector3<C64> {
        let row = self.tet_dofs(mesh_tet).expect("tet outside the edge space region");
        let (grads, _) = tet_gradients(mesh, mesh_tet);
        let signs = self.signs(mesh_tet).unwrap();
        let c = whitney_curls(&grads, &signs);
        let mut out = nalgebra::Vector3::<C64>::zeros();
        for (k, &(dof, _)) in row.iter().enumerate() {
            out += c[k].map(|x| C64::new(x, 0.0)) * coeffs[dof];
        }
        out
    }
}

/// Componentwise P1 space over the tets of one region.
///
/// Degrees of freedom are `3·slot + component` where `slot` numbers the
/// region's vertices in ascending mesh-vertex order.
#[derive(Debug, Clone)]
pub struct VectorNodalSpace {
    region: Region,
    /// Mesh ids of the tets carrying this space.
    tets: Vec<usize>,
    /// Mesh vertex ids with support, ascending.
    verts: Vec<usize>,
    /// Mesh vertex id → slot.
    vert_slot: Vec<Option<usize>>,
}

impl VectorNodalSpace {
    pub fn new(mesh: &TetMesh, region: Region) -> Self {
        let tets: Vec<usize> =
            (0..mesh.tets.len()).filter(|&i| mesh.tets[i].1 == region).collect();
        let mut mark = vec![false; mesh.vertices.len()];
        for &i in &tets {
            for &v in &mesh.tets[i].0 {
                mark[v] = true;
            }
        }
        let verts: Vec<usize> = (0..mesh.vertices.len()).filter(|&v| mark[v]).collect();
        let mut vert_slot = vec![None; mesh.vertices.len()];
        for (slot, &v) in verts.iter().enumerate() {
            vert_slot[v] = Some(slot);
        }
        Self { region, tets, verts, vert_slot }
    }

    /// Number of degrees of freedom (3 per region vertex).
    pub fn dim(&self) -> usize {
        3 * self.verts.len()
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn tets(&self) -> &[usize] {
        &self.tets
    }

    /// Mesh vertex ids with support, in slot order.
    pub fn verts(&self) -> &[usize] {
        &self.verts
    }

    /// Slot of a mesh vertex, or `None` without support in the region.
    pub fn vertex_slot(&self, mesh_vertex: usize) -> Option<usize> {
        self.vert_slot[mesh_vertex]
    }

    /// Degree of freedom of `(mesh vertex, component)`.
    pub fn dof(&self, mesh_vertex: usize, component: usize) -> Option<usize> {
        debug_assert!(component < 3);
        self.vert_slot[mesh_vertex].map(|s| 3 * s + component)
    }

    /// Evaluate the displacement with the given coefficients at a barycentric
    /// point of a region tet (mesh id).
    pub fn eval(&self, mesh: &TetMesh, coeffs: &[C64], mesh_tet: usize, lambda: &[f64; 4]) -> nalgebra::Vector3<C64> {
        let (t, _) = mesh.tets[mesh_tet];
        let mut out = nalgebra::Vector3::<C64>::zeros();
        for a in 0..4 {
            let slot = self.vert_slot[t[a]].expect("tet outside the nodal space region");
            for c in 0..3 {
                out[c] += coeffs[3 * slot + c] * lambda[a];
            }
        }
        out
    }

    /// Evaluate the (piecewise constant) displacement gradient `∂u_i/∂x_j`
    /// on a region tet.
    pub fn eval_gradient(&self, mesh: &TetMesh, coeffs: &[C64], mesh_tet: usize) -> Matrix3<C64> {
        let (t, _) = mesh.tets[mesh_tet];
        let (grads, _) = tet_gradients(mesh, mesh_tet);
        let mut out = Matrix3::<C64>::zeros();
        for a in 0..4 {
            let slot = self.vert_slot[t[a]].expect("tet outside the nodal space region");
            for i in 0..3 {
                for j in 0..3 {
                    out[(i, j)] += coeffs[3 * slot + i] * grads[a][j];
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::testmesh;
    use crate::geometry::quadrature::{gauss_legendre, tet_rule};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::sync::OnceLock;

    fn coarse() -> &'static TetMesh {
        static MESH: OnceLock<TetMesh> = OnceLock::new();
        MESH.get_or_init(|| testmesh::load_shipped("sphere_coarse.msh", 2.0))
    }

    /// A fixed, well-shaped but non-symmetric tet for element oracles.
    fn sample_tet_mesh() -> TetMesh {
        let vertices = vec![
            Vec3::new(0.1, 0.0, -0.05),
            Vec3::new(1.0, 0.1, 0.1),
            Vec3::new(0.2, 0.9, -0.1),
            Vec3::new(0.3, 0.25, 0.8),
        ];
        let tets = vec![([0usize, 1, 2, 3], Region::Shell)];
        let facets = vec![([0usize, 1, 2], crate::geometry::Boundary::Sphere)];
        // from_parts only bounds-checks, which is all the element oracles need.
        TetMesh::from_parts(vertices, tets, facets).unwrap()
    }

    #[test]
    fn barycentric_gradients_are_dual_to_the_vertices() {
        let mesh = sample_tet_mesh();
        let (grads, vol) = tet_gradients(&mesh, 0);
        assert!(vol > 0.0);
        let (t, _) = mesh.tets[0];
        // λ_a(v_b) = δ_ab, so ∇λ_a · (v_b − v_c) must reproduce the
        // difference of Kronecker deltas.
        for a in 0..4 {
            for b in 0..4 {
                let lam = barycentric_in(&mesh, 0, &mesh.vertices[t[b]]);
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((lam[a] - expect).abs() < 1e-12);
            }
            // Gradient consistency by finite differences of barycentric_in.
            let x = Vec3::new(0.3, 0.3, 0.2);
            let eps = 1e-3;
            for j in 0..3 {
                let mut xp = x;
                let mut xm = x;
                xp[j] += eps;
                xm[j] -= eps;
                let fd = (barycentric_in(&mesh, 0, &xp)[a] - barycentric_in(&mesh, 0, &xm)[a])
                    / (2.0 * eps);
                assert!((fd - grads[a][j]).abs() < 1e-9, "a={a} j={j}");
            }
        }
    }

    #[test]
    fn whitney_circulation_is_one_on_the_owning_edge_and_zero_elsewhere() {
        let mesh = sample_tet_mesh();
        let (grads, _) = tet_gradients(&mesh, 0);
        let signs = [1.0; 6];
        let (t, _) = mesh.tets[0];
        let (nodes, wts) = gauss_legendre(4);
        for (e, &(a, b)) in LOCAL_EDGES.iter().enumerate() {
            let pa = mesh.vertices[t[a]];
            let pb = mesh.vertices[t[b]];
            for (f, _) in LOCAL_EDGES.iter().enumerate() {
                // ∫_{a→b} w_f · dl by Gauss quadrature on the segment.
                let mut circ = 0.0;
                for (s, w) in nodes.iter().zip(&wts) {
                    let tau = 0.5 * (s + 1.0);
                    let x = pa + tau * (pb - pa);
                    let lam = barycentric_in(&mesh, 0, &x);
                    let vals = whitney_values(&grads, &lam, &signs);
                    circ += 0.5 * w * vals[f].dot(&(pb - pa));
                }
                let expect = if e == f { 1.0 } else { 0.0 };
                assert!((circ - expect).abs() < 1e-12, "edge {e} vs fn {f}: {circ}");
            }
        }
    }

    #[test]
    fn whitney_curls_match_central_finite_differences() {
        let mesh = sample_tet_mesh();
        let (grads, _) = tet_gradients(&mesh, 0);
        let signs = [1.0, -1.0, 1.0, 1.0, -1.0, 1.0];
        let curls = whitney_curls(&grads, &signs);
        let x0 = Vec3::new(0.35, 0.3, 0.15);
        // The basis is linear in x, so central differences are exact up to
        // rounding; eps = 1e-3 keeps the rounding amplification below 1e-13.
        let eps = 1e-3;
        let val = |x: &Vec3, k: usize| -> Vec3 {
            let lam = barycentric_in(&mesh, 0, x);
            whitney_values(&grads, &lam, &signs)[k]
        };
        for k in 0..6 {
            let mut fd = Vec3::zeros();
            let d = |j: usize, comp: usize| -> f64 {
                let mut xp = x0;
                let mut xm = x0;
                xp[j] += eps;
                xm[j] -= eps;
                (val(&xp, k)[comp] - val(&xm, k)[comp]) / (2.0 * eps)
            };
            fd[0] = d(1, 2) - d(2, 1);
            fd[1] = d(2, 0) - d(0, 2);
            fd[2] = d(0, 1) - d(1, 0);
            assert!((fd - curls[k]).norm() < 1e-12, "edge {k}: fd {fd:?} vs {:?}", curls[k]);
        }
    }

    #[test]
    fn p1_mass_and_whitney_mass_match_the_order_two_tet_rule() {
        let mesh = sample_tet_mesh();
        let (grads, vol) = tet_gradients(&mesh, 0);
        let signs = [1.0; 6];
        let (pts, wts) = tet_rule(2).unwrap();
        // ∫ λ_a λ_b = V (1 + δ_ab) / 20, and the Whitney mass entries via the
        // same closed form; the degree-2 rule integrates both exactly.
        for a in 0..4 {
            for b in 0..4 {
                let closed = vol * if a == b { 2.0 } else { 1.0 } / 20.0;
                let quad: f64 = pts
                    .iter()
                    .zip(&wts)
                    .map(|(lam, w)| vol * w * lam[a] * lam[b])
                    .sum();
                assert!((closed - quad).abs() < 1e-14 * vol.recip().max(1.0));
            }
        }
        for k in 0..6 {
            for m in 0..6 {
                let (a, b) = LOCAL_EDGES[k];
                let (c, d) = LOCAL_EDGES[m];
                let lil = |p: usize, q: usize| vol * if p == q { 2.0 } else { 1.0 } / 20.0;
                let closed = lil(a, c) * grads[b].dot(&grads[d])
                    - lil(a, d) * grads[b].dot(&grads[c])
                    - lil(b, c) * grads[a].dot(&grads[d])
                    + lil(b, d) * grads[a].dot(&grads[c]);
                let quad: f64 = pts
                    .iter()
                    .zip(&wts)
                    .map(|(lam, w)| {
                        let vals = whitney_values(&grads, lam, &signs);
                        vol * w * vals[k].dot(&vals[m])
                    })
                    .sum();
                assert!((closed - quad).abs() < 1e-12, "entry ({k},{m})");
            }
        }
    }

    #[test]
    fn edge_space_dimension_counts_region_edges_once() {
        let mesh = coarse();
        let shell = EdgeSpace::new(mesh, Region::Shell);
        let body = EdgeSpace::new(mesh, Region::Body);
        // Each region edge appears exactly once; a crude lower bound is six
        // edges per tet divided by the maximal edge valence in a tet mesh.
        assert!(shell.dim() > mesh.tets.iter().filter(|t| t.1 == Region::Shell).count() / 2);
        for space in [&shell, &body] {
            for &(lo, hi) in space.edges() {
                assert!(lo < hi);
            }
            let mut sorted = space.edges().to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), space.dim());
        }
    }

    #[test]
    fn edge_fields_reproduce_constants_with_zero_curl() {
        // Coefficients c·(v_hi − v_lo) interpolate the constant field c
        // exactly (constants lie in the lowest-order Nédélec space); this
        // pins both the global orientation convention and the sign table.
        let mesh = coarse();
        let space = EdgeSpace::new(mesh, Region::Shell);
        let c = Vec3::new(0.4, -1.1, 0.7);
        let coeffs: Vec<C64> = space
            .edges()
            .iter()
            .map(|&(lo, hi)| {
                C64::new(c.dot(&(mesh.vertices[hi] - mesh.vertices[lo])), 0.0)
            })
            .collect();
        let mut rng = StdRng::seed_from_u64(71);
        for _ in 0..20 {
            let slot = rng.gen_range(0..space.tets().len());
            let tet = space.tets()[slot];
            let mut lam = [0.0; 4];
            let mut s = 0.0;
            for l in lam.iter_mut() {
                *l = rng.gen_range(0.05..1.0);
                s += *l;
            }
            lam.iter_mut().for_each(|l| *l /= s);
            let v = space.eval(mesh, &coeffs, tet, &lam);
            for i in 0..3 {
                assert!((v[i].re - c[i]).abs() < 1e-12 && v[i].im.abs() < 1e-14);
            }
            let curl = space.eval_curl(mesh, &coeffs, tet);
            assert!(curl.norm() < 1e-11);
        }
    }

    #[test]
    fn tangential_traces_match_across_shared_interior_faces() {
        // Conformity spot check: on faces shared by two shell tets, the
        // tangential component of a random edge-space field must be
        // single-valued regardless of which side evaluates it.
        let mesh = coarse();
        let space = EdgeSpace::new(mesh, Region::Shell);
        let mut rng = StdRng::seed_from_u64(9431);
        let coeffs: Vec<C64> = (0..space.dim())
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();

        // Interior shell faces: sorted vertex triple → owning tets.
        let mut faces: HashMap<[usize; 3], Vec<usize>> = HashMap::new();
        for &i in space.tets() {
            let (t, _) = mesh.tets[i];
            for f in [[t[0], t[1], t[2]], [t[0], t[1], t[3]], [t[0], t[2], t[3]], [t[1], t[2], t[3]]] {
                let mut s = f;
                s.sort_unstable();
                faces.entry(s).or_default().push(i);
            }
        }
        let shared: Vec<(&[usize; 3], &Vec<usize>)> =
            faces.iter().filter(|(_, v)| v.len() == 2).collect();
        assert!(shared.len() > 50);

        let mut checked = 0;
        while checked < 50 {
            let (f, owners) = shared[rng.gen_range(0..shared.len())];
            let [a, b, c] = [mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]];
            let n = (b - a).cross(&(c - a)).normalize();
            // Random interior point of the face.
            let (r, s) = (rng.gen_range(0.1..0.45), rng.gen_range(0.1..0.45));
            let x = a + r * (b - a) + s * (c - a);
            let v0 = space.eval(mesh, &coeffs, owners[0], &barycentric_in(mesh, owners[0], &x));
            let v1 = space.eval(mesh, &coeffs, owners[1], &barycentric_in(mesh, owners[1], &x));
            let jump = v1 - v0;
            let normal_part = n.map(|t| C64::new(t, 0.0)) * (jump[0] * n[0] + jump[1] * n[1] + jump[2] * n[2]);
            let tangential_jump = (jump - normal_part).norm();
            assert!(tangential_jump < 1e-12, "face {f:?}: tangential jump {tangential_jump}");
            checked += 1;
        }
    }

    #[test]
    fn nodal_space_reproduces_affine_fields_and_their_gradients() {
        let mesh = coarse();
        let space = VectorNodalSpace::new(mesh, Region::Body);
        assert_eq!(space.dim(), 3 * space.verts().len());
        let amat = Matrix3::new(0.3, -0.2, 0.5, 0.1, 0.8, -0.4, -0.6, 0.2, 0.9);
        let b = Vec3::new(0.1, -0.7, 0.3);
        let mut coeffs = vec![C64::new(0.0, 0.0); space.dim()];
        for (slot, &v) in space.verts().iter().enumerate() {
            let u = amat * mesh.vertices[v] + b;
            for c in 0..3 {
                coeffs[3 * slot + c] = C64::new(u[c], 0.0);
            }
        }
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..10 {
            let tet = space.tets()[rng.gen_range(0..space.tets().len())];
            let lam = [0.25; 4];
            let x = {
                let (t, _) = mesh.tets[tet];
                 0.25 * (mesh.vertices[t[0]] + mesh.vertices[t[1]] + mesh.vertices[t[2]] + mesh.vertices[t[3]])
            };
            let v = space.eval(mesh, &coeffs, tet, &lam);
            let expect = amat * x + b;
            for i in 0..3 {
                assert!((v[i].re - expect[i]).abs() < 1e-12);
            }
            let g = space.eval_gradient(mesh, &coeffs, tet);
            for i in 0..3 {
                for j in 0..3 {
                    assert!((g[(i, j)].re - amat[(i, j)]).abs() < 1e-11);
                }
            }
        }
    }
}
