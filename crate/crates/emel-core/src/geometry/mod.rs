//! Tetrahedral two-region meshes: the elastic body `D` (BODY) inside the
//! truncation ball of radius `R`, with the annulus meshed as SHELL. The
//! body surface carries INTERFACE facets (oriented out of `D`), the outer
//! boundary SPHERE facets (oriented out of the ball).
//!
//! A mesh is immutable after [`msh::load_mesh`] returns: every structural
//! invariant (positive volumes, conforming interface, watertight region
//! boundaries, SPHERE facets on `|x| = R`) is verified up front, and facet
//! orientations are rederived from tet adjacency rather than trusted from
//! the file. All queries are therefore safe for concurrent readers.

pub mod msh;
pub mod probes;
pub mod quadrature;

use std::collections::HashMap;

pub use msh::load_mesh;
pub use probes::{probe_points, ProbeSequence};
pub use quadrature::{sphere_gauss_grid, SurfaceQuadrature};

use crate::error::{Error, Result};
use crate::Vec3;

/// Volume region a tetrahedron belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// The elastic body `D`.
    Body,
    /// The annulus `B_R ∖ D̄` carrying the electromagnetic field.
    Shell,
}

/// Tagged boundary surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// `∂D`, shared by exactly one BODY and one SHELL tet per facet.
    Interface,
    /// `S_R = {|x| = R}`, owned by exactly one SHELL tet per facet.
    Sphere,
}

/// Conforming two-region tetrahedral mesh. See the module docs for the
/// invariants; construct through [`msh::load_mesh`].
#[derive(Debug, Clone)]
pub struct TetMesh {
    pub vertices: Vec<Vec3>,
    /// `(vertex ids, region)`, positively oriented (signed volume > 0).
    pub tets: Vec<([usize; 4], Region)>,
    /// `(vertex ids, tag)`, oriented outward from the tagged side after
    /// validation.
    pub facets: Vec<([usize; 3], Boundary)>,
    /// For each facet, the adjacent tets `(body side, shell side)`;
    /// SPHERE facets have no body side.
    facet_owners: Vec<(Option<usize>, usize)>,
    /// Outer radius `R` the SPHERE facets were validated against.
    radius: f64,
}

fn sorted3(t: [usize; 3]) -> [usize; 3] {
    let mut s = t;
    s.sort_unstable();
    s
}

/// The four faces of a tet, each paired with the opposite vertex.
fn tet_faces(t: [usize; 4]) -> [([usize; 3], usize); 4] {
    [
        ([t[1], t[2], t[3]], t[0]),
        ([t[0], t[2], t[3]], t[1]),
        ([t[0], t[1], t[3]], t[2]),
        ([t[0], t[1], t[2]], t[3]),
    ]
}

impl TetMesh {
    /// Assemble from raw parts with index-bounds checking only; call
    /// [`TetMesh::validate`] before use.
    pub fn from_parts(
        vertices: Vec<Vec3>,
        tets: Vec<([usize; 4], Region)>,
        facets: Vec<([usize; 3], Boundary)>,
    ) -> Result<Self> {
        let n = vertices.len();
        for (t, _) in &tets {
            if t.iter().any(|&v| v >= n) {
                return Err(Error::MeshInvariant(format!("tet references vertex ≥ {n}")));
            }
        }
        for (f, _) in &facets {
            if f.iter().any(|&v| v >= n) {
                return Err(Error::MeshInvariant(format!("facet references vertex ≥ {n}")));
            }
        }
        if tets.is_empty() || facets.is_empty() {
            return Err(Error::MeshInvariant("mesh has no tets or no tagged facets".into()));
        }
        Ok(Self { vertices, tets, facets, facet_owners: Vec::new(), radius: 0.0 })
    }

    /// Signed volume of tet `i` with its stored vertex order.
    pub fn tet_volume(&self, i: usize) -> f64 {
        let (t, _) = self.tets[i];
        let a = self.vertices[t[0]];
        (self.vertices[t[1]] - a)
            .cross(&(self.vertices[t[2]] - a))
            .dot(&(self.vertices[t[3]] - a))
            / 6.0
    }

    /// Vertex coordinates of facet `k` in stored (oriented) order.
    pub fn facet_vertices(&self, k: usize) -> [Vec3; 3] {
        let (f, _) = self.facets[k];
        [self.vertices[f[0]], self.vertices[f[1]], self.vertices[f[2]]]
    }

    /// Area of facet `k`.
    pub fn facet_area(&self, k: usize) -> f64 {
        let [a, b, c] = self.facet_vertices(k);
        0.5 * (b - a).cross(&(c - a)).norm()
    }

    /// Unit normal of facet `k` in the stored orientation (outward from the
    /// tagged region after validation).
    pub fn facet_normal(&self, k: usize) -> Vec3 {
        let [a, b, c] = self.facet_vertices(k);
        (b - a).cross(&(c - a)).normalize()
    }

    /// Adjacent tets of facet `k`: `(body side, shell side)`. The body side
    /// is `None` exactly for SPHERE facets.
    pub fn facet_adjacent(&self, k: usize) -> (Option<usize>, usize) {
        self.facet_owners[k]
    }

    /// Outer radius the mesh was validated against.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Verify all structural invariants against the outer radius `r_outer`
    /// and rederive facet orientations from adjacency. Called by
    /// [`msh::load_mesh`].
    pub fn validate(&mut self, r_outer: f64) -> Result<()> {
        if !(r_outer > 0.0) {
            return Err(Error::InvalidInput(format!("outer radius {r_outer} must be positive")));
        }
        for i in 0..self.tets.len() {
            let v = self.tet_volume(i);
            if !(v > 0.0) {
                return Err(Error::MeshInvariant(format!(
                    "tet {i} has non-positive volume {v:.3e} (inverted or degenerate)"
                )));
            }
        }

        // Face→tet adjacency over the whole mesh.
        let mut face_map: HashMap<[usize; 3], Vec<usize>> = HashMap::new();
        for (i, (t, _)) in self.tets.iter().enumerate() {
            for (f, _) in tet_faces(*t) {
                face_map.entry(sorted3(f)).or_default().push(i);
            }
        }
        for (f, owners) in &face_map {
            if owners.len() > 2 {
                return Err(Error::MeshInvariant(format!(
                    "face {f:?} shared by {} tets (non-manifold)",
                    owners.len()
                )));
            }
        }

        // Tagged facets: conforming interface, single shell owner on the
        // sphere; record adjacency.
        self.facet_owners = Vec::with_capacity(self.facets.len());
        for (k, (f, tag)) in self.facets.iter().enumerate() {
            let owners = face_map.get(&sorted3(*f)).map(Vec::as_slice).unwrap_or(&[]);
            let body: Vec<usize> = owners.iter().copied().filter(|&i| self.tets[i].1 == Region::Body).collect();
            let shell: Vec<usize> = owners.iter().copied().filter(|&i| self.tets[i].1 == Region::Shell).collect();
            match tag {
                Boundary::Interface => {
                    if body.len() != 1 || shell.len() != 1 {
                        return Err(Error::MeshInvariant(format!(
                            "non-conforming interface: facet {k} touches {} BODY and {} SHELL tets (need 1 and 1)",
                            body.len(),
                            shell.len()
                        )));
                    }
                    self.facet_owners.push((Some(body[0]), shell[0]));
                }
                Boundary::Sphere => {
                    if !body.is_empty() || shell.len() != 1 {
                        return Err(Error::MeshInvariant(format!(
                            "sphere facet {k} touches {} BODY and {} SHELL tets (need 0 and 1)",
                            body.len(),
                            shell.len()
                        )));
                    }
                    self.facet_owners.push((None, shell[0]));
                }
            }
        }

        // Region boundaries must coincide with the tagged facet sets: the
        // body's boundary is exactly INTERFACE, the shell's is
        // INTERFACE ∪ SPHERE. Equivalently every face owned by exactly one
        // tet of a region is tagged accordingly.
        let mut tagged: HashMap<[usize; 3], Boundary> = HashMap::new();
        for (f, tag) in &self.facets {
            if tagged.insert(sorted3(*f), *tag).is_some() {
                return Err(Error::MeshInvariant(format!("facet {f:?} tagged twice")));
            }
        }
        for (f, owners) in &face_map {
            let nb = owners.iter().filter(|&&i| self.tets[i].1 == Region::Body).count();
            let ns = owners.len() - nb;
            let want = match (nb, ns) {
                (1, 1) => Some(Boundary::Interface), // region interface
                (1, 0) | (0, 1) if owners.len() == 1 => {
                    // Outer boundary of the whole tet union.
                    if nb == 1 {
                        return Err(Error::MeshInvariant(format!(
                            "open boundary: BODY face {f:?} is not matched by a SHELL tet"
                        )));
                    }
                    Some(Boundary::Sphere)
                }
                _ => None, // interior to one region
            };
            match want {
                Some(tag) => {
                    if tagged.get(f) != Some(&tag) {
                        return Err(Error::MeshInvariant(format!(
                            "face {f:?} is a {tag:?} boundary but is tagged {:?}",
                            tagged.get(f)
                        )));
                    }
                }
                None => {
                    if let Some(t) = tagged.get(f) {
                        return Err(Error::MeshInvariant(format!(
                            "face {f:?} tagged {t:?} but lies in the interior of a region"
                        )));
                    }
                }
            }
        }

        // Watertightness of each tagged surface: every edge of the facet
        // set must be shared by exactly two facets of that set.
        for tag in [Boundary::Interface, Boundary::Sphere] {
            let mut edge_count: HashMap<(usize, usize), usize> = HashMap::new();
            for (f, t) in &self.facets {
                if *t != tag {
                    continue;
                }
                for e in 0..3 {
                    let (a, b) = (f[e], f[(e + 1) % 3]);
                    *edge_count.entry((a.min(b), a.max(b))).or_insert(0) += 1;
                }
            }
            if let Some((e, n)) = edge_count.iter().find(|(_, &n)| n != 2) {
                return Err(Error::MeshInvariant(format!(
                    "{tag:?} surface not watertight: edge {e:?} on {n} facets (need 2)"
                )));
            }
        }

        // SPHERE facet *vertices* lie on |x| = R exactly (the sagitta of a
        // flat facet only pulls its interior inward), so the tolerance
        // covers file round-trip noise, not faceting.
        let tol = 1e-6 * r_outer.max(1.0);
        for (f, tag) in &self.facets {
            if *tag != Boundary::Sphere {
                continue;
            }
            for &v in f {
                let off = (self.vertices[v].norm() - r_outer).abs();
                if off > tol {
                    return Err(Error::MeshInvariant(format!(
                        "sphere facet vertex at |x| = {:.6} is {off:.3e} off R = {r_outer} (tol {tol:.3e})",
                        self.vertices[v].norm()
                    )));
                }
            }
        }
        self.radius = r_outer;

        // Orient facets outward from the tagged region: away from the
        // opposite vertex of the body-side tet (INTERFACE) or the owning
        // shell tet (SPHERE).
        for k in 0..self.facets.len() {
            let (body, shell) = self.facet_owners[k];
            let owner = body.unwrap_or(shell);
            let (f, _) = self.facets[k];
            let (tet, _) = self.tets[owner];
            let opposite = tet
                .into_iter()
                .find(|v| !f.contains(v))
                .expect("facet must be a face of its owner");
            let [a, b, c] = self.facet_vertices(k);
            let n = (b - a).cross(&(c - a));
            if n.dot(&(a - self.vertices[opposite])) < 0.0 {
                self.facets[k].0.swap(1, 2);
            }
        }
        Ok(())
    }

    /// Longest facet edge of a tagged surface.
    pub fn max_edge(&self, tag: Boundary) -> f64 {
        let mut h: f64 = 0.0;
        for (f, t) in &self.facets {
            if *t != tag {
                continue;
            }
            for e in 0..3 {
                h = h.max((self.vertices[f[e]] - self.vertices[f[(e + 1) % 3]]).norm());
            }
        }
        h
    }

    /// Longest tet edge over the whole mesh.
    pub fn mesh_h(&self) -> f64 {
        let mut h: f64 = 0.0;
        for (t, _) in &self.tets {
            for i in 0..4 {
                for j in (i + 1)..4 {
                    h = h.max((self.vertices[t[i]] - self.vertices[t[j]]).norm());
                }
            }
        }
        h
    }

    /// Longest INTERFACE facet edge (the mesh scale `h` used by probe
    /// resolution checks).
    pub fn interface_h(&self) -> f64 {
        self.max_edge(Boundary::Interface)
    }

    /// Signed-volume point-in-tet test with absolute tolerance `tol` on
    /// each sub-volume (barycentric λ_i · |K| ≥ −tol).
    pub fn tet_contains(&self, i: usize, p: &Vec3, tol: f64) -> bool {
        let (t, _) = self.tets[i];
        let v: [Vec3; 4] = [
            self.vertices[t[0]],
            self.vertices[t[1]],
            self.vertices[t[2]],
            self.vertices[t[3]],
        ];
        let sub = |a: Vec3, b: Vec3, c: Vec3, d: Vec3| (b - a).cross(&(c - a)).dot(&(d - a)) / 6.0;
        sub(*p, v[1], v[2], v[3]) >= -tol
            && sub(v[0], *p, v[2], v[3]) >= -tol
            && sub(v[0], v[1], *p, v[3]) >= -tol
            && sub(v[0], v[1], v[2], *p) >= -tol
    }

    /// Classification tolerance `1e-12 · h³`.
    fn point_tol(&self) -> f64 {
        let h = self.mesh_h();
        1e-12 * h * h * h
    }

    /// Region containing `p`, or `None` outside the meshed ball. Points on
    /// the interface report the body (first match wins over tet order).
    pub fn region_of(&self, p: &Vec3) -> Option<Region> {
        self.locate(p).map(|(i, _)| self.tets[i].1)
    }

    /// Tet containing `p` with its barycentric coordinates.
    pub fn locate(&self, p: &Vec3) -> Option<(usize, [f64; 4])> {
        let tol = self.point_tol();
        for i in 0..self.tets.len() {
            // Cheap bounding-sphere rejection before the volume tests.
            let (t, _) = self.tets[i];
            let a = self.vertices[t[0]];
            let h = (self.vertices[t[1]] - a)
                .norm()
                .max((self.vertices[t[2]] - a).norm())
                .max((self.vertices[t[3]] - a).norm());
            if (p - a).norm() > h * 1.0001 {
                continue;
            }
            if self.tet_contains(i, p, tol) {
                let vol = self.tet_volume(i);
                let v: [Vec3; 4] = [
                    a,
                    self.vertices[t[1]],
                    self.vertices[t[2]],
                    self.vertices[t[3]],
                ];
                let sub = |a: Vec3, b: Vec3, c: Vec3, d: Vec3| (b - a).cross(&(c - a)).dot(&(d - a)) / 6.0;
                let lambda = [
                    sub(*p, v[1], v[2], v[3]) / vol,
                    sub(v[0], *p, v[2], v[3]) / vol,
                    sub(v[0], v[1], *p, v[3]) / vol,
                    sub(v[0], v[1], v[2], *p) / vol,
                ];
                return Some((i, lambda));
            }
        }
        None
    }

    /// True when some BODY tet contains `p` within `margin` (used to decide
    /// membership in `D̄` robustly).
    pub fn in_body_closure(&self, p: &Vec3, margin: f64) -> bool {
        (0..self.tets.len())
            .filter(|&i| self.tets[i].1 == Region::Body)
            .any(|i| self.tet_contains(i, p, margin))
    }

    /// True when some SHELL tet contains `p` (closure of the shell).
    pub fn in_shell_closure(&self, p: &Vec3, margin: f64) -> bool {
        (0..self.tets.len())
            .filter(|&i| self.tets[i].1 == Region::Shell)
            .any(|i| self.tet_contains(i, p, margin))
    }

    /// Quadrature over a tagged surface, normals outward from the tagged
    /// region, exact for polynomials of degree `order` per flat facet.
    pub fn surface_quadrature(&self, tag: Boundary, order: usize) -> Result<SurfaceQuadrature> {
        let facets: Vec<([Vec3; 3], Vec3)> = (0..self.facets.len())
            .filter(|&k| self.facets[k].1 == tag)
            .map(|k| (self.facet_vertices(k), self.facet_normal(k)))
            .collect();
        SurfaceQuadrature::from_facets(&facets, order)
    }

    /// Indices of facets with the given tag, in stored order (matches the
    /// facet indices reported by [`SurfaceQuadrature::facets`] built from
    /// [`TetMesh::surface_quadrature`]).
    pub fn tagged_facets(&self, tag: Boundary) -> Vec<usize> {
        (0..self.facets.len()).filter(|&k| self.facets[k].1 == tag).collect()
    }

    /// Lipschitz estimate `L` for the interface normal field: the maximum of
    /// `|ν_A − ν_B| / |c_A − c_B|` over edge-adjacent INTERFACE facet pairs
    /// (centroids `c`). For a faceted C² surface this bounds the normal
    /// variation at the mesh scale: `|ν(x) − ν(z)| ≲ L·|x − z|`.
    pub fn normal_lipschitz_estimate(&self) -> f64 {
        let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (k, (f, tag)) in self.facets.iter().enumerate() {
            if *tag != Boundary::Interface {
                continue;
            }
            for e in 0..3 {
                let (a, b) = (f[e], f[(e + 1) % 3]);
                by_edge.entry((a.min(b), a.max(b))).or_default().push(k);
            }
        }
        let centroid = |k: usize| {
            let [a, b, c] = self.facet_vertices(k);
            (a + b + c) / 3.0
        };
        let mut l: f64 = 0.0;
        for pair in by_edge.values() {
            if let [p, q] = pair[..] {
                let dn = (self.facet_normal(p) - self.facet_normal(q)).norm();
                let dc = (centroid(p) - centroid(q)).norm();
                if dc > 0.0 {
                    l = l.max(dn / dc);
                }
            }
        }
        l
    }

    /// Plain-text mesh report (counts, mesh sizes, tagged areas).
    pub fn report(&self) -> String {
        let nb = self.tets.iter().filter(|(_, r)| *r == Region::Body).count();
        let ni = self.facets.iter().filter(|(_, t)| *t == Boundary::Interface).count();
        let area = |tag| -> f64 {
            (0..self.facets.len())
                .filter(|&k| self.facets[k].1 == tag)
                .map(|k| self.facet_area(k))
                .sum()
        };
        format!(
            "vertices: {}\ntets: {} ({} body, {} shell)\nfacets: {} ({} interface, {} sphere)\n\
             h_max: {:.4} (interface {:.4})\narea(interface): {:.6}\narea(sphere): {:.6}\nR: {}\n",
            self.vertices.len(),
            self.tets.len(),
            nb,
            self.tets.len() - nb,
            self.facets.len(),
            ni,
            self.facets.len() - ni,
            self.mesh_h(),
            self.interface_h(),
            area(Boundary::Interface),
            area(Boundary::Sphere),
            self.radius,
        )
    }
}

#[cfg(test)]
pub(crate) mod testmesh {
    //! Shared helpers for tests that need meshes: shipped files plus
    //! generated models at arbitrary parameters.

    use super::*;
    use std::path::PathBuf;

    pub fn shipped(name: &str) -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../meshes").join(name)
    }

    pub fn load_shipped(name: &str, r: f64) -> TetMesh {
        msh::load_mesh(shipped(name), r).expect("shipped mesh must load")
    }

    /// Generate a model in memory and load it through the full parser +
    /// validator path.
    pub fn generated(shape: emel_meshgen::BodyShape, level: u32, r: f64) -> TetMesh {
        let text = emel_meshgen::standard(shape, level, r).to_msh2();
        let mut mesh = msh::parse_msh2(&text).expect("generated mesh must parse");
        mesh.validate(r).expect("generated mesh must validate");
        mesh
    }

    /// Like [`generated`] but with explicit subdivision level and layer
    /// counts, for tests that need a strict uniform-refinement family.
    pub fn generated_custom(
        shape: emel_meshgen::BodyShape,
        level: u32,
        layers_body: u32,
        layers_shell: u32,
        r: f64,
    ) -> TetMesh {
        let text = emel_meshgen::build(shape, level, layers_body, layers_shell, r).to_msh2();
        let mut mesh = msh::parse_msh2(&text).expect("generated mesh must parse");
        mesh.validate(r).expect("generated mesh must validate");
        mesh
    }
}
