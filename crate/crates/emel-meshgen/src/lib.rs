//! Generator for the tetrahedral meshes consumed by the scattering solver:
//! a bounded body `D` (sphere or peanut) embedded in a concentric ball of
//! radius `R`, with the annular region meshed as a shell.
//!
//! Construction: an icosphere triangulation of the unit sphere is scaled
//! radially into nested layers. The body is filled with a vertex fan at the
//! center plus prism layers; the shell carries prism layers from the body
//! surface out to `|x| = R`. Prisms are split into three tetrahedra with
//! the minimal-vertex-index diagonal rule, which picks each quad-face
//! diagonal from global vertex ids only and therefore matches across
//! neighboring prisms (conforming mesh, no Steiner points).
//!
//! Output is Gmsh MSH 2.2 ASCII with physical tags
//! `1 = BODY`, `2 = SHELL`, `11 = INTERFACE` (body surface, outward from
//! the body), `12 = SPHERE` (outer boundary, outward).

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

pub const TAG_BODY: i32 = 1;
pub const TAG_SHELL: i32 = 2;
pub const TAG_INTERFACE: i32 = 11;
pub const TAG_SPHERE: i32 = 12;

/// Body shapes supported by the generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BodyShape {
    /// Unit sphere.
    Sphere,
    /// Axially symmetric peanut `ρ(θ) = √(cos²θ + 0.25 sin²θ)`:
    /// radius 1 at the poles, concave waist of radius 0.5 at the equator.
    Peanut,
}

impl BodyShape {
    /// Radial profile of the body surface in direction `xhat`.
    pub fn radius(&self, xhat: [f64; 3]) -> f64 {
        match self {
            BodyShape::Sphere => 1.0,
            BodyShape::Peanut => {
                let c2 = xhat[2] * xhat[2]; // cos²θ
                (c2 + 0.25 * (1.0 - c2)).sqrt()
            }
        }
    }
}

/// Generated mesh: vertices, region-tagged tets, boundary-tagged triangles.
#[derive(Debug, Clone)]
pub struct MeshModel {
    pub vertices: Vec<[f64; 3]>,
    /// `(vertex ids, region tag)`; positive orientation (signed volume > 0).
    pub tets: Vec<([usize; 4], i32)>,
    /// `(vertex ids, boundary tag)`; oriented outward from the tagged side
    /// (out of the body for INTERFACE, out of the ball for SPHERE).
    pub triangles: Vec<([usize; 3], i32)>,
}

/// Unit icosphere: `level` subdivisions of the icosahedron
/// (20·4^level faces), outward-oriented.
struct IcoSphere {
    vertices: Vec<[f64; 3]>,
    faces: Vec<[usize; 3]>,
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn icosphere(level: u32) -> IcoSphere {
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut vertices: Vec<[f64; 3]> = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ]
    .into_iter()
    .map(normalize)
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];

    for _ in 0..level {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        for f in &faces {
            let mut mid = [0usize; 3];
            for e in 0..3 {
                let (a, b) = (f[e], f[(e + 1) % 3]);
                let key = (a.min(b), a.max(b));
                mid[e] = *midpoint.entry(key).or_insert_with(|| {
                    let va = vertices[a];
                    let vb = vertices[b];
                    vertices.push(normalize([
                        0.5 * (va[0] + vb[0]),
                        0.5 * (va[1] + vb[1]),
                        0.5 * (va[2] + vb[2]),
                    ]));
                    vertices.len() - 1
                });
            }
            next.push([f[0], mid[0], mid[2]]);
            next.push([f[1], mid[1], mid[0]]);
            next.push([f[2], mid[2], mid[1]]);
            next.push([mid[0], mid[1], mid[2]]);
        }
        faces = next;
    }

    // Enforce outward orientation regardless of the seed table.
    for f in &mut faces {
        let (a, b, c) = (vertices[f[0]], vertices[f[1]], vertices[f[2]]);
        let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
        let n = [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ];
        let center = [
            (a[0] + b[0] + c[0]) / 3.0,
            (a[1] + b[1] + c[1]) / 3.0,
            (a[2] + b[2] + c[2]) / 3.0,
        ];
        if n[0] * center[0] + n[1] * center[1] + n[2] * center[2] < 0.0 {
            f.swap(1, 2);
        }
    }

    IcoSphere { vertices, faces }
}

/// Split a right-handed prism `(bottom v0 v1 v2, top v3 v4 v5)` into three
/// positively oriented tets. Quad-face diagonals are chosen through the
/// smallest global vertex id on that face, so adjacent prisms agree.
fn split_prism(p: [usize; 6]) -> [[usize; 4]; 3] {
    // Symmetries of the prism that keep it right-handed: the three rotations
    // about the axis, each optionally composed with the 180° flip about the
    // horizontal axis through the v0–v3 edge midpoint.
    const ROT: [[usize; 6]; 6] = [
        [0, 1, 2, 3, 4, 5],
        [1, 2, 0, 4, 5, 3],
        [2, 0, 1, 5, 3, 4],
        [3, 5, 4, 0, 2, 1],
        [4, 3, 5, 1, 0, 2],
        [5, 4, 3, 2, 1, 0],
    ];
    let min_pos = (0..6).min_by_key(|&i| p[i]).unwrap();
    let perm = ROT.iter().find(|perm| perm[0] == min_pos).unwrap();
    let q: Vec<usize> = perm.iter().map(|&i| p[i]).collect();
    if q[1].min(q[5]) < q[2].min(q[4]) {
        [
            [q[0], q[1], q[2], q[5]],
            [q[0], q[1], q[5], q[4]],
            [q[0], q[4], q[5], q[3]],
        ]
    } else {
        [
            [q[0], q[1], q[2], q[4]],
            [q[0], q[4], q[2], q[5]],
            [q[0], q[4], q[5], q[3]],
        ]
    }
}

/// Build the full model.
///
/// `level`: icosphere subdivision level (≥ 1). `layers_body`: radial layers
/// inside the body (≥ 1; the innermost is a vertex fan at the origin).
/// `layers_shell`: radial layers between the body surface and `|x| = R`.
pub fn build(
    shape: BodyShape,
    level: u32,
    layers_body: u32,
    layers_shell: u32,
    r_outer: f64,
) -> MeshModel {
    assert!(layers_body >= 1 && layers_shell >= 1);
    assert!(r_outer > 1.0, "outer radius must clear the unit-size body");
    let ico = icosphere(level);
    let nv_surf = ico.vertices.len();

    // Vertex layout: 0 = center, then `layers_body + layers_shell` copies of
    // the surface grid at increasing radius. Body layer i (1-based) sits at
    // t = i/layers_body of the body radius; shell layer k interpolates from
    // the body surface to r_outer, hitting it exactly at the last layer.
    let mut vertices = vec![[0.0; 3]];
    let n_rings = (layers_body + layers_shell) as usize;
    for ring in 1..=n_rings {
        for v in &ico.vertices {
            let rho = shape.radius(*v);
            let r = if ring <= layers_body as usize {
                rho * ring as f64 / layers_body as f64
            } else {
                let s = (ring - layers_body as usize) as f64 / layers_shell as f64;
                rho + (r_outer - rho) * s
            };
            vertices.push([v[0] * r, v[1] * r, v[2] * r]);
        }
    }
    let ring_base = |ring: usize| 1 + (ring - 1) * nv_surf;

    let mut tets = Vec::new();
    // Innermost fan: center vertex to ring 1.
    for f in &ico.faces {
        let b = ring_base(1);
        tets.push(([0, b + f[0], b + f[1], b + f[2]], TAG_BODY));
    }
    // Prism layers.
    for ring in 1..n_rings {
        let (lo, hi) = (ring_base(ring), ring_base(ring + 1));
        let region = if ring < layers_body as usize { TAG_BODY } else { TAG_SHELL };
        for f in &ico.faces {
            let prism = [lo + f[0], lo + f[1], lo + f[2], hi + f[0], hi + f[1], hi + f[2]];
            for t in split_prism(prism) {
                tets.push((t, region));
            }
        }
    }

    let mut triangles = Vec::new();
    let ib = ring_base(layers_body as usize);
    let ob = ring_base(n_rings);
    for f in &ico.faces {
        triangles.push(([ib + f[0], ib + f[1], ib + f[2]], TAG_INTERFACE));
        triangles.push(([ob + f[0], ob + f[1], ob + f[2]], TAG_SPHERE));
    }

    MeshModel { vertices, tets, triangles }
}

/// The three shipped refinement levels, a uniform halving family: each step
/// doubles both the icosphere subdivision and the radial layer counts, so
/// every length scale of the mesh (interface facets, body layers, shell
/// layers) shrinks by the same factor of two. Convergence studies depend on
/// that self-similarity — refining only angularly or only radially stalls
/// whichever error component lives on the unrefined scale.
pub fn standard(shape: BodyShape, refinement: u32, r_outer: f64) -> MeshModel {
    match refinement {
        1 => build(shape, 1, 1, 1, r_outer),
        2 => build(shape, 2, 2, 2, r_outer),
        3 => build(shape, 3, 4, 4, r_outer),
        _ => panic!("shipped levels are 1..=3"),
    }
}

impl MeshModel {
    /// Signed volume of tet `i` (positive for valid orientation).
    pub fn tet_volume(&self, i: usize) -> f64 {
        let (t, _) = self.tets[i];
        let p: Vec<[f64; 3]> = t.iter().map(|&v| self.vertices[v]).collect();
        let d = |a: [f64; 3], b: [f64; 3]| [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let (u, v, w) = (d(p[0], p[1]), d(p[0], p[2]), d(p[0], p[3]));
        (u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
            + u[2] * (v[0] * w[1] - v[1] * w[0]))
            / 6.0
    }

    /// Serialize as Gmsh MSH 2.2 ASCII.
    pub fn to_msh2(&self) -> String {
        let mut s = String::new();
        s.push_str("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n");
        s.push_str(&format!("{}\n", self.vertices.len()));
        for (i, v) in self.vertices.iter().enumerate() {
            s.push_str(&format!("{} {:.17} {:.17} {:.17}\n", i + 1, v[0], v[1], v[2]));
        }
        s.push_str("$EndNodes\n$Elements\n");
        s.push_str(&format!("{}\n", self.triangles.len() + self.tets.len()));
        let mut id = 1;
        for (t, tag) in &self.triangles {
            s.push_str(&format!(
                "{id} 2 2 {tag} {tag} {} {} {}\n",
                t[0] + 1,
                t[1] + 1,
                t[2] + 1
            ));
            id += 1;
        }
        for (t, tag) in &self.tets {
            s.push_str(&format!(
                "{id} 4 2 {tag} {tag} {} {} {} {}\n",
                t[0] + 1,
                t[1] + 1,
                t[2] + 1,
                t[3] + 1
            ));
            id += 1;
        }
        s.push_str("$EndElements\n");
        s
    }

    pub fn write_msh2(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_msh2().as_bytes())
    }

    /// One-line summary used by the CLI.
    pub fn summary(&self) -> String {
        let body = self.tets.iter().filter(|(_, r)| *r == TAG_BODY).count();
        format!(
            "{} vertices, {} tets ({} body, {} shell), {} boundary triangles",
            self.vertices.len(),
            self.tets.len(),
            body,
            self.tets.len() - body,
            self.triangles.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn icosphere_counts_follow_subdivision() {
        for level in 0..3 {
            let ico = icosphere(level);
            assert_eq!(ico.faces.len(), 20 * 4usize.pow(level));
            // Euler: V = 2 + F/2 for a closed triangulated sphere.
            assert_eq!(ico.vertices.len(), 2 + ico.faces.len() / 2);
            for v in &ico.vertices {
                let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                assert!((r - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn split_prism_is_conforming_on_shared_quads() {
        // Two prisms sharing the quad (1,2,4,5)/(7,8,10,11): the diagonal each
        // side draws on the shared face must be the same edge.
        let pa = [0, 1, 2, 6, 7, 8];
        let pb = [1, 3, 2, 7, 9, 8];
        let quad = [1usize, 2, 7, 8];
        let diag_on_quad = |tets: &[[usize; 4]; 3]| {
            let mut diags = Vec::new();
            for t in tets {
                for i in 0..4 {
                    for j in (i + 1)..4 {
                        let (a, b) = (t[i].min(t[j]), t[i].max(t[j]));
                        // An edge interior to the quad joins opposite corners.
                        if quad.contains(&a) && quad.contains(&b) && ((a, b) == (1, 8) || (a, b) == (2, 7)) {
                            diags.push((a, b));
                        }
                    }
                }
            }
            diags.sort();
            diags.dedup();
            diags
        };
        let da = diag_on_quad(&split_prism(pa));
        let db = diag_on_quad(&split_prism(pb));
        assert_eq!(da.len(), 1, "exactly one diagonal per quad");
        assert_eq!(da, db, "neighboring prisms must agree on the diagonal");
    }

    #[test]
    fn all_tets_positive_volume_both_shapes() {
        for shape in [BodyShape::Sphere, BodyShape::Peanut] {
            let m = standard(shape, 1, 2.0);
            for i in 0..m.tets.len() {
                let v = m.tet_volume(i);
                assert!(v > 1e-9, "tet {i} of {shape:?} has volume {v}");
            }
        }
    }

    #[test]
    fn standard_level_counts() {
        let m = standard(BodyShape::Sphere, 1, 2.0);
        let faces = 20 * 4usize.pow(1); // ico level 1: 80
        let nv_surf = 2 + faces / 2; // 42
        // center + interface ring + outer ring
        assert_eq!(m.vertices.len(), 1 + nv_surf * 2);
        // fan + 1 shell prism layer à 3 tets per face
        assert_eq!(m.tets.len(), faces + faces * 3);
        assert_eq!(m.triangles.len(), 2 * faces);
        // Each level doubles both the angular and the radial resolution.
        assert_eq!(standard(BodyShape::Sphere, 2, 2.0).tets.len(), 320 * 10);
        assert_eq!(standard(BodyShape::Sphere, 3, 2.0).tets.len(), 1280 * 22);
    }

    #[test]
    fn outer_vertices_sit_on_the_sphere() {
        let m = standard(BodyShape::Peanut, 1, 2.0);
        for (t, tag) in &m.triangles {
            if *tag == TAG_SPHERE {
                for &v in t {
                    let p = m.vertices[v];
                    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                    assert!((r - 2.0).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn peanut_profile_has_concave_waist() {
        let shape = BodyShape::Peanut;
        assert!((shape.radius([0.0, 0.0, 1.0]) - 1.0).abs() < 1e-15);
        assert!((shape.radius([1.0, 0.0, 0.0]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn msh_roundtrip_header() {
        let m = standard(BodyShape::Sphere, 1, 2.0);
        let text = m.to_msh2();
        assert!(text.starts_with("$MeshFormat\n2.2 0 8\n"));
        assert!(text.contains("$EndElements"));
    }
}
