//! Gmsh MSH 2.2 ASCII reader.
//!
//! Only the sections the solver needs are interpreted: `$Nodes` and
//! `$Elements` with element types 2 (triangle) and 4 (tetrahedron), the
//! first tag being the physical tag. Physical tags are fixed by convention:
//! `1 = BODY`, `2 = SHELL` for tets and `11 = INTERFACE`, `12 = SPHERE` for
//! triangles. Unknown sections are skipped; unknown element types are
//! ignored (points/edges some generators emit).

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{Boundary, Region, TetMesh};
use crate::Vec3;

pub const TAG_BODY: i32 = 1;
pub const TAG_SHELL: i32 = 2;
pub const TAG_INTERFACE: i32 = 11;
pub const TAG_SPHERE: i32 = 12;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::MeshParse { line, message: message.into() }
}

/// Parse MSH 2.2 ASCII text into a raw (unvalidated) mesh.
pub fn parse_msh2(text: &str) -> Result<TetMesh> {
    let mut lines = text.lines().enumerate().peekable();
    let mut id_to_index: HashMap<u64, usize> = HashMap::new();
    let mut vertices: Vec<Vec3> = Vec::new();
    let mut tets: Vec<([usize; 4], Region)> = Vec::new();
    let mut facets: Vec<([usize; 3], Boundary)> = Vec::new();
    let mut saw_nodes = false;
    let mut saw_elements = false;

    while let Some((ln, line)) = lines.next() {
        let line = line.trim();
        match line {
            "$MeshFormat" => {
                let (ln2, fmt) = lines
                    .next()
                    .ok_or_else(|| parse_err(ln + 1, "truncated $MeshFormat"))?;
                let mut parts = fmt.split_whitespace();
                let version = parts.next().unwrap_or("");
                if version != "2.2" {
                    return Err(parse_err(ln2 + 1, format!("unsupported MSH version {version:?}, need 2.2")));
                }
                if parts.next() != Some("0") {
                    return Err(parse_err(ln2 + 1, "binary MSH not supported"));
                }
            }
            "$Nodes" => {
                saw_nodes = true;
                let (ln2, count) = lines.next().ok_or_else(|| parse_err(ln + 1, "truncated $Nodes"))?;
                let n: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(ln2 + 1, format!("bad node count {count:?}")))?;
                vertices.reserve(n);
                for _ in 0..n {
                    let (ln3, row) = lines.next().ok_or_else(|| parse_err(ln2 + 1, "truncated node list"))?;
                    let mut p = row.split_whitespace();
                    let id: u64 = p
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| parse_err(ln3 + 1, "bad node id"))?;
                    let mut xyz = [0.0f64; 3];
                    for c in &mut xyz {
                        *c = p
                            .next()
                            .and_then(|s| s.parse().ok())
                            .ok_or_else(|| parse_err(ln3 + 1, "bad node coordinate"))?;
                    }
                    if id_to_index.insert(id, vertices.len()).is_some() {
                        return Err(parse_err(ln3 + 1, format!("duplicate node id {id}")));
                    }
                    vertices.push(Vec3::new(xyz[0], xyz[1], xyz[2]));
                }
            }
            "$Elements" => {
                saw_elements = true;
                let (ln2, count) = lines.next().ok_or_else(|| parse_err(ln + 1, "truncated $Elements"))?;
                let n: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(ln2 + 1, format!("bad element count {count:?}")))?;
                for _ in 0..n {
                    let (ln3, row) = lines
                        .next()
                        .ok_or_else(|| parse_err(ln2 + 1, "truncated element list"))?;
                    let nums: Vec<i64> = row
                        .split_whitespace()
                        .map(|s| s.parse::<i64>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| parse_err(ln3 + 1, "non-integer element record"))?;
                    if nums.len() < 3 {
                        return Err(parse_err(ln3 + 1, "short element record"));
                    }
                    let etype = nums[1];
                    let ntags = nums[2] as usize;
                    let physical = *nums
                        .get(3)
                        .filter(|_| ntags >= 1)
                        .ok_or_else(|| parse_err(ln3 + 1, "missing physical tag"))?
                        as i32;
                    let verts = &nums[3 + ntags..];
                    let lookup = |id: i64| -> Result<usize> {
                        id_to_index
                            .get(&(id as u64))
                            .copied()
                            .ok_or_else(|| parse_err(ln3 + 1, format!("element references unknown node {id}")))
                    };
                    match etype {
                        2 => {
                            if verts.len() != 3 {
                                return Err(parse_err(ln3 + 1, "triangle needs 3 vertices"));
                            }
                            let tag = match physical {
                                TAG_INTERFACE => Boundary::Interface,
                                TAG_SPHERE => Boundary::Sphere,
                                other => {
                                    return Err(parse_err(
                                        ln3 + 1,
                                        format!("triangle physical tag {other} not in {{11=INTERFACE, 12=SPHERE}}"),
                                    ))
                                }
                            };
                            facets.push(([lookup(verts[0])?, lookup(verts[1])?, lookup(verts[2])?], tag));
                        }
                        4 => {
                            if verts.len() != 4 {
                                return Err(parse_err(ln3 + 1, "tetrahedron needs 4 vertices"));
                            }
                            let region = match physical {
                                TAG_BODY => Region::Body,
                                TAG_SHELL => Region::Shell,
                                other => {
                                    return Err(parse_err(
                                        ln3 + 1,
                                        format!("tet physical tag {other} not in {{1=BODY, 2=SHELL}}"),
                                    ))
                                }
                            };
                            tets.push((
                                [lookup(verts[0])?, lookup(verts[1])?, lookup(verts[2])?, lookup(verts[3])?],
                                region,
                            ));
                        }
                        _ => {} // points, edges, higher-order: not used
                    }
                }
            }
            // Skip any other section wholesale.
            s if s.starts_with('$') && !s.starts_with("$End") => {
                let end = format!("$End{}", &s[1..]);
                for (_, l) in lines.by_ref() {
                    if l.trim() == end {
                        break;
                    }
                }
            }
            _ => {}
        }
    }

    if !saw_nodes || !saw_elements {
        return Err(parse_err(0, "missing $Nodes or $Elements section"));
    }
    TetMesh::from_parts(vertices, tets, facets)
}

/// Load a mesh from disk and verify every structural invariant against the
/// stated outer radius `R`.
pub fn load_mesh(path: impl AsRef<Path>, r_outer: f64) -> Result<TetMesh> {
    let text = std::fs::read_to_string(path)?;
    let mut mesh = parse_msh2(&text)?;
    mesh.validate(r_outer)?;
    Ok(mesh)
}
