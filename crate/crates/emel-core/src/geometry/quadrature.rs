//! Quadrature rules: Gauss–Legendre on `[-1, 1]`, symmetric rules on flat
//! triangles, and a tensor-product grid on spheres.
//!
//! Triangle rules are tabulated in barycentric coordinates with weights
//! summing to one; integration against a facet multiplies by its area. The
//! sphere grid pairs Gauss–Legendre in `cos θ` with a uniform trapezoid in
//! `φ`, which integrates spherical-harmonic products exactly up to the
//! stated degrees.

use crate::error::{Error, Result};
use crate::Vec3;

/// Gauss–Legendre nodes and weights on `(-1, 1)`, exact for polynomials of
/// degree `2n − 1`. Nodes ascend.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            // Upward recurrence for P_n(x) and its derivative.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { p1 } else { p1 };
            pp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = pn / pp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Symmetric quadrature on the unit triangle in barycentric coordinates.
/// Returns `(points, weights)` with weights summing to one.
///
/// | order | points | exact degree |
/// |-------|--------|--------------|
/// | 1     | 1      | 1            |
/// | 2     | 3      | 2            |
/// | 3     | 4      | 3            |
/// | 4     | 6      | 4            |
///
/// The order-3 rule carries a negative centroid weight; use order 4 when a
/// positive rule is required (norms, Gram matrices).
pub fn triangle_rule(order: usize) -> Result<(Vec<[f64; 3]>, Vec<f64>)> {
    let third = 1.0 / 3.0;
    match order {
        1 => Ok((vec![[third; 3]], vec![1.0])),
        2 => {
            let (a, b) = (2.0 / 3.0, 1.0 / 6.0);
            Ok((
                vec![[a, b, b], [b, a, b], [b, b, a]],
                vec![third; 3],
            ))
        }
        3 => {
            let (a, b) = (0.6, 0.2);
            Ok((
                vec![[third; 3], [a, b, b], [b, a, b], [b, b, a]],
                vec![-27.0 / 48.0, 25.0 / 48.0, 25.0 / 48.0, 25.0 / 48.0],
            ))
        }
        4 => {
            let a1 = 0.445_948_490_915_965;
            let w1 = 0.223_381_589_678_011;
            let a2 = 0.091_576_213_509_771;
            let w2 = 0.109_951_743_655_322;
            let g = |a: f64| {
                let c = 1.0 - 2.0 * a;
                [[c, a, a], [a, c, a], [a, a, c]]
            };
            let mut pts = Vec::with_capacity(6);
            pts.extend_from_slice(&g(a1));
            pts.extend_from_slice(&g(a2));
            Ok((pts, vec![w1, w1, w1, w2, w2, w2]))
        }
        _ => Err(Error::InvalidOrder(format!("triangle rule order {order} not in 1..=4"))),
    }
}

/// Quadrature on the reference tetrahedron in barycentric coordinates,
/// weights summing to one. Order 1 is the centroid rule (degree 1); order 2
/// is the symmetric four-point rule (degree 2).
pub fn tet_rule(order: usize) -> Result<(Vec<[f64; 4]>, Vec<f64>)> {
    match order {
        1 => Ok((vec![[0.25; 4]], vec![1.0])),
        2 => {
            let a = 0.585_410_196_624_968_5; // (5 + 3√5)/20
            let b = 0.138_196_601_125_010_5; // (5 − √5)/20
            Ok((
                vec![
                    [a, b, b, b],
                    [b, a, b, b],
                    [b, b, a, b],
                    [b, b, b, a],
                ],
                vec![0.25; 4],
            ))
        }
        _ => Err(Error::InvalidOrder(format!("tet rule order {order} not in 1..=2"))),
    }
}

/// Quadrature over a triangulated surface: points, outward unit normals,
/// weights (absorbing facet areas), and the owning facet index per point.
#[derive(Debug, Clone)]
pub struct SurfaceQuadrature {
    pub points: Vec<Vec3>,
    pub normals: Vec<Vec3>,
    pub weights: Vec<f64>,
    /// Index into the facet list this point came from.
    pub facets: Vec<usize>,
}

impl SurfaceQuadrature {
    /// Build from explicit facets `(v0, v1, v2, outward normal)`.
    pub fn from_facets(facets: &[([Vec3; 3], Vec3)], order: usize) -> Result<Self> {
        let (bary, wts) = triangle_rule(order)?;
        let n = facets.len() * bary.len();
        let mut points = Vec::with_capacity(n);
        let mut normals = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let mut owners = Vec::with_capacity(n);
        for (fi, (tri, normal)) in facets.iter().enumerate() {
            let area = 0.5 * (tri[1] - tri[0]).cross(&(tri[2] - tri[0])).norm();
            for (b, w) in bary.iter().zip(&wts) {
                points.push(b[0] * tri[0] + b[1] * tri[1] + b[2] * tri[2]);
                normals.push(*normal);
                weights.push(w * area);
                owners.push(fi);
            }
        }
        Ok(Self { points, normals, weights, facets: owners })
    }

    /// Total measure `Σ w_q` (the surface area for positive rules).
    pub fn area(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `∫ f ds` for a scalar integrand evaluated at quadrature points.
    pub fn integrate(&self, f: impl Fn(&Vec3, &Vec3) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.normals)
            .zip(&self.weights)
            .map(|((x, nu), w)| w * f(x, nu))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Tensor-product grid on the sphere of given radius: Gauss–Legendre in
/// `cos θ` (`n_theta` points) times uniform in `φ` (`n_phi` points).
/// Integrates spherical harmonics `Y_n^m` exactly for
/// `n ≤ 2 n_theta − 1 − n` products and `|m| < n_phi`; pairs of harmonics up
/// to degree `N` need `n_theta ≥ N + 1`, `n_phi ≥ 2N + 1`.
pub fn sphere_gauss_grid(n_theta: usize, n_phi: usize, radius: f64) -> SurfaceQuadrature {
    let (ct, wt) = gauss_legendre(n_theta);
    let mut points = Vec::with_capacity(n_theta * n_phi);
    let mut normals = Vec::with_capacity(n_theta * n_phi);
    let mut weights = Vec::with_capacity(n_theta * n_phi);
    let mut facets = Vec::with_capacity(n_theta * n_phi);
    let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
    for (i, (&c, &w)) in ct.iter().zip(&wt).enumerate() {
        let s = (1.0 - c * c).sqrt();
        for j in 0..n_phi {
            let phi = dphi * j as f64;
            let xhat = Vec3::new(s * phi.cos(), s * phi.sin(), c);
            points.push(radius * xhat);
            normals.push(xhat);
            weights.push(radius * radius * w * dphi);
            facets.push(i * n_phi + j);
        }
    }
    SurfaceQuadrature { points, normals, weights, facets }
}
