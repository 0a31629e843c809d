//! Electric-to-magnetic Calderón map on the truncation sphere `S_R`.
//!
//! For a radiating Maxwell field `w` in `|x| > R` (wavenumber `κ`, time
//! convention `e^{-iωt}`), the map sends the tangential trace `λ = x̂×w` on
//! `S_R` to `G_e(λ) = (1/iκ) x̂×curl w`, so that the exact transparent
//! boundary condition reads `x̂×curl w = iκ G_e(x̂×w)`.
//!
//! In the vector spherical-harmonic basis the map is mode-diagonal and swaps
//! the two tangential families. With `t = κR`, `ζ_n(t) = t·h_n^{(1)}(t)` the
//! Riccati–Hankel function, and a trace `λ = Σ a_{n,m} Û_n^m + b_{n,m} V̂_n^m`:
//!
//! ```text
//!   G_e(λ) = Σ  g_v(n)·b_{n,m} Û_n^m  +  g_u(n)·a_{n,m} V̂_n^m ,
//!
//!   g_u(n) = ζ_n'(t) / (i t h_n(t)),      g_v(n) = t h_n(t) / (i ζ_n'(t)),
//! ```
//!
//! so `g_u·g_v = -1` identically. The derivation fixes every sign by the
//! exterior multipole basis `M = curl(x h_n(κr) Y_n^m)`, `N = (1/κ) curl M`
//! (which obey `curl M = κN`, `curl N = κM`), and is pinned in the tests by a
//! finite-difference curl of those closed-form fields — not assumed.
//!
//! Neither denominator vanishes: for real `t > 0` the Wronskian of the
//! Riccati–Bessel pair keeps `h_n` and `ζ_n'` away from zero, and for the
//! auxiliary map at `κ = i` both reduce to (phased) modified Bessel functions
//! of strictly one sign.
//!
//! # Coefficient convention
//!
//! Expansions are taken in the basis `Û_n^m = U_n^m/R`, `V̂_n^m = V_n^m/R`,
//! which is real and orthonormal in `L²(S_R)`; `(U, V)` is the unit-sphere
//! orthonormal tangential pair of [`crate::kernels`]. Consequently projecting
//! the unit-sphere function `U_1^0` itself yields the coefficient `R`, and
//! `‖λ‖_{L²(S_R)}² = Σ |a|² + |b|²` (Parseval).

use crate::error::{Error, Result};
use crate::geometry::quadrature::SurfaceQuadrature;
use crate::kernels::{
    eval_tangential_basis, mode_count, mode_from_index, spherical_hankel, N_MAX,
};
use crate::{C64, CVec3, Vec3};
use nalgebra::DVector;

/// Tangential field on `S_R` expanded over both vector-harmonic families up
/// to order `N`: `λ = Σ_{1≤n≤N, |m|≤n} a_{n,m} Û_n^m + b_{n,m} V̂_n^m`.
///
/// Coefficient arrays are indexed by [`crate::kernels::mode_index`] and have
/// length `N(N+2)` each.
#[derive(Debug, Clone)]
pub struct SphericalTraceExpansion {
    /// Truncation order `N ≥ 1`.
    pub order: usize,
    /// Sphere radius `R`.
    pub radius: f64,
    /// `U`-family coefficients `a_{n,m}`.
    pub a: Vec<C64>,
    /// `V`-family coefficients `b_{n,m}`.
    pub b: Vec<C64>,
}

impl SphericalTraceExpansion {
    /// Zero expansion of the given order on `S_R`.
    pub fn zeros(order: usize, radius: f64) -> Self {
        let len = mode_count(order);
        Self { order, radius, a: vec![C64::new(0.0, 0.0); len], b: vec![C64::new(0.0, 0.0); len] }
    }

    /// Wrap existing coefficient arrays, checking the length invariant.
    pub fn from_parts(order: usize, radius: f64, a: Vec<C64>, b: Vec<C64>) -> Result<Self> {
        let len = mode_count(order);
        if a.len() != len || b.len() != len {
            return Err(Error::InvalidInput(format!(
                "coefficient arrays must have length N(N+2) = {len}, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        if !(radius > 0.0) {
            return Err(Error::InvalidInput(format!("radius must be positive, got {radius}")));
        }
        Ok(Self { order, radius, a, b })
    }

    /// Evaluate the expansion at direction `x̂` (normalized internally);
    /// returns the tangential field value at the surface point `R·x̂`.
    pub fn synthesize(&self, xhat: &Vec3) -> CVec3 {
        let (_, us, vs) = eval_tangential_basis(self.order, xhat);
        let mut out = CVec3::zeros();
        for k in 0..self.a.len() {
            let u = us[k] / self.radius;
            let v = vs[k] / self.radius;
            out += CVec3::new(
                self.a[k] * u.x + self.b[k] * v.x,
                self.a[k] * u.y + self.b[k] * v.y,
                self.a[k] * u.z + self.b[k] * v.z,
            );
        }
        out
    }

    /// `L²(S_R)` norm via Parseval (the basis is orthonormal on `S_R`).
    pub fn norm(&self) -> f64 {
        self.a
            .iter()
            .chain(&self.b)
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Copy truncated to a lower order `n_trunc ≤ N` (drops higher modes).
    pub fn truncated(&self, n_trunc: usize) -> Result<Self> {
        if n_trunc > self.order || n_trunc == 0 {
            return Err(Error::InvalidOrder(format!(
                "truncation order {n_trunc} outside 1..={}",
                self.order
            )));
        }
        let len = mode_count(n_trunc);
        Ok(Self {
            order: n_trunc,
            radius: self.radius,
            a: self.a[..len].to_vec(),
            b: self.b[..len].to_vec(),
        })
    }
}

/// Relative normal-component bound for fields passed to [`project_trace`].
pub const TANGENTIAL_TOL: f64 = 1e-8;

/// Projects sampled tangential fields on `S_R` into a
/// [`SphericalTraceExpansion`] via discrete `L²(S_R)` inner products.
///
/// The constructor demands a quadrature that integrates products of basis
/// functions up to order `N` exactly (the tensor grid of
/// [`crate::geometry::quadrature::sphere_gauss_grid`] with `n_θ ≥ N+1`,
/// `n_φ ≥ 2N+2` does); discrete orthonormality is verified on a sample of
/// mode pairs at build time rather than trusted.
pub struct TraceProjector {
    order: usize,
    radius: f64,
    weights: Vec<f64>,
    normals: Vec<Vec3>,
    /// Basis values per point: `2K` entries per point (`U` family then `V`
    /// family, each divided by `R`), `K = N(N+2)`.
    basis: Vec<Vec3>,
}

impl TraceProjector {
    /// Precompute basis values on the quadrature and verify it resolves
    /// order `N`.
    pub fn new(quad: &SurfaceQuadrature, order: usize) -> Result<Self> {
        if order == 0 || order > N_MAX {
            return Err(Error::InvalidOrder(format!("projection order {order} outside 1..={N_MAX}")));
        }
        if quad.is_empty() {
            return Err(Error::InvalidInput("empty surface quadrature".into()));
        }
        let radius = quad.points[0].norm();
        for p in &quad.points {
            if (p.norm() - radius).abs() > 1e-9 * radius {
                return Err(Error::InvalidInput(
                    "quadrature points do not lie on a common sphere".into(),
                ));
            }
        }
        let k = mode_count(order);
        let mut basis = Vec::with_capacity(quad.len() * 2 * k);
        for p in &quad.points {
            let (_, us, vs) = eval_tangential_basis(order, &(p / radius));
            basis.extend(us.iter().map(|u| u / radius));
            basis.extend(vs.iter().map(|v| v / radius));
        }
        let proj = Self {
            order,
            radius,
            weights: quad.weights.clone(),
            normals: quad.normals.clone(),
            basis,
        };
        proj.check_orthonormality()?;
        Ok(proj)
    }

    /// Spot-check discrete orthonormality: first/last modes of each family
    /// against themselves and each other.
    fn check_orthonormality(&self) -> Result<()> {
        let k = mode_count(self.order);
        let probes = [0usize, k / 2, k - 1, k, k + k / 2, 2 * k - 1];
        for &i in &probes {
            for &j in &probes {
                let mut g = 0.0;
                for (q, w) in self.weights.iter().enumerate() {
                    g += w * self.basis[q * 2 * k + i].dot(&self.basis[q * 2 * k + j]);
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                if (g - expect).abs() > 1e-10 {
                    return Err(Error::InvalidInput(format!(
                        "quadrature does not resolve order {}: Gram[{i},{j}] = {g:.3e}",
                        self.order
                    )));
                }
            }
        }
        Ok(())
    }

    /// Project field samples (one value per quadrature point, in point
    /// order) into the expansion. Fails if any sample has a normal component
    /// above [`TANGENTIAL_TOL`] relative to the largest sample.
    pub fn project(&self, values: &[CVec3]) -> Result<SphericalTraceExpansion> {
        if values.len() != self.weights.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} samples, got {}",
                self.weights.len(),
                values.len()
            )));
        }
        let vmax = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if vmax > 0.0 {
            let worst = values
                .iter()
                .zip(&self.normals)
                .map(|(v, n)| {
                    (v.x * n.x + v.y * n.y + v.z * n.z).norm()
                })
                .fold(0.0, f64::max);
            if worst > TANGENTIAL_TOL * vmax {
                return Err(Error::NotTangential { ratio: worst / vmax, tol: TANGENTIAL_TOL });
            }
        }
        let k = mode_count(self.order);
        let mut coeffs = DVector::from_element(2 * k, C64::new(0.0, 0.0));
        for (q, (v, w)) in values.iter().zip(&self.weights).enumerate() {
            for i in 0..2 * k {
                let b = &self.basis[q * 2 * k + i];
                coeffs[i] += *w * (v.x * b.x + v.y * b.y + v.z * b.z);
            }
        }
        let a = coeffs.as_slice()[..k].to_vec();
        let b = coeffs.as_slice()[k..].to_vec();
        SphericalTraceExpansion::from_parts(self.order, self.radius, a, b)
    }

    /// Sphere radius inferred from the quadrature.
    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// One-shot projection of tangential samples on a sphere quadrature.
pub fn project_trace(
    quad: &SurfaceQuadrature,
    values: &[CVec3],
    order: usize,
) -> Result<SphericalTraceExpansion> {
    TraceProjector::new(quad, order)?.project(values)
}

/// Truncated Calderón map: per-mode multipliers of the electric-to-magnetic
/// DtN on `S_R`, depending on `n` only (rotational invariance).
#[derive(Debug, Clone)]
pub struct DtNOperator {
    order: usize,
    radius: f64,
    kappa: C64,
    /// `g_u(n)`, index `n-1`: multiplies `a_{n,m}` into the output `V` family.
    g_u: Vec<C64>,
    /// `g_v(n)`, index `n-1`: multiplies `b_{n,m}` into the output `U` family.
    g_v: Vec<C64>,
}

impl DtNOperator {
    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Sphere radius `R`.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Wavenumber the map was built for.
    pub fn kappa(&self) -> C64 {
        self.kappa
    }

    /// Multiplier sending `a_{n,m}` (U-family input) to the V-family output.
    pub fn g_u(&self, n: usize) -> C64 {
        self.g_u[n - 1]
    }

    /// Multiplier sending `b_{n,m}` (V-family input) to the U-family output.
    pub fn g_v(&self, n: usize) -> C64 {
        self.g_v[n - 1]
    }

    /// Per-mode 2×2 matrix acting on the coefficient pair `(a, b)`:
    /// off-diagonal because the map swaps the families.
    pub fn multiplier(&self, n: usize) -> [[C64; 2]; 2] {
        let zero = C64::new(0.0, 0.0);
        [[zero, self.g_v(n)], [self.g_u(n), zero]]
    }

    /// Apply the map to an expansion of order `≤ N` on the same sphere.
    pub fn apply(&self, lam: &SphericalTraceExpansion) -> Result<SphericalTraceExpansion> {
        if lam.order > self.order {
            return Err(Error::OrderMismatch { op: self.order, operand: lam.order });
        }
        if (lam.radius - self.radius).abs() > 1e-12 * self.radius {
            return Err(Error::InvalidInput(format!(
                "expansion radius {} does not match operator radius {}",
                lam.radius, self.radius
            )));
        }
        let mut out = SphericalTraceExpansion::zeros(lam.order, lam.radius);
        for k in 0..lam.a.len() {
            let (n, _) = mode_from_index(k);
            out.a[k] = self.g_v[n - 1] * lam.b[k];
            out.b[k] = self.g_u[n - 1] * lam.a[k];
        }
        Ok(out)
    }
}

/// Build the truncated Calderón map for wavenumber `κ` on `S_R`.
///
/// Admissible wavenumbers are `Re κ > 0` (physical, radiating) and purely
/// imaginary `κ = is, s > 0` (the auxiliary coercive map used to
/// precondition the analysis; shipped scenarios use exactly `κ = i`).
pub fn build_calderon(kappa: C64, radius: f64, order: usize) -> Result<DtNOperator> {
    if order == 0 || order > N_MAX {
        return Err(Error::InvalidOrder(format!("DtN order {order} outside 1..={N_MAX}")));
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidInput(format!("radius must be positive, got {radius}")));
    }
    let admissible = kappa.re > 0.0 || (kappa.re == 0.0 && kappa.im > 0.0);
    if !admissible {
        return Err(Error::InvalidInput(format!(
            "wavenumber must satisfy Re κ > 0 or κ = is (s > 0), got {kappa}"
        )));
    }
    let t = kappa * radius;
    let i = C64::i();
    let mut g_u = Vec::with_capacity(order);
    let mut g_v = Vec::with_capacity(order);
    for n in 1..=order {
        let (h, hp) = spherical_hankel(n, t)?;
        // ζ_n'(t) = h_n(t) + t·h_n'(t)
        let zeta_p = h + t * hp;
        if h.norm() < 1e-280 || zeta_p.norm() < 1e-280 {
            return Err(Error::SolverBreakdown(format!(
                "Hankel data underflow at mode n = {n}, κR = {t}"
            )));
        }
        let gu = zeta_p / (i * t * h);
        let gv = (t * h) / (i * zeta_p);
        // Structural identity of the two families; fails only on a broken
        // Hankel evaluation.
        debug_assert!((gu * gv + 1.0).norm() < 1e-10);
        g_u.push(gu);
        g_v.push(gv);
    }
    Ok(DtNOperator { order, radius, kappa, g_u, g_v })
}

/// Apply the map: the expansion of `G_e(λ)` for `λ` of order `≤ op.order`.
pub fn apply_dtn(op: &DtNOperator, lam: &SphericalTraceExpansion) -> Result<SphericalTraceExpansion> {
    op.apply(lam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::quadrature::sphere_gauss_grid;
    use crate::kernels::{mode_index, vector_spherical_harmonics, ElectricDipole};
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const R: f64 = 2.0;

    fn grid_for(order: usize) -> SurfaceQuadrature {
        sphere_gauss_grid(order + 1, 2 * order + 2, R)
    }

    fn cvec(v: Vec3) -> CVec3 {
        CVec3::new(v.x.into(), v.y.into(), v.z.into())
    }

    fn random_expansion(order: usize, rng: &mut StdRng) -> SphericalTraceExpansion {
        let mut lam = SphericalTraceExpansion::zeros(order, R);
        for k in 0..lam.a.len() {
            lam.a[k] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            lam.b[k] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        lam
    }

    /// Exterior multipole `M_{n,m}(x) = curl(x h_n(κ|x|) Y_n^m) =
    /// -√(n(n+1)) h_n(κr) V_n^m(x̂)`.
    fn exterior_m(n: usize, m: i32, kappa: Complex64, x: &Vec3) -> CVec3 {
        let r = x.norm();
        let (_, _, v) = vector_spherical_harmonics(n, m, &(x / r)).unwrap();
        let (h, _) = spherical_hankel(n, kappa * r).unwrap();
        let s = -((n * (n + 1)) as f64).sqrt() * h;
        CVec3::new(s * v.x, s * v.y, s * v.z)
    }

    /// Exterior multipole `N_{n,m} = (1/κ) curl M_{n,m} = n(n+1) h_n/(κr) Y x̂
    /// + ζ_n'(κr)/(κr) √(n(n+1)) U`.
    fn exterior_n(n: usize, m: i32, kappa: Complex64, x: &Vec3) -> CVec3 {
        let r = x.norm();
        let xhat = x / r;
        let (y, u, _) = vector_spherical_harmonics(n, m, &xhat).unwrap();
        let (h, hp) = spherical_hankel(n, kappa * r).unwrap();
        let t = kappa * r;
        let zeta_p = h + t * hp;
        let radial = (n * (n + 1)) as f64 * h / t * y;
        let tang = zeta_p / t * ((n * (n + 1)) as f64).sqrt();
        CVec3::new(
            radial * xhat.x + tang * u.x,
            radial * xhat.y + tang * u.y,
            radial * xhat.z + tang * u.z,
        )
    }

    /// Central-difference curl of a complex field, step `e`.
    fn fd_curl(f: impl Fn(&Vec3) -> CVec3, x: &Vec3, e: f64) -> CVec3 {
        let d = |i: usize| {
            let mut hp = *x;
            let mut hm = *x;
            hp[i] += e;
            hm[i] -= e;
            (f(&hp) - f(&hm)) / Complex64::from(2.0 * e)
        };
        let (dx, dy, dz) = (d(0), d(1), d(2));
        CVec3::new(dy.z - dz.y, dz.x - dx.z, dx.y - dy.x)
    }

    #[test]
    fn projecting_the_unit_basis_gives_the_radius_constant() {
        let quad = grid_for(4);
        let proj = TraceProjector::new(&quad, 4).unwrap();
        let samples: Vec<CVec3> = quad
            .points
            .iter()
            .map(|p| {
                let (_, u, _) = vector_spherical_harmonics(1, 0, &(p / R)).unwrap();
                cvec(u)
            })
            .collect();
        let lam = proj.project(&samples).unwrap();
        // Unit-sphere-orthonormal U_1^0 against the S_R-orthonormal basis
        // U/R picks up exactly one factor R.
        assert_relative_eq!(lam.a[mode_index(1, 0)].re, R, epsilon = 1e-12);
        assert!(lam.a[mode_index(1, 0)].im.abs() < 1e-12);
        for k in 0..lam.a.len() {
            if k != mode_index(1, 0) {
                assert!(lam.a[k].norm() < 1e-12, "leak into U mode {k}");
            }
            assert!(lam.b[k].norm() < 1e-12, "leak into V mode {k}");
        }
    }

    #[test]
    fn zero_field_projects_to_zero_and_maps_to_zero() {
        let quad = grid_for(3);
        let samples = vec![CVec3::zeros(); quad.len()];
        let lam = project_trace(&quad, &samples, 3).unwrap();
        assert_eq!(lam.norm(), 0.0);
        let op = build_calderon(Complex64::new(2.0, 0.0), R, 3).unwrap();
        assert_eq!(apply_dtn(&op, &lam).unwrap().norm(), 0.0);
    }

    /// Round trip random coefficients → field samples → coefficients.
    #[test]
    fn random_expansion_round_trips_through_projection() {
        let order = 6;
        let quad = grid_for(order);
        let proj = TraceProjector::new(&quad, order).unwrap();
        let mut rng = StdRng::seed_from_u64(31);
        let lam = random_expansion(order, &mut rng);
        let samples: Vec<CVec3> =
            quad.points.iter().map(|p| lam.synthesize(&(p / R))).collect();
        let back = proj.project(&samples).unwrap();
        for k in 0..lam.a.len() {
            assert!((back.a[k] - lam.a[k]).norm() < 1e-10, "a[{k}]");
            assert!((back.b[k] - lam.b[k]).norm() < 1e-10, "b[{k}]");
        }
    }

    #[test]
    fn radial_field_is_rejected() {
        let quad = grid_for(3);
        let samples: Vec<CVec3> = quad.normals.iter().map(|n| cvec(*n)).collect();
        match project_trace(&quad, &samples, 3) {
            Err(Error::NotTangential { ratio, .. }) => assert!(ratio > 0.9),
            other => panic!("expected NotTangential, got {other:?}"),
        }
    }

    #[test]
    fn coarse_quadrature_for_the_requested_order_is_rejected() {
        // Order 10 needs n_θ ≥ 11; offer 6.
        let quad = sphere_gauss_grid(6, 40, R);
        assert!(TraceProjector::new(&quad, 10).is_err());
    }

    /// Pins both multipliers of mode n = 1 against `(1/iκ) x̂ × curl w` with
    /// the curl taken by finite differences of the closed-form exterior
    /// fields — the conventions (time factor, normal orientation, family
    /// swap) all have to be right for both columns to agree.
    #[test]
    fn calderon_multipliers_match_finite_difference_curl_oracle() {
        let kappa = Complex64::new(2.0, 0.0);
        let order = 3;
        let quad = grid_for(order);
        let proj = TraceProjector::new(&quad, order).unwrap();
        let op = build_calderon(kappa, R, order).unwrap();
        let i = Complex64::i();
        for field in [0usize, 1] {
            let w = |x: &Vec3| {
                if field == 0 {
                    exterior_m(1, 0, kappa, x)
                } else {
                    exterior_n(1, 0, kappa, x)
                }
            };
            let mut lam_samples = Vec::with_capacity(quad.len());
            let mut target_samples = Vec::with_capacity(quad.len());
            for (p, nrm) in quad.points.iter().zip(&quad.normals) {
                let val = w(p);
                let xhat = cvec(*nrm);
                lam_samples.push(xhat.cross(&val));
                let curl = fd_curl(w, p, 1e-5);
                target_samples.push(xhat.cross(&curl) / (i * kappa));
            }
            let lam = proj.project(&lam_samples).unwrap();
            let target = proj.project(&target_samples).unwrap();
            let got = op.apply(&lam).unwrap();
            let mut err = 0.0f64;
            for k in 0..got.a.len() {
                err = err.max((got.a[k] - target.a[k]).norm());
                err = err.max((got.b[k] - target.b[k]).norm());
            }
            let scale = target.norm();
            assert!(
                err < 1e-6 * scale,
                "multiplier column {field}: coefficient error {err:.3e} vs scale {scale:.3e}"
            );
        }
    }

    #[test]
    fn map_is_linear_and_mode_diagonal() {
        let op = build_calderon(Complex64::new(2.0, 0.0), R, 5).unwrap();
        let mut rng = StdRng::seed_from_u64(77);
        let lam = random_expansion(5, &mut rng);
        let mu = random_expansion(5, &mut rng);
        let (alpha, beta) = (Complex64::new(0.3, -1.1), Complex64::new(-0.8, 0.25));
        let mut combo = SphericalTraceExpansion::zeros(5, R);
        for k in 0..combo.a.len() {
            combo.a[k] = alpha * lam.a[k] + beta * mu.a[k];
            combo.b[k] = alpha * lam.b[k] + beta * mu.b[k];
        }
        let lhs = op.apply(&combo).unwrap();
        let ga = op.apply(&lam).unwrap();
        let gb = op.apply(&mu).unwrap();
        for k in 0..lhs.a.len() {
            assert!((lhs.a[k] - alpha * ga.a[k] - beta * gb.a[k]).norm() < 1e-12);
            assert!((lhs.b[k] - alpha * ga.b[k] - beta * gb.b[k]).norm() < 1e-12);
        }
        // Single-mode input produces single-mode output (family-swapped).
        let mut single = SphericalTraceExpansion::zeros(5, R);
        let k0 = mode_index(3, -2);
        single.a[k0] = Complex64::new(1.0, 0.5);
        let out = op.apply(&single).unwrap();
        for k in 0..out.a.len() {
            assert_eq!(out.a[k].norm(), 0.0, "U leak at {k}");
            if k != k0 {
                assert_eq!(out.b[k].norm(), 0.0, "V leak at {k}");
            }
        }
        assert!(out.b[k0].norm() > 0.0);
    }

    /// Exact transparent-boundary relation for a point source inside `B_R`:
    /// `x̂×curl H = iκ G_e(x̂×H)` on `S_R`, with the residual decaying
    /// geometrically in the truncation order (ratio ~ |z|/R per order).
    #[test]
    fn interior_dipole_satisfies_dtn_relation_with_geometric_order_decay() {
        let kappa = 2.0;
        let dip = ElectricDipole::raw(Vec3::new(0.5, 0.4, 1.0), Vec3::new(0.3, -0.8, 0.5));
        let n_top = 16;
        // One fine grid for all orders: 2N+2 in φ and N+1 in θ at the top
        // order resolve every truncation below it.
        let quad = grid_for(n_top);
        let proj = TraceProjector::new(&quad, n_top).unwrap();
        let ik = Complex64::i() * kappa;

        let mut lam_samples = Vec::with_capacity(quad.len());
        let mut target = Vec::with_capacity(quad.len());
        let inc = crate::kernels::IncidentField::Dipole(dip);
        for (p, nrm) in quad.points.iter().zip(&quad.normals) {
            let (_, h) = inc.eval(p, kappa).unwrap();
            let curl_h = inc.curl_h(p, kappa).unwrap();
            let xhat = cvec(*nrm);
            lam_samples.push(xhat.cross(&h));
            target.push(xhat.cross(&curl_h));
        }
        let lam_full = proj.project(&lam_samples).unwrap();
        let scale = target.iter().map(|v| v.norm_squared()).sum::<f64>().sqrt();

        let mut errors = Vec::new();
        for order in [4usize, 7, 10, 13, 15] {
            let op = build_calderon(Complex64::from(kappa), R, order).unwrap();
            let g = op.apply(&lam_full.truncated(order).unwrap()).unwrap();
            // Pointwise residual of the boundary relation on the grid.
            let err: f64 = quad
                .points
                .iter()
                .zip(&target)
                .map(|(p, t)| {
                    let approx = g.synthesize(&(p / R)) * ik;
                    (approx - t).norm_squared()
                })
                .sum::<f64>()
                .sqrt();
            errors.push(err / scale);
        }
        // 1% at N = 15 with room to spare, geometric improvement earlier.
        assert!(errors[4] < 0.01, "N=15 residual {} ≥ 1%", errors[4]);
        for w in errors.windows(2) {
            assert!(
                w[1] < 0.55 * w[0] || w[1] < 1e-9,
                "no geometric decay: {errors:?}"
            );
        }
    }

    /// The auxiliary map at `κ = i` is dissipative: `Re ⟨G̃_e λ, λ̄ × x̂⟩ < 0`
    /// for every nonzero trace, with the pairing realized as the `S_R`
    /// surface integral.
    #[test]
    fn kappa_i_map_pairing_has_strictly_negative_real_part() {
        let order = 15;
        let op = build_calderon(Complex64::i(), R, order).unwrap();
        let quad = grid_for(order);
        let mut rng = StdRng::seed_from_u64(2024);
        for trial in 0..100 {
            // sparse or dense support, both exercised
            let lam = if trial % 2 == 0 {
                random_expansion(order, &mut rng)
            } else {
                let mut l = SphericalTraceExpansion::zeros(order, R);
                for _ in 0..3 {
                    let k = rng.gen_range(0..l.a.len());
                    l.a[k] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    let k = rng.gen_range(0..l.b.len());
                    l.b[k] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                }
                l
            };
            let g = op.apply(&lam).unwrap();
            let mut pairing = Complex64::new(0.0, 0.0);
            for (p, (nrm, w)) in quad.points.iter().zip(quad.normals.iter().zip(&quad.weights)) {
                let xhat = p / R;
                let gv = g.synthesize(&xhat);
                let lv = lam.synthesize(&xhat);
                let lbar = CVec3::new(lv.x.conj(), lv.y.conj(), lv.z.conj());
                let rotated = lbar.cross(&cvec(*nrm));
                pairing += *w * (gv.x * rotated.x + gv.y * rotated.y + gv.z * rotated.z);
            }
            assert!(
                pairing.re < 0.0,
                "trial {trial}: Re⟨G̃λ, λ̄×x̂⟩ = {:.3e} not negative",
                pairing.re
            );
        }
    }

    #[test]
    fn order_and_wavenumber_preconditions_are_enforced() {
        assert!(build_calderon(Complex64::new(-1.0, 0.0), R, 5).is_err());
        assert!(build_calderon(Complex64::new(0.0, -2.0), R, 5).is_err());
        assert!(build_calderon(Complex64::new(2.0, 0.0), R, 0).is_err());
        assert!(build_calderon(Complex64::new(2.0, 0.0), R, N_MAX + 1).is_err());
        let op = build_calderon(Complex64::new(2.0, 0.0), R, 5).unwrap();
        let lam = SphericalTraceExpansion::zeros(8, R);
        match op.apply(&lam) {
            Err(Error::OrderMismatch { op: 5, operand: 8 }) => {}
            other => panic!("expected order mismatch, got {other:?}"),
        }
        let wrong_r = SphericalTraceExpansion::zeros(5, 1.5);
        assert!(op.apply(&wrong_r).is_err());
    }
}
