//! Real spherical harmonics and the tangential vector pair on the unit
//! sphere.
//!
//! Convention (documented, fixed across the crate): real-valued orthonormal
//! harmonics
//!
//! ```text
//!   Y_n^0  = P̂_n^0(cosθ)
//!   Y_n^m  = √2 · P̂_n^m(cosθ) · cos(mφ)      (m > 0)
//!   Y_n^-m = √2 · P̂_n^m(cosθ) · sin(mφ)      (m > 0)
//! ```
//!
//! with `P̂_n^m` the fully normalized associated Legendre functions (no
//! Condon–Shortley phase), and the tangential pair
//!
//! ```text
//!   U_n^m = ∇_{S²} Y_n^m / √(n(n+1)),    V_n^m = x̂ × U_n^m ,
//! ```
//!
//! each orthonormal in `L²(S²)`. Internally `P̂_n^m = sinᵐθ · S_n^m(cosθ)`
//! with `S` polynomial, so the `1/sinθ` in the φ-gradient cancels
//! analytically and the poles need no special-casing.

use crate::error::{Error, Result};
use crate::Vec3;

/// Number of tangential modes with `1 ≤ n ≤ N`: `N(N+2)`.
pub fn mode_count(n_max: usize) -> usize {
    n_max * (n_max + 2)
}

/// Flat index of mode `(n, m)` in the ordering `n = 1..N`, `m = -n..n`.
pub fn mode_index(n: usize, m: i32) -> usize {
    debug_assert!(n >= 1 && m.unsigned_abs() as usize <= n);
    n * n - 1 + (m + n as i32) as usize
}

/// Inverse of [`mode_index`].
pub fn mode_from_index(k: usize) -> (usize, i32) {
    let n = ((k + 1) as f64).sqrt() as usize;
    let n = if (n + 1) * (n + 1) <= k + 1 { n + 1 } else { n };
    let m = (k + 1 - n * n) as i32 - n as i32;
    (n, m)
}

/// Triangular index into the `(n, m)` tables, `0 ≤ m ≤ n`.
#[inline]
fn tri(n: usize, m: usize) -> usize {
    n * (n + 1) / 2 + m
}

/// Tables of `S_n^m(c)` and `dS_n^m/dc` for all `0 ≤ m ≤ n ≤ n_max`, where
/// `P̂_n^m(cosθ) = sinᵐθ · S_n^m(cosθ)`.
fn legendre_over_sin_tables(n_max: usize, c: f64) -> (Vec<f64>, Vec<f64>) {
    let len = tri(n_max, n_max) + 1;
    let mut s = vec![0.0; len];
    let mut sp = vec![0.0; len];
    s[tri(0, 0)] = 0.5 / std::f64::consts::PI.sqrt(); // 1/√(4π)
    for m in 1..=n_max {
        // Diagonal: P̂_m^m = √((2m+1)/(2m)) sinθ P̂_{m-1}^{m-1}; the sinθ is
        // absorbed into the definition of S.
        s[tri(m, m)] = ((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * s[tri(m - 1, m - 1)];
    }
    for m in 0..n_max {
        // First off-diagonal seed.
        s[tri(m + 1, m)] = ((2 * m + 3) as f64).sqrt() * c * s[tri(m, m)];
        sp[tri(m + 1, m)] = ((2 * m + 3) as f64).sqrt() * s[tri(m, m)];
        for n in (m + 2)..=n_max {
            let nf = n as f64;
            let mf = m as f64;
            let a = (((2.0 * nf - 1.0) * (2.0 * nf + 1.0)) / ((nf - mf) * (nf + mf))).sqrt();
            let b = (((2.0 * nf + 1.0) * (nf - mf - 1.0) * (nf + mf - 1.0))
                / ((2.0 * nf - 3.0) * (nf - mf) * (nf + mf)))
                .sqrt();
            s[tri(n, m)] = a * c * s[tri(n - 1, m)] - b * s[tri(n - 2, m)];
            sp[tri(n, m)] = a * (s[tri(n - 1, m)] + c * sp[tri(n - 1, m)]) - b * sp[tri(n - 2, m)];
        }
    }
    (s, sp)
}

/// Spherical frame of a direction: `(cosθ, sinθ, φ, θ̂, φ̂)`.
fn spherical_frame(xhat: &Vec3) -> (f64, f64, f64, Vec3, Vec3) {
    let r = xhat.norm();
    let (x, y, z) = (xhat.x / r, xhat.y / r, xhat.z / r);
    let c = z.clamp(-1.0, 1.0);
    let s = (x * x + y * y).sqrt();
    let phi = y.atan2(x); // = 0 at the poles: fixes the frame there
    let (sin_phi, cos_phi) = phi.sin_cos();
    let theta_hat = Vec3::new(cos_phi * c, sin_phi * c, -s);
    let phi_hat = Vec3::new(-sin_phi, cos_phi, 0.0);
    (c, s, phi, theta_hat, phi_hat)
}

/// All tangential basis fields `U_n^m`, `V_n^m` for `1 ≤ n ≤ n_max` at one
/// direction, in [`mode_index`] order, plus the scalar harmonics `Y`.
///
/// Shares one pass of the Legendre recurrences across all modes; the per-mode
/// entry point [`vector_spherical_harmonics`] delegates here.
pub fn eval_tangential_basis(n_max: usize, xhat: &Vec3) -> (Vec<f64>, Vec<Vec3>, Vec<Vec3>) {
    let (c, s, phi, theta_hat, phi_hat) = spherical_frame(xhat);
    let (tb, tpb) = legendre_over_sin_tables(n_max, c);
    let count = mode_count(n_max);
    let mut ys = vec![0.0; count];
    let mut us = vec![Vec3::zeros(); count];
    let mut vs = vec![Vec3::zeros(); count];
    let sqrt2 = std::f64::consts::SQRT_2;
    for n in 1..=n_max {
        let scale = 1.0 / ((n * (n + 1)) as f64).sqrt();
        for m in -(n as i32)..=(n as i32) {
            let ma = m.unsigned_abs() as usize;
            let sv = tb[tri(n, ma)];
            let svp = tpb[tri(n, ma)];
            // trig factor and its φ-derivative
            let (trig, dtrig) = if m == 0 {
                (1.0, 0.0)
            } else if m > 0 {
                let (sin_m, cos_m) = (ma as f64 * phi).sin_cos();
                (sqrt2 * cos_m, -sqrt2 * ma as f64 * sin_m)
            } else {
                let (sin_m, cos_m) = (ma as f64 * phi).sin_cos();
                (sqrt2 * sin_m, sqrt2 * ma as f64 * cos_m)
            };
            let s_pow_m = s.powi(ma as i32);
            // s^{m-1} enters the gradient; for m = 0 that term vanishes.
            let s_pow_m1 = if ma == 0 { 0.0 } else { s.powi(ma as i32 - 1) };
            let y = s_pow_m * sv * trig;
            // ∂θ(sinᵐθ S(cosθ)) = m sinᵐ⁻¹θ cosθ S − sinᵐ⁺¹θ S'
            let dy_dtheta = (ma as f64 * s_pow_m1 * c * sv - s_pow_m * s * svp) * trig;
            // (1/sinθ) ∂φ Y = sinᵐ⁻¹θ S dtrig
            let dy_dphi_over_s = s_pow_m1 * sv * dtrig;
            let k = mode_index(n, m);
            ys[k] = y;
            us[k] = scale * (dy_dtheta * theta_hat + dy_dphi_over_s * phi_hat);
            vs[k] = scale * (dy_dtheta * phi_hat - dy_dphi_over_s * theta_hat);
        }
    }
    (ys, us, vs)
}

/// Scalar harmonic `Y_n^m` and tangential pair `(U_n^m, V_n^m)` at a
/// direction; requires `n ≥ 1`, `|m| ≤ n ≤ N_max` of the special functions.
pub fn vector_spherical_harmonics(n: usize, m: i32, xhat: &Vec3) -> Result<(f64, Vec3, Vec3)> {
    if n == 0 || m.unsigned_abs() as usize > n {
        return Err(Error::InvalidOrder(format!("invalid harmonic order (n, m) = ({n}, {m})")));
    }
    if n > super::bessel::N_MAX {
        return Err(Error::InvalidOrder(format!("n = {n} exceeds N_max = {}", super::bessel::N_MAX)));
    }
    let (ys, us, vs) = eval_tangential_basis(n, xhat);
    let k = mode_index(n, m);
    Ok((ys[k], us[k], vs[k]))
}

/// Scalar harmonic alone (valid down to `n = 0`).
pub fn real_spherical_harmonic(n: usize, m: i32, xhat: &Vec3) -> Result<f64> {
    if m.unsigned_abs() as usize > n {
        return Err(Error::InvalidOrder(format!("invalid harmonic order (n, m) = ({n}, {m})")));
    }
    if n == 0 {
        return Ok(0.5 / std::f64::consts::PI.sqrt());
    }
    Ok(vector_spherical_harmonics(n, m, xhat)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::quadrature::gauss_legendre;
    use approx::assert_relative_eq;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn random_direction(rng: &mut StdRng) -> Vec3 {
        loop {
            let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let n = v.norm();
            if n > 0.1 {
                return v / n;
            }
        }
    }

    /// Product Gauss–Legendre(θ) × trapezoid(φ) quadrature on S², exact for
    /// harmonics up to the requested degree.
    fn sphere_grid(degree: usize) -> Vec<(Vec3, f64)> {
        let n_theta = degree + 1;
        let n_phi = 2 * degree + 2;
        let (nodes, weights) = gauss_legendre(n_theta);
        let mut out = Vec::new();
        for (c, w) in nodes.iter().zip(&weights) {
            let s = (1.0 - c * c).sqrt();
            for k in 0..n_phi {
                let phi = 2.0 * PI * k as f64 / n_phi as f64;
                let p = Vec3::new(s * phi.cos(), s * phi.sin(), *c);
                out.push((p, w * 2.0 * PI / n_phi as f64));
            }
        }
        out
    }

    #[test]
    fn low_order_harmonics_match_closed_forms() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let x = random_direction(&mut rng);
            let (c, s, phi, _, _) = super::spherical_frame(&x);
            let y00 = real_spherical_harmonic(0, 0, &x).unwrap();
            assert_relative_eq!(y00, 0.5 / PI.sqrt(), epsilon = 1e-14);
            let (y10, _, _) = vector_spherical_harmonics(1, 0, &x).unwrap();
            assert_relative_eq!(y10, (3.0 / (4.0 * PI)).sqrt() * c, epsilon = 1e-13);
            let (y11, _, _) = vector_spherical_harmonics(1, 1, &x).unwrap();
            assert_relative_eq!(y11, (3.0 / (4.0 * PI)).sqrt() * s * phi.cos(), epsilon = 1e-13);
            let (y1m1, _, _) = vector_spherical_harmonics(1, -1, &x).unwrap();
            assert_relative_eq!(y1m1, (3.0 / (4.0 * PI)).sqrt() * s * phi.sin(), epsilon = 1e-13);
        }
    }

    #[test]
    fn tangential_and_mutually_orthogonal_pointwise() {
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..50 {
            let x = random_direction(&mut rng);
            for (n, m) in [(1, 0), (2, 1), (3, -2), (5, 4)] {
                let (_, u, v) = vector_spherical_harmonics(n, m, &x).unwrap();
                assert!(u.dot(&x).abs() < 1e-13, "U not tangential");
                assert!(v.dot(&x).abs() < 1e-13, "V not tangential");
                // V = x̂×U exactly
                let vref = x.cross(&u);
                assert!((v - vref).norm() < 1e-13);
            }
        }
    }

    /// Orthonormality of U (and hence V) in L²(S²) via quadrature.
    #[test]
    fn vector_harmonics_orthonormal_on_sphere() {
        let grid = sphere_grid(9);
        for (n, m) in [(1, 0), (2, 1), (3, -2)] {
            let mut norm_u = 0.0;
            let mut norm_v = 0.0;
            let mut uv = 0.0;
            for (x, w) in &grid {
                let (_, u, v) = vector_spherical_harmonics(n, m, x).unwrap();
                norm_u += w * u.dot(&u);
                norm_v += w * v.dot(&v);
                uv += w * u.dot(&v);
            }
            assert_relative_eq!(norm_u, 1.0, epsilon = 1e-8);
            assert_relative_eq!(norm_v, 1.0, epsilon = 1e-8);
            assert!(uv.abs() < 1e-10, "U·V = {uv}");
        }
    }

    /// Cross-mode orthogonality including the scalar family.
    #[test]
    fn cross_mode_inner_products_vanish() {
        let grid = sphere_grid(9);
        let modes = [(1, 0), (1, 1), (2, -1), (3, 2)];
        for (i, &(n1, m1)) in modes.iter().enumerate() {
            for &(n2, m2) in &modes[i + 1..] {
                let mut yy = 0.0;
                let mut uu = 0.0;
                for (x, w) in &grid {
                    let (ya, ua, _) = vector_spherical_harmonics(n1, m1, x).unwrap();
                    let (yb, ub, _) = vector_spherical_harmonics(n2, m2, x).unwrap();
                    yy += w * ya * yb;
                    uu += w * ua.dot(&ub);
                }
                assert!(yy.abs() < 1e-10);
                assert!(uu.abs() < 1e-10);
            }
        }
    }

    /// Finite-difference oracle: U·t = (d/dε) Y(normalize(x̂+εt)) / √(n(n+1))
    /// for tangent directions t, pinning the gradient implementation.
    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = StdRng::seed_from_u64(1234);
        let eps = 1e-6;
        for _ in 0..30 {
            let x = random_direction(&mut rng);
            let t = {
                let a = random_direction(&mut rng);
                let proj = a - x * a.dot(&x);
                proj / proj.norm()
            };
            for (n, m) in [(1, 1), (2, -2), (4, 3), (6, 0)] {
                let (_, u, _) = vector_spherical_harmonics(n, m, &x).unwrap();
                let yp = real_spherical_harmonic(n, m, &((x + eps * t).normalize())).unwrap();
                let ym = real_spherical_harmonic(n, m, &((x - eps * t).normalize())).unwrap();
                let fd = (yp - ym) / (2.0 * eps);
                let scale = ((n * (n + 1)) as f64).sqrt();
                assert_relative_eq!(scale * u.dot(&t), fd, epsilon = 1e-6, max_relative = 1e-5);
            }
        }
    }

    #[test]
    fn poles_are_finite_and_correct() {
        for pole in [Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, -1.0)] {
            // |m| = 1 modes carry the only nonzero tangential values at the
            // poles; everything must evaluate finite.
            for n in 1..=6 {
                for m in -(n as i32)..=(n as i32) {
                    let (y, u, v) = vector_spherical_harmonics(n, m, &pole).unwrap();
                    assert!(y.is_finite() && u.norm().is_finite() && v.norm().is_finite());
                    if m.abs() != 1 && m != 0 {
                        assert!(u.norm() < 1e-14, "m={m} tangential field must vanish at pole");
                    }
                }
            }
            let (_, u, _) = vector_spherical_harmonics(1, 1, &pole).unwrap();
            assert!(u.norm() > 0.1, "|m|=1 mode must not vanish at the pole");
        }
    }

    #[test]
    fn mode_index_round_trips() {
        let mut k = 0;
        for n in 1..=8usize {
            for m in -(n as i32)..=(n as i32) {
                assert_eq!(mode_index(n, m), k);
                assert_eq!(mode_from_index(k), (n, m));
                k += 1;
            }
        }
        assert_eq!(k, mode_count(8));
    }

    #[test]
    fn invalid_orders_rejected() {
        let x = Vec3::new(0.0, 0.0, 1.0);
        assert!(vector_spherical_harmonics(0, 0, &x).is_err());
        assert!(vector_spherical_harmonics(2, 3, &x).is_err());
        assert!(vector_spherical_harmonics(super::super::bessel::N_MAX + 1, 0, &x).is_err());
    }
}
