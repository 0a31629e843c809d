//! Spherical Bessel and Hankel functions.
//!
//! `h_n^{(1)}` is evaluated by upward recurrence from the closed forms of
//! `h₀`, `h₁` (stable: the Hankel functions grow with order), for real or
//! complex argument — the Calderón map needs `κ = i`. `j_n` uses Miller's
//! downward recurrence with normalization against `j₀` (upward is unstable
//! for the recessive solution), `y_n` upward.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest order accepted by the special-function evaluators.
pub const N_MAX: usize = 25;

fn check_order(n: usize, n_max: usize) -> Result<()> {
    if n > n_max {
        return Err(Error::InvalidOrder(format!("order n = {n} exceeds N_max = {n_max}")));
    }
    Ok(())
}

/// First-kind spherical Hankel function and derivative, `(h_n(x), h_n'(x))`.
///
/// Valid for complex `x ≠ 0`; orders up to [`N_MAX`].
pub fn spherical_hankel(n: usize, x: Complex64) -> Result<(Complex64, Complex64)> {
    spherical_hankel_with_max(n, x, N_MAX)
}

/// [`spherical_hankel`] with an explicit order cap (callers that configure
/// a larger table must raise the cap consciously).
pub fn spherical_hankel_with_max(n: usize, x: Complex64, n_max: usize) -> Result<(Complex64, Complex64)> {
    check_order(n, n_max)?;
    if x.norm() < 1e-14 {
        return Err(Error::NearSingularity { dist: x.norm() });
    }
    let table = hankel_table(n.max(1), x);
    let h_n = table[n];
    let h_prime = if n == 0 {
        -table[1]
    } else {
        table[n - 1] - ((n as f64 + 1.0) / x) * table[n]
    };
    Ok((h_n, h_prime))
}

/// All of `h_0 … h_n` by upward recurrence.
fn hankel_table(n: usize, x: Complex64) -> Vec<Complex64> {
    let i = Complex64::i();
    let eix = (i * x).exp();
    let mut h = Vec::with_capacity(n + 1);
    h.push(-i * eix / x); // h₀ = −i e^{ix}/x
    if n >= 1 {
        h.push(-eix * (1.0 / x + i / (x * x))); // h₁
    }
    for k in 1..n {
        let next = ((2 * k + 1) as f64 / x) * h[k] - h[k - 1];
        h.push(next);
    }
    h
}

/// Riccati–Hankel function `ζ_n(t) = t·h_n(t)` and its derivative
/// `ζ_n'(t) = h_n(t) + t·h_n'(t)`.
pub fn riccati_hankel(n: usize, t: Complex64) -> Result<(Complex64, Complex64)> {
    let (h, hp) = spherical_hankel(n, t)?;
    Ok((t * h, h + t * hp))
}

/// Spherical Bessel function of the first kind, `(j_n(x), j_n'(x))`, real
/// argument.
pub fn spherical_bessel_j(n: usize, x: f64) -> Result<(f64, f64)> {
    check_order(n, N_MAX)?;
    if x.abs() < 1e-6 {
        // Series: j_n(x) = x^n/(2n+1)!! · (1 − x²/(2(2n+3)) + …)
        let dfact = (0..n).fold(1.0, |acc, k| acc * (2 * k + 3) as f64); // (2n+1)!!
        let jn = x.powi(n as i32) / dfact * (1.0 - x * x / (2.0 * (2 * n + 3) as f64));
        let jp = if n == 0 {
            -x / 3.0
        } else {
            (n as f64) * x.powi(n as i32 - 1) / dfact
        };
        return Ok((jn, jp));
    }
    let table = bessel_j_table(n.max(1), x);
    let j_n = table[n];
    let j_prime = if n == 0 {
        -table[1]
    } else {
        table[n - 1] - ((n as f64 + 1.0) / x) * table[n]
    };
    Ok((j_n, j_prime))
}

/// `j_0 … j_n` by Miller's downward recurrence, normalized by `j₀ = sin x/x`.
fn bessel_j_table(n: usize, x: f64) -> Vec<f64> {
    // Start far enough above n for the recessive solution to dominate.
    let start = n + 16 + (1.5 * x.abs()) as usize;
    let mut jp1 = 0.0_f64;
    let mut j = 1e-300_f64;
    let mut table = vec![0.0; n + 1];
    for k in (0..=start).rev() {
        let jm1 = ((2 * k + 3) as f64 / x) * j - jp1;
        if k <= n {
            table[k] = jm1;
        }
        jp1 = j;
        j = jm1;
        // Rescale to dodge overflow on long descents.
        if j.abs() > 1e250 {
            let s = 1e-250;
            j *= s;
            jp1 *= s;
            for t in table.iter_mut() {
                *t *= s;
            }
        }
    }
    let scale = (x.sin() / x) / table[0];
    for t in table.iter_mut() {
        *t *= scale;
    }
    table
}

/// Spherical Bessel function of the second kind, `(y_n(x), y_n'(x))`, real
/// argument (upward recurrence; `y_n` is the dominant solution).
pub fn spherical_bessel_y(n: usize, x: f64) -> Result<(f64, f64)> {
    check_order(n, N_MAX)?;
    if x.abs() < 1e-14 {
        return Err(Error::NearSingularity { dist: x.abs() });
    }
    let mut y = Vec::with_capacity(n.max(1) + 1);
    y.push(-x.cos() / x);
    y.push(-x.cos() / (x * x) - x.sin() / x);
    for k in 1..n {
        let next = ((2 * k + 1) as f64 / x) * y[k] - y[k - 1];
        y.push(next);
    }
    let y_n = y[n];
    let y_prime = if n == 0 {
        -y[1]
    } else {
        y[n - 1] - ((n as f64 + 1.0) / x) * y[n]
    };
    Ok((y_n, y_prime))
}
