//! Generalized sine and cosine.
//!
//! `sn_k` solves `y'' + k y = 0` with `y(0) = 0, y'(0) = 1`, and `cn_k = sn_k'`.
//! Near `k t² = 0` both switch to their Taylor series so the three sign
//! branches join continuously.

const SERIES_THRESHOLD: f64 = 1e-8;

/// `sinh(√-k t)/√-k` for `k < 0`, `t` for `k = 0`, `sin(√k t)/√k` for `k > 0`.
pub fn sn(k: f64, t: f64) -> f64 {
    let x = k * t * t;
    if x.abs() < SERIES_THRESHOLD {
        // t (1 - x/6 + x²/120)
        return t * (1.0 - x / 6.0 + x * x / 120.0);
    }
    if k > 0.0 {
        let s = k.sqrt();
        (s * t).sin() / s
    } else {
        let s = (-k).sqrt();
        (s * t).sinh() / s
    }
}

/// Derivative of [`sn`] in `t`.
pub fn cn(k: f64, t: f64) -> f64 {
    let x = k * t * t;
    if x.abs() < SERIES_THRESHOLD {
        return 1.0 - x / 2.0 + x * x / 24.0;
    }
    if k > 0.0 {
        (k.sqrt() * t).cos()
    } else {
        ((-k).sqrt() * t).cosh()
    }
}

/// `∫₀ᵗ sn_k`, i.e. `(1 - cn_k(t))/k`, with the `t²/2` limit near `k t² = 0`.
pub fn sn_integral(k: f64, t: f64) -> f64 {
    let x = k * t * t;
    if x.abs() < SERIES_THRESHOLD {
        return t * t * (0.5 - x / 24.0 + x * x / 720.0);
    }
    // half-angle forms avoid the cancellation in 1 - cn
    if k > 0.0 {
        let s = (0.5 * k.sqrt() * t).sin();
        2.0 * s * s / k
    } else {
        let s = (0.5 * (-k).sqrt() * t).sinh();
        -2.0 * s * s / k
    }
}

/// Area of the unit round sphere `S^d` (so `d = 1` is the circle, `2π`).
pub fn unit_sphere_area(d: usize) -> f64 {
    use std::f64::consts::PI;
    // ω_0 = 2, ω_1 = 2π, ω_d = 2π/(d-1) · ω_{d-2}
    let (mut even, mut odd) = (2.0, 2.0 * PI);
    if d == 0 {
        return even;
    }
    let mut k = 1;
    while k < d {
        k += 1;
        if k.is_multiple_of(2) {
            even *= 2.0 * PI / (k as f64 - 1.0);
        } else {
            odd *= 2.0 * PI / (k as f64 - 1.0);
        }
    }
    if d.is_multiple_of(2) {
        even
    } else {
        odd
    }
}
