//! Reciprocal gamma and Pochhammer kernels for complex arguments.
//!
//! The expansion prefactors divide by gamma at arguments that routinely hit
//! poles, so 1/Γ (entire, exactly zero at the poles) is the primitive here;
//! plain Γ is exposed only for ratios known to stay off the poles.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Lanczos parameter g = 7 with the standard 9-coefficient table
/// (Godfrey / GSL / Boost).
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Absolute window in which an argument counts as a non-positive integer.
pub(crate) const POLE_TOL: f64 = 1e-12;

/// Returns `Some(m)` when `z` lies within `tol` of the non-positive integer
/// `-m`.
pub(crate) fn near_nonpositive_integer(z: Complex64, tol: f64) -> Option<u64> {
    if z.im.abs() > tol {
        return None;
    }
    let r = z.re.round();
    if r <= 0.0 && (z.re - r).abs() <= tol {
        Some(-r as u64)
    } else {
        None
    }
}

/// Lanczos core, valid for Re(z) >= 0.5.
fn gamma_lanczos(z: Complex64) -> Complex64 {
    let x = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(x + 0.5) * (-t).exp() * acc
}

/// Gamma function for complex argument.
///
/// Returns infinity at the poles; callers that can land on a pole should use
/// [`recip_gamma`] instead.
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        gamma_lanczos(z)
    } else {
        // Reflection: Γ(z) Γ(1-z) = π / sin(πz).
        let s = (PI * z).sin();
        if s.norm() == 0.0 {
            return Complex64::new(f64::INFINITY, 0.0);
        }
        PI / (s * gamma_lanczos(1.0 - z))
    }
}

/// Reciprocal gamma 1/Γ(z), entire in z.
///
/// Exactly zero when z is within 1e-12 of a non-positive integer, which is
/// what implements the term suppression in the Hermite-function prefactors.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if near_nonpositive_integer(z, POLE_TOL).is_some() {
        return Complex64::new(0.0, 0.0);
    }
    if z.re >= 0.5 {
        1.0 / gamma_lanczos(z)
    } else {
        // 1/Γ(z) = sin(πz) Γ(1-z) / π, and Re(1-z) > 0.5 here.
        (PI * z).sin() * gamma_lanczos(1.0 - z) / PI
    }
}

/// Pochhammer rising factorial (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1.
pub fn pochhammer(a: Complex64, k: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for i in 0..k {
        acc *= a + i as f64;
    }
    acc
}
