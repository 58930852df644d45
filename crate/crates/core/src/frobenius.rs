//! Power-series solutions about the regular singular point z = 0.
//!
//! The zero-exponent Frobenius coefficients c_n of Φ(z) = Σ c_n (sz)^n obey
//! the three-term recurrence
//!
//! ```text
//! n(n-1+p0) c_n + (p1(n-1) + q0) c_{n-1} + (-2(n-2) + q1) c_{n-2} = 0,
//! ```
//!
//! which terminates into a degree-N polynomial when q1 = 2N and -q0 is an
//! eigenvalue of the leading (N+1)x(N+1) minor of the recurrence matrix.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::ToleranceConfig;
use crate::spectral::{
    eigenvectors_for_roots, normalize_eigenvector, nullspace_vector, tridiag_char_poly,
};
use crate::types::{
    BiconfluentParams, CoefficientSeries, SeriesKind, SpectrumEigenvector, SpectrumResult,
};

/// Recurrence factors R_n, Q_n, P_n at index n.
fn recurrence_rqp(params: &BiconfluentParams, n: usize) -> (Complex64, Complex64, Complex64) {
    let nf = n as f64;
    let r = nf * (nf - 1.0 + params.p0);
    let q = params.p1 * (nf - 1.0) + params.q0;
    let p = -2.0 * (nf - 2.0) + params.q1;
    (r, q, p)
}

/// Coefficients c_0..c_{n_terms-1} of the zero-exponent Frobenius branch,
/// normalized to c_0 = 1.
///
/// Fails with [`Error::IndicialCollision`] when R_n = n(n-1+p0) vanishes for
/// some n below `n_terms`, i.e. when p0 is a non-positive integer and the
/// zero-exponent branch does not exist; the Hermite representation covers
/// those parameters.
pub fn frobenius_coefficients(
    params: &BiconfluentParams,
    n_terms: usize,
) -> Result<CoefficientSeries> {
    let mut c = Vec::with_capacity(n_terms);
    c.push(Complex64::new(1.0, 0.0));
    for n in 1..n_terms {
        let (r, q, p) = recurrence_rqp(params, n);
        if r.norm() < 1e-13 * (n as f64) * (n as f64) {
            return Err(Error::IndicialCollision { index: n });
        }
        let mut acc = q * c[n - 1];
        if n >= 2 {
            acc += p * c[n - 2];
        }
        c.push(-acc / r);
    }
    Ok(CoefficientSeries::new(c, SeriesKind::FrobeniusC))
}

/// Partial sum of Σ c_n (sz)^n with the relative-term stopping rule: stop
/// once |term| < tol_series * |partial sum| for three consecutive terms, or
/// at the end of the list.
pub fn evaluate_frobenius(
    coeffs: &CoefficientSeries,
    params: &BiconfluentParams,
    z: Complex64,
    cfg: &ToleranceConfig,
) -> Result<Complex64> {
    debug_assert_eq!(coeffs.kind, SeriesKind::FrobeniusC);
    let w = params.s * z;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    let mut small_streak = 0;
    let mut prev_norm = f64::INFINITY;
    let mut growing = false;
    for (n, &c) in coeffs.values.iter().enumerate() {
        if n >= cfg.max_terms {
            if growing {
                return Err(Error::NonConvergence { terms: n });
            }
            break;
        }
        let term = c * power;
        sum += term;
        power *= w;
        let t = term.norm();
        growing = t > prev_norm && t > 1.0;
        prev_norm = t;
        if t < cfg.tol_series * sum.norm() {
            small_streak += 1;
            if small_streak >= 3 {
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    Ok(sum)
}

/// Leading (N+1)x(N+1) minor of the Frobenius recurrence matrix, whose
/// eigenvalues are the admissible -q0.
///
/// Row n of the linear system over (c_0..c_N) is the recurrence at order
/// n+1 with q1 = 2N:
/// sub-diagonal 2(N-n+1), diagonal p1*n, super-diagonal (n+1)(n+p0).
fn frobenius_minor(p0: Complex64, p1: Complex64, n_max: usize) -> Vec<Vec<Complex64>> {
    let size = n_max + 1;
    let zero = Complex64::new(0.0, 0.0);
    let mut m = vec![vec![zero; size]; size];
    for n in 0..size {
        let nf = n as f64;
        m[n][n] = p1 * nf;
        if n > 0 {
            m[n][n - 1] = Complex64::new(2.0 * (n_max as f64 - nf + 1.0), 0.0);
        }
        if n + 1 < size {
            m[n][n + 1] = (nf + 1.0) * (nf + p0);
        }
    }
    m
}

/// Termination spectrum at level N (q1 = 2N implied): the monic
/// characteristic polynomial det(M + q0 I) of the minor, its roots, and one
/// eigenvector per root normalized to component 0 = 1.
pub fn frobenius_spectrum(
    p0: Complex64,
    p1: Complex64,
    n_max: usize,
    cfg: &ToleranceConfig,
) -> SpectrumResult {
    let size = n_max + 1;
    // Row k of M + q0 I contributes (M[k][k] + q0); couplings multiply.
    let diag: Vec<(Complex64, Complex64)> = (0..size)
        .map(|k| (p1 * k as f64, Complex64::new(1.0, 0.0)))
        .collect();
    let products: Vec<Complex64> = (1..size)
        .map(|k| {
            let kf = k as f64;
            Complex64::new(2.0 * (n_max as f64 - kf + 1.0), 0.0) * (kf * (kf - 1.0 + p0))
        })
        .collect();
    let char_poly = tridiag_char_poly(&diag, &products).monic();

    let mut roots = char_poly.roots(cfg);
    let eigenvectors = eigenvectors_for_roots(&mut roots, |q0| {
        let mut m = frobenius_minor(p0, p1, n_max);
        for (k, row) in m.iter_mut().enumerate() {
            row[k] += q0;
        }
        let (v, anchor) = normalize_eigenvector(nullspace_vector(m));
        SpectrumEigenvector {
            coefficients: CoefficientSeries::new(v, SeriesKind::FrobeniusC),
            normalized_at: anchor,
        }
    });

    SpectrumResult {
        n_max,
        char_poly,
        admissible_q0: roots,
        eigenvectors,
    }
}

/// Maximum relative residual of the recurrence over a coefficient list; used
/// to check spectrum eigenvectors and generated series.
pub fn recurrence_residual(params: &BiconfluentParams, coeffs: &[Complex64]) -> f64 {
    let mut worst: f64 = 0.0;
    for n in 1..coeffs.len() {
        let (r, q, p) = recurrence_rqp(params, n);
        let mut lhs = r * coeffs[n] + q * coeffs[n - 1];
        let mut scale = (r * coeffs[n]).norm() + (q * coeffs[n - 1]).norm();
        if n >= 2 {
            lhs += p * coeffs[n - 2];
            scale += (p * coeffs[n - 2]).norm();
        }
        if scale > 0.0 {
            worst = worst.max(lhs.norm() / scale.max(1e-300));
        }
    }
    worst
}
