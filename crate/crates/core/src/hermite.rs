//! Hermite functions of arbitrary complex order and the Hermite-function
//! expansion Φ(z) = Σ d_n H_{β+n}(sz - p1/2) of the biconfluent Heun
//! solution, with its termination spectrum and power re-expansions.
//!
//! H_ν is evaluated through its two-Kummer representation; the direct Taylor
//! series with gamma-ratio coefficients is kept as the independent
//! cross-check route.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hypergeom::{pfq_eval_diag, HypergeomTerm};
use crate::numerics::{
    gamma, near_nonpositive_integer, pochhammer, recip_gamma, ToleranceConfig, POLE_TOL,
};
use crate::spectral::{
    eigenvectors_for_roots, normalize_eigenvector, nullspace_vector, tridiag_char_poly,
};
use crate::types::{
    BiconfluentParams, CoefficientSeries, SeriesKind, SpectrumEigenvector, SpectrumResult,
};

pub(crate) const SQRT_PI: f64 = 1.7724538509055160273;

/// Complex power 2^w.
pub(crate) fn two_pow(w: Complex64) -> Complex64 {
    (w * std::f64::consts::LN_2).exp()
}

/// The Taylor weight Γ((k-ν)/2) / (2 Γ(-ν)) of the Hermite power series.
///
/// For ν at a non-negative integer n both gammas sit on poles and the limit
/// is taken in closed form: zero unless k ≤ n with n-k even, where it equals
/// (-1)^(n-m) n!/m! with m = (n-k)/2. This one ratio carries all the
/// gamma-pole bookkeeping of the shifted-coefficient formulas.
pub fn hermite_coeff_ratio(nu: Complex64, k: usize) -> Complex64 {
    if let Some(n) = near_nonpositive_integer(-nu, POLE_TOL) {
        let n = n as usize;
        if k > n || (n - k) % 2 != 0 {
            return Complex64::new(0.0, 0.0);
        }
        let m = (n - k) / 2;
        let mut ratio = 1.0;
        for i in m + 1..=n {
            ratio *= i as f64;
        }
        let sign = if (n - m) % 2 == 0 { 1.0 } else { -1.0 };
        return Complex64::new(sign * ratio, 0.0);
    }
    let half = (Complex64::new(k as f64, 0.0) - nu) / 2.0;
    gamma(half) * recip_gamma(-nu) / 2.0
}

/// Hermite function H_ν(x) through the two-Kummer representation
///
/// ```text
/// H_ν(x) = 2^ν √π [ 1F1(-ν/2; 1/2; x²)/Γ((1-ν)/2)
///                   - 2x · 1F1((1-ν)/2; 3/2; x²)/Γ(-ν/2) ]
/// ```
///
/// The reciprocal-gamma zeros drop whichever Kummer term the order parity
/// kills (H_0 has no odd part, H_1 no even part, and so on).
pub fn hermite_eval(nu: Complex64, x: Complex64, cfg: &ToleranceConfig) -> Result<Complex64> {
    hermite_eval_diag(nu, x, cfg).map(|(v, _)| v)
}

/// Like [`hermite_eval`] but also reports the worst cancellation measure of
/// the underlying Kummer series (Σ|term| / |value|). There is no algorithm
/// switch at large |x²|; the measure is the caller's warning signal that
/// the double-precision result has lost about log10 of it digits.
pub fn hermite_eval_diag(
    nu: Complex64,
    x: Complex64,
    cfg: &ToleranceConfig,
) -> Result<(Complex64, f64)> {
    let scale = two_pow(nu) * SQRT_PI;
    let x2 = x * x;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut cancellation: f64 = 1.0;

    let even_gamma = recip_gamma((1.0 - nu) / 2.0);
    if even_gamma.norm() > 0.0 {
        let f = pfq_eval_diag(
            &HypergeomTerm::kummer(-nu / 2.0, Complex64::new(0.5, 0.0)),
            x2,
            cfg,
        )?;
        acc += even_gamma * f.value;
        cancellation = cancellation.max(f.cancellation);
    }
    let odd_gamma = recip_gamma(-nu / 2.0);
    if odd_gamma.norm() > 0.0 {
        let f = pfq_eval_diag(
            &HypergeomTerm::kummer((1.0 - nu) / 2.0, Complex64::new(1.5, 0.0)),
            x2,
            cfg,
        )?;
        acc -= 2.0 * x * odd_gamma * f.value;
        cancellation = cancellation.max(f.cancellation);
    }
    Ok((scale * acc, cancellation))
}

/// H_ν(x) by its Taylor series Σ_k hermite_coeff_ratio(ν,k) (-2x)^k / k!,
/// the cross-check route independent of the Kummer split.
pub fn hermite_eval_series(
    nu: Complex64,
    x: Complex64,
    cfg: &ToleranceConfig,
) -> Result<Complex64> {
    let w = -2.0 * x;
    let mut power_over_fact = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut small_streak = 0;
    let mut prev_norm = f64::INFINITY;
    for k in 0..cfg.max_terms {
        let term = hermite_coeff_ratio(nu, k) * power_over_fact;
        sum += term;
        power_over_fact *= w / (k as f64 + 1.0);
        let t = term.norm();
        if t < cfg.tol_series * sum.norm().max(1e-300) {
            small_streak += 1;
            if small_streak >= 3 {
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
        if k + 1 == cfg.max_terms && t > prev_norm && t > 1.0 {
            return Err(Error::NonConvergence {
                terms: cfg.max_terms,
            });
        }
        prev_norm = t;
    }
    Ok(sum)
}

/// Recurrence factors of the Hermite coefficient ladder at index n.
fn hermite_rqp(params: &BiconfluentParams, n: usize) -> (Complex64, Complex64, Complex64) {
    let nf = n as f64;
    let beta = params.beta();
    let r = 2.0 * nf * (nf + beta);
    let q = params.p1 * (nf - 1.0) + params.p0 * params.p1 - params.q0;
    let p = nf - 2.0 + params.p0;
    (r, q, p)
}

/// Coefficients d_0..d_{n_terms-1} of the Hermite-function expansion,
/// normalized to d_0 = 1, from the three-term recurrence
///
/// ```text
/// 2n(n+β) d_n + (p1(n-1) + p0 p1 - q0) d_{n-1} + (n-2+p0) d_{n-2} = 0.
/// ```
pub fn hermite_coefficients(
    params: &BiconfluentParams,
    n_terms: usize,
) -> Result<CoefficientSeries> {
    let beta = params.beta();
    let mut d = Vec::with_capacity(n_terms);
    d.push(Complex64::new(1.0, 0.0));
    for n in 1..n_terms {
        if (beta + n as f64).norm() < 1e-12 {
            return Err(Error::ResonantOrder { index: n });
        }
        let (r, q, p) = hermite_rqp(params, n);
        let mut acc = q * d[n - 1];
        if n >= 2 {
            acc += p * d[n - 2];
        }
        d.push(-acc / r);
    }
    Ok(CoefficientSeries::new(d, SeriesKind::HermiteD))
}

/// Maximum relative residual of the Hermite recurrence over a coefficient
/// list.
pub fn hermite_recurrence_residual(params: &BiconfluentParams, coeffs: &[Complex64]) -> f64 {
    let mut worst: f64 = 0.0;
    for n in 1..coeffs.len() {
        let (r, q, p) = hermite_rqp(params, n);
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

/// The (N+1)x(N+1) termination matrix of the Hermite ladder at p0 = -N:
/// sub-diagonal n-1-N, diagonal p1(n-N), super-diagonal
/// 2(n+1)(n+1-N) + (n+1) q1; q0 is its eigenvalue.
fn hermite_minor(p1: Complex64, q1: Complex64, n_max: usize) -> Vec<Vec<Complex64>> {
    let size = n_max + 1;
    let zero = Complex64::new(0.0, 0.0);
    let mut m = vec![vec![zero; size]; size];
    for n in 0..size {
        let nf = n as f64;
        m[n][n] = p1 * (nf - n_max as f64);
        if n > 0 {
            m[n][n - 1] = Complex64::new(nf - 1.0 - n_max as f64, 0.0);
        }
        if n + 1 < size {
            m[n][n + 1] =
                Complex64::new(2.0 * (nf + 1.0) * (nf + 1.0 - n_max as f64), 0.0) + (nf + 1.0) * q1;
        }
    }
    m
}

/// Termination spectrum of the Hermite expansion at level N (p0 = -N
/// implied): monic characteristic polynomial det(q0 I - M) of the matrix
/// above, its roots, and normalized eigenvectors (d_0..d_N).
pub fn hermite_spectrum(
    p1: Complex64,
    q1: Complex64,
    n_max: usize,
    cfg: &ToleranceConfig,
) -> SpectrumResult {
    let m = hermite_minor(p1, q1, n_max);
    let size = n_max + 1;
    let diag: Vec<(Complex64, Complex64)> = (0..size)
        .map(|k| (-m[k][k], Complex64::new(1.0, 0.0)))
        .collect();
    let products: Vec<Complex64> = (1..size).map(|k| m[k][k - 1] * m[k - 1][k]).collect();
    let char_poly = tridiag_char_poly(&diag, &products).monic();

    let mut roots = char_poly.roots(cfg);
    let eigenvectors = eigenvectors_for_roots(&mut roots, |q0| {
        let mut a = hermite_minor(p1, q1, n_max);
        for (k, row) in a.iter_mut().enumerate() {
            row[k] -= q0;
        }
        let (v, anchor) = normalize_eigenvector(nullspace_vector(a));
        SpectrumEigenvector {
            coefficients: CoefficientSeries::new(v, SeriesKind::HermiteD),
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

/// A terminated Hermite-function expansion: p0 = -N with N+1 coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteExpansion {
    pub params: BiconfluentParams,
    pub n_max: usize,
    pub d: CoefficientSeries,
}

impl HermiteExpansion {
    /// Wraps parameters plus a coefficient list, requiring p0 to be the
    /// negative of the list length minus one (within 1e-12).
    pub fn new(params: BiconfluentParams, d: CoefficientSeries) -> Result<Self> {
        let n = d.len().checked_sub(1).ok_or(Error::InvalidInput {
            message: "empty Hermite coefficient list".into(),
        })?;
        let expect = Complex64::new(-(n as f64), 0.0);
        if (params.p0 - expect).norm() > 1e-12 {
            return Err(Error::InvalidInput {
                message: format!(
                    "p0 = {} does not match -N = {} required by a terminated expansion",
                    params.p0, expect
                ),
            });
        }
        Ok(Self {
            params,
            n_max: n,
            d,
        })
    }

    /// Builds the expansion for one admissible accessory parameter taken
    /// from a spectrum eigenvector.
    pub fn from_spectrum_root(
        spectrum: &SpectrumResult,
        root_index: usize,
        p1: Complex64,
        q1: Complex64,
        s: Complex64,
    ) -> Result<Self> {
        let q0 = *spectrum
            .admissible_q0
            .get(root_index)
            .ok_or(Error::InvalidInput {
                message: format!("root index {} out of range", root_index),
            })?;
        let params =
            BiconfluentParams::new(Complex64::new(-(spectrum.n_max as f64), 0.0), p1, q0, q1, s)?;
        let d = spectrum.eigenvectors[root_index].coefficients.clone();
        Self::new(params, d)
    }

    /// Order of the n-th term, β + n.
    pub fn order(&self, n: usize) -> Complex64 {
        self.params.beta() + n as f64
    }
}

/// Finite sum Σ d_n H_{β+n}(sz - p1/2).
pub fn evaluate_hermite_series(
    exp: &HermiteExpansion,
    z: Complex64,
    cfg: &ToleranceConfig,
) -> Result<Complex64> {
    evaluate_hermite_series_diag(exp, z, cfg).map(|(v, _)| v)
}

/// The finite sum plus the worst cancellation measure across its terms.
pub fn evaluate_hermite_series_diag(
    exp: &HermiteExpansion,
    z: Complex64,
    cfg: &ToleranceConfig,
) -> Result<(Complex64, f64)> {
    let xi = exp.params.xi(z);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut cancellation: f64 = 1.0;
    for (n, &dn) in exp.d.values.iter().enumerate() {
        if dn.norm() == 0.0 {
            continue;
        }
        let (v, c) = hermite_eval_diag(exp.order(n), xi, cfg)?;
        acc += dn * v;
        cancellation = cancellation.max(c);
    }
    Ok((acc, cancellation))
}

/// d/dz of the finite sum, via H'_ν = 2ν H_{ν-1}.
pub fn evaluate_hermite_series_derivative(
    exp: &HermiteExpansion,
    z: Complex64,
    cfg: &ToleranceConfig,
) -> Result<Complex64> {
    let xi = exp.params.xi(z);
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, &dn) in exp.d.values.iter().enumerate() {
        if dn.norm() == 0.0 {
            continue;
        }
        let nu = exp.order(n);
        acc += dn * 2.0 * nu * hermite_eval(nu - 1.0, xi, cfg)?;
    }
    Ok(acc * exp.params.s)
}

/// Coefficients of Φ in plain powers of z about z = 0, obtained by shifting
/// every Hermite term:
///
/// ```text
/// c_k = Σ_j d_j (-β-j)_k H_{β+j-k}(-p1/2) (-2s)^k / k!
/// ```
///
/// No two-term recurrence exists for these; this is a validation route.
pub fn power_reexpansion(
    exp: &HermiteExpansion,
    k_max: usize,
    cfg: &ToleranceConfig,
) -> Result<CoefficientSeries> {
    let beta = exp.params.beta();
    let shift = -exp.params.p1 / 2.0;
    let mut values = Vec::with_capacity(k_max + 1);
    let mut factor = Complex64::new(1.0, 0.0); // (-2s)^k / k!
    for k in 0..=k_max {
        if k > 0 {
            factor *= -2.0 * exp.params.s / k as f64;
        }
        let mut ck = Complex64::new(0.0, 0.0);
        for (j, &dj) in exp.d.values.iter().enumerate() {
            if dj.norm() == 0.0 {
                continue;
            }
            let nu = beta + j as f64;
            ck += dj * pochhammer(-nu, k as u32) * hermite_eval(nu - k as f64, shift, cfg)?;
        }
        values.push(ck * factor);
    }
    Ok(CoefficientSeries::new(values, SeriesKind::ReexpandedPower))
}
