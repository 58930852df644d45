//! Dense polynomials over complex scalars, with root finding.
//!
//! Coefficients are stored in ascending degree order. The root finder is
//! Aberth-Ehrlich with a Newton polish pass; degrees stay small here (the
//! characteristic polynomials and shift polynomials are all of degree
//! comparable to the truncation level N), so no scaling tricks are needed.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::ToleranceConfig;

/// Relative threshold under which a trailing coefficient counts as zero.
pub const TRIM_REL_TOL: f64 = 1e-14;

/// Polynomial with complex coefficients, ascending degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct CPoly {
    coeffs: Vec<Complex64>,
}

impl CPoly {
    /// Wraps a coefficient list; an empty list becomes the zero polynomial.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            return Self {
                coeffs: vec![Complex64::new(0.0, 0.0)],
            };
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(vec![])
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = Self::one();
        for &r in roots {
            p = &p * &Self::new(vec![-r, Complex64::new(1.0, 0.0)]);
        }
        p
    }

    /// Raw coefficient slice, possibly with numerically-zero tail entries.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Degree after trailing-zero trimming at threshold
    /// `TRIM_REL_TOL * max |coeff|`.
    pub fn degree(&self) -> usize {
        let tol = TRIM_REL_TOL * self.max_coeff_norm();
        self.coeffs
            .iter()
            .rposition(|c| c.norm() > tol)
            .unwrap_or(0)
    }

    /// Copy with trailing numerically-zero coefficients removed.
    pub fn trimmed(&self) -> Self {
        Self {
            coeffs: self.coeffs[..=self.degree()].to_vec(),
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Divides every coefficient by the leading one.
    pub fn monic(&self) -> Self {
        let t = self.trimmed();
        let lead = t.coeffs[t.coeffs.len() - 1];
        t.scale(1.0 / lead)
    }

    /// Roots of the trimmed polynomial, leading-coefficient questions left
    /// to the caller. Constants (degree 0) have no roots.
    pub fn roots(&self, cfg: &ToleranceConfig) -> Vec<Complex64> {
        let t = self.trimmed();
        let n = t.degree();
        if n == 0 {
            return Vec::new();
        }
        aberth_roots(&t.coeffs, cfg)
    }
}

impl std::ops::Add for &CPoly {
    type Output = CPoly;
    fn add(self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        CPoly::new(out)
    }
}

impl std::ops::Sub for &CPoly {
    type Output = CPoly;
    fn sub(self, rhs: &CPoly) -> CPoly {
        self + &rhs.scale(Complex64::new(-1.0, 0.0))
    }
}

impl std::ops::Mul for &CPoly {
    type Output = CPoly;
    fn mul(self, rhs: &CPoly) -> CPoly {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.norm() == 0.0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CPoly::new(out)
    }
}

/// All roots of `p`, with multiplicity.
///
/// Fails with [`Error::DegenerateLeadingCoefficient`] when the nominal
/// leading coefficient is numerically zero, since the caller then asked for
/// more roots than the polynomial has.
pub fn poly_roots(p: &CPoly, cfg: &ToleranceConfig) -> Result<Vec<Complex64>> {
    let expected = p.coeffs().len().saturating_sub(1);
    let degree = p.degree();
    if degree < expected {
        return Err(Error::DegenerateLeadingCoefficient {
            expected_degree: expected,
            trimmed_degree: degree,
        });
    }
    Ok(p.roots(cfg))
}

/// Aberth-Ehrlich iteration on a trimmed coefficient list (degree >= 1).
fn aberth_roots(coeffs: &[Complex64], cfg: &ToleranceConfig) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|&c| c / lead).collect();

    // Cauchy bound on root magnitude, used as the initial circle radius.
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            radius * 0.8 * Complex64::new(angle.cos(), angle.sin())
        })
        .collect();

    let eval = |x: Complex64| -> (Complex64, Complex64) {
        // p and p' by a joint Horner pass.
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in monic.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };

    let eps = 1e-14;
    for _ in 0..400 {
        let mut done = true;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() > 0.0 { p / dp } else { p };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 1e-300 {
                        repulsion += 1.0 / d;
                    }
                }
            }
            let denom = 1.0 - newton * repulsion;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            z[i] -= step;
            if step.norm() > eps * (1.0 + z[i].norm()) {
                done = false;
            }
        }
        if done {
            break;
        }
    }

    // Newton polish: tightens simple roots to full precision; at multiple
    // roots the residual is already far below the contract bound.
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval(*zi);
            if dp.norm() > 1e-300 {
                let step = p / dp;
                if step.norm() < 1.0 {
                    *zi -= step;
                }
            }
        }
    }

    let _ = cfg;
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn roots_of_quadratic_symmetry_case() {
        // z^2 - 1
        let p = CPoly::new(vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let cfg = ToleranceConfig::default();
        let mut r = poly_roots(&p, &cfg).unwrap();
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn roots_of_accessory_quadratic() {
        // q0^2 + p1 q0 - 2 p0 with p0 = p1 = 1: roots {1, -2}, and both
        // satisfy the quadratic when substituted back.
        let p = CPoly::new(vec![c(-2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        let cfg = ToleranceConfig::default();
        let mut r = poly_roots(&p, &cfg).unwrap();
        r.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap());
        assert!((r[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((r[1] - c(-2.0, 0.0)).norm() < 1e-12);
        for root in r {
            assert!((root * root + root - 2.0).norm() < 1e-12);
        }
    }

    #[test]
    fn constant_has_no_roots() {
        let p = CPoly::constant(c(3.5, -1.0));
        let cfg = ToleranceConfig::default();
        assert!(poly_roots(&p, &cfg).unwrap().is_empty());
    }

    #[test]
    fn degenerate_leading_coefficient_rejected() {
        let p = CPoly::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(1e-16, 0.0)]);
        let cfg = ToleranceConfig::default();
        match poly_roots(&p, &cfg) {
            Err(Error::DegenerateLeadingCoefficient { .. }) => {}
            other => panic!("expected DegenerateLeadingCoefficient, got {:?}", other),
        }
    }

    #[test]
    fn residual_bound_holds_for_random_polys() {
        // Random monic polynomials of degree <= 8, coefficients in the unit
        // disc: every reported root satisfies the residual contract and the
        // root product reconstructs the coefficients.
        let cfg = ToleranceConfig::default();
        let mut state = 0x853c49e6748fea9bu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for trial in 0..200 {
            let deg = 1 + (trial % 8);
            let mut coeffs: Vec<Complex64> = (0..deg).map(|_| c(next(), next())).collect();
            coeffs.push(c(1.0, 0.0));
            let p = CPoly::new(coeffs);
            let roots = poly_roots(&p, &cfg).unwrap();
            assert_eq!(roots.len(), deg);
            let scale = 1.0 + p.max_coeff_norm();
            for &r in &roots {
                assert!(
                    p.eval(r).norm() <= cfg.tol_root * scale,
                    "residual {} too large at degree {}",
                    p.eval(r).norm(),
                    deg
                );
            }
            let rebuilt = CPoly::from_roots(&roots);
            for (a, b) in rebuilt.coeffs().iter().zip(p.coeffs()) {
                assert!((a - b).norm() <= 1e-8 * (1.0 + b.norm()));
            }
        }
    }

    #[test]
    fn triple_root_residual_stays_bounded() {
        // q0^3 = 0: all roots collapse at the origin.
        let p = CPoly::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let cfg = ToleranceConfig::default();
        let roots = poly_roots(&p, &cfg).unwrap();
        assert_eq!(roots.len(), 3);
        for r in roots {
            assert!(p.eval(r).norm() <= cfg.tol_root * 2.0);
        }
    }
}
