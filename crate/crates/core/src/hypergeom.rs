//! Generalized hypergeometric series and the contiguous-shift combination
//! that collapses Σ b_n pFq(a1+n, ...) into a single p+N F q+N.
//!
//! The combination works through the polynomial g built from falling
//! factorials: its negated roots λ_i extend the parameter lists as the
//! (λ_i + 1; λ_i) pairs, and the new prefactor is Σ b_n. When the weights
//! sum to zero that normalization breaks and the product form
//! b_N/(a1)_N · (z d/dz + λ_1)...(z d/dz + λ_N) F is kept instead.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numerics::{near_nonpositive_integer, pochhammer, CPoly, ToleranceConfig, POLE_TOL};
use crate::types::sort_complex;

/// One pFq series: upper and lower parameter lists, a scalar prefactor, and
/// whether the term carries a factor of xi. The series argument is always
/// xi² at the combination level.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeomTerm {
    pub upper: Vec<Complex64>,
    pub lower: Vec<Complex64>,
    pub prefactor: Complex64,
    pub xi_power: u8,
}

impl HypergeomTerm {
    /// Kummer 1F1(a; b; ·) with unit prefactor and no xi factor.
    pub fn kummer(a: Complex64, b: Complex64) -> Self {
        Self {
            upper: vec![a],
            lower: vec![b],
            prefactor: Complex64::new(1.0, 0.0),
            xi_power: 0,
        }
    }

    pub fn with_prefactor(mut self, prefactor: Complex64) -> Self {
        self.prefactor = prefactor;
        self
    }

    pub fn with_xi_power(mut self, xi_power: u8) -> Self {
        self.xi_power = xi_power;
        self
    }
}

/// Smallest series index at which an upper parameter truncates the series,
/// i.e. the last nonzero term index m for an upper parameter -m.
fn truncation_index(upper: &[Complex64]) -> Option<usize> {
    upper
        .iter()
        .filter_map(|&a| near_nonpositive_integer(a, POLE_TOL))
        .map(|m| m as usize)
        .min()
}

/// Smallest series index whose term divides by a vanished lower-parameter
/// Pochhammer factor: (γ)_k first vanishes at k = g+1 for γ = -g.
fn lower_pole(lower: &[Complex64]) -> Option<(Complex64, usize)> {
    lower
        .iter()
        .filter_map(|&g| near_nonpositive_integer(g, POLE_TOL).map(|m| (g, m as usize + 1)))
        .min_by_key(|&(_, k)| k)
}

/// Series value plus a cancellation measure Σ|term| / |value|; values near 1
/// mean no digits were lost to cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfqValue {
    pub value: Complex64,
    pub cancellation: f64,
}

/// Bare series Σ_k Π(a_i)_k / Π(γ_j)_k · z^k/k!, ignoring the term's
/// prefactor and xi flag.
///
/// Truncates exactly when an upper parameter is a non-positive integer;
/// otherwise stops once three consecutive terms fall below the relative
/// cutoff. Divergent p > q+1 cases and lower-parameter poles that precede
/// truncation are rejected.
pub fn pfq_eval(term: &HypergeomTerm, z: Complex64, cfg: &ToleranceConfig) -> Result<Complex64> {
    pfq_eval_diag(term, z, cfg).map(|v| v.value)
}

/// Like [`pfq_eval`] but also reports the cancellation measure.
pub fn pfq_eval_diag(
    term: &HypergeomTerm,
    z: Complex64,
    cfg: &ToleranceConfig,
) -> Result<PfqValue> {
    weighted_pfq_value(term, |_| Complex64::new(1.0, 0.0), z, cfg)
}

/// Series with an index-dependent weight: Σ_k w(k) · term_k. This is the
/// evaluation route for the ladder operators (z d/dz + λ), whose action on
/// the series is term-wise multiplication by (k + λ).
pub fn weighted_pfq_value<W>(
    term: &HypergeomTerm,
    weight: W,
    z: Complex64,
    cfg: &ToleranceConfig,
) -> Result<PfqValue>
where
    W: Fn(usize) -> Complex64,
{
    let trunc = truncation_index(&term.upper);
    if let Some((gamma, pole_k)) = lower_pole(&term.lower) {
        if trunc.map_or(true, |m| pole_k <= m) {
            return Err(Error::LowerParameterPole {
                parameter: gamma,
                pole_index: pole_k,
            });
        }
    }
    if trunc.is_none() && term.upper.len() > term.lower.len() + 1 && z.norm() > 0.0 {
        return Err(Error::NonConvergence { terms: 0 });
    }

    let mut base = Complex64::new(1.0, 0.0);
    let mut sum = weight(0) * base;
    let mut abssum = sum.norm();
    let mut small_streak = 0;
    let mut prev_norm = f64::INFINITY;

    for k in 0..cfg.max_terms {
        if trunc == Some(k) {
            return Ok(PfqValue {
                value: sum,
                cancellation: abssum / sum.norm().max(1e-300),
            });
        }
        let kf = k as f64;
        let mut ratio = z / (kf + 1.0);
        for &a in &term.upper {
            ratio *= a + kf;
        }
        for &g in &term.lower {
            ratio /= g + kf;
        }
        base *= ratio;
        let contrib = weight(k + 1) * base;
        sum += contrib;
        abssum += contrib.norm();

        let t = contrib.norm();
        if t < cfg.tol_series * sum.norm().max(1e-300) {
            small_streak += 1;
            if small_streak >= 3 {
                return Ok(PfqValue {
                    value: sum,
                    cancellation: abssum / sum.norm().max(1e-300),
                });
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
    Ok(PfqValue {
        value: sum,
        cancellation: abssum / sum.norm().max(1e-300),
    })
}

/// Value of (z d/dz + λ_1)...(z d/dz + λ_n) F(z) for the base series, via
/// term-wise weights Π (k + λ_i).
pub fn shift_operator_value(
    base: &HypergeomTerm,
    lambdas: &[Complex64],
    z: Complex64,
    cfg: &ToleranceConfig,
) -> Result<Complex64> {
    let weight = |k: usize| {
        let mut w = Complex64::new(1.0, 0.0);
        for &l in lambdas {
            w *= l + k as f64;
        }
        w
    };
    weighted_pfq_value(base, weight, z, cfg).map(|v| v.value)
}

/// Weighted sum Σ b_n pFq(a1+n, ...) — the explicit left side of the
/// combination identity, summed term by term.
pub fn shifted_sum_value(
    base: &HypergeomTerm,
    b: &[Complex64],
    z: Complex64,
    cfg: &ToleranceConfig,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, &bn) in b.iter().enumerate() {
        let mut t = base.clone();
        t.upper[0] += n as f64;
        acc += bn * pfq_eval(&t, z, cfg)?;
    }
    Ok(acc)
}

/// Input to the shift combination: the base term fixes a1 (its first upper
/// parameter) and the remaining parameters; `b` weights the shifts a1+n.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinationInput {
    pub base: HypergeomTerm,
    pub b: Vec<Complex64>,
}

impl CombinationInput {
    fn shift_count(&self) -> usize {
        self.b.len() - 1
    }

    fn validate(&self) -> Result<()> {
        if self.b.is_empty() {
            return Err(Error::InvalidInput {
                message: "combination weight list is empty".into(),
            });
        }
        if self.base.upper.is_empty() {
            return Err(Error::InvalidInput {
                message: "base term has no upper parameter to shift".into(),
            });
        }
        let max = self.b.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if max == 0.0 || self.b[self.b.len() - 1].norm() <= 1e-14 * max {
            return Err(Error::InvalidInput {
                message: "b_N is numerically zero; reduce N first".into(),
            });
        }
        Ok(())
    }
}

/// Binomial coefficient as f64; shift counts stay tiny here.
fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// The degree-N polynomial g(ξ) = Σ_n Σ_k b_n C(n,k)/(a1)_k ξ(ξ-1)...(ξ-k+1)
/// whose negated roots parametrize the combined series.
///
/// The free term is assembled directly as Σ b_n, and the leading coefficient
/// is b_N/(a1)_N.
pub fn combination_polynomial(input: &CombinationInput) -> Result<CPoly> {
    input.validate()?;
    let n_max = input.shift_count();
    let a1 = input.base.upper[0];

    let mut g = CPoly::zero();
    let mut falling = CPoly::one();
    for k in 0..=n_max {
        if k > 0 {
            // ξ - (k-1)
            let factor = CPoly::new(vec![
                Complex64::new(-((k - 1) as f64), 0.0),
                Complex64::new(1.0, 0.0),
            ]);
            falling = &falling * &factor;
        }
        let poch = pochhammer(a1, k as u32);
        if poch.norm() == 0.0 {
            return Err(Error::DegenerateParameter {
                factor: format!("(a1)_{} with a1 = {}", k, a1),
            });
        }
        let mut w = Complex64::new(0.0, 0.0);
        for n in k..=n_max {
            w += input.b[n] * binomial(n, k);
        }
        g = &g + &falling.scale(w / poch);
    }
    Ok(g)
}

/// How the combined term is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineNormalization {
    /// Prefactor carries Σ b_n; the term is a plain p+N F q+N.
    SumForm,
    /// Σ b_n vanished: prefactor carries b_N/(a1)_N and the value is
    /// (z d/dz + λ_1)...(z d/dz + λ_N) applied to the base series.
    ProductForm,
}

/// Result of the shift combination.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedTerm {
    /// The single combined term, parameter lists extended by the
    /// (λ_i + 1; λ_i) pairs, prefactor set.
    pub term: HypergeomTerm,
    /// Negated roots of g, sorted by (re, im).
    pub lambdas: Vec<Complex64>,
    /// Base term the combination started from.
    pub base: HypergeomTerm,
    pub normalization: CombineNormalization,
}

impl CombinedTerm {
    /// Evaluates prefactor × series at argument `z` (the xi factor, when
    /// flagged on the term, is applied by the caller who knows xi).
    pub fn eval(&self, z: Complex64, cfg: &ToleranceConfig) -> Result<Complex64> {
        match self.normalization {
            CombineNormalization::SumForm => {
                Ok(self.term.prefactor * pfq_eval(&self.term, z, cfg)?)
            }
            CombineNormalization::ProductForm => {
                Ok(self.term.prefactor * shift_operator_value(&self.base, &self.lambdas, z, cfg)?)
            }
        }
    }
}

/// Collapses Σ b_n pFq(a1+n, ...) into a single term.
///
/// With weights summing to zero the result is flagged
/// [`CombineNormalization::ProductForm`]; otherwise any λ_i within 1e-10 of
/// a non-positive integer is rejected as [`Error::DegenerateRoot`].
pub fn combine_shifted(input: &CombinationInput, cfg: &ToleranceConfig) -> Result<CombinedTerm> {
    input.validate()?;
    let n_max = input.shift_count();
    let a1 = input.base.upper[0];

    let sum_b: Complex64 = input.b.iter().sum();
    let abs_b: f64 = input.b.iter().map(|v| v.norm()).sum();

    if n_max == 0 {
        return Ok(CombinedTerm {
            term: input
                .base
                .clone()
                .with_prefactor(input.base.prefactor * sum_b),
            lambdas: Vec::new(),
            base: input.base.clone(),
            normalization: CombineNormalization::SumForm,
        });
    }

    let g = combination_polynomial(input)?;
    let mut lambdas: Vec<Complex64> = g.roots(cfg).into_iter().map(|r| -r).collect();
    sort_complex(&mut lambdas);

    if sum_b.norm() <= 1e-12 * abs_b {
        let poch = pochhammer(a1, n_max as u32);
        let mut term = input.base.clone();
        for &l in &lambdas {
            term.upper.push(l + 1.0);
            term.lower.push(l);
        }
        term.prefactor = input.base.prefactor * input.b[n_max] / poch;
        return Ok(CombinedTerm {
            term,
            lambdas,
            base: input.base.clone(),
            normalization: CombineNormalization::ProductForm,
        });
    }

    for &l in &lambdas {
        if near_nonpositive_integer(l, 1e-10).is_some() {
            return Err(Error::DegenerateRoot {
                lambda: l,
                group: None,
            });
        }
    }

    let mut term = input.base.clone();
    for &l in &lambdas {
        term.upper.push(l + 1.0);
        term.lower.push(l);
    }
    term.prefactor = input.base.prefactor * sum_b;
    Ok(CombinedTerm {
        term,
        lambdas,
        base: input.base.clone(),
        normalization: CombineNormalization::SumForm,
    })
}

/// Per-identity maximum relative deviations over the random suite.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentitySuiteReport {
    pub trials: usize,
    /// N=1 combination (two-term contiguous identity).
    pub dev_n1: f64,
    /// N=1 closed-form root λ = a1 (1 + b0/b1).
    pub dev_lambda_n1: f64,
    /// N=2 combination.
    pub dev_n2: f64,
    /// Residual of the N=2 roots in their defining quadratic.
    pub dev_quadratic_n2: f64,
    /// N=3 combination (general shift identity).
    pub dev_n3: f64,
    pub tolerance: f64,
}

impl IdentitySuiteReport {
    pub fn passed(&self) -> bool {
        self.dev_n1 <= self.tolerance
            && self.dev_lambda_n1 <= self.tolerance
            && self.dev_n2 <= self.tolerance
            && self.dev_quadratic_n2 <= self.tolerance
            && self.dev_n3 <= self.tolerance
    }
}

fn random_unit(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Runs the shift-combination identity suite on seeded random draws with a
/// Kummer base, checking each combination level at five sample arguments.
///
/// Draws that put a root or parameter too close to a degenerate
/// configuration are rejected and retried, mirroring how the identities are
/// stated away from their singular parameter sets.
pub fn run_identity_suite(
    trials: usize,
    seed: u64,
    cfg: &ToleranceConfig,
    tolerance: f64,
) -> IdentitySuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = IdentitySuiteReport {
        trials,
        dev_n1: 0.0,
        dev_lambda_n1: 0.0,
        dev_n2: 0.0,
        dev_quadratic_n2: 0.0,
        dev_n3: 0.0,
        tolerance,
    };

    for trial in 0..trials {
        let n = 1 + trial % 3;
        let (input, combined) = loop {
            let mut a1 = random_unit(&mut rng);
            let mut g1 = random_unit(&mut rng);
            // Keep the Pochhammer factors and lower parameters off zero.
            if a1.norm() < 0.2 {
                a1 += Complex64::new(0.5, 0.5);
            }
            if g1.norm() < 0.2 {
                g1 += Complex64::new(0.7, 0.3);
            }
            if (a1 + 1.0).norm() < 0.1 || (a1 + 2.0).norm() < 0.1 || (g1 + 1.0).norm() < 0.1 {
                continue;
            }
            let b: Vec<Complex64> = (0..=n).map(|_| random_unit(&mut rng)).collect();
            let max_b = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let sum_b: Complex64 = b.iter().sum();
            if b[n].norm() < 0.1 * max_b || sum_b.norm() < 0.05 * max_b {
                continue;
            }
            let input = CombinationInput {
                base: HypergeomTerm::kummer(a1, g1),
                b,
            };
            match combine_shifted(&input, cfg) {
                Ok(c) => {
                    let near_degenerate = c
                        .lambdas
                        .iter()
                        .any(|&l| near_nonpositive_integer(l, 0.05).is_some());
                    if near_degenerate {
                        continue;
                    }
                    break (input, c);
                }
                Err(_) => continue,
            }
        };

        let mut dev: f64 = 0.0;
        for point in 0..5 {
            let angle = 2.0 * std::f64::consts::PI * (point as f64 + 0.3) / 5.0;
            let z = 0.9 * ((point + 1) as f64 / 5.0) * Complex64::new(angle.cos(), angle.sin());
            let lhs = shifted_sum_value(&input.base, &input.b, z, cfg).unwrap();
            let rhs = combined.eval(z, cfg).unwrap();
            dev = dev.max((lhs - rhs).norm() / lhs.norm().max(1e-300));
        }

        match n {
            1 => {
                report.dev_n1 = report.dev_n1.max(dev);
                let a1 = input.base.upper[0];
                let expect = a1 * (1.0 + input.b[0] / input.b[1]);
                let err = (combined.lambdas[0] - expect).norm() / (1.0 + expect.norm());
                report.dev_lambda_n1 = report.dev_lambda_n1.max(err);
            }
            2 => {
                report.dev_n2 = report.dev_n2.max(dev);
                let a1 = input.base.upper[0];
                let (b0, b1, b2) = (input.b[0], input.b[1], input.b[2]);
                for &l in &combined.lambdas {
                    let value = b2 * l * (l + 1.0) / (a1 * (a1 + 1.0)) - (b1 + 2.0 * b2) * l / a1
                        + (b0 + b1 + b2);
                    let scale = (b2 * l * (l + 1.0) / (a1 * (a1 + 1.0))).norm()
                        + ((b1 + 2.0 * b2) * l / a1).norm()
                        + (b0 + b1 + b2).norm();
                    report.dev_quadratic_n2 = report
                        .dev_quadratic_n2
                        .max(value.norm() / scale.max(1e-300));
                }
            }
            _ => report.dev_n3 = report.dev_n3.max(dev),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kummer_basics() {
        let cfg = ToleranceConfig::default();
        // 1F1(a; b; 0) = 1
        let t = HypergeomTerm::kummer(c(0.3, 0.7), c(1.1, -0.2));
        assert_eq!(pfq_eval(&t, c(0.0, 0.0), &cfg).unwrap(), c(1.0, 0.0));
        // 1F1(2; 2; 1) = e
        let t = HypergeomTerm::kummer(c(2.0, 0.0), c(2.0, 0.0));
        let v = pfq_eval(&t, c(1.0, 0.0), &cfg).unwrap();
        assert!((v - c(std::f64::consts::E, 0.0)).norm() < 1e-13);
        // 1F1(-2; 1/2; 1) = -5/3 by exact 3-term truncation
        let t = HypergeomTerm::kummer(c(-2.0, 0.0), c(0.5, 0.0));
        let v = pfq_eval(&t, c(1.0, 0.0), &cfg).unwrap();
        assert!((v - c(-5.0 / 3.0, 0.0)).norm() < 1e-14);
        // mpmath: 1F1(0.3+0.1i; 0.9-0.2i; 0.5+0.4i)
        let t = HypergeomTerm::kummer(c(0.3, 0.1), c(0.9, -0.2));
        let v = pfq_eval(&t, c(0.5, 0.4), &cfg).unwrap();
        assert!((v - c(1.044628646067922, 0.2496151537465895)).norm() < 1e-13);
    }

    #[test]
    fn lower_pole_detected_unless_truncated_first() {
        let cfg = ToleranceConfig::default();
        let t = HypergeomTerm {
            upper: vec![c(1.0, 0.0)],
            lower: vec![c(-1.0, 0.0)],
            prefactor: c(1.0, 0.0),
            xi_power: 0,
        };
        match pfq_eval(&t, c(0.3, 0.0), &cfg) {
            Err(Error::LowerParameterPole { pole_index, .. }) => assert_eq!(pole_index, 2),
            other => panic!("expected LowerParameterPole, got {:?}", other),
        }
        // Upper -1 truncates at k=1, before the lower pole at k=2.
        let t = HypergeomTerm {
            upper: vec![c(-1.0, 0.0)],
            lower: vec![c(-1.5, 0.0)],
            prefactor: c(1.0, 0.0),
            xi_power: 0,
        };
        let v = pfq_eval(&t, c(0.3, 0.0), &cfg).unwrap();
        assert!((v - (c(1.0, 0.0) + c(0.3, 0.0) / 1.5)).norm() < 1e-14);
    }

    #[test]
    fn divergent_without_truncation_is_rejected() {
        let cfg = ToleranceConfig::default();
        let t = HypergeomTerm {
            upper: vec![c(1.3, 0.0), c(0.7, 0.0)],
            lower: vec![],
            prefactor: c(1.0, 0.0),
            xi_power: 0,
        };
        assert!(matches!(
            pfq_eval(&t, c(0.5, 0.0), &cfg),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn combination_polynomial_n1_and_free_term() {
        // b = [1, 1], a1 = 1: g(ξ) = 2 + ξ, λ = 2, g(0) = b0 + b1.
        let input = CombinationInput {
            base: HypergeomTerm::kummer(c(1.0, 0.0), c(2.0, 0.0)),
            b: vec![c(1.0, 0.0), c(1.0, 0.0)],
        };
        let g = combination_polynomial(&input).unwrap();
        assert_eq!(g.degree(), 1);
        assert_eq!(g.coeffs()[0], c(2.0, 0.0));
        assert!((g.coeffs()[1] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn combine_two_kummers_into_2f2() {
        // 1F1(1;2;z) + 1F1(2;2;z) = 2·2F2(1,3;2,2;z); at z=1 this is 2e-1.
        let cfg = ToleranceConfig::default();
        let input = CombinationInput {
            base: HypergeomTerm::kummer(c(1.0, 0.0), c(2.0, 0.0)),
            b: vec![c(1.0, 0.0), c(1.0, 0.0)],
        };
        let combined = combine_shifted(&input, &cfg).unwrap();
        assert_eq!(combined.normalization, CombineNormalization::SumForm);
        assert!((combined.lambdas[0] - c(2.0, 0.0)).norm() < 1e-12);
        assert!((combined.term.prefactor - c(2.0, 0.0)).norm() < 1e-12);

        let v = combined.eval(c(1.0, 0.0), &cfg).unwrap();
        let expect = 2.0 * std::f64::consts::E - 1.0;
        assert!((v - c(expect, 0.0)).norm() < 1e-12);

        // And the combined 2F2(1,3;2,2;1) itself: mpmath gives (2e-1)/2.
        let bare = pfq_eval(&combined.term, c(1.0, 0.0), &cfg).unwrap();
        assert!((bare - c(2.218281828459045, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn single_weight_returns_base() {
        let cfg = ToleranceConfig::default();
        let input = CombinationInput {
            base: HypergeomTerm::kummer(c(0.4, 0.1), c(1.2, 0.0)),
            b: vec![c(1.0, 0.0)],
        };
        let combined = combine_shifted(&input, &cfg).unwrap();
        assert_eq!(combined.term.upper, input.base.upper);
        assert_eq!(combined.term.lower, input.base.lower);
        assert_eq!(combined.term.prefactor, c(1.0, 0.0));
    }

    #[test]
    fn degenerate_root_rejected() {
        // a1 = 1, b = [-2, 1]: λ = a1 (1 + b0/b1) = -1, a singular pair.
        let cfg = ToleranceConfig::default();
        let input = CombinationInput {
            base: HypergeomTerm::kummer(c(1.0, 0.0), c(1.3, 0.0)),
            b: vec![c(-2.0, 0.0), c(1.0, 0.0)],
        };
        match combine_shifted(&input, &cfg) {
            Err(Error::DegenerateRoot { lambda, .. }) => {
                assert!((lambda - c(-1.0, 0.0)).norm() < 1e-9);
            }
            other => panic!("expected DegenerateRoot, got {:?}", other),
        }
    }

    #[test]
    fn vanished_leading_weight_rejected() {
        let cfg = ToleranceConfig::default();
        let input = CombinationInput {
            base: HypergeomTerm::kummer(c(0.7, 0.0), c(1.2, 0.0)),
            b: vec![c(1.0, 0.0), c(1e-17, 0.0)],
        };
        assert!(matches!(
            combine_shifted(&input, &cfg),
            Err(Error::InvalidInput { .. })
        ));
    }

    #[test]
    fn zero_sum_falls_back_to_product_form() {
        // b0 = -b1: the product form must still match the explicit sum.
        let cfg = ToleranceConfig::default();
        let input = CombinationInput {
            base: HypergeomTerm::kummer(c(0.8, 0.2), c(1.3, -0.1)),
            b: vec![c(-0.7, 0.1), c(0.7, -0.1)],
        };
        let combined = combine_shifted(&input, &cfg).unwrap();
        assert_eq!(combined.normalization, CombineNormalization::ProductForm);
        let z = c(0.3, 0.0);
        let lhs = shifted_sum_value(&input.base, &input.b, z, &cfg).unwrap();
        let rhs = combined.eval(z, &cfg).unwrap();
        assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn ladder_operator_matches_extended_term() {
        // λ · p+1Fq+1(..., λ+1; ..., λ; z) = (z d/dz + λ) F(z)
        let cfg = ToleranceConfig::default();
        let base = HypergeomTerm::kummer(c(0.6, -0.3), c(1.4, 0.2));
        let lambda = c(0.9, 0.5);
        let mut ext = base.clone();
        ext.upper.push(lambda + 1.0);
        ext.lower.push(lambda);
        for &z in &[c(0.4, 0.0), c(-0.2, 0.6), c(0.8, -0.5)] {
            let lhs = lambda * pfq_eval(&ext, z, &cfg).unwrap();
            let rhs = shift_operator_value(&base, &[lambda], z, &cfg).unwrap();
            assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn derivative_reconstruction_of_shifted_parameters() {
        // pFq(a1+n, ...) = Σ_k C(n,k)/(a1)_k · z^k F^(k)(z), with
        // z^k (d/dz)^k realized as the falling-factorial weight k!/(k-j)!.
        let cfg = ToleranceConfig::default();
        let base = HypergeomTerm::kummer(c(0.7, 0.2), c(1.6, -0.4));
        let a1 = base.upper[0];
        for n in 1..=3usize {
            let mut shifted = base.clone();
            shifted.upper[0] += n as f64;
            for &z in &[c(0.3, 0.1), c(-0.4, 0.2)] {
                let direct = pfq_eval(&shifted, z, &cfg).unwrap();
                let mut acc = c(0.0, 0.0);
                for k in 0..=n {
                    // falling factorial idx(idx-1)...(idx-k+1); zero below k
                    let weight = |idx: usize| {
                        let mut w = c(1.0, 0.0);
                        for j in 0..k {
                            w *= c(idx as f64 - j as f64, 0.0);
                        }
                        w
                    };
                    let v = weighted_pfq_value(&base, weight, z, &cfg).unwrap().value;
                    acc += binomial(n, k) / pochhammer(a1, k as u32) * v;
                }
                assert!(
                    (direct - acc).norm() < 1e-9 * (1.0 + direct.norm()),
                    "n = {} failed",
                    n
                );
            }
        }
    }

    #[test]
    fn identity_suite_passes() {
        let cfg = ToleranceConfig::default();
        let report = run_identity_suite(60, 0xb1c0, &cfg, 1e-9);
        assert!(report.passed(), "{:?}", report);
    }
}
