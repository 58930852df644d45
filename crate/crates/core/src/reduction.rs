//! From a terminated Hermite-function expansion to the four-term
//! generalized-hypergeometric solution.
//!
//! The route: expand Φ in powers of the shifted variable ξ = sz - p1/2
//! (coefficients c̃_k), split them by the parity of the Hermite index into
//! c'_k + c''_k, observe that each parity class obeys two-term ratio
//! recurrences governed by the polynomials φ and ψ, and collapse each of the
//! four resulting Kummer families into a single combined series via the
//! contiguous-shift machinery. The result is
//!
//! ```text
//! Φ = C'·F(ξ²) - D'·ξ·F(ξ²) + C''·F(ξ²) - D''·ξ·F(ξ²)
//! ```
//!
//! with parameter lists built from the negated roots of four shift
//! polynomials.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermite::{hermite_coeff_ratio, two_pow, HermiteExpansion, SQRT_PI};
use crate::hypergeom::{
    combination_polynomial, combine_shifted, CombinationInput, CombinedTerm, HypergeomTerm,
};
use crate::numerics::{pochhammer, recip_gamma, CPoly, ToleranceConfig};
use crate::types::{BiconfluentParams, CoefficientSeries, SeriesKind};

/// Shifted-variable coefficients and their parity split.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitCoefficients {
    /// c̃_k, computed from the direct sum over all Hermite indices.
    pub c_tilde: CoefficientSeries,
    /// Even-index part c'_k, computed from the split closed forms.
    pub c_prime: CoefficientSeries,
    /// Odd-index part c''_k.
    pub c_dprime: CoefficientSeries,
    /// N' = floor(N/2).
    pub n_prime: usize,
    /// N'' = floor((N-1)/2); -1 when N = 0 and no odd indices exist.
    pub n_dprime: i64,
}

/// Seed values of the shifted coefficients in their independent closed
/// forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedValues {
    pub c_tilde_0: Complex64,
    pub c_tilde_1: Complex64,
    pub c_prime_0: Complex64,
    pub c_prime_1: Complex64,
    pub c_dprime_0: Complex64,
    pub c_dprime_1: Complex64,
}

/// The polynomials steering the two-term recurrences and the shift roots.
#[derive(Debug, Clone, PartialEq)]
pub struct StructurePolynomials {
    /// Degree-N' polynomial governing the even-part ratios.
    pub phi: CPoly,
    /// Degree-N'' polynomial governing the odd-part ratios (zero when the
    /// odd family is empty).
    pub psi: CPoly,
    /// Shift polynomial of the plain even-family term; negated roots are λ'.
    pub g_even: CPoly,
    /// Shift polynomial of the ξ-weighted even-family term; roots give μ'.
    pub h_even: CPoly,
    /// Shift polynomial of the plain odd-family term; roots give λ''.
    pub g_odd: CPoly,
    /// Shift polynomial of the ξ-weighted odd-family term; roots give μ''.
    pub h_odd: CPoly,
}

/// The four term groups of the combined solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermGroup {
    /// C': even Hermite indices, no ξ factor.
    EvenPlain,
    /// D': even Hermite indices, ξ factor.
    EvenXi,
    /// C'': odd Hermite indices, no ξ factor.
    OddPlain,
    /// D'': odd Hermite indices, ξ factor.
    OddXi,
}

impl TermGroup {
    pub fn label(&self) -> &'static str {
        match self {
            TermGroup::EvenPlain => "C'",
            TermGroup::EvenXi => "D'",
            TermGroup::OddPlain => "C''",
            TermGroup::OddXi => "D''",
        }
    }
}

/// One combined term of the solution, tagged with its group.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinationTerm {
    pub group: TermGroup,
    pub combined: CombinedTerm,
}

/// The assembled four-term combination. Groups whose prefactor or weight
/// vector vanishes identically are omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeomCombination {
    pub params: BiconfluentParams,
    pub terms: Vec<CombinationTerm>,
}

impl HypergeomCombination {
    /// The argument transform shared by every term.
    pub fn xi(&self, z: Complex64) -> Complex64 {
        self.params.xi(z)
    }
}

fn n_prime_of(n: usize) -> usize {
    n / 2
}

fn n_dprime_of(n: usize) -> i64 {
    n as i64 / 2 + n as i64 % 2 - 1
}

/// Number of odd-family coefficients, N'' + 1.
fn odd_count(n: usize) -> usize {
    (n + 1) / 2
}

/// Shifted-variable coefficients c̃ (direct route) and their parity split
/// c', c'' (split closed forms), all up to index `k_max`.
pub fn shifted_power_coefficients(
    exp: &HermiteExpansion,
    k_max: usize,
) -> Result<SplitCoefficients> {
    let beta = exp.params.beta();
    let d = &exp.d.values;
    let n = exp.n_max;
    let n_prime = n_prime_of(n);
    let oc = odd_count(n);

    // Direct route: c̃_k = Σ_j d_j Γ((k-β-j)/2)/(2Γ(-β-j)) (-2)^k / k!.
    let mut c_tilde = Vec::with_capacity(k_max + 1);
    let mut factor = Complex64::new(1.0, 0.0); // (-2)^k / k!
    for k in 0..=k_max {
        if k > 0 {
            factor *= -2.0 / k as f64;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &dj) in d.iter().enumerate() {
            acc += dj * hermite_coeff_ratio(beta + j as f64, k);
        }
        c_tilde.push(acc * factor);
    }

    // Split route, even Hermite indices. With ν~ = β + 2N' the closed forms
    // read c'_{2k} = r(ν~,0) (-ν~/2)_k 4^k/(2k)! Σ_j (...)_j/(-ν~)_{2j} d_{2N'-2j}
    // and the odd rows shift everything by one half.
    let nu_e = beta + 2.0 * n_prime as f64;
    let even_sum = |shift: Complex64, k: usize| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..=n_prime {
            let denom = pochhammer(-nu_e, 2 * j as u32);
            let dj = d[2 * (n_prime - j)];
            if denom.norm() == 0.0 {
                if dj.norm() == 0.0 {
                    continue;
                }
                return Err(Error::DegenerateParameter {
                    factor: format!("(-β-2N')_{} with β = {}", 2 * j, beta),
                });
            }
            acc += pochhammer(shift + k as f64, j as u32) / denom * dj;
        }
        Ok(acc)
    };

    let nu_o = beta + 1.0 + 2.0 * (oc as f64 - 1.0);
    let odd_sum = |shift: Complex64, k: usize| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..oc {
            let denom = pochhammer(-nu_o, 2 * j as u32);
            let dj = d[2 * (oc - 1 - j) + 1];
            if denom.norm() == 0.0 {
                if dj.norm() == 0.0 {
                    continue;
                }
                return Err(Error::DegenerateParameter {
                    factor: format!("(-1-β-2N'')_{} with β = {}", 2 * j, beta),
                });
            }
            acc += pochhammer(shift + k as f64, j as u32) / denom * dj;
        }
        Ok(acc)
    };

    let mut c_prime = vec![Complex64::new(0.0, 0.0); k_max + 1];
    let mut c_dprime = vec![Complex64::new(0.0, 0.0); k_max + 1];

    let r_e0 = hermite_coeff_ratio(nu_e, 0);
    let r_e1 = hermite_coeff_ratio(nu_e, 1);
    let (r_o0, r_o1) = if oc > 0 {
        (hermite_coeff_ratio(nu_o, 0), hermite_coeff_ratio(nu_o, 1))
    } else {
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    };

    let mut even_factor = Complex64::new(1.0, 0.0); // 4^k / (2k)!
    let mut odd_factor = Complex64::new(-2.0, 0.0); // (-2) 4^k / (2k+1)!
    for k in 0..=k_max / 2 {
        if k > 0 {
            even_factor *= 4.0 / ((2 * k) as f64 * (2 * k - 1) as f64);
            odd_factor *= 4.0 / ((2 * k + 1) as f64 * (2 * k) as f64);
        }
        if 2 * k <= k_max {
            let poch = pochhammer(-nu_e / 2.0, k as u32);
            c_prime[2 * k] = r_e0 * poch * even_factor * even_sum(-nu_e / 2.0, k)?;
            if oc > 0 {
                let poch = pochhammer(-nu_o / 2.0, k as u32);
                c_dprime[2 * k] = r_o0 * poch * even_factor * odd_sum(-nu_o / 2.0, k)?;
            }
        }
        if 2 * k + 1 <= k_max {
            let poch = pochhammer((1.0 - nu_e) / 2.0, k as u32);
            c_prime[2 * k + 1] = r_e1 * poch * odd_factor * even_sum((1.0 - nu_e) / 2.0, k)?;
            if oc > 0 {
                let poch = pochhammer((1.0 - nu_o) / 2.0, k as u32);
                c_dprime[2 * k + 1] = r_o1 * poch * odd_factor * odd_sum((1.0 - nu_o) / 2.0, k)?;
            }
        }
    }

    Ok(SplitCoefficients {
        c_tilde: CoefficientSeries::new(c_tilde, SeriesKind::ShiftedCTilde),
        c_prime: CoefficientSeries::new(c_prime, SeriesKind::SplitCPrime),
        c_dprime: CoefficientSeries::new(c_dprime, SeriesKind::SplitCDoublePrime),
        n_prime,
        n_dprime: n_dprime_of(n),
    })
}

/// Seed values in their closed forms, for checking the split coefficients
/// at k = 0 and k = 1.
pub fn seed_values(exp: &HermiteExpansion) -> SeedValues {
    let beta = exp.params.beta();
    let d = &exp.d.values;
    let n_prime = n_prime_of(exp.n_max);
    let oc = odd_count(exp.n_max);

    let mut c_tilde_0 = Complex64::new(0.0, 0.0);
    let mut c_tilde_1 = Complex64::new(0.0, 0.0);
    for (j, &dj) in d.iter().enumerate() {
        let jf = j as f64;
        c_tilde_0 += dj * SQRT_PI * two_pow(beta + jf) * recip_gamma((1.0 - beta - jf) / 2.0);
        c_tilde_1 -= dj * SQRT_PI * two_pow(beta + jf + 1.0) * recip_gamma((-beta - jf) / 2.0);
    }

    let mut even0 = Complex64::new(0.0, 0.0);
    let mut even1 = Complex64::new(0.0, 0.0);
    let mut pow4 = Complex64::new(1.0, 0.0);
    for j in 0..=n_prime {
        let dj = d[2 * j];
        even0 += pow4 * dj * pochhammer(0.5 + beta / 2.0, j as u32);
        even1 += pow4 * dj * pochhammer(1.0 + beta / 2.0, j as u32);
        pow4 *= -4.0;
    }
    let c_prime_0 = SQRT_PI * two_pow(beta) * recip_gamma(0.5 - beta / 2.0) * even0;
    let c_prime_1 = -SQRT_PI * two_pow(beta + 1.0) * recip_gamma(-beta / 2.0) * even1;

    let mut odd0 = Complex64::new(0.0, 0.0);
    let mut odd1 = Complex64::new(0.0, 0.0);
    let mut pow4 = Complex64::new(1.0, 0.0);
    for j in 0..oc {
        let dj = d[2 * j + 1];
        odd0 += pow4 * dj * pochhammer(1.0 + beta / 2.0, j as u32);
        odd1 += pow4 * dj * pochhammer(1.5 + beta / 2.0, j as u32);
        pow4 *= -4.0;
    }
    let c_dprime_0 = SQRT_PI * two_pow(beta + 1.0) * recip_gamma(-beta / 2.0) * odd0;
    let c_dprime_1 = -SQRT_PI * two_pow(beta + 2.0) * recip_gamma(-0.5 - beta / 2.0) * odd1;

    SeedValues {
        c_tilde_0,
        c_tilde_1,
        c_prime_0,
        c_prime_1,
        c_dprime_0,
        c_dprime_1,
    }
}

/// Static description of one of the four term groups.
struct GroupSpec {
    group: TermGroup,
    /// Upper parameter of the base Kummer term.
    base_upper: Complex64,
    /// Lower parameter (1/2 for plain terms, 3/2 for ξ-weighted ones).
    base_lower: Complex64,
    /// Argument of the prefactor reciprocal gamma; also the Pochhammer base
    /// of the weight denominators.
    gamma_arg: Complex64,
    /// Exponent of 2 in the prefactor.
    pow2: Complex64,
    /// Overall sign of the term.
    sign: f64,
    xi_power: u8,
    /// Even or odd Hermite indices.
    even_family: bool,
}

fn group_specs(beta: Complex64, n: usize) -> [GroupSpec; 4] {
    let np = n_prime_of(n) as f64;
    let nd = (odd_count(n) as f64 - 1.0).max(0.0);
    let half = 0.5;
    [
        GroupSpec {
            group: TermGroup::EvenPlain,
            base_upper: -beta / 2.0 - np,
            base_lower: Complex64::new(0.5, 0.0),
            gamma_arg: -beta / 2.0 - np + half,
            pow2: beta + 2.0 * np,
            sign: 1.0,
            xi_power: 0,
            even_family: true,
        },
        GroupSpec {
            group: TermGroup::EvenXi,
            base_upper: -beta / 2.0 - np + half,
            base_lower: Complex64::new(1.5, 0.0),
            gamma_arg: -beta / 2.0 - np,
            pow2: beta + 1.0 + 2.0 * np,
            sign: -1.0,
            xi_power: 1,
            even_family: true,
        },
        GroupSpec {
            group: TermGroup::OddPlain,
            base_upper: -beta / 2.0 - nd - half,
            base_lower: Complex64::new(0.5, 0.0),
            gamma_arg: -beta / 2.0 - nd,
            pow2: beta + 1.0 + 2.0 * nd,
            sign: 1.0,
            xi_power: 0,
            even_family: false,
        },
        GroupSpec {
            group: TermGroup::OddXi,
            base_upper: -beta / 2.0 - nd,
            base_lower: Complex64::new(1.5, 0.0),
            gamma_arg: -beta / 2.0 - nd - half,
            pow2: beta + 2.0 + 2.0 * nd,
            sign: -1.0,
            xi_power: 1,
            even_family: false,
        },
    ]
}

/// Family coefficients in shift order: entry n is d_{2N'-2n} for the even
/// family, d_{2N''-2n+1} for the odd one.
fn family_coefficients(exp: &HermiteExpansion, even: bool) -> Vec<Complex64> {
    let d = &exp.d.values;
    if even {
        (0..=n_prime_of(exp.n_max))
            .map(|m| d[2 * (n_prime_of(exp.n_max) - m)])
            .collect()
    } else {
        let oc = odd_count(exp.n_max);
        (0..oc).map(|m| d[2 * (oc - 1 - m) + 1]).collect()
    }
}

/// Shift weights b_n = d_sel(n) / (4^n (gamma_arg)_n) of one group, with
/// trailing numerically-zero entries trimmed. Returns `None` when the whole
/// family vanishes.
fn group_weights(exp: &HermiteExpansion, spec: &GroupSpec) -> Result<Option<Vec<Complex64>>> {
    let sel = family_coefficients(exp, spec.even_family);
    if sel.is_empty() {
        return Ok(None);
    }
    let d_scale = exp.d.max_norm();
    let last = sel.iter().rposition(|v| v.norm() > 1e-13 * d_scale);
    let last = match last {
        Some(idx) => idx,
        None => return Ok(None),
    };

    let mut b = Vec::with_capacity(last + 1);
    let mut pow4 = Complex64::new(1.0, 0.0);
    for (m, &dm) in sel[..=last].iter().enumerate() {
        let poch = pochhammer(spec.gamma_arg, m as u32);
        if poch.norm() == 0.0 {
            return Err(Error::DegenerateParameter {
                factor: format!("({})_{} in group {}", spec.gamma_arg, m, spec.group.label()),
            });
        }
        b.push(dm / (pow4 * poch));
        pow4 *= 4.0;
    }
    Ok(Some(b))
}

/// φ, ψ and the four shift polynomials of a terminated expansion.
pub fn structure_polynomials(exp: &HermiteExpansion) -> Result<StructurePolynomials> {
    let beta = exp.params.beta();
    let n = exp.n_max;
    let n_prime = n_prime_of(n);
    let oc = odd_count(n);
    let d = &exp.d.values;

    // φ(z) = Σ_j (-β/2-N'+z)_j / (-β-2N')_{2j} · d_{2N'-2j}
    let build_ratio_poly = |base: Complex64,
                            denom_base: Complex64,
                            coeff_of_j: &dyn Fn(usize) -> Complex64,
                            count: usize,
                            what: &str|
     -> Result<CPoly> {
        let mut acc = CPoly::zero();
        let mut rising = CPoly::one();
        for j in 0..count {
            if j > 0 {
                // (base + (j-1) + z)
                let factor = CPoly::new(vec![base + (j - 1) as f64, Complex64::new(1.0, 0.0)]);
                rising = &rising * &factor;
            }
            let denom = pochhammer(denom_base, 2 * j as u32);
            let dj = coeff_of_j(j);
            if denom.norm() == 0.0 {
                if dj.norm() == 0.0 {
                    continue;
                }
                return Err(Error::DegenerateParameter {
                    factor: format!("({})_{} in {}", denom_base, 2 * j, what),
                });
            }
            acc = &acc + &rising.scale(dj / denom);
        }
        Ok(acc)
    };

    let nu_e = beta + 2.0 * n_prime as f64;
    let phi = build_ratio_poly(
        -nu_e / 2.0,
        -nu_e,
        &|j| d[2 * (n_prime - j)],
        n_prime + 1,
        "phi",
    )?;
    let psi = if oc > 0 {
        let nd = oc - 1;
        let nu_o = beta + 1.0 + 2.0 * nd as f64;
        build_ratio_poly(
            (1.0 - nu_o) / 2.0,
            -nu_o,
            &|j| d[2 * (nd - j) + 1],
            oc,
            "psi",
        )?
    } else {
        CPoly::zero()
    };

    let specs = group_specs(beta, n);
    let mut shift_polys = Vec::with_capacity(4);
    for spec in &specs {
        let poly = match group_weights(exp, spec)? {
            Some(b) => combination_polynomial(&CombinationInput {
                base: HypergeomTerm::kummer(spec.base_upper, spec.base_lower),
                b,
            })?,
            None => CPoly::zero(),
        };
        shift_polys.push(poly);
    }
    let mut it = shift_polys.into_iter();
    Ok(StructurePolynomials {
        phi,
        psi,
        g_even: it.next().unwrap(),
        h_even: it.next().unwrap(),
        g_odd: it.next().unwrap(),
        h_odd: it.next().unwrap(),
    })
}

/// Maximum relative deviations of the four two-term ratio identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoTermRatioReport {
    /// c'_{2k+2}/c'_{2k} against φ(k+1)/φ(k).
    pub dev_prime_even: f64,
    /// c'_{2k+3}/c'_{2k+1} against φ(k+3/2)/φ(k+1/2).
    pub dev_prime_odd: f64,
    /// c''_{2k+2}/c''_{2k} against ψ(k+1/2)/ψ(k-1/2).
    pub dev_dprime_even: f64,
    /// c''_{2k+3}/c''_{2k+1} against ψ(k+1)/ψ(k). The odd family's
    /// odd-index ratio advances ψ by a whole step: its closed form carries
    /// the Pochhammer base -β/2-N''+k, which is ψ's argument at z = k.
    pub dev_dprime_odd: f64,
}

impl TwoTermRatioReport {
    pub fn max_deviation(&self) -> f64 {
        self.dev_prime_even
            .max(self.dev_prime_odd)
            .max(self.dev_dprime_even)
            .max(self.dev_dprime_odd)
    }
}

/// Checks the two-term ratio recurrences of the split coefficients against
/// the φ/ψ polynomial ratios, skipping indices whose denominators are
/// numerically zero.
pub fn check_two_term_recurrences(
    exp: &HermiteExpansion,
    split: &SplitCoefficients,
    polys: &StructurePolynomials,
    k_max: usize,
) -> TwoTermRatioReport {
    let beta = exp.params.beta();
    let np = split.n_prime as f64;
    let nd = split.n_dprime as f64;
    let cp = &split.c_prime.values;
    let cd = &split.c_dprime.values;
    let scale_p = split.c_prime.max_norm();
    let scale_d = split.c_dprime.max_norm();

    let mut report = TwoTermRatioReport {
        dev_prime_even: 0.0,
        dev_prime_odd: 0.0,
        dev_dprime_even: 0.0,
        dev_dprime_odd: 0.0,
    };

    let ratio_dev = |num: Complex64, den: Complex64, expect: Complex64| -> Option<f64> {
        if den.norm() == 0.0 {
            return None;
        }
        let got = num / den;
        Some((got - expect).norm() / (1.0 + expect.norm()))
    };

    let c = |re: f64| Complex64::new(re, 0.0);
    for k in 0..k_max {
        let kf = k as f64;
        // Even part, even indices.
        if 2 * k + 2 < cp.len() && cp[2 * k].norm() > 1e-13 * scale_p {
            let expect = (-beta / 2.0 - np + kf) / ((kf + 1.0) * (kf + 0.5))
                * polys.phi.eval(c(kf + 1.0))
                / polys.phi.eval(c(kf));
            if polys.phi.eval(c(kf)).norm() > 1e-13 {
                if let Some(dev) = ratio_dev(cp[2 * k + 2], cp[2 * k], expect) {
                    report.dev_prime_even = report.dev_prime_even.max(dev);
                }
            }
        }
        // Even part, odd indices.
        if 2 * k + 3 < cp.len() && cp[2 * k + 1].norm() > 1e-13 * scale_p {
            let phi_lo = polys.phi.eval(c(kf + 0.5));
            if phi_lo.norm() > 1e-13 {
                let expect = (0.5 - beta / 2.0 - np + kf) / ((kf + 1.0) * (kf + 1.5))
                    * polys.phi.eval(c(kf + 1.5))
                    / phi_lo;
                if let Some(dev) = ratio_dev(cp[2 * k + 3], cp[2 * k + 1], expect) {
                    report.dev_prime_odd = report.dev_prime_odd.max(dev);
                }
            }
        }
        if split.n_dprime >= 0 {
            // Odd part, even indices.
            if 2 * k + 2 < cd.len() && cd[2 * k].norm() > 1e-13 * scale_d {
                let psi_lo = polys.psi.eval(c(kf - 0.5));
                if psi_lo.norm() > 1e-13 {
                    let expect = (-0.5 - beta / 2.0 - nd + kf) / ((kf + 1.0) * (kf + 0.5))
                        * polys.psi.eval(c(kf + 0.5))
                        / psi_lo;
                    if let Some(dev) = ratio_dev(cd[2 * k + 2], cd[2 * k], expect) {
                        report.dev_dprime_even = report.dev_dprime_even.max(dev);
                    }
                }
            }
            // Odd part, odd indices: ψ advances by a whole step here.
            if 2 * k + 3 < cd.len() && cd[2 * k + 1].norm() > 1e-13 * scale_d {
                let psi_lo = polys.psi.eval(c(kf));
                if psi_lo.norm() > 1e-13 {
                    let expect = (-beta / 2.0 - nd + kf) / ((kf + 1.0) * (kf + 1.5))
                        * polys.psi.eval(c(kf + 1.0))
                        / psi_lo;
                    if let Some(dev) = ratio_dev(cd[2 * k + 3], cd[2 * k + 1], expect) {
                        report.dev_dprime_odd = report.dev_dprime_odd.max(dev);
                    }
                }
            }
        }
    }
    report
}

/// Builds the four-term combined solution from a terminated expansion.
///
/// A group is dropped entirely when its weight vector vanishes or when the
/// reciprocal-gamma prefactor of every contributing summand is exactly zero
/// (the parity cases); a term whose prefactor gamma vanishes while interior
/// summands survive is a genuinely degenerate parameter set and is rejected.
pub fn build_ghg_solution(
    exp: &HermiteExpansion,
    cfg: &ToleranceConfig,
) -> Result<HypergeomCombination> {
    let beta = exp.params.beta();
    let mut terms = Vec::new();

    for spec in group_specs(beta, exp.n_max) {
        let b = match group_weights(exp, &spec) {
            Ok(Some(b)) => b,
            Ok(None) => continue,
            Err(err) => {
                // A vanished prefactor gamma makes every weight denominator
                // blow up; the term is dropped only if each contributing
                // summand's own gamma also vanishes.
                if recip_gamma(spec.gamma_arg).norm() == 0.0 {
                    let sel = family_coefficients(exp, spec.even_family);
                    let d_scale = exp.d.max_norm();
                    let all_killed = sel.iter().enumerate().all(|(m, dm)| {
                        dm.norm() <= 1e-13 * d_scale
                            || recip_gamma(spec.gamma_arg + m as f64).norm() == 0.0
                    });
                    if all_killed {
                        continue;
                    }
                }
                return Err(err);
            }
        };
        let gamma_factor = recip_gamma(spec.gamma_arg);
        if gamma_factor.norm() == 0.0 {
            // Same parity logic when the weights themselves are finite.
            let sel = family_coefficients(exp, spec.even_family);
            let d_scale = exp.d.max_norm();
            let all_killed = sel.iter().enumerate().all(|(m, dm)| {
                dm.norm() <= 1e-13 * d_scale || recip_gamma(spec.gamma_arg + m as f64).norm() == 0.0
            });
            if all_killed {
                continue;
            }
            return Err(Error::DegenerateParameter {
                factor: format!(
                    "1/Γ({}) vanishes in group {} while interior terms survive",
                    spec.gamma_arg,
                    spec.group.label()
                ),
            });
        }

        let prefactor =
            Complex64::new(spec.sign, 0.0) * two_pow(spec.pow2) * SQRT_PI * gamma_factor;
        let base = HypergeomTerm::kummer(spec.base_upper, spec.base_lower)
            .with_prefactor(prefactor)
            .with_xi_power(spec.xi_power);
        let input = CombinationInput { base, b };
        let combined = combine_shifted(&input, cfg).map_err(|e| match e {
            Error::DegenerateRoot { lambda, .. } => Error::DegenerateRoot {
                lambda,
                group: Some(spec.group.label()),
            },
            other => other,
        })?;
        terms.push(CombinationTerm {
            group: spec.group,
            combined,
        });
    }

    Ok(HypergeomCombination {
        params: exp.params,
        terms,
    })
}

/// Evaluates the combined solution at `z`: ξ = sz - p1/2, then
/// Σ prefactor_i ξ^{xi_power_i} F_i(ξ²).
pub fn evaluate_combination(
    comb: &HypergeomCombination,
    z: Complex64,
    cfg: &ToleranceConfig,
) -> Result<Complex64> {
    let xi = comb.params.xi(z);
    let arg = xi * xi;
    let mut acc = Complex64::new(0.0, 0.0);
    for term in &comb.terms {
        let mut v = term.combined.eval(arg, cfg)?;
        if term.combined.term.xi_power == 1 {
            v *= xi;
        }
        acc += v;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::{evaluate_hermite_series, hermite_spectrum, HermiteExpansion};
    use crate::hypergeom::pfq_eval;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn expansion(p1: Complex64, q1: Complex64, n: usize, root: usize) -> HermiteExpansion {
        let cfg = ToleranceConfig::default();
        let spec = hermite_spectrum(p1, q1, n, &cfg);
        HermiteExpansion::from_spectrum_root(&spec, root, p1, q1, c(1.0, 0.0)).unwrap()
    }

    #[test]
    fn split_decomposition_holds() {
        let cfg = ToleranceConfig::default();
        let p1 = c(0.31, -0.17);
        let q1 = c(0.53, 0.41);
        for n in 0..=5 {
            let spec = hermite_spectrum(p1, q1, n, &cfg);
            for root in 0..spec.admissible_q0.len() {
                let exp =
                    HermiteExpansion::from_spectrum_root(&spec, root, p1, q1, c(1.0, 0.0)).unwrap();
                let split = shifted_power_coefficients(&exp, 40).unwrap();
                let scale = split.c_tilde.max_norm().max(1e-300);
                for k in 0..=40 {
                    let lhs = split.c_tilde.values[k];
                    let rhs = split.c_prime.values[k] + split.c_dprime.values[k];
                    assert!(
                        (lhs - rhs).norm() <= 1e-10 * scale,
                        "decomposition failed at N={} root={} k={}: {} vs {}",
                        n,
                        root,
                        k,
                        lhs,
                        rhs
                    );
                }
            }
        }
    }

    #[test]
    fn seeds_match_split_coefficients() {
        let p1 = c(-0.22, 0.35);
        let q1 = c(0.61, -0.29);
        for n in 0..=4 {
            let exp = expansion(p1, q1, n, 0);
            let split = shifted_power_coefficients(&exp, 4).unwrap();
            let seeds = seed_values(&exp);
            let scale = split.c_tilde.max_norm().max(1.0);
            assert!((seeds.c_tilde_0 - split.c_tilde.values[0]).norm() < 1e-11 * scale);
            assert!((seeds.c_tilde_1 - split.c_tilde.values[1]).norm() < 1e-11 * scale);
            assert!((seeds.c_prime_0 - split.c_prime.values[0]).norm() < 1e-11 * scale);
            assert!((seeds.c_prime_1 - split.c_prime.values[1]).norm() < 1e-11 * scale);
            assert!((seeds.c_dprime_0 - split.c_dprime.values[0]).norm() < 1e-11 * scale);
            assert!((seeds.c_dprime_1 - split.c_dprime.values[1]).norm() < 1e-11 * scale);
        }
    }

    #[test]
    fn degenerate_pochhammer_denominator_rejected() {
        // β = -1 makes (-β-2N')_2 = (-1)(0) vanish under a nonzero d_2N'.
        let params = BiconfluentParams::new(
            c(-2.0, 0.0),
            c(0.3, 0.0),
            c(0.1, 0.0),
            c(2.0, 0.0),
            c(1.0, 0.0),
        )
        .unwrap();
        let exp = HermiteExpansion::new(
            params,
            CoefficientSeries::new(
                vec![c(1.0, 0.0), c(0.5, 0.0), c(0.25, 0.0)],
                SeriesKind::HermiteD,
            ),
        )
        .unwrap();
        match shifted_power_coefficients(&exp, 6) {
            Err(Error::DegenerateParameter { factor }) => {
                assert!(factor.contains("2"), "factor description: {}", factor);
            }
            other => panic!("expected DegenerateParameter, got {:?}", other),
        }
    }

    #[test]
    fn constant_term_equals_series_at_center() {
        // c̃_0 must equal Φ(p1/(2s)), where ξ = 0.
        let cfg = ToleranceConfig::default();
        let exp = expansion(c(0.4, 0.2), c(-0.3, 0.6), 2, 1);
        let split = shifted_power_coefficients(&exp, 2).unwrap();
        let center = exp.params.xi_center();
        let at_center = evaluate_hermite_series(&exp, center, &cfg).unwrap();
        assert!((split.c_tilde.values[0] - at_center).norm() < 1e-11 * (1.0 + at_center.norm()));
    }

    #[test]
    fn shifted_series_reproduces_solution_values() {
        // Σ c̃_k ξ^k must converge to the Hermite sum near the center.
        let cfg = ToleranceConfig::default();
        let exp = expansion(c(0.15, -0.4), c(0.72, 0.18), 3, 2);
        let split = shifted_power_coefficients(&exp, 60).unwrap();
        for &z in &[c(0.4, 0.1), c(0.05, -0.3), c(-0.2, 0.25)] {
            let xi = exp.params.xi(z);
            let mut acc = c(0.0, 0.0);
            let mut p = c(1.0, 0.0);
            for v in &split.c_tilde.values {
                acc += v * p;
                p *= xi;
            }
            let direct = evaluate_hermite_series(&exp, z, &cfg).unwrap();
            assert!(
                (acc - direct).norm() < 1e-9 * (1.0 + direct.norm()),
                "shifted series mismatch at z={}",
                z
            );
        }
    }

    #[test]
    fn structure_polynomial_degrees() {
        let exp = expansion(c(0.27, 0.09), c(-0.44, 0.31), 4, 0);
        let polys = structure_polynomials(&exp).unwrap();
        assert_eq!(polys.phi.degree(), 2); // N' = 2
        assert_eq!(polys.psi.degree(), 1); // N'' = 1
        assert_eq!(polys.g_even.degree(), 2);
        assert_eq!(polys.h_even.degree(), 2);
        assert_eq!(polys.g_odd.degree(), 1);
        assert_eq!(polys.h_odd.degree(), 1);

        // N=0: φ is the constant d_0 = 1 and there is no odd part.
        let exp = expansion(c(0.3, 0.0), c(0.8, 0.2), 0, 0);
        let polys = structure_polynomials(&exp).unwrap();
        assert_eq!(polys.phi.degree(), 0);
        assert!((polys.phi.eval(c(0.7, 0.0)) - c(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(polys.psi.degree(), 0);
        assert!(polys.psi.eval(c(0.3, 0.0)).norm() == 0.0);
    }

    #[test]
    fn ratio_identities_hold() {
        for (n, root) in [(0usize, 0usize), (1, 1), (2, 0), (3, 2), (4, 3), (5, 1)] {
            let exp = expansion(c(0.21, -0.33), c(0.48, 0.27), n, root);
            let split = shifted_power_coefficients(&exp, 65).unwrap();
            let polys = structure_polynomials(&exp).unwrap();
            let report = check_two_term_recurrences(&exp, &split, &polys, 30);
            assert!(
                report.max_deviation() < 1e-9,
                "ratio identities failed at N={} root={}: {:?}",
                n,
                root,
                report
            );
        }
    }

    #[test]
    fn level_zero_combination_matches_explicit_form() {
        let cfg = ToleranceConfig::default();
        let exp = expansion(c(0.5, -0.1), c(0.7, 0.3), 0, 0);
        let beta = exp.params.beta();
        let comb = build_ghg_solution(&exp, &cfg).unwrap();
        assert_eq!(comb.terms.len(), 2);

        let plain = &comb.terms[0];
        assert_eq!(plain.group, TermGroup::EvenPlain);
        assert!((plain.combined.term.upper[0] - (-beta / 2.0)).norm() < 1e-12);
        assert!((plain.combined.term.lower[0] - c(0.5, 0.0)).norm() < 1e-12);
        let expect = two_pow(beta) * SQRT_PI * recip_gamma(0.5 - beta / 2.0);
        assert!((plain.combined.term.prefactor - expect).norm() < 1e-12 * (1.0 + expect.norm()));

        let xi_term = &comb.terms[1];
        assert_eq!(xi_term.group, TermGroup::EvenXi);
        assert!((xi_term.combined.term.upper[0] - (0.5 - beta / 2.0)).norm() < 1e-12);
        assert!((xi_term.combined.term.lower[0] - c(1.5, 0.0)).norm() < 1e-12);
        let expect = -two_pow(beta + 1.0) * SQRT_PI * recip_gamma(-beta / 2.0);
        assert!((xi_term.combined.term.prefactor - expect).norm() < 1e-12 * (1.0 + expect.norm()));
    }

    #[test]
    fn parity_case_drops_gamma_killed_term() {
        // N=0 with q1 = 2: β = 1 and Φ = H_1(ξ) = 2ξ; the plain term dies
        // on the gamma pole and the remaining ξ term carries prefactor 2.
        let cfg = ToleranceConfig::default();
        let params = BiconfluentParams::new(
            c(0.0, 0.0),
            c(0.8, 0.0),
            c(0.0, 0.0),
            c(2.0, 0.0),
            c(1.0, 0.0),
        )
        .unwrap();
        let exp = HermiteExpansion::new(
            params,
            CoefficientSeries::new(vec![c(1.0, 0.0)], SeriesKind::HermiteD),
        )
        .unwrap();
        let comb = build_ghg_solution(&exp, &cfg).unwrap();
        assert_eq!(comb.terms.len(), 1);
        assert_eq!(comb.terms[0].group, TermGroup::EvenXi);
        assert!((comb.terms[0].combined.term.prefactor - c(2.0, 0.0)).norm() < 1e-12);

        let z = c(0.9, 0.4);
        let v = evaluate_combination(&comb, z, &cfg).unwrap();
        assert!((v - 2.0 * params.xi(z)).norm() < 1e-12);
    }

    #[test]
    fn zero_odd_coefficients_drop_double_prime_groups() {
        // N=2 with p1=0 admits q0=0, whose eigenvector has d_1 = 0.
        let cfg = ToleranceConfig::default();
        let spec = hermite_spectrum(c(0.0, 0.0), c(0.6, 0.0), 2, &cfg);
        let root = spec
            .admissible_q0
            .iter()
            .position(|r| r.norm() < 1e-9)
            .expect("q0 = 0 should be admissible");
        let exp = HermiteExpansion::from_spectrum_root(
            &spec,
            root,
            c(0.0, 0.0),
            c(0.6, 0.0),
            c(1.0, 0.0),
        )
        .unwrap();
        assert!(exp.d.values[1].norm() < 1e-12);

        let comb = build_ghg_solution(&exp, &cfg).unwrap();
        let groups: Vec<_> = comb.terms.iter().map(|t| t.group).collect();
        assert_eq!(groups, vec![TermGroup::EvenPlain, TermGroup::EvenXi]);

        let z = c(0.4, 0.0);
        let lhs = evaluate_combination(&comb, z, &cfg).unwrap();
        let rhs = evaluate_hermite_series(&exp, z, &cfg).unwrap();
        assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn combination_matches_hermite_sum_generically() {
        let cfg = ToleranceConfig::default();
        let p1 = c(0.37, 0.12);
        let q1 = c(-0.25, 0.49);
        for n in 0..=3 {
            let spec = hermite_spectrum(p1, q1, n, &cfg);
            for root in 0..spec.admissible_q0.len() {
                let exp =
                    HermiteExpansion::from_spectrum_root(&spec, root, p1, q1, c(1.0, 0.0)).unwrap();
                let comb = build_ghg_solution(&exp, &cfg).unwrap();
                for point in 0..6 {
                    let angle = 2.0 * std::f64::consts::PI * point as f64 / 6.0 + 0.2;
                    let xi = 1.2 * (0.3 + 0.1 * point as f64) * c(angle.cos(), angle.sin());
                    let z = (xi + p1 / 2.0) / exp.params.s;
                    let lhs = evaluate_combination(&comb, z, &cfg).unwrap();
                    let rhs = evaluate_hermite_series(&exp, z, &cfg).unwrap();
                    assert!(
                        (lhs - rhs).norm() <= 1e-8 * (1.0 + rhs.norm()),
                        "N={} root={} z={}: {} vs {}",
                        n,
                        root,
                        z,
                        lhs,
                        rhs
                    );
                }
            }
        }
    }

    #[test]
    fn evaluation_at_center_is_sum_of_plain_prefactors() {
        let cfg = ToleranceConfig::default();
        let exp = expansion(c(0.44, -0.21), c(0.33, 0.52), 3, 1);
        let comb = build_ghg_solution(&exp, &cfg).unwrap();
        let center = exp.params.xi_center();
        let v = evaluate_combination(&comb, center, &cfg).unwrap();
        let mut expect = c(0.0, 0.0);
        for t in &comb.terms {
            if t.combined.term.xi_power == 0 {
                expect += t.combined.term.prefactor;
            }
        }
        assert!((v - expect).norm() < 1e-11 * (1.0 + expect.norm()));

        // And that value is c̃_0 of the shifted expansion (seed consistency).
        let split = shifted_power_coefficients(&exp, 1).unwrap();
        assert!((v - split.c_tilde.values[0]).norm() < 1e-10 * (1.0 + v.norm()));
    }

    #[test]
    fn level_two_constants_match_closed_forms() {
        // Eq.-form constants for N=2: the plain even term has parameters
        // (-β/2-1, (-β/2-1)C+1; 1/2, (-β/2-1)C) with C = 1 + 4 d_2 (-β/2-1/2).
        let cfg = ToleranceConfig::default();
        let p1 = c(0.29, -0.14);
        let q1 = c(0.58, 0.37);
        let spec = hermite_spectrum(p1, q1, 2, &cfg);
        let exp = HermiteExpansion::from_spectrum_root(&spec, 0, p1, q1, c(1.0, 0.0)).unwrap();
        let beta = exp.params.beta();
        let d2 = exp.d.values[2];
        let comb = build_ghg_solution(&exp, &cfg).unwrap();

        let plain = comb
            .terms
            .iter()
            .find(|t| t.group == TermGroup::EvenPlain)
            .unwrap();
        let big_c = 1.0 + 4.0 * d2 * (-beta / 2.0 - 0.5);
        let lambda_expect = (-beta / 2.0 - 1.0) * big_c;
        assert!(
            (plain.combined.lambdas[0] - lambda_expect).norm()
                < 1e-9 * (1.0 + lambda_expect.norm())
        );

        let xi_term = comb
            .terms
            .iter()
            .find(|t| t.group == TermGroup::EvenXi)
            .unwrap();
        let big_d = 1.0 + 4.0 * d2 * (-beta / 2.0 - 1.0);
        let mu_expect = (-beta / 2.0 - 0.5) * big_d;
        assert!((xi_term.combined.lambdas[0] - mu_expect).norm() < 1e-9 * (1.0 + mu_expect.norm()));

        // The bare combined series is a well-defined 2F2 at a test argument.
        let v = pfq_eval(&plain.combined.term, c(0.21, 0.13), &cfg).unwrap();
        assert!(v.re.is_finite() && v.im.is_finite());
    }
}
