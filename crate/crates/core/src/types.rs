//! Core domain types shared by the series and spectrum modules.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::CPoly;

/// The five constants of the biconfluent Heun equation
///
/// ```text
/// z Φ'' + (p0 + p1 s z - 2 s² z²) Φ' + (q0 s + q1 s² z) Φ = 0
/// ```
///
/// `beta = p0 + q1/2` is derived on demand and never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiconfluentParams {
    pub p0: Complex64,
    pub p1: Complex64,
    pub q0: Complex64,
    pub q1: Complex64,
    pub s: Complex64,
}

impl BiconfluentParams {
    /// Builds a parameter set; `s = 0` is rejected since it degenerates the
    /// scaling of the equation.
    pub fn new(
        p0: Complex64,
        p1: Complex64,
        q0: Complex64,
        q1: Complex64,
        s: Complex64,
    ) -> Result<Self> {
        if s.norm() == 0.0 {
            return Err(Error::InvalidInput {
                message: "s must be nonzero".into(),
            });
        }
        Ok(Self { p0, p1, q0, q1, s })
    }

    /// beta = p0 + q1/2.
    pub fn beta(&self) -> Complex64 {
        self.p0 + self.q1 / 2.0
    }

    /// The shifted argument xi = s z - p1/2.
    pub fn xi(&self, z: Complex64) -> Complex64 {
        self.s * z - self.p1 / 2.0
    }

    /// Center point z = p1/(2s), where xi vanishes.
    pub fn xi_center(&self) -> Complex64 {
        self.p1 / (2.0 * self.s)
    }
}

/// Which recurrence or formula produced a coefficient list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    /// c_n of the Frobenius expansion Σ c_n (sz)^n.
    FrobeniusC,
    /// d_n of the Hermite-function expansion.
    HermiteD,
    /// c̃_k of the expansion in powers of xi about z = p1/(2s).
    ShiftedCTilde,
    /// Even-j part c'_k of the shifted coefficients.
    SplitCPrime,
    /// Odd-j part c''_k of the shifted coefficients.
    SplitCDoublePrime,
    /// Plain-z^k coefficients re-expanded from a Hermite sum about z = 0.
    ReexpandedPower,
}

impl SeriesKind {
    pub fn label(&self) -> &'static str {
        match self {
            SeriesKind::FrobeniusC => "frobenius-c",
            SeriesKind::HermiteD => "hermite-d",
            SeriesKind::ShiftedCTilde => "shifted-ctilde",
            SeriesKind::SplitCPrime => "split-cprime",
            SeriesKind::SplitCDoublePrime => "split-cdoubleprime",
            SeriesKind::ReexpandedPower => "reexpanded-power",
        }
    }
}

/// Ordered expansion coefficients with a provenance label.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeries {
    pub values: Vec<Complex64>,
    pub kind: SeriesKind,
}

impl CoefficientSeries {
    pub fn new(values: Vec<Complex64>, kind: SeriesKind) -> Self {
        Self { values, kind }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest coefficient magnitude, 0 for an empty list.
    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Eigenvector attached to one admissible accessory parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEigenvector {
    /// Coefficient list of length N+1.
    pub coefficients: CoefficientSeries,
    /// Index of the component scaled to 1. Zero unless the leading
    /// component of the true eigenvector vanishes.
    pub normalized_at: usize,
}

/// Characteristic polynomial of a termination minor, its roots, and the
/// per-root coefficient vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Truncation level N.
    pub n_max: usize,
    /// Monic characteristic polynomial in the accessory parameter q0.
    pub char_poly: CPoly,
    /// Roots of `char_poly`, with multiplicity, sorted by (re, im).
    pub admissible_q0: Vec<Complex64>,
    /// One eigenvector per entry of `admissible_q0`; repeated roots share
    /// the representative's eigenvector.
    pub eigenvectors: Vec<SpectrumEigenvector>,
}

/// Deterministic ordering used for roots and parameter lists.
pub fn sort_complex(values: &mut [Complex64]) {
    values.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
}
