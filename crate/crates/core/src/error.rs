//! Error type shared by all solver modules.

use std::fmt;

use num_complex::Complex64;

/// Errors produced while constructing or evaluating solutions.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Leading polynomial coefficient vanished after trailing-zero trimming.
    DegenerateLeadingCoefficient {
        /// Degree expected before trimming.
        expected_degree: usize,
        /// Degree left after trimming.
        trimmed_degree: usize,
    },
    /// The zero-exponent Frobenius branch does not exist: R_n = n(n-1+p0)
    /// vanished, which happens when p0 is a non-positive integer.
    IndicialCollision {
        /// Index n at which the recurrence denominator vanished.
        index: usize,
    },
    /// The Hermite coefficient ladder degenerated: n + beta = 0 for some n.
    ResonantOrder {
        /// Index n at which 2n(n+beta) vanished.
        index: usize,
    },
    /// A series reached the term cap while its terms were still growing.
    NonConvergence {
        /// Number of terms summed before giving up.
        terms: usize,
    },
    /// A lower hypergeometric parameter hits a non-positive integer before
    /// any upper parameter truncates the series.
    LowerParameterPole {
        /// The offending lower parameter.
        parameter: Complex64,
        /// Series index at which its Pochhammer factor first vanishes.
        pole_index: usize,
    },
    /// A shift-combination root lambda is a non-positive integer, so the
    /// (lambda+1; lambda) parameter pair is singular.
    DegenerateRoot {
        /// The offending root.
        lambda: Complex64,
        /// Term group the root belongs to, when known.
        group: Option<&'static str>,
    },
    /// The combination weights sum to zero, so the normalized single-term
    /// form is undefined.
    ZeroSum,
    /// A Pochhammer denominator required by the splitting formulas vanished.
    DegenerateParameter {
        /// Description of the vanishing factor.
        factor: String,
    },
    /// Integration path passes too close to the singular point z = 0.
    SingularPath {
        /// Closest approach of the segment to the origin.
        distance: f64,
    },
    /// A representation is numerically zero at the comparison center and
    /// cannot be ray-normalized there.
    NormalizationFailure {
        /// Name of the representation that vanished.
        representation: String,
    },
    /// A job or parameter set failed validation before any numerics ran.
    InvalidInput {
        /// Field or condition that failed.
        message: String,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateLeadingCoefficient {
                expected_degree,
                trimmed_degree,
            } => write!(
                f,
                "leading coefficient numerically zero: degree {} trimmed to {}",
                expected_degree, trimmed_degree
            ),
            Error::IndicialCollision { index } => write!(
                f,
                "indicial collision at n = {}: zero-exponent Frobenius branch does not exist",
                index
            ),
            Error::ResonantOrder { index } => {
                write!(f, "resonant Hermite order: n + beta = 0 at n = {}", index)
            }
            Error::NonConvergence { terms } => {
                write!(f, "series did not converge within {} terms", terms)
            }
            Error::LowerParameterPole {
                parameter,
                pole_index,
            } => write!(
                f,
                "lower parameter {} hits a pole at series index {}",
                parameter, pole_index
            ),
            Error::DegenerateRoot { lambda, group } => match group {
                Some(g) => write!(
                    f,
                    "degenerate shift root lambda = {} in term group {}",
                    lambda, g
                ),
                None => write!(f, "degenerate shift root lambda = {}", lambda),
            },
            Error::ZeroSum => write!(f, "combination weights sum to zero"),
            Error::DegenerateParameter { factor } => {
                write!(f, "degenerate parameter: {} vanishes", factor)
            }
            Error::SingularPath { distance } => write!(
                f,
                "integration path passes within {:.3e} of the singular point z = 0",
                distance
            ),
            Error::NormalizationFailure { representation } => write!(
                f,
                "representation '{}' is numerically zero at the normalization center",
                representation
            ),
            Error::InvalidInput { message } => write!(f, "invalid input: {}", message),
        }
    }
}

impl std::error::Error for Error {}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
