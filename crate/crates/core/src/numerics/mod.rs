//! Shared complex-arithmetic kernels: polynomials, root finding, Pochhammer
//! symbols, reciprocal gamma.

mod cpoly;
mod gamma;

pub use cpoly::{poly_roots, CPoly, TRIM_REL_TOL};
pub use gamma::{gamma, pochhammer, recip_gamma};

pub(crate) use gamma::{near_nonpositive_integer, POLE_TOL};

/// Tolerances shared across the crate. All dimensionless.
#[derive(Debug, Clone, PartialEq)]
pub struct ToleranceConfig {
    /// Residual bound for reported polynomial roots.
    pub tol_root: f64,
    /// Relative term cutoff for series truncation.
    pub tol_series: f64,
    /// Hard cap on summed series terms.
    pub max_terms: usize,
    /// Pass/fail threshold for validation reports.
    pub tol_validate: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            tol_root: 1e-10,
            tol_series: 1e-15,
            max_terms: 2000,
            tol_validate: 1e-8,
        }
    }
}

impl ToleranceConfig {
    /// Checks the config invariants: everything strictly positive and a
    /// sane minimum term cap.
    pub fn validate(&self) -> crate::error::Result<()> {
        if !(self.tol_root > 0.0 && self.tol_series > 0.0 && self.tol_validate > 0.0) {
            return Err(crate::error::Error::InvalidInput {
                message: "tolerances must be strictly positive".into(),
            });
        }
        if self.max_terms < 16 {
            return Err(crate::error::Error::InvalidInput {
                message: "max_terms must be at least 16".into(),
            });
        }
        Ok(())
    }
}
