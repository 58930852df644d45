//! Solutions of the biconfluent Heun equation
//!
//! ```text
//! z Φ'' + (p0 + p1 s z - 2 s² z²) Φ' + (q0 s + q1 s² z) Φ = 0
//! ```
//!
//! in three representations, with the eigenvalue machinery that decides when
//! the finite ones exist:
//!
//! - [`frobenius`] — power series Σ c_n (sz)^n about the regular singular
//!   point z = 0, terminating into polynomials when q1 = 2N and q0 solves
//!   the level-N accessory-parameter equation;
//! - [`hermite`] — finite sums Σ d_n H_{β+n}(sz - p1/2) of Hermite functions,
//!   available when p0 = -N with q0 on the matching spectrum;
//! - [`reduction`] — the same terminated Hermite sums collapsed into a
//!   four-term combination of generalized hypergeometric functions of ξ²,
//!   via the contiguous-shift machinery in [`hypergeom`].
//!
//! [`validation`] holds the independent oracles (finite-difference ODE
//! residual, Runge-Kutta reference integration, cross-representation
//! comparison) and [`numerics`] the shared kernels (complex polynomials and
//! roots, Pochhammer, reciprocal gamma).

pub mod error;
pub mod frobenius;
pub mod hermite;
pub mod hypergeom;
pub mod numerics;
pub mod reduction;
pub mod types;
pub mod validation;

mod spectral;

pub use error::{Error, Result};
pub use numerics::{CPoly, ToleranceConfig};
pub use types::{BiconfluentParams, CoefficientSeries, SeriesKind, SpectrumResult};
