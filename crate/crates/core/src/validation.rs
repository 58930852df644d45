//! Independent oracles: finite-difference ODE residual, Runge-Kutta
//! reference integration of the equation itself, and cross-representation
//! comparison after ray normalization.
//!
//! These deliberately share no code with the series constructions they
//! check: derivatives come from stencils, not from term-wise
//! differentiation, and the reference solver integrates the ODE directly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::ToleranceConfig;
use crate::types::BiconfluentParams;

/// A named solution representation to be validated.
pub struct Representation<'a> {
    pub name: String,
    pub eval: Box<dyn Fn(Complex64) -> Result<Complex64> + 'a>,
    /// Whether the finite-difference ODE residual applies. Off for
    /// representations that are themselves produced by integrating the
    /// equation: stencil-differentiating those only measures integrator
    /// noise, and they still participate in the pairwise comparison.
    pub check_residual: bool,
}

impl<'a> Representation<'a> {
    pub fn new<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(Complex64) -> Result<Complex64> + 'a,
    {
        Self {
            name: name.into(),
            eval: Box::new(eval),
            check_residual: true,
        }
    }

    pub fn without_residual_check<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(Complex64) -> Result<Complex64> + 'a,
    {
        Self {
            name: name.into(),
            eval: Box::new(eval),
            check_residual: false,
        }
    }
}

/// Sampling disc for cross-validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSpec {
    pub center: Complex64,
    pub radius: f64,
    pub count: usize,
}

impl SampleSpec {
    /// Deterministic golden-angle spiral covering the disc.
    pub fn points(&self) -> Vec<Complex64> {
        const GOLDEN_ANGLE: f64 = 2.399963229728653;
        (0..self.count)
            .map(|i| {
                let r = self.radius * (((i + 1) as f64) / self.count as f64).sqrt();
                let theta = GOLDEN_ANGLE * i as f64;
                self.center + r * Complex64::new(theta.cos(), theta.sin())
            })
            .collect()
    }
}

/// Validation outcome: worst ODE residual, residuals per sample point, and
/// the pairwise deviations between representations.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub residual_max: f64,
    /// (sample point, max residual over representations), sorted by |z|.
    pub residual_points: Vec<(Complex64, f64)>,
    /// ("name_a vs name_b", max relative deviation over the samples).
    pub pairwise_dev: Vec<(String, f64)>,
    pub tol_validate: f64,
    pub passed: bool,
}

/// Left side of the equation at `z`, with the derivatives taken by 5-point
/// central differences of step `h` along the real direction (legitimate for
/// the analytic representations compared here), normalized by max(1, |Φ|).
pub fn ode_residual<F>(
    phi: F,
    params: &BiconfluentParams,
    z: Complex64,
    h: f64,
) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if !(1e-6..=1e-3).contains(&h) {
        return Err(Error::InvalidInput {
            message: format!("stencil step {} outside [1e-6, 1e-3]", h),
        });
    }
    if z.norm() <= 2.0 * h {
        return Err(Error::InvalidInput {
            message: "sample point too close to the singular point z = 0".into(),
        });
    }
    let f_m2 = phi(z - 2.0 * h)?;
    let f_m1 = phi(z - h)?;
    let f_0 = phi(z)?;
    let f_p1 = phi(z + h)?;
    let f_p2 = phi(z + 2.0 * h)?;

    let d1 = (f_m2 - 8.0 * f_m1 + 8.0 * f_p1 - f_p2) / (12.0 * h);
    let d2 = (-f_m2 + 16.0 * f_m1 - 30.0 * f_0 + 16.0 * f_p1 - f_p2) / (12.0 * h * h);

    let s = params.s;
    let lhs = z * d2
        + (params.p0 + params.p1 * s * z - 2.0 * s * s * z * z) * d1
        + (params.q0 * s + params.q1 * s * s * z) * f_0;
    Ok(lhs / f_0.norm().max(1.0))
}

/// Distance from the origin to the segment [z0, z1].
fn segment_distance_to_origin(z0: Complex64, z1: Complex64) -> f64 {
    let d = z1 - z0;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return z0.norm();
    }
    // Projection parameter of 0 onto the segment, clamped.
    let t = (-(z0.re * d.re + z0.im * d.im) / len2).clamp(0.0, 1.0);
    (z0 + t * d).norm()
}

/// Integrates the equation as a first-order system along the straight
/// segment z0 → z1 with an embedded 4(5) Runge-Kutta pair, local error
/// control at 1e-10, starting from Φ(z0) = phi0, Φ'(z0) = dphi0. `steps`
/// sets the initial step count (at least 100).
pub fn ode_reference_solve(
    params: &BiconfluentParams,
    z0: Complex64,
    phi0: Complex64,
    dphi0: Complex64,
    z1: Complex64,
    steps: usize,
) -> Result<Complex64> {
    if steps < 100 {
        return Err(Error::InvalidInput {
            message: "reference solve needs at least 100 steps".into(),
        });
    }
    if z1 == z0 {
        return Ok(phi0);
    }
    let dist = segment_distance_to_origin(z0, z1);
    if dist < 1e-3 {
        return Err(Error::SingularPath { distance: dist });
    }

    let dir = z1 - z0;
    let s = params.s;
    // y = (Φ, Φ'); d/dt along z(t) = z0 + t·dir.
    let rhs = |t: f64, y: [Complex64; 2]| -> [Complex64; 2] {
        let z = z0 + t * dir;
        let d2 = -((params.p0 + params.p1 * s * z - 2.0 * s * s * z * z) * y[1]
            + (params.q0 * s + params.q1 * s * s * z) * y[0])
            / z;
        [dir * y[1], dir * d2]
    };

    let add = |a: [Complex64; 2], b: [Complex64; 2], w: f64| [a[0] + w * b[0], a[1] + w * b[1]];

    let mut t = 0.0;
    let mut h = 1.0 / steps as f64;
    let mut y = [phi0, dphi0];
    let local_tol = 1e-10;
    let mut iterations = 0usize;

    while t < 1.0 {
        if iterations > 2_000_000 {
            return Err(Error::NonConvergence { terms: iterations });
        }
        iterations += 1;
        if t + h > 1.0 {
            h = 1.0 - t;
        }

        let k1 = rhs(t, y);
        let k2 = rhs(t + h / 4.0, add(y, k1, h / 4.0));
        let k3 = rhs(
            t + 3.0 * h / 8.0,
            add(add(y, k1, 3.0 * h / 32.0), k2, 9.0 * h / 32.0),
        );
        let k4 = rhs(
            t + 12.0 * h / 13.0,
            add(
                add(add(y, k1, 1932.0 * h / 2197.0), k2, -7200.0 * h / 2197.0),
                k3,
                7296.0 * h / 2197.0,
            ),
        );
        let k5 = rhs(
            t + h,
            add(
                add(
                    add(add(y, k1, 439.0 * h / 216.0), k2, -8.0 * h),
                    k3,
                    3680.0 * h / 513.0,
                ),
                k4,
                -845.0 * h / 4104.0,
            ),
        );
        let k6 = rhs(
            t + h / 2.0,
            add(
                add(
                    add(
                        add(add(y, k1, -8.0 * h / 27.0), k2, 2.0 * h),
                        k3,
                        -3544.0 * h / 2565.0,
                    ),
                    k4,
                    1859.0 * h / 4104.0,
                ),
                k5,
                -11.0 * h / 40.0,
            ),
        );

        let y4 = add(
            add(
                add(add(y, k1, 25.0 * h / 216.0), k3, 1408.0 * h / 2565.0),
                k4,
                2197.0 * h / 4104.0,
            ),
            k5,
            -h / 5.0,
        );
        let y5 = add(
            add(
                add(
                    add(add(y, k1, 16.0 * h / 135.0), k3, 6656.0 * h / 12825.0),
                    k4,
                    28561.0 * h / 56430.0,
                ),
                k5,
                -9.0 * h / 50.0,
            ),
            k6,
            2.0 * h / 55.0,
        );

        let err = (y5[0] - y4[0]).norm().max((y5[1] - y4[1]).norm());
        let scale = 1.0 + y[0].norm().max(y[1].norm());
        if err <= local_tol * scale || h < 1e-12 {
            t += h;
            y = y5;
        }
        let ratio = if err > 0.0 {
            (local_tol * scale / err).powf(0.2)
        } else {
            5.0
        };
        h *= (0.9 * ratio).clamp(0.2, 5.0);
    }
    Ok(y[0])
}

/// Compares representations pairwise over a sample disc after rescaling all
/// of them to 1 at the disc center, and measures every representation's ODE
/// residual at each usable sample point.
pub fn cross_validate(
    params: &BiconfluentParams,
    representations: &[Representation<'_>],
    sample: &SampleSpec,
    cfg: &ToleranceConfig,
) -> Result<ValidationReport> {
    if representations.len() < 2 {
        return Err(Error::InvalidInput {
            message: "cross-validation needs at least two representations".into(),
        });
    }

    let mut center_values = Vec::with_capacity(representations.len());
    for rep in representations {
        let v = (rep.eval)(sample.center)?;
        if v.norm() < 1e-12 {
            return Err(Error::NormalizationFailure {
                representation: rep.name.clone(),
            });
        }
        center_values.push(v);
    }

    let mut points = sample.points();
    points.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());

    // Normalized values per representation per point.
    let mut values = vec![Vec::with_capacity(points.len()); representations.len()];
    for (rep, (norm, out)) in representations
        .iter()
        .zip(center_values.iter().zip(values.iter_mut()))
    {
        for &z in &points {
            out.push((rep.eval)(z)? / norm);
        }
    }

    let stencil_h = 1e-3;
    let mut residual_points = Vec::new();
    let mut residual_max: f64 = 0.0;
    for &z in &points {
        if z.norm() <= 3.0 * stencil_h {
            continue;
        }
        let mut worst: f64 = 0.0;
        for (ri, rep) in representations.iter().enumerate() {
            if !rep.check_residual {
                continue;
            }
            let norm = center_values[ri];
            let r = ode_residual(|w| (rep.eval)(w).map(|v| v / norm), params, z, stencil_h)?;
            worst = worst.max(r.norm());
        }
        residual_points.push((z, worst));
        residual_max = residual_max.max(worst);
    }

    let mut pairwise_dev = Vec::new();
    for i in 0..representations.len() {
        for j in i + 1..representations.len() {
            let scale = values[i]
                .iter()
                .chain(values[j].iter())
                .map(|v| v.norm())
                .fold(1.0f64, f64::max);
            let dev = values[i]
                .iter()
                .zip(values[j].iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max)
                / scale;
            pairwise_dev.push((
                format!("{} vs {}", representations[i].name, representations[j].name),
                dev,
            ));
        }
    }

    let passed = residual_max <= cfg.tol_validate
        && pairwise_dev.iter().all(|(_, d)| *d <= cfg.tol_validate);
    Ok(ValidationReport {
        residual_max,
        residual_points,
        pairwise_dev,
        tol_validate: cfg.tol_validate,
        passed,
    })
}
