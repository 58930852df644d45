//! Shared machinery for the termination eigenproblems: symbolic
//! characteristic polynomials of tridiagonal minors and small null-space
//! solves for the eigenvectors.

use num_complex::Complex64;

use crate::numerics::CPoly;
use crate::types::{sort_complex, SpectrumEigenvector};

/// Characteristic polynomial of a tridiagonal minor, as a polynomial in the
/// accessory parameter.
///
/// Row k contributes the linear factor `diag_linear[k]` (its constant and
/// q0-coefficient), and consecutive rows couple through
/// `offdiag_product[k] = sub[k+1] * super[k]`. The determinant recurrence is
/// `D_k = diag_k(q0) * D_{k-1} - offdiag_product[k-1] * D_{k-2}`.
pub(crate) fn tridiag_char_poly(
    diag_linear: &[(Complex64, Complex64)],
    offdiag_product: &[Complex64],
) -> CPoly {
    let mut d_prev = CPoly::one();
    let mut d = {
        let (c0, c1) = diag_linear[0];
        CPoly::new(vec![c0, c1])
    };
    for k in 1..diag_linear.len() {
        let (c0, c1) = diag_linear[k];
        let lin = CPoly::new(vec![c0, c1]);
        let next = &(&lin * &d) - &d_prev.scale(offdiag_product[k - 1]);
        d_prev = d;
        d = next;
    }
    d
}

/// One vector from the (numerical) null space of a small square matrix.
///
/// Gaussian elimination with partial pivoting; the weakest pivot column is
/// taken as the free variable and set to 1 before back-substitution.
pub(crate) fn nullspace_vector(mut a: Vec<Vec<Complex64>>) -> Vec<Complex64> {
    let n = a.len();
    if n == 1 {
        return vec![Complex64::new(1.0, 0.0)];
    }
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .norm()
                    .partial_cmp(&a[j][col].norm())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        a.swap(col, pivot_row);
        let pivot = a[col][col];
        if pivot.norm() == 0.0 {
            continue;
        }
        for row in col + 1..n {
            let factor = a[row][col] / pivot;
            for k in col..n {
                let sub = factor * a[col][k];
                a[row][k] -= sub;
            }
        }
    }

    let free = (0..n)
        .min_by(|&i, &j| {
            a[i][i]
                .norm()
                .partial_cmp(&a[j][j].norm())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap();

    let mut x = vec![Complex64::new(0.0, 0.0); n];
    x[free] = Complex64::new(1.0, 0.0);
    for row in (0..n).rev() {
        if row == free {
            continue;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for k in row + 1..n {
            acc += a[row][k] * x[k];
        }
        if a[row][row].norm() > 0.0 {
            x[row] = -acc / a[row][row];
        }
    }
    x
}

/// Scales an eigenvector so component 0 equals 1, falling back to the first
/// numerically-nonzero component when component 0 vanishes.
pub(crate) fn normalize_eigenvector(mut v: Vec<Complex64>) -> (Vec<Complex64>, usize) {
    let max = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let anchor = v.iter().position(|c| c.norm() > 1e-10 * max).unwrap_or(0);
    let scale = v[anchor];
    if scale.norm() > 0.0 {
        for c in v.iter_mut() {
            *c /= scale;
        }
    }
    (v, anchor)
}

/// Sorts roots by (re, im) and computes one eigenvector per cluster of
/// repeated roots, cloning it across the cluster members.
pub(crate) fn eigenvectors_for_roots<F>(
    roots: &mut Vec<Complex64>,
    mut eigenvector_of: F,
) -> Vec<SpectrumEigenvector>
where
    F: FnMut(Complex64) -> SpectrumEigenvector,
{
    sort_complex(roots);
    let scale = 1.0 + roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let mut out: Vec<SpectrumEigenvector> = Vec::with_capacity(roots.len());
    for (i, &r) in roots.iter().enumerate() {
        if i > 0 && (r - roots[i - 1]).norm() <= 1e-8 * scale {
            let prev = out[i - 1].clone();
            out.push(prev);
        } else {
            out.push(eigenvector_of(r));
        }
    }
    out
}
