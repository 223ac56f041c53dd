//! Small dense complex linear algebra and polynomial root finding.

use nalgebra::{Matrix2, Matrix3};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Cofactor inverse of a 3×3 complex matrix. Symmetric input yields a
/// bitwise-symmetric result.
pub fn inverse3(m: &Matrix3<C64>) -> Option<Matrix3<C64>> {
    let c00 = m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)];
    let c01 = -(m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)]);
    let c02 = m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)];
    let c10 = -(m[(0, 1)] * m[(2, 2)] - m[(0, 2)] * m[(2, 1)]);
    let c11 = m[(0, 0)] * m[(2, 2)] - m[(0, 2)] * m[(2, 0)];
    let c12 = -(m[(0, 0)] * m[(2, 1)] - m[(0, 1)] * m[(2, 0)]);
    let c20 = m[(0, 1)] * m[(1, 2)] - m[(0, 2)] * m[(1, 1)];
    let c21 = -(m[(0, 0)] * m[(1, 2)] - m[(0, 2)] * m[(1, 0)]);
    let c22 = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let det = m[(0, 0)] * c00 + m[(0, 1)] * c01 + m[(0, 2)] * c02;
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if det.norm() <= f64::EPSILON * scale.powi(3) || !det.is_finite() {
        return None;
    }
    let inv = 1.0 / det;
    // adjugate is the transposed cofactor matrix
    Some(Matrix3::new(
        c00 * inv,
        c10 * inv,
        c20 * inv,
        c01 * inv,
        c11 * inv,
        c21 * inv,
        c02 * inv,
        c12 * inv,
        c22 * inv,
    ))
}

pub fn inverse2(m: &Matrix2<C64>) -> Option<Matrix2<C64>> {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if det.norm() <= f64::EPSILON * scale * scale || !det.is_finite() {
        return None;
    }
    let inv = 1.0 / det;
    Some(Matrix2::new(
        m[(1, 1)] * inv,
        -m[(0, 1)] * inv,
        -m[(1, 0)] * inv,
        m[(0, 0)] * inv,
    ))
}

/// Evaluates a polynomial given by coefficients in ascending order, with its
/// derivative.
pub fn poly_eval(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of a polynomial (ascending coefficients, nonzero leading term)
/// by Aberth-Ehrlich iteration followed by Newton polishing.
///
/// Fails with `ConvergenceFailure` when a polished root leaves a relative
/// residual above `1e-10`.
pub fn poly_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<C64> = coeffs.iter().map(|c| c / lead).collect();
    if n == 1 {
        return Ok(vec![-monic[0]]);
    }
    // Cauchy bound for the initial circle
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut roots: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(radius * 0.5, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let (p, dp) = poly_eval(&monic, roots[k]);
            if p == ZERO {
                continue;
            }
            let ratio = p / dp;
            let repulsion: C64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| 1.0 / (roots[k] - roots[j]))
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            roots[k] -= step;
            max_step = max_step.max(step.norm() / (1.0 + roots[k].norm()));
        }
        if max_step < 1e-15 {
            break;
        }
    }
    let scale: f64 = monic.iter().map(|c| c.norm()).sum();
    let mut worst: f64 = 0.0;
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = poly_eval(&monic, *r);
            if dp == ZERO {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *r -= step;
        }
        let (p, _) = poly_eval(&monic, *r);
        let mag: f64 = monic
            .iter()
            .enumerate()
            .map(|(i, c)| c.norm() * r.norm().powi(i as i32))
            .sum();
        worst = worst.max(p.norm() / mag.max(scale * f64::EPSILON));
    }
    if !(worst <= 1e-10) {
        return Err(Error::ConvergenceFailure { residual: worst });
    }
    Ok(roots)
}

/// Smallest pairwise distance in a root set.
pub fn min_separation(roots: &[C64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            best = best.min((roots[i] - roots[j]).norm());
        }
    }
    best
}
