//! Closed-form solution of the Faddeev equation by closing the kernel
//! integral on the atomic poles.
//!
//! With `ψ` analytic in the lower half plane, the kernel integral collapses
//! to `Σ_j η_j(−ω) ψ(ω_pj)`, so
//! `ψ(ω) = B̂(−ω) Σ_j η_j(−ω) ψ(ω_pj) + ψ⁽²⁾(ω)`. Evaluating at both poles
//! gives a 6×6 linear system for the pole values.

use std::sync::Arc;

use nalgebra::{SMatrix, SVector};

use crate::error::{Error, Result};
use crate::greens::atomic_poles;
use crate::linalg::C64;
use crate::registry::{FaddeevMethod, Model};

use super::{bmatrix_at, eta_at, psi2_at, Psi, PsiSolution};

pub const MAX_CONDITION: f64 = 1e12;
pub const MAX_RESIDUAL: f64 = 1e-8;

type M6 = SMatrix<C64, 6, 6>;
type V6 = SVector<C64, 6>;

#[derive(Debug, Clone)]
pub struct FaddeevSolution {
    model: Model,
    pub poles: [C64; 2],
    pub pole_values: [Psi; 2],
    /// Relative residual of the 6×6 solve.
    pub system_residual: f64,
    /// 1-norm condition number of the 6×6 matrix.
    pub condition: f64,
    /// Multiplier applied to `ψ⁽²⁾` everywhere; 1 for the physical problem.
    pub source_scale: f64,
}

fn norm1(m: &M6) -> f64 {
    (0..6)
        .map(|c| m.column(c).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn vec_norm(v: &V6) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn solve_pole_values(model: &Model) -> Result<FaddeevSolution> {
    solve_scaled(model, 1.0)
}

/// As [`solve_pole_values`] with the inhomogeneous term multiplied by
/// `source_scale`.
pub fn solve_scaled(model: &Model, source_scale: f64) -> Result<FaddeevSolution> {
    let ap = atomic_poles(model.params())?;
    let poles = ap.poles;

    let mut a = M6::identity();
    let mut b = V6::zeros();
    for k in 0..2 {
        let minus = -poles[k];
        let bm = bmatrix_at(minus, model)?.matrix;
        let source = psi2_at(poles[k], model)? * C64::from(source_scale);
        for r in 0..3 {
            b[3 * k + r] = source[r];
        }
        for j in 0..2 {
            let block = bm * eta_at(j, minus, model)?;
            for r in 0..3 {
                for c in 0..3 {
                    a[(3 * k + r, 3 * j + c)] -= block[(r, c)];
                }
            }
        }
    }

    let lu = a.lu();
    let inverse = lu.try_inverse().ok_or(Error::SingularFaddeevSystem {
        condition: f64::INFINITY,
        residual: f64::INFINITY,
    })?;
    let condition = norm1(&a) * norm1(&inverse);
    let mut x = lu.solve(&b).ok_or(Error::SingularFaddeevSystem {
        condition,
        residual: f64::INFINITY,
    })?;
    // one step of iterative refinement
    let r = b - a * x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }
    let scale = norm1(&a) * vec_norm(&x) + vec_norm(&b);
    let residual = if scale == 0.0 {
        0.0
    } else {
        vec_norm(&(b - a * x)) / scale
    };
    if !(condition <= MAX_CONDITION) || !(residual <= MAX_RESIDUAL) {
        return Err(Error::SingularFaddeevSystem { condition, residual });
    }
    let pole_values = [
        Psi::new(x[0], x[1], x[2]),
        Psi::new(x[3], x[4], x[5]),
    ];
    Ok(FaddeevSolution {
        model: model.clone(),
        poles,
        pole_values,
        system_residual: residual,
        condition,
        source_scale,
    })
}

impl FaddeevSolution {
    pub fn model(&self) -> &Model {
        &self.model
    }

    /// `ψ` continued to complex frequency.
    pub fn psi_at(&self, z: C64) -> Result<Psi> {
        let minus = -z;
        let bm = bmatrix_at(minus, &self.model)?.matrix;
        let mut folded = Psi::zeros();
        for j in 0..2 {
            folded += self.pole_values[j] * eta_at(j, minus, &self.model)?;
        }
        Ok(bm * folded + psi2_at(z, &self.model)? * C64::from(self.source_scale))
    }

    /// `max_k |ψ(ω_pk) − pole_values[k]|`, relative to the pole values.
    pub fn fixed_point_residual(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for k in 0..2 {
            let again = self.psi_at(self.poles[k])?;
            let diff = (again - self.pole_values[k]).iter().map(|z| z.norm()).fold(0.0, f64::max);
            let size = self.pole_values[k].iter().map(|z| z.norm()).fold(0.0, f64::max);
            worst = worst.max(if size == 0.0 { diff } else { diff / size });
        }
        Ok(worst)
    }
}

impl PsiSolution for FaddeevSolution {
    fn method(&self) -> &'static str {
        "pole-closure"
    }

    fn psi(&self, omega: f64) -> Result<Psi> {
        self.psi_at(C64::from(omega))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PoleClosure;

impl FaddeevMethod for PoleClosure {
    fn name(&self) -> &'static str {
        "pole-closure"
    }

    fn solve(&self, model: &Model) -> Result<Arc<dyn PsiSolution>> {
        Ok(Arc::new(solve_pole_values(model)?))
    }
}
