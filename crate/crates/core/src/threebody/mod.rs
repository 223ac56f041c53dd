//! Three-photon correlations from the Faddeev-component equation.
//!
//! Everything is position-summed: the three components of `ψ` belong to
//! the pairs (12), (23) and (13), and every off-diagonal slot of `B̂` holds
//! the same `T̊₀`.

pub mod amplitude;
pub mod faddeev;
pub mod iterative;
pub mod poles_check;

use std::fmt;

use nalgebra::{Matrix3, Vector3};

use crate::error::Result;
use crate::greens::{atomic_poles, gc0c0_at, gcc_atomic};
use crate::linalg::C64;
use crate::registry::Model;

pub use amplitude::{three_photon_amplitude, three_photon_map, ThreePhotonAmplitude};
pub use faddeev::{solve_pole_values, FaddeevSolution, PoleClosure};
pub use iterative::{IterativeSeries, IterativeSolution};
pub use poles_check::{verify_pole_assumption, PoleReport, ScanGrid, Singularity};

const I: C64 = C64::new(0.0, 1.0);

pub type Psi = Vector3<C64>;

/// A solved Faddeev vector that can be evaluated on the real axis.
pub trait PsiSolution: Send + Sync + fmt::Debug {
    fn method(&self) -> &'static str;
    fn psi(&self, omega: f64) -> Result<Psi>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BMatrix {
    pub omega: C64,
    pub matrix: Matrix3<C64>,
}

/// Zero diagonal, `T̊₀(ω)` in every off-diagonal slot.
pub fn bmatrix_at(z: C64, model: &Model) -> Result<BMatrix> {
    let t = model.tring0_at(z)?;
    let zero = C64::new(0.0, 0.0);
    Ok(BMatrix {
        omega: z,
        matrix: Matrix3::new(zero, t, t, t, zero, t, t, t, zero),
    })
}

pub fn bmatrix(omega: f64, model: &Model) -> Result<BMatrix> {
    bmatrix_at(C64::from(omega), model)
}

/// `η_j(ω) = G_cc(ω − ω_pj) · Res_j G_cc`.
pub fn eta_at(j: usize, z: C64, model: &Model) -> Result<C64> {
    let ap = atomic_poles(model.params())?;
    Ok(gcc_atomic(z - ap.poles[j], model.params()) * ap.residues[j])
}

pub fn eta(j: usize, omega: f64, model: &Model) -> Result<C64> {
    eta_at(j, C64::from(omega), model)
}

/// `(−i/2π)² iG_{c₀c₀}(−ω) T̊₀(0) T̊₀(−ω) (1,1,1)`.
pub fn psi2_at(z: C64, model: &Model) -> Result<Psi> {
    let pref = (-I / crate::conventions::TWO_PI).powi(2);
    let t_zero = model.tring0(0.0)?;
    let t_minus = model.tring0_at(-z)?;
    let value = pref * I * gc0c0_at(-z, model.params()) * t_zero * t_minus;
    Ok(Vector3::new(value, value, value))
}

pub fn psi2(omega: f64, model: &Model) -> Result<Psi> {
    psi2_at(C64::from(omega), model)
}

/// `max |2 T̊₀(−ω)| Σ_j |η_j(−ω)|` over the given frequencies, an upper
/// estimate of the contraction of one kernel application on the symmetric
/// subspace.
pub fn series_contraction_estimate(omegas: &[f64], model: &Model) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &w in omegas {
        let z = C64::from(-w);
        let t = model.tring0_at(z)?;
        let e = eta_at(0, z, model)?.norm() + eta_at(1, z, model)?.norm();
        worst = worst.max(2.0 * t.norm() * e);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate, ModelParams};
    use crate::twobody::Sector;

    fn model(c6: f64, omega_cf: f64) -> Model {
        Model::new(
            validate(ModelParams {
                gamma_e: 1.0,
                gamma_r: 0.15,
                gamma_c_f: 0.01,
                gamma_c_d: 0.3,
                delta_c: 0.0,
                delta_e: 0.0,
                delta_r: 0.0,
                g_sqrt_n: 1.55f64.sqrt(),
                omega_cf,
                c6,
                volume: 50.0,
                alpha: 1.0,
            })
            .unwrap(),
        )
    }

    #[test]
    fn bmatrix_structure() {
        let m = model(-1.0, 1.0);
        let b = bmatrix(0.4, &m).unwrap().matrix;
        let t = m.tring0(0.4).unwrap();
        for i in 0..3 {
            assert_eq!(b[(i, i)], C64::new(0.0, 0.0));
            let row: C64 = b.row(i).iter().sum();
            assert_eq!(row, 2.0 * t);
        }
        let one = Vector3::new(C64::from(1.0), C64::from(1.0), C64::from(1.0));
        assert_eq!(b * one, one * (2.0 * t));
        let zero = bmatrix(0.4, &model(0.0, 1.0)).unwrap().matrix;
        assert!(zero.iter().all(|z| *z == C64::new(0.0, 0.0)));
    }

    #[test]
    fn undriven_eta() {
        let m = model(-1.0, 0.0);
        // pole 1 is −iγ_r with residue 1
        let w = 0.37;
        let got = eta(0, w, &m).unwrap();
        let want = 1.0 / (C64::from(w) + 2.0 * I * 0.15);
        assert!((got - want).norm() < 1e-14);
        assert!(eta(1, w, &m).unwrap().norm() < 1e-14);
    }

    #[test]
    fn eta_sum_closes_the_bubble() {
        let m = model(-1.0, 2.0);
        let sum = eta(0, 0.0, &m).unwrap() + eta(1, 0.0, &m).unwrap();
        let s = m.bubble(C64::from(0.0), Sector::Nonsymmetric).unwrap();
        assert!((sum - I * s).norm() < 1e-13 * s.norm());
    }

    #[test]
    fn eta_ignores_feeding() {
        let a = model(-1.0, 2.0);
        let b = Model::new(validate(a.params().raw().with_alpha(3.0)).unwrap());
        assert_eq!(eta(1, 0.2, &a).unwrap(), eta(1, 0.2, &b).unwrap());
    }

    #[test]
    fn psi2_components_are_equal_and_vanish_without_interaction() {
        let v = psi2(0.6, &model(-1.0, 1.0)).unwrap();
        assert_eq!(v[0], v[1]);
        assert_eq!(v[1], v[2]);
        assert!(v[0].norm() > 0.0);
        let z = psi2(0.6, &model(0.0, 1.0)).unwrap();
        assert!(z.iter().all(|c| *c == C64::new(0.0, 0.0)));
    }
}
