//! Two-excitation physics: the pair bubble, blockade T-matrices and the
//! photon-pair amplitude.

pub mod bubble;
pub mod lattice;
pub mod pair;
pub mod tring;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::model::{LatticeSpec, ValidatedParams};

pub use pair::{pair_amplitude, pair_amplitude_with, PairAmplitude};

const I: C64 = C64::new(0.0, 1.0);

/// Hopping-corrected denominators smaller than this are rejected.
pub const RESONANCE_TOL: f64 = 1e-12;

/// Which propagator enters the bubble: `G_{c₀c₀}` of the cavity-coupled
/// symmetric block, or the `G_cc` shared by every `k ≠ 0` spinwave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sector {
    Symmetric,
    Nonsymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bubble {
    pub omega_total: f64,
    pub value: C64,
    pub sector: Sector,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TMatrixScalar {
    /// `T̊₀` at zero total frequency.
    pub tring0: C64,
    /// Hopping-corrected `T₀`.
    pub t0: C64,
}

pub fn bubble(omega_total: f64, sector: Sector, p: &ValidatedParams) -> Result<Bubble> {
    Ok(Bubble {
        omega_total,
        value: bubble::bubble_residue(C64::from(omega_total), sector, p)?,
        sector,
    })
}

pub fn bubble_quadrature_oracle(omega_total: f64, sector: Sector, p: &ValidatedParams) -> Result<C64> {
    bubble::bubble_quadrature(C64::from(omega_total), sector, p)
}

/// `T̊₀(ω)` from the closed form, with the non-symmetric bubble at total
/// frequency `ω`.
pub fn tring0(omega_total: f64, p: &ValidatedParams) -> Result<C64> {
    let s = bubble::bubble_residue(C64::from(omega_total), Sector::Nonsymmetric, p)?;
    tring::tring_closed_form(s, p)
}

pub fn tring_lattice_oracle(omega_total: f64, p: &ValidatedParams, lattice: &LatticeSpec) -> Result<C64> {
    let s = bubble::bubble_residue(C64::from(omega_total), Sector::Nonsymmetric, p)?;
    lattice::tring_lattice_sum(s, p, lattice)
}

/// `T₀ = T̊₀ / (1 − i T̊₀ (S₀ − S))`.
pub fn hopping_corrected(tring0: C64, s_symmetric: C64, s_other: C64) -> Result<C64> {
    let den = 1.0 - I * tring0 * (s_symmetric - s_other);
    if den.norm() < RESONANCE_TOL {
        return Err(Error::ResonantDenominator(den.norm()));
    }
    Ok(tring0 / den)
}

pub fn t0(p: &ValidatedParams) -> Result<TMatrixScalar> {
    let zero = C64::new(0.0, 0.0);
    let s0 = bubble::bubble_residue(zero, Sector::Symmetric, p)?;
    let s = bubble::bubble_residue(zero, Sector::Nonsymmetric, p)?;
    let tring0 = tring::tring_closed_form(s, p)?;
    Ok(TMatrixScalar {
        tring0,
        t0: hopping_corrected(tring0, s0, s)?,
    })
}
