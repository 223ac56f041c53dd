//! Reference parameter sets for transmission spectra and three-photon maps.
//!
//! `C₆ = −1` and `V = 50` only set the overall scale of the nonlinear
//! signals.

use crate::model::{coupling_from_cooperativity, ModelParams, DEFAULT_GAMMA_C_F};

pub const COOPERATIVITY: f64 = 5.0;
pub const C6: f64 = -1.0;
pub const VOLUME: f64 = 50.0;

fn base() -> ModelParams {
    let gamma_c_d = 0.3;
    ModelParams {
        gamma_e: 1.0,
        gamma_r: 0.15,
        gamma_c_f: DEFAULT_GAMMA_C_F,
        gamma_c_d,
        delta_c: 0.0,
        delta_e: 0.0,
        delta_r: 0.0,
        g_sqrt_n: coupling_from_cooperativity(COOPERATIVITY, DEFAULT_GAMMA_C_F + gamma_c_d, 1.0),
        omega_cf: 1.0,
        c6: C6,
        volume: VOLUME,
        alpha: 1.0,
    }
}

/// Transmission spectrum, all detunings zero.
pub fn spectrum_resonant() -> ModelParams {
    base()
}

/// Transmission spectrum with the cavity detuned by `−3γ_e`.
pub fn spectrum_detuned() -> ModelParams {
    ModelParams {
        delta_c: -3.0,
        ..base()
    }
}

pub fn three_photon(delta_e: f64, omega_cf: f64) -> ModelParams {
    ModelParams {
        delta_e,
        omega_cf,
        ..base()
    }
}

/// The four `(Δ_e, Ω_cf)` three-photon parameter sets.
pub const THREE_PHOTON_PANELS: [(f64, f64); 4] = [(-25.0, 1.0), (0.0, 1.0), (-25.0, 4.0), (0.0, 4.0)];

pub fn three_photon_panels() -> Vec<ModelParams> {
    THREE_PHOTON_PANELS
        .iter()
        .map(|&(de, ocf)| three_photon(de, ocf))
        .collect()
}

pub fn by_name(name: &str) -> Option<ModelParams> {
    match name {
        "spectrum-resonant" => Some(spectrum_resonant()),
        "spectrum-detuned" => Some(spectrum_detuned()),
        "three-photon-a" => Some(three_photon(-25.0, 1.0)),
        "three-photon-b" => Some(three_photon(0.0, 1.0)),
        "three-photon-c" => Some(three_photon(-25.0, 4.0)),
        "three-photon-d" => Some(three_photon(0.0, 4.0)),
        _ => None,
    }
}

pub const NAMES: [&str; 6] = [
    "spectrum-resonant",
    "spectrum-detuned",
    "three-photon-a",
    "three-photon-b",
    "three-photon-c",
    "three-photon-d",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupling_follows_cooperativity() {
        let p = spectrum_resonant();
        assert!((p.g_sqrt_n * p.g_sqrt_n - 5.0 * 0.31).abs() < 1e-14);
    }

    #[test]
    fn every_name_resolves() {
        for n in NAMES {
            assert!(crate::model::validate(by_name(n).unwrap()).is_ok());
        }
        assert!(by_name("nope").is_none());
    }
}
