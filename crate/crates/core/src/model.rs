//! Physical parameters and derived complex rates.
//!
//! All quantities are expressed in units of the intermediate-state amplitude
//! decay rate `γ_e`. Lengths are arbitrary but must be used consistently in
//! `c6` (interaction `κ(r) = C₆/r⁶`) and `volume`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Feeding-mirror loss used when a configuration leaves it unspecified.
pub const DEFAULT_GAMMA_C_F: f64 = 0.01;

fn default_gamma_c_f() -> f64 {
    DEFAULT_GAMMA_C_F
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub gamma_e: f64,
    pub gamma_r: f64,
    #[serde(default = "default_gamma_c_f")]
    pub gamma_c_f: f64,
    pub gamma_c_d: f64,
    #[serde(default)]
    pub delta_c: f64,
    #[serde(default)]
    pub delta_e: f64,
    #[serde(default)]
    pub delta_r: f64,
    pub g_sqrt_n: f64,
    pub omega_cf: f64,
    pub c6: f64,
    pub volume: f64,
    pub alpha: f64,
}

impl ModelParams {
    /// Multiplies every rate, detuning, coupling, the feeding amplitude and
    /// the interaction coefficient by `factor`. Used for unit conversion and
    /// the rescaling-invariance checks.
    pub fn rescaled(&self, factor: f64) -> Self {
        Self {
            gamma_e: self.gamma_e * factor,
            gamma_r: self.gamma_r * factor,
            gamma_c_f: self.gamma_c_f * factor,
            gamma_c_d: self.gamma_c_d * factor,
            delta_c: self.delta_c * factor,
            delta_e: self.delta_e * factor,
            delta_r: self.delta_r * factor,
            g_sqrt_n: self.g_sqrt_n * factor,
            omega_cf: self.omega_cf * factor,
            c6: self.c6 * factor,
            volume: self.volume,
            alpha: self.alpha * factor,
        }
    }

    /// Re-expresses parameters given in an arbitrary frequency unit (e.g.
    /// MHz) in units of their own `gamma_e`.
    pub fn in_gamma_e_units(&self) -> Self {
        self.rescaled(1.0 / self.gamma_e)
    }

    pub fn with_omega_cf(mut self, omega_cf: f64) -> Self {
        self.omega_cf = omega_cf;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_c6(mut self, c6: f64) -> Self {
        self.c6 = c6;
        self
    }

    pub fn with_g_sqrt_n(mut self, g: f64) -> Self {
        self.g_sqrt_n = g;
        self
    }
}

/// `Γ_ν = γ_ν + iΔ_ν`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexRate {
    pub value: Complex64,
}

impl ComplexRate {
    pub fn new(decay: f64, detuning: f64) -> Self {
        Self {
            value: Complex64::new(decay, detuning),
        }
    }
}

/// `g√N = √(C γ_c γ_e)`.
///
/// The cooperativity convention `C = g²N / (γ_c γ_e)` is this crate's choice;
/// configurations may set `g_sqrt_n` directly instead.
pub fn coupling_from_cooperativity(cooperativity: f64, gamma_c: f64, gamma_e: f64) -> f64 {
    (cooperativity * gamma_c * gamma_e).max(0.0).sqrt()
}

/// Parameters that passed validation, with the derived complex rates cached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidatedParams {
    raw: ModelParams,
    gamma_c: f64,
    cap_gamma_c: Complex64,
    cap_gamma_e: Complex64,
    cap_gamma_r: Complex64,
}

pub fn validate(params: ModelParams) -> Result<ValidatedParams> {
    let fields: [(&'static str, f64); 12] = [
        ("gamma_e", params.gamma_e),
        ("gamma_r", params.gamma_r),
        ("gamma_c_f", params.gamma_c_f),
        ("gamma_c_d", params.gamma_c_d),
        ("delta_c", params.delta_c),
        ("delta_e", params.delta_e),
        ("delta_r", params.delta_r),
        ("g_sqrt_n", params.g_sqrt_n),
        ("omega_cf", params.omega_cf),
        ("c6", params.c6),
        ("volume", params.volume),
        ("alpha", params.alpha),
    ];
    for (name, value) in fields {
        if !value.is_finite() {
            return Err(Error::NonFinite { name });
        }
    }
    if params.gamma_e <= 0.0 {
        return Err(Error::NonPositiveRate {
            name: "gamma_e",
            value: params.gamma_e,
        });
    }
    for (name, value) in [
        ("gamma_r", params.gamma_r),
        ("gamma_c_f", params.gamma_c_f),
        ("gamma_c_d", params.gamma_c_d),
        ("omega_cf", params.omega_cf),
        ("alpha", params.alpha),
    ] {
        if value < 0.0 {
            return Err(Error::NegativeDecay { name, value });
        }
    }
    let gamma_c = params.gamma_c_f + params.gamma_c_d;
    if gamma_c <= 0.0 {
        return Err(Error::NonPositiveRate {
            name: "gamma_c",
            value: gamma_c,
        });
    }
    if params.volume <= 0.0 {
        return Err(Error::NonPositiveRate {
            name: "volume",
            value: params.volume,
        });
    }
    Ok(ValidatedParams {
        raw: params,
        gamma_c,
        cap_gamma_c: ComplexRate::new(gamma_c, params.delta_c).value,
        cap_gamma_e: ComplexRate::new(params.gamma_e, params.delta_e).value,
        cap_gamma_r: ComplexRate::new(params.gamma_r, params.delta_r).value,
    })
}

impl ValidatedParams {
    pub fn new(params: ModelParams) -> Result<Self> {
        validate(params)
    }

    pub fn raw(&self) -> &ModelParams {
        &self.raw
    }

    /// Total cavity decay `γ_c = γ_c^(f) + γ_c^(d)`.
    pub fn gamma_c(&self) -> f64 {
        self.gamma_c
    }

    pub fn cap_gamma_c(&self) -> Complex64 {
        self.cap_gamma_c
    }

    pub fn cap_gamma_e(&self) -> Complex64 {
        self.cap_gamma_e
    }

    pub fn cap_gamma_r(&self) -> Complex64 {
        self.cap_gamma_r
    }

    pub fn g_sqrt_n(&self) -> f64 {
        self.raw.g_sqrt_n
    }

    pub fn omega_cf(&self) -> f64 {
        self.raw.omega_cf
    }

    pub fn c6(&self) -> f64 {
        self.raw.c6
    }

    pub fn volume(&self) -> f64 {
        self.raw.volume
    }

    pub fn alpha(&self) -> f64 {
        self.raw.alpha
    }

    pub fn gamma_c_d(&self) -> f64 {
        self.raw.gamma_c_d
    }

    /// Stable SHA-256 of the canonical JSON encoding of the raw parameters.
    pub fn hash(&self) -> String {
        params_hash(&self.raw)
    }
}

pub fn params_hash(params: &ModelParams) -> String {
    let encoded = serde_json::to_vec(params).expect("parameters always serialize");
    hex::encode(Sha256::digest(&encoded))
}

/// Simple cubic lattice used by the discrete oracles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub step: f64,
    pub dims: [usize; 3],
}

impl LatticeSpec {
    pub fn new(step: f64, dims: [usize; 3]) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidLattice(format!("step must be positive, got {step}")));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidLattice("dimensions must be positive".into()));
        }
        let spec = Self { step, dims };
        if spec.sites() < 2 {
            return Err(Error::InvalidLattice("at least two sites are required".into()));
        }
        Ok(spec)
    }

    /// An `n³` lattice whose cell volume matches `volume`.
    pub fn cubic_for_volume(volume: f64, n: usize) -> Result<Self> {
        Self::new(volume.cbrt() / n as f64, [n, n, n])
    }

    pub fn sites(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn volume(&self) -> f64 {
        self.sites() as f64 * self.step.powi(3)
    }

    pub fn check_volume(&self, volume: f64) -> Result<()> {
        let lattice = self.volume();
        if ((lattice - volume) / volume).abs() > 0.01 {
            return Err(Error::InconsistentVolume { lattice, volume });
        }
        Ok(())
    }

    /// Integer minimum-image offsets of every site relative to the origin,
    /// in the order used for flat indexing (x fastest).
    pub fn offsets(&self) -> Vec<[i64; 3]> {
        let [lx, ly, lz] = self.dims;
        let mut out = Vec::with_capacity(self.sites());
        for iz in 0..lz {
            for iy in 0..ly {
                for ix in 0..lx {
                    out.push([
                        min_image(ix, lx),
                        min_image(iy, ly),
                        min_image(iz, lz),
                    ]);
                }
            }
        }
        out
    }
}

fn min_image(i: usize, len: usize) -> i64 {
    let i = i as i64;
    let len = len as i64;
    if i >= (len + 1) / 2 {
        i - len
    } else {
        i
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig3() -> ModelParams {
        ModelParams {
            gamma_e: 1.0,
            gamma_r: 0.15,
            gamma_c_f: 0.01,
            gamma_c_d: 0.3,
            delta_c: 0.0,
            delta_e: 0.0,
            delta_r: 0.0,
            g_sqrt_n: 1.0,
            omega_cf: 1.0,
            c6: -1.0,
            volume: 50.0,
            alpha: 1.0,
        }
    }

    #[test]
    fn validate_caches_total_cavity_decay() {
        let v = validate(fig3()).unwrap();
        assert!((v.gamma_c() - 0.31).abs() < 1e-15);
        assert_eq!(v.cap_gamma_c(), Complex64::new(0.31, 0.0));
    }

    #[test]
    fn zero_unit_rate_is_rejected() {
        let mut p = fig3();
        p.gamma_e = 0.0;
        assert!(matches!(
            validate(p),
            Err(Error::NonPositiveRate { name: "gamma_e", .. })
        ));
    }

    #[test]
    fn negative_decay_is_rejected() {
        let mut p = fig3();
        p.gamma_r = -0.1;
        assert!(matches!(validate(p), Err(Error::NegativeDecay { name: "gamma_r", .. })));
    }

    #[test]
    fn nan_is_rejected() {
        let mut p = fig3();
        p.delta_e = f64::NAN;
        assert!(matches!(validate(p), Err(Error::NonFinite { name: "delta_e" })));
    }

    #[test]
    fn complex_rates_are_decay_plus_i_detuning() {
        let mut p = fig3();
        p.delta_c = -3.0;
        p.delta_e = 2.5;
        p.delta_r = 0.25;
        let v = validate(p).unwrap();
        assert_eq!(v.cap_gamma_c(), Complex64::new(0.31, -3.0));
        assert_eq!(v.cap_gamma_e(), Complex64::new(1.0, 2.5));
        assert_eq!(v.cap_gamma_r(), Complex64::new(0.15, 0.25));
    }

    #[test]
    fn cooperativity_convention() {
        assert_eq!(coupling_from_cooperativity(0.0, 0.3, 1.0), 0.0);
        assert!((coupling_from_cooperativity(5.0, 0.3, 1.0) - 1.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(coupling_from_cooperativity(1.0, 1.0, 1.0), 1.0);
    }

    #[test]
    fn missing_feeding_loss_defaults() {
        let text = r#"{"gamma_e":1,"gamma_r":0.15,"gamma_c_d":0.3,"g_sqrt_n":1,
            "omega_cf":1,"c6":-1,"volume":50,"alpha":1}"#;
        let p: ModelParams = serde_json::from_str(text).unwrap();
        assert_eq!(p.gamma_c_f, DEFAULT_GAMMA_C_F);
        assert_eq!(p.delta_c, 0.0);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = r#"{"gamma_e":1,"gamma_r":0.15,"gamma_c_d":0.3,"g_sqrt_n":1,
            "omega_cf":1,"c6":-1,"volume":50,"alpha":1,"gamma_x":2}"#;
        assert!(serde_json::from_str::<ModelParams>(text).is_err());
    }

    #[test]
    fn lattice_volume_consistency() {
        let lat = LatticeSpec::cubic_for_volume(8.0, 4).unwrap();
        assert!(lat.check_volume(8.0).is_ok());
        assert!(matches!(
            lat.check_volume(8.5),
            Err(Error::InconsistentVolume { .. })
        ));
        assert!(LatticeSpec::new(1.0, [1, 1, 1]).is_err());
        assert!(LatticeSpec::new(0.0, [2, 2, 2]).is_err());
    }

    #[test]
    fn offsets_are_minimum_image() {
        let lat = LatticeSpec::new(1.0, [4, 1, 1]).unwrap();
        let xs: Vec<i64> = lat.offsets().iter().map(|o| o[0]).collect();
        assert_eq!(xs, vec![0, 1, -2, -1]);
        let lat = LatticeSpec::new(1.0, [5, 1, 1]).unwrap();
        let xs: Vec<i64> = lat.offsets().iter().map(|o| o[0]).collect();
        assert_eq!(xs, vec![0, 1, 2, -2, -1]);
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = validate(fig3()).unwrap();
        let b = validate(fig3().with_alpha(2.0)).unwrap();
        assert_eq!(a.hash(), validate(fig3()).unwrap().hash());
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
