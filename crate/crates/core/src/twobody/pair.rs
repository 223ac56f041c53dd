//! Second-order photon-pair amplitude on the `ω₁ + ω₂ = 0` shell.

use serde::Serialize;

use crate::error::Result;
use crate::greens::{green_sym, A, C0};
use crate::linalg::C64;
use crate::model::ValidatedParams;
use crate::spectra::a_mean_first;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairAmplitude {
    pub omega_out: f64,
    /// Interaction-induced part: `iα² G_{ac₀}[ω] G_{ac₀}[−ω] T₀ G_{c₀a}[0]²`.
    pub value: C64,
    /// The factorized linear part `⟨a⟩⁽¹⁾⟨a⟩⁽¹⁾`.
    pub linear_product: C64,
}

/// Pair amplitude for a caller-supplied two-body vertex `t`.
pub fn pair_amplitude_with(omega_out: f64, p: &ValidatedParams, t: C64) -> Result<PairAmplitude> {
    let out_plus = green_sym(omega_out, p)?.get(A, C0);
    let out_minus = green_sym(-omega_out, p)?.get(A, C0);
    let feed = green_sym(0.0, p)?.get(C0, A);
    let alpha = p.alpha();
    let legs = out_plus * out_minus;
    let value = C64::new(0.0, alpha * alpha) * legs * t * feed * feed;
    let a1 = a_mean_first(p)?;
    Ok(PairAmplitude {
        omega_out,
        value,
        linear_product: a1 * a1,
    })
}

pub fn pair_amplitude(omega_out: f64, p: &ValidatedParams) -> Result<PairAmplitude> {
    let t = super::t0(p)?.t0;
    pair_amplitude_with(omega_out, p, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conventions::{SQRT_TWO_PI, TWO_PI};
    use crate::model::{validate, ModelParams};

    fn raw() -> ModelParams {
        ModelParams {
            gamma_e: 1.0,
            gamma_r: 0.15,
            gamma_c_f: 0.01,
            gamma_c_d: 0.3,
            delta_c: -0.5,
            delta_e: 0.2,
            delta_r: 0.0,
            g_sqrt_n: 1.2,
            omega_cf: 1.0,
            c6: -1.0,
            volume: 50.0,
            alpha: 0.7,
        }
    }

    #[test]
    fn vanishes_without_interaction() {
        let p = validate(raw().with_c6(0.0)).unwrap();
        let a = pair_amplitude(0.4, &p).unwrap();
        assert_eq!(a.value, C64::new(0.0, 0.0));
    }

    #[test]
    fn even_in_output_frequency() {
        let p = validate(raw()).unwrap();
        for w in [0.1, 1.3, 4.0] {
            let a = pair_amplitude(w, &p).unwrap().value;
            let b = pair_amplitude(-w, &p).unwrap().value;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn first_order_diagram() {
        // single interaction vertex U₀ with the (−i√2πα)² feeding legs and
        // the (−i/2π) vertex factor
        let p = validate(raw()).unwrap();
        let u0 = C64::new(-0.37, 0.0);
        let w = 0.8;
        let got = pair_amplitude_with(w, &p, u0).unwrap().value;
        let g = |x: f64| green_sym(x, &p).unwrap().get(A, C0);
        let feed = C64::new(0.0, -SQRT_TWO_PI * p.alpha());
        let vertex = C64::new(0.0, -1.0) * u0 / TWO_PI;
        let want = feed * feed * vertex * g(w) * g(-w) * g(0.0) * g(0.0);
        assert!((got - want).norm() < 1e-14 * want.norm());
    }

    #[test]
    fn scales_as_alpha_squared() {
        let a = pair_amplitude(0.5, &validate(raw()).unwrap()).unwrap();
        let b = pair_amplitude(0.5, &validate(raw().with_alpha(1.4)).unwrap()).unwrap();
        assert!((b.value - 4.0 * a.value).norm() < 1e-12 * b.value.norm());
        assert!((b.linear_product - 4.0 * a.linear_product).norm() < 1e-12 * b.linear_product.norm());
    }
}
