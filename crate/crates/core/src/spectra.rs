//! Mean transmitted field and the fourth-order transmission spectrum.

use rayon::prelude::*;
use serde::Serialize;

use crate::conventions::{SQRT_TWO_PI, TWO_PI};
use crate::error::{Error, Result};
use crate::greens::{green_sym, polariton_eigenvalues, A, C0};
use crate::grid::{check_axis, Axis, Metadata, Overlay, Shell, SpectralGrid, Values};
use crate::linalg::C64;
use crate::model::{validate, ValidatedParams};
use crate::registry::Model;

const I: C64 = C64::new(0.0, 1.0);

/// Relative imaginary residue tolerated in the inelastic density.
pub const DENSITY_IMAG_TOL: f64 = 1e-8;
/// Most negative inelastic density tolerated before it counts as unphysical.
pub const DENSITY_NEG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearResponse {
    /// `⟨a⟩⁽¹⁾` in the time domain.
    pub a1: C64,
    /// Coefficient of `δ(ω)` in `⟨a(ω)⟩⁽³⁾`.
    pub a3: C64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElasticWeight {
    /// The written term before `+ c.c.`.
    pub coefficient: C64,
    /// `coefficient + c.c.`
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InelasticDensity {
    pub omega: f64,
    pub value: f64,
    /// Imaginary part of the assembled product, kept as a diagnostic.
    pub imag_residue: f64,
}

/// `(−iα) · iG_aa[0]`.
pub fn a_mean_first(p: &ValidatedParams) -> Result<C64> {
    let g = green_sym(0.0, p)?;
    Ok(-I * p.alpha() * I * g.get(A, A))
}

/// `−iα / (Γ_c + g²N/(Γ_e + Ω²/(4Γ_r)))`, rearranged so that `Γ_r = 0` is
/// regular.
pub fn a_mean_first_closed_form(p: &ValidatedParams) -> C64 {
    let ge = p.cap_gamma_e();
    let gr = p.cap_gamma_r();
    let q = 0.25 * p.omega_cf() * p.omega_cf();
    let g2 = p.g_sqrt_n() * p.g_sqrt_n();
    -I * p.alpha() / (p.cap_gamma_c() + g2 * gr / (ge * gr + q))
}

/// `(−i√2π α)³ (−iG_{ac₀}[0] · iG̃_{ac₀}[0]) (−iT₀/2π) (iG_{c₀a}[0])²`.
pub fn a_mean_third_with(p: &ValidatedParams, t0: C64) -> Result<C64> {
    let g = green_sym(0.0, p)?;
    let gac = g.get(A, C0);
    let gac_anti = g.antitime().get(A, C0);
    let gca = g.get(C0, A);
    let feed = -I * SQRT_TWO_PI * p.alpha();
    Ok(feed * feed * feed * (-I * gac * I * gac_anti) * (-I * t0 / TWO_PI) * (I * gca) * (I * gca))
}

pub fn a_mean_third(model: &Model) -> Result<C64> {
    a_mean_third_with(model.params(), model.t_matrix()?.t0)
}

pub fn linear_response(model: &Model) -> Result<LinearResponse> {
    Ok(LinearResponse {
        a1: a_mean_first(model.params())?,
        a3: a_mean_third(model)?,
    })
}

/// `−2πα⁴ G_aa*[0] (G_{ac₀}[0] G̃_{ac₀}[0]) T₀ G_{c₀a}[0]² + c.c.`
pub fn elastic_weight_with(p: &ValidatedParams, t0: C64) -> Result<ElasticWeight> {
    let g = green_sym(0.0, p)?;
    let a4 = p.alpha().powi(4);
    let coefficient = -TWO_PI
        * a4
        * g.get(A, A).conj()
        * (g.get(A, C0) * g.antitime().get(A, C0))
        * t0
        * g.get(C0, A)
        * g.get(C0, A);
    Ok(ElasticWeight {
        coefficient,
        value: 2.0 * coefficient.re,
    })
}

pub fn elastic_weight(model: &Model) -> Result<ElasticWeight> {
    elastic_weight_with(model.params(), model.t_matrix()?.t0)
}

/// The same weight assembled as `⟨a†⟩⁽¹⁾⟨a⟩⁽³⁾ + c.c.` from the mean fields,
/// with `√2π` turning the time-domain `⟨a⟩⁽¹⁾` into its δ(ω) weight.
pub fn elastic_weight_factorized(response: &LinearResponse) -> ElasticWeight {
    let coefficient = (response.a1 * SQRT_TWO_PI).conj() * response.a3;
    ElasticWeight {
        coefficient,
        value: 2.0 * coefficient.re,
    }
}

/// The δ(ω − ω′) coefficient before the output-coupling factor:
/// `−α⁴|T₀|² iG^>_{c₀c₀}[−ω] G̃_{c₀a}[ω] G_{ac₀}[ω] G_{c₀a}[0]² G̃_{ac₀}[0]²`.
pub fn inelastic_coefficient(omega: f64, p: &ValidatedParams, t0: C64) -> Result<C64> {
    let g0 = green_sym(0.0, p)?;
    let gw = green_sym(omega, p)?;
    let gmw = green_sym(-omega, p)?;
    let greater = gmw.greater().get(C0, C0);
    let feed = g0.get(C0, A);
    let feed_anti = g0.antitime().get(A, C0);
    Ok(-p.alpha().powi(4)
        * t0.norm_sqr()
        * I
        * greater
        * gw.antitime().get(C0, A)
        * gw.get(A, C0)
        * feed
        * feed
        * feed_anti
        * feed_anti)
}

/// `2γ_c^(d)` times [`inelastic_coefficient`], checked to be real and
/// non-negative.
pub fn inelastic_density_with(omega: f64, p: &ValidatedParams, t0: C64) -> Result<InelasticDensity> {
    let v = 2.0 * p.gamma_c_d() * inelastic_coefficient(omega, p, t0)?;
    if v.im.abs() > DENSITY_IMAG_TOL * v.norm() || v.re < -DENSITY_NEG_TOL {
        return Err(Error::NonPhysicalDensity { re: v.re, im: v.im });
    }
    Ok(InelasticDensity {
        omega,
        value: v.re,
        imag_residue: v.im,
    })
}

pub fn inelastic_density(omega: f64, model: &Model) -> Result<InelasticDensity> {
    inelastic_density_with(omega, model.params(), model.t_matrix()?.t0)
}

/// Inelastic density over an `(Ω_cf, ω)` grid with the `±ε_k` families as
/// an overlay. `T₀` is recomputed for each `Ω_cf`.
pub fn spectrum_sweep(omega: &Axis, omega_cf: &Axis, model: &Model) -> Result<SpectralGrid> {
    check_axis(omega)?;
    check_axis(omega_cf)?;
    let rows: Vec<(Vec<f64>, Vec<f64>)> = omega_cf
        .values
        .par_iter()
        .map(|&ocf| {
            let p = validate(model.params().raw().with_omega_cf(ocf))?;
            let t0 = model.with_params(p).t_matrix()?.t0;
            let densities = omega
                .values
                .iter()
                .map(|&w| inelastic_density_with(w, &p, t0).map(|d| d.value))
                .collect::<Result<Vec<f64>>>()?;
            let family = polariton_eigenvalues(&p).signed_family().to_vec();
            Ok((densities, family))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(omega.len() * omega_cf.len());
    let mut family = Vec::with_capacity(omega_cf.len());
    for (d, f) in rows {
        values.extend(d);
        family.push(f);
    }
    let p = model.params();
    let meta = Metadata {
        version: crate::VERSION.to_string(),
        params_hash: p.hash(),
        units: "gamma_e".into(),
        provenance: format!(
            "inelastic density; bubble={}, tring={}",
            model.bubble_method(),
            model.tring_method()
        ),
        alpha_power: 4,
        alpha: p.alpha(),
    };
    let mut axes = vec![omega_cf.clone(), omega.clone()];
    axes[0].name = "omega_cf".into();
    axes[1].name = "omega".into();
    SpectralGrid::new(axes, Values::Real(values), Shell::LineDelta, meta)?.with_overlay(Overlay {
        name: "pm_eps".into(),
        rows: family,
    })
}

/// Indices of strict local maxima of a sampled curve exceeding
/// `threshold`.
pub fn local_maxima(values: &[f64], threshold: f64) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1] && values[i] > threshold)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;

    fn raw() -> ModelParams {
        ModelParams {
            gamma_e: 1.0,
            gamma_r: 0.15,
            gamma_c_f: 0.01,
            gamma_c_d: 0.3,
            delta_c: -0.4,
            delta_e: 0.3,
            delta_r: 0.05,
            g_sqrt_n: 1.3,
            omega_cf: 1.7,
            c6: -1.0,
            volume: 50.0,
            alpha: 0.6,
        }
    }

    #[test]
    fn linear_routes_agree() {
        let p = validate(raw()).unwrap();
        let a = a_mean_first(&p).unwrap();
        let b = a_mean_first_closed_form(&p);
        assert!((a - b).norm() < 1e-13 * b.norm());
    }

    #[test]
    fn perfect_transparency() {
        let mut r = raw();
        r.delta_c = 0.0;
        r.delta_e = 0.0;
        r.delta_r = 0.0;
        r.gamma_r = 0.0;
        let p = validate(r).unwrap();
        let want = C64::new(0.0, -0.6 / 0.31);
        assert!((a_mean_first_closed_form(&p) - want).norm() < 1e-15);
        assert!((a_mean_first(&p).unwrap() - want).norm() < 1e-12 * want.norm());
    }

    #[test]
    fn empty_cavity() {
        let mut r = raw().with_g_sqrt_n(0.0);
        r.delta_c = 0.0;
        let p = validate(r).unwrap();
        let want = C64::new(0.0, -0.6 / 0.31);
        assert!((a_mean_first(&p).unwrap() - want).norm() < 1e-14);
    }

    #[test]
    fn third_order_reduces_to_product_form() {
        let p = validate(raw()).unwrap();
        let t = C64::new(-0.2, 0.05);
        let g = green_sym(0.0, &p).unwrap();
        let gg = g.get(A, C0);
        let want = -SQRT_TWO_PI * 0.6f64.powi(3) * gg * (-gg.conj()) * t * gg * gg;
        let got = a_mean_third_with(&p, t).unwrap();
        assert!((got - want).norm() < 1e-14 * want.norm());
    }

    #[test]
    fn elastic_two_routes() {
        let m = Model::new(validate(raw()).unwrap());
        let direct = elastic_weight(&m).unwrap();
        let fact = elastic_weight_factorized(&linear_response(&m).unwrap());
        assert!((direct.coefficient - fact.coefficient).norm() < 1e-13 * direct.coefficient.norm());
        assert!((direct.value - fact.value).abs() < 1e-12 * direct.value.abs());
    }

    #[test]
    fn inelastic_density_is_the_modulus_form() {
        let p = validate(raw()).unwrap();
        let t = C64::new(-0.3, 0.1);
        for w in [-3.0, -0.2, 0.0, 1.1] {
            let d = inelastic_density_with(w, &p, t).unwrap();
            let g0 = green_sym(0.0, &p).unwrap().get(A, C0);
            let gw = green_sym(w, &p).unwrap().get(A, C0);
            let gcc = green_sym(-w, &p).unwrap().get(C0, C0);
            let want = 2.0 * 0.3 * 2.0 * 0.6f64.powi(4) * t.norm_sqr() * gw.norm_sqr()
                * g0.norm_sqr().powi(2)
                * (-gcc.im);
            assert!((d.value - want).abs() < 1e-13 * want);
            assert!(d.imag_residue.abs() <= 1e-15 * want);
        }
    }

    #[test]
    fn no_interaction_no_inelastic_light() {
        let m = Model::new(validate(raw().with_c6(0.0)).unwrap());
        assert_eq!(inelastic_density(0.3, &m).unwrap().value, 0.0);
        assert_eq!(elastic_weight(&m).unwrap().value, 0.0);
        assert_eq!(a_mean_third(&m).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn single_point_sweep() {
        let m = Model::new(validate(raw()).unwrap());
        let g = spectrum_sweep(
            &Axis::new("omega", vec![0.4]),
            &Axis::new("omega_cf", vec![1.7]),
            &m,
        )
        .unwrap();
        let d = inelastic_density(0.4, &m).unwrap().value;
        assert_eq!(g.values, Values::Real(vec![d]));
    }

    #[test]
    fn local_maxima_threshold() {
        let v = [0.0, 1.0, 0.5, 0.6, 0.2, 3.0, 0.0];
        assert_eq!(local_maxima(&v, 0.0), vec![1, 3, 5]);
        assert_eq!(local_maxima(&v, 0.8), vec![1, 5]);
    }
}
