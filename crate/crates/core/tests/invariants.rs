use proptest::prelude::*;

use rydcav::greens::{green_k, green_sym, polariton_eigenvalues};
use rydcav::model::{validate, LatticeSpec, ModelParams};
use rydcav::registry::{LatticeTRing, Model, ResidueBubble};
use rydcav::spectra::{
    a_mean_first, elastic_weight, elastic_weight_factorized, inelastic_density, linear_response,
    spectrum_sweep,
};
use rydcav::threebody::{psi2, solve_pole_values, three_photon_amplitude, PsiSolution};
use rydcav::twobody::{bubble, Sector};
use rydcav::grid::{Axis, Values};
use rydcav::{presets, C64};

use std::sync::Arc;

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

prop_compose! {
    fn params()(
        gamma_r in 0.02..1.5f64,
        gamma_c_f in 0.0..0.05f64,
        gamma_c_d in 0.05..1.0f64,
        delta_c in -4.0..4.0f64,
        delta_e in -4.0..4.0f64,
        delta_r in -1.0..1.0f64,
        g_sqrt_n in 0.0..3.0f64,
        omega_cf in 0.0..5.0f64,
        c6 in -3.0..-0.1f64,
        volume in 20.0..200.0f64,
        alpha in 0.1..2.0f64,
    ) -> ModelParams {
        ModelParams {
            gamma_e: 1.0,
            gamma_r,
            gamma_c_f,
            gamma_c_d,
            delta_c,
            delta_e,
            delta_r,
            g_sqrt_n,
            omega_cf,
            c6,
            volume,
            alpha,
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polaritons_ignore_the_sign_of_the_coupling(raw in params()) {
        let a = polariton_eigenvalues(&validate(raw).unwrap());
        let b = polariton_eigenvalues(&validate(raw.with_g_sqrt_n(-raw.g_sqrt_n)).unwrap());
        prop_assert_eq!(a.eps, b.eps);
    }

    #[test]
    fn antitime_branch_is_minus_conjugate_on_the_real_axis(raw in params(), w in -10.0..10.0f64) {
        let p = validate(raw).unwrap();
        let g = green_sym(w, &p).unwrap();
        let anti = g.antitime();
        let greater = g.greater();
        for i in 0..3 {
            for j in 0..3 {
                prop_assert_eq!(anti.get(i, j), -g.get(i, j).conj());
                prop_assert_eq!(greater.get(i, j), g.get(i, j) + anti.get(i, j));
            }
        }
    }

    #[test]
    fn dimensionless_outputs_survive_unit_rescaling(raw in params(), lambda in 0.1..20.0f64) {
        let one = validate(raw).unwrap();
        let two = validate(raw.rescaled(lambda)).unwrap();
        prop_assert!(rel(a_mean_first(&two).unwrap(), a_mean_first(&one).unwrap()) < 1e-12);

        let m1 = Model::new(one);
        let m2 = Model::new(two);
        let e1 = elastic_weight(&m1).unwrap().value;
        let e2 = elastic_weight(&m2).unwrap().value;
        // identically zero without cavity coupling
        prop_assert!((e2 - e1).abs() <= 1e-10 * e1.abs());

        // normalized spectral shape on a three-point pattern
        let pattern = [-1.3, 0.2, 2.1];
        let d1: Vec<f64> = pattern.iter().map(|w| inelastic_density(*w, &m1).unwrap().value).collect();
        let d2: Vec<f64> = pattern.iter().map(|w| inelastic_density(lambda * w, &m2).unwrap().value).collect();
        let n1 = d1.iter().cloned().fold(0.0, f64::max);
        let n2 = d2.iter().cloned().fold(0.0, f64::max);
        if n1 > 0.0 {
            for (a, b) in d1.iter().zip(&d2) {
                prop_assert!((b / n2 - a / n1).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn alpha_powers_are_exact(raw in params(), factor in 0.2..5.0f64) {
        let one = Model::new(validate(raw).unwrap());
        let two = Model::new(validate(raw.with_alpha(raw.alpha * factor)).unwrap());
        let a = linear_response(&one).unwrap();
        let b = linear_response(&two).unwrap();
        prop_assert!(rel(b.a1, factor * a.a1) < 1e-12);
        prop_assert!(rel(b.a3, factor.powi(3) * a.a3) < 1e-12);
        let ea = elastic_weight(&one).unwrap().value;
        let eb = elastic_weight(&two).unwrap().value;
        prop_assert!((eb / ea - factor.powi(4)).abs() < 1e-11 * factor.powi(4));
    }

    #[test]
    fn elastic_weight_factorizes(raw in params()) {
        let m = Model::new(validate(raw).unwrap());
        let direct = elastic_weight(&m).unwrap();
        let fact = elastic_weight_factorized(&linear_response(&m).unwrap());
        prop_assert!(((direct.value - fact.value) / direct.value).abs() < 1e-12);
    }

    #[test]
    fn inelastic_density_is_nonnegative(raw in params(), w in -15.0..15.0f64) {
        let m = Model::new(validate(raw).unwrap());
        let d = inelastic_density(w, &m).unwrap();
        prop_assert!(d.value >= 0.0);
    }

    #[test]
    fn green_k_matches_symmetric_block_without_cavity(raw in params(), w in -10.0..10.0f64) {
        let p = validate(raw.with_g_sqrt_n(0.0)).unwrap();
        let s = green_sym(w, &p).unwrap();
        let k = green_k(w, &p).unwrap();
        prop_assert!(rel(s.get(2, 2), k.get(1, 1)) < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn three_photon_amplitude_is_exchange_symmetric(
        raw in params(),
        w1 in -4.0..4.0f64,
        w2 in -4.0..4.0f64,
    ) {
        let raw = ModelParams { c6: raw.c6 * 0.05, ..raw };
        let m = Model::new(validate(raw).unwrap());
        let sol = match solve_pole_values(&m) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        let a = three_photon_amplitude(w1, w2, &m, &sol).unwrap().value;
        let b = three_photon_amplitude(w2, w1, &m, &sol).unwrap().value;
        prop_assert!((a - b).norm() <= 1e-12 * a.norm());
    }
}

#[test]
fn inelastic_density_is_pointwise_under_grid_refinement() {
    let m = Model::new(validate(presets::spectrum_detuned()).unwrap());
    let cf = Axis::linspace("omega_cf", 0.5, 2.5, 5);
    let coarse = spectrum_sweep(&Axis::linspace("omega", -4.0, 4.0, 9), &cf, &m).unwrap();
    let fine = spectrum_sweep(&Axis::linspace("omega", -4.0, 4.0, 33), &cf, &m).unwrap();
    let (Values::Real(c), Values::Real(f)) = (&coarse.values, &fine.values) else {
        panic!("spectrum is real");
    };
    for row in 0..5 {
        for i in 0..9 {
            assert_eq!(c[row * 9 + i], f[row * 33 + 4 * i]);
        }
    }
}

#[test]
fn lattice_tring_converges_under_refinement() {
    // fixed physical volume, doubling the sites per side
    let mut raw = presets::spectrum_resonant();
    let s = bubble(0.0, Sector::Nonsymmetric, &validate(raw).unwrap()).unwrap().value;
    let step = LatticeSpec::cubic_for_volume(raw.volume, 20).unwrap().step;
    raw.c6 = -(8.0 * step).powi(6) / s.norm();
    let p = validate(raw).unwrap();
    let at = |n: usize| {
        let lat = LatticeSpec::cubic_for_volume(raw.volume, n).unwrap();
        rydcav::twobody::tring_lattice_oracle(0.0, &p, &lat).unwrap()
    };
    let (a, b) = (at(20), at(40));
    assert!(rel(a, b) < 0.01, "{}", rel(a, b));
}

/// Pair-resolved second-order source averaged over every placement of the
/// three atoms on a periodic lattice, with atom 1 pinned at the origin.
fn psi2_lattice_average(omega: f64, raw: ModelParams, lat: &LatticeSpec) -> [C64; 3] {
    let p = validate(raw).unwrap();
    let i = C64::new(0.0, 1.0);
    let s_zero = bubble(0.0, Sector::Nonsymmetric, &p).unwrap().value;
    let s_minus = bubble(-omega, Sector::Nonsymmetric, &p).unwrap().value;
    let dims = lat.dims.map(|d| d as i64);
    let kappa = |d: [i64; 3]| -> f64 {
        let n2: i64 = (0..3)
            .map(|k| {
                let mut x = d[k].rem_euclid(dims[k]);
                if 2 * x > dims[k] {
                    x -= dims[k];
                }
                x * x
            })
            .sum();
        if n2 == 0 {
            0.0
        } else {
            raw.c6 / (n2 as f64 * lat.step * lat.step).powi(3)
        }
    };
    let pair = |k: f64, s: C64| C64::from(k) / (1.0 - i * s * k);
    let g = green_k(-omega, &p).unwrap().get(1, 1);
    let pref = (-i / (2.0 * std::f64::consts::PI)).powi(2) * i * g;
    let sites = lat.offsets();
    let mut total = [C64::new(0.0, 0.0); 3];
    for r2 in &sites {
        for r3 in &sites {
            let k12 = kappa(*r2);
            let k13 = kappa(*r3);
            let k23 = kappa([r3[0] - r2[0], r3[1] - r2[1], r3[2] - r2[2]]);
            let t0 = [pair(k12, s_zero), pair(k23, s_zero), pair(k13, s_zero)];
            let tw = [pair(k12, s_minus), pair(k23, s_minus), pair(k13, s_minus)];
            total[0] += pref * tw[0] * (t0[1] + t0[2]);
            total[1] += pref * tw[1] * (t0[0] + t0[2]);
            total[2] += pref * tw[2] * (t0[0] + t0[1]);
        }
    }
    let n2 = (sites.len() * sites.len()) as f64;
    total.map(|v| v / n2)
}

#[test]
fn no_hopping_source_against_lattice_placements() {
    // the position-summed source keeps one exchange term per component, so
    // the two-term pair-resolved average is exactly twice as large
    let mut raw = presets::spectrum_resonant().with_g_sqrt_n(0.0);
    raw.c6 = -0.05;
    let lat = LatticeSpec::cubic_for_volume(raw.volume, 8).unwrap();
    let model = Model::with_methods(
        validate(raw).unwrap(),
        Arc::new(ResidueBubble),
        Arc::new(LatticeTRing { sites_per_side: 8 }),
    );
    for w in [0.0, 0.8, -2.5] {
        let brute = psi2_lattice_average(w, raw, &lat);
        let summed = psi2(w, &model).unwrap();
        for k in 0..3 {
            assert!(rel(brute[k], 2.0 * summed[k]) < 0.05, "{w} {k}");
            assert!(rel(brute[k], 2.0 * summed[k]) < 1e-10, "{w} {k}");
        }
    }
}

#[test]
fn pole_values_are_a_fixed_point_over_random_weak_couplings() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let raw = ModelParams {
            c6: -rng.gen_range(0.01..2.0),
            omega_cf: rng.gen_range(0.2..4.0),
            delta_e: rng.gen_range(-5.0..5.0),
            ..presets::spectrum_resonant()
        };
        let sol = solve_pole_values(&Model::new(validate(raw).unwrap())).unwrap();
        assert!(sol.fixed_point_residual().unwrap() < 1e-10);
        for (j, pole) in sol.poles.iter().enumerate() {
            let at = sol.psi_at(*pole).unwrap();
            assert!((at - sol.pole_values[j]).norm() < 1e-10 * sol.pole_values[j].norm());
        }
        let _ = sol.psi(0.0).unwrap();
    }
}
