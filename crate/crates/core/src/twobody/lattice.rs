//! Discrete-lattice counterparts of the continuum T-matrix: the position sum
//! for `T̊`, the interaction Fourier transform `U_K`, and a brute-force
//! ladder summation in k-space.

use nalgebra::DMatrix;

use crate::conventions::TWO_PI;
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::model::{LatticeSpec, ValidatedParams};

const I: C64 = C64::new(0.0, 1.0);

/// `κ(r) = C₆/r⁶` for every site, with the origin set to zero.
pub fn interaction_profile(lattice: &LatticeSpec, c6: f64) -> Vec<f64> {
    lattice
        .offsets()
        .iter()
        .map(|o| {
            let n2 = (o[0] * o[0] + o[1] * o[1] + o[2] * o[2]) as f64;
            if n2 == 0.0 {
                0.0
            } else {
                let r2 = n2 * lattice.step * lattice.step;
                c6 / (r2 * r2 * r2)
            }
        })
        .collect()
}

/// `(1/N) Σ_{i≠0} κ(r_i) / (1 − i S κ(r_i))`.
pub fn tring_lattice_sum(s: C64, p: &ValidatedParams, lattice: &LatticeSpec) -> Result<C64> {
    lattice.check_volume(p.volume())?;
    let kappa = interaction_profile(lattice, p.c6());
    // sequential so that the rounding does not depend on the thread count
    let total: C64 = kappa
        .iter()
        .map(|&k| C64::from(k) / (1.0 - I * s * k))
        .sum();
    Ok(total / lattice.sites() as f64)
}

/// `U_K = (1/N) Σ_m κ(r_m) e^{iK·r_m}` for `K = 2π (m_x/L_x, m_y/L_y, m_z/L_z)/δ`.
pub fn u_fourier(k_index: [i64; 3], lattice: &LatticeSpec, c6: f64) -> C64 {
    let kappa = interaction_profile(lattice, c6);
    u_from_profile(k_index, lattice, &kappa)
}

fn u_from_profile(k_index: [i64; 3], lattice: &LatticeSpec, kappa: &[f64]) -> C64 {
    let dims = lattice.dims;
    let total: C64 = lattice
        .offsets()
        .iter()
        .zip(kappa)
        .map(|(o, &k)| {
            let phase: f64 = (0..3)
                .map(|d| (k_index[d] * o[d]).rem_euclid(dims[d] as i64) as f64 / dims[d] as f64)
                .sum();
            C64::from_polar(k, TWO_PI * phase)
        })
        .sum();
    total / lattice.sites() as f64
}

/// Interaction matrix in k-space, `𝒰_{K,K'} = U_{K−K'}`, indexed like
/// [`LatticeSpec::offsets`].
pub fn interaction_matrix(lattice: &LatticeSpec, c6: f64) -> DMatrix<C64> {
    let kappa = interaction_profile(lattice, c6);
    let n = lattice.sites();
    let ks = lattice.offsets();
    let table: Vec<C64> = ks.iter().map(|k| u_from_profile(*k, lattice, &kappa)).collect();
    let index = |m: [i64; 3]| -> usize {
        let [lx, ly, lz] = lattice.dims.map(|d| d as i64);
        let x = m[0].rem_euclid(lx);
        let y = m[1].rem_euclid(ly);
        let z = m[2].rem_euclid(lz);
        (x + lx * (y + ly * z)) as usize
    };
    DMatrix::from_fn(n, n, |a, b| {
        let d = [ks[a][0] - ks[b][0], ks[a][1] - ks[b][1], ks[a][2] - ks[b][2]];
        table[index(d)]
    })
}

#[derive(Debug, Clone)]
pub struct LadderSeries {
    /// `T[0,0]` after the last retained term.
    pub value: C64,
    /// Norm of the `T[0,0]` contribution of every retained order.
    pub term_norms: Vec<f64>,
    pub converged: bool,
}

/// Term-by-term summation of `T = 𝒰 + i 𝒰 D 𝒰 + (i 𝒰 D)² 𝒰 + …` with
/// `D = diag(S₀, S, S, …)`, stopping once a whole term's max-norm is below
/// `tol` or after `max_terms` orders.
pub fn ladder_series(
    lattice: &LatticeSpec,
    c6: f64,
    s_symmetric: C64,
    s_other: C64,
    tol: f64,
    max_terms: usize,
) -> LadderSeries {
    let u = interaction_matrix(lattice, c6);
    let n = lattice.sites();
    // column scaling by D, times i
    let mut step = u.clone();
    for (col, mut column) in step.column_iter_mut().enumerate() {
        let s = if col == 0 { s_symmetric } else { s_other };
        column *= I * s;
    }
    let mut term = u.clone();
    let mut total = u;
    let mut norms = vec![term[(0, 0)].norm()];
    let mut converged = false;
    for _ in 0..max_terms {
        term = &step * &term;
        let size = term.iter().map(|z| z.norm()).fold(0.0, f64::max);
        total += &term;
        norms.push(term[(0, 0)].norm());
        if size < tol {
            converged = true;
            break;
        }
        if !size.is_finite() {
            break;
        }
    }
    debug_assert_eq!(total.nrows(), n);
    LadderSeries {
        value: total[(0, 0)],
        term_norms: norms,
        converged,
    }
}

/// Closed-form resummation `(1 − i 𝒰 D)⁻¹ 𝒰`, returning `T[0,0]`.
pub fn ladder_closed_form(
    lattice: &LatticeSpec,
    c6: f64,
    s_symmetric: C64,
    s_other: C64,
) -> Result<C64> {
    let u = interaction_matrix(lattice, c6);
    let n = lattice.sites();
    let mut a = DMatrix::<C64>::identity(n, n);
    for row in 0..n {
        for col in 0..n {
            let s = if col == 0 { s_symmetric } else { s_other };
            a[(row, col)] -= I * u[(row, col)] * s;
        }
    }
    let t = a
        .lu()
        .solve(&u)
        .ok_or(Error::SingularMatrix { dim: n, omega: 0.0 })?;
    Ok(t[(0, 0)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u_at_zero_wavevector_is_plain_average() {
        let lat = LatticeSpec::new(0.7, [4, 4, 4]).unwrap();
        let kappa = interaction_profile(&lat, -1.0);
        let avg: f64 = kappa.iter().sum::<f64>() / 64.0;
        let u0 = u_fourier([0, 0, 0], &lat, -1.0);
        assert!((u0 - C64::from(avg)).norm() < 1e-15);
    }

    #[test]
    fn u_is_hermitian_in_wavevector() {
        let lat = LatticeSpec::new(0.7, [4, 3, 5]).unwrap();
        for k in [[1, 0, 0], [1, 2, 3], [-2, 1, 4]] {
            let a = u_fourier(k, &lat, -1.0);
            let b = u_fourier([-k[0], -k[1], -k[2]], &lat, -1.0);
            assert!((a - b.conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn parseval() {
        let lat = LatticeSpec::new(0.9, [4, 4, 4]).unwrap();
        let kappa = interaction_profile(&lat, -2.0);
        let direct: f64 = kappa.iter().map(|k| k * k).sum::<f64>() / 64.0;
        let spectral: f64 = lat
            .offsets()
            .iter()
            .map(|k| u_fourier(*k, &lat, -2.0).norm_sqr())
            .sum();
        assert!((direct - spectral).abs() < 1e-12 * direct);
    }

    #[test]
    fn saturated_sum_tends_to_i_over_s() {
        let lat = LatticeSpec::new(1.0, [3, 3, 3]).unwrap();
        let p = crate::model::validate(crate::model::ModelParams {
            gamma_e: 1.0,
            gamma_r: 0.15,
            gamma_c_f: 0.01,
            gamma_c_d: 0.3,
            delta_c: 0.0,
            delta_e: 0.0,
            delta_r: 0.0,
            g_sqrt_n: 1.0,
            omega_cf: 1.0,
            c6: -1e12,
            volume: 27.0,
            alpha: 1.0,
        })
        .unwrap();
        let s = C64::new(-3.0, 0.0);
        let t = tring_lattice_sum(s, &p, &lat).unwrap();
        let want = I / s * (26.0 / 27.0);
        assert!((t - want).norm() < 1e-8);
    }

    #[test]
    fn series_matches_closed_form_at_weak_coupling() {
        let lat = LatticeSpec::new(1.0, [4, 4, 4]).unwrap();
        let s0 = C64::new(-1.0, 0.3);
        let s = C64::new(-3.0, -0.5);
        let series = ladder_series(&lat, -0.1, s0, s, 1e-14, 400);
        assert!(series.converged);
        let closed = ladder_closed_form(&lat, -0.1, s0, s).unwrap();
        assert!((series.value - closed).norm() < 1e-12 * closed.norm());
    }
}
