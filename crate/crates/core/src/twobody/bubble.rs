//! The polariton pair bubble `S(Ω) = (1/2π) ∫ dξ G(ξ) G(Ω − ξ)`.

use crate::conventions::TWO_PI;
use crate::error::Result;
use crate::greens::{atomic_poles, gc0c0_at, gcc_atomic, symmetric_poles};
use crate::linalg::C64;
use crate::model::ValidatedParams;
use crate::quad::{integrate, integrate_upper_tail, QuadOptions};

use super::Sector;

const I: C64 = C64::new(0.0, 1.0);

pub(crate) fn propagator(z: C64, sector: Sector, p: &ValidatedParams) -> C64 {
    match sector {
        Sector::Symmetric => gc0c0_at(z, p),
        Sector::Nonsymmetric => gcc_atomic(z, p),
    }
}

/// Residue closure in the lower half plane of `ξ`:
/// `S(z) = −i Σ_j Res_j G(z − p_j)`.
///
/// Valid for any `z` with `Im z > max Im p_j`, which includes the real axis
/// and the whole upper half plane.
pub fn bubble_residue(z: C64, sector: Sector, p: &ValidatedParams) -> Result<C64> {
    // without cavity coupling the symmetric Rydberg mode is just another
    // decoupled spinwave
    let sector = if p.g_sqrt_n() == 0.0 {
        Sector::Nonsymmetric
    } else {
        sector
    };
    let sum: C64 = match sector {
        Sector::Nonsymmetric => {
            let ap = atomic_poles(p)?;
            ap.poles
                .iter()
                .zip(&ap.residues)
                .map(|(pole, res)| res * gcc_atomic(z - pole, p))
                .sum()
        }
        Sector::Symmetric => {
            let sp = symmetric_poles(p)?;
            sp.poles
                .iter()
                .zip(&sp.residues)
                .map(|(pole, res)| res * gc0c0_at(z - pole, p))
                .sum()
        }
    };
    Ok(-I * sum)
}

/// Direct numerical integration of the defining convolution.
///
/// The core interval is split at the real parts of both propagators' poles.
/// Outside `[−W, W]` the integrand is `−1/(2πξ²) + O(ξ⁻³)`; the leading term
/// is integrated analytically and the remainder by a mapped rule.
pub fn bubble_quadrature(z: C64, sector: Sector, p: &ValidatedParams) -> Result<C64> {
    let f = |x: f64| propagator(C64::from(x), sector, p) * propagator(z - x, sector, p) / TWO_PI;
    let scale = p
        .cap_gamma_c()
        .norm()
        .max(p.cap_gamma_e().norm())
        .max(p.cap_gamma_r().norm())
        .max(p.g_sqrt_n())
        .max(p.omega_cf());
    let width = 40.0 * scale.max(1.0) + 2.0 * z.re.abs();

    let mut breaks = vec![-width, width];
    let centres = resonance_centres(sector, p)?;
    for c in centres {
        for x in [c, z.re - c] {
            if x.abs() < width {
                breaks.push(x);
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let opts = QuadOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-12,
        max_intervals: 50_000,
    };
    let mut total = C64::new(0.0, 0.0);
    for pair in breaks.windows(2) {
        total += integrate(f, pair[0], pair[1], opts)?.value;
    }
    let remainder = |x: f64| f(x) + 1.0 / (TWO_PI * x * x);
    let upper = integrate_upper_tail(remainder, width, opts)?.value;
    let lower = integrate_upper_tail(|x| remainder(-x), width, opts)?.value;
    let leading = -2.0 / (TWO_PI * width);
    Ok(total + upper + lower + leading)
}

fn resonance_centres(sector: Sector, p: &ValidatedParams) -> Result<Vec<f64>> {
    Ok(match sector {
        Sector::Nonsymmetric => atomic_poles(p)?.poles.iter().map(|z| z.re).collect(),
        Sector::Symmetric => symmetric_poles(p)?.poles.iter().map(|z| z.re).collect(),
    })
}
