//! Position-summed blockade T-matrix without cavity-mediated hopping,
//! `T̊₀ = (1/V) ∫ d³R κ(R) / (1 − i S κ(R))` with `κ(R) = C₆/R⁶`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::model::ValidatedParams;
use crate::quad::{integrate, QuadOptions};

const I: C64 = C64::new(0.0, 1.0);

/// Bubbles smaller than this are treated as zero.
pub const ZERO_BUBBLE_TOL: f64 = 1e-300;

fn check_inputs(s: C64, p: &ValidatedParams) -> Result<Option<C64>> {
    if p.c6() > 0.0 {
        return Err(Error::WrongSignC6(p.c6()));
    }
    if p.c6() == 0.0 {
        return Ok(Some(C64::new(0.0, 0.0)));
    }
    if !(s.norm() > ZERO_BUBBLE_TOL) {
        return Err(Error::ZeroBubble);
    }
    Ok(None)
}

/// `−(2π²/3V) √(−i|C₆|/S)` on the principal branch.
///
/// This is the all-space integral; it drops the cut-off at the sample
/// boundary, which is a relative correction of order `V_b/V`.
pub fn tring_closed_form(s: C64, p: &ValidatedParams) -> Result<C64> {
    if let Some(zero) = check_inputs(s, p)? {
        return Ok(zero);
    }
    let root = (-I * p.c6().abs() / s).sqrt();
    Ok(-(2.0 * PI * PI / (3.0 * p.volume())) * root)
}

/// Radial quadrature of the defining integral over a sphere of volume `V`.
pub fn tring_radial(s: C64, p: &ValidatedParams) -> Result<C64> {
    if let Some(zero) = check_inputs(s, p)? {
        return Ok(zero);
    }
    let c6 = p.c6();
    let r_max = (3.0 * p.volume() / (4.0 * PI)).cbrt();
    // κ/(1 − iSκ) · R² written to stay finite as R → 0
    let integrand = |r: f64| {
        let r2 = r * r;
        C64::from(r2 * c6) / (r2 * r2 * r2 - I * s * c6)
    };
    let blockade = (s.norm() * c6.abs()).powf(1.0 / 6.0);
    let opts = QuadOptions::default();
    let value = if blockade < r_max {
        integrate(integrand, 0.0, blockade, opts)?.value
            + integrate(integrand, blockade, r_max, opts)?.value
    } else {
        integrate(integrand, 0.0, r_max, opts)?.value
    };
    Ok(value * (4.0 * PI / p.volume()))
}
