//! A-posteriori check that the closed-form `ψ(ω)` has no singularities in
//! the lower half plane, which the pole closure assumed.
//!
//! The continuation of `ψ` is singular only where one of its ingredients
//! is:
//! - `η_j(−ω)` has poles at `ω = −ω_pj − ω_pk`;
//! - `G_{c₀c₀}(−ω)` in `ψ⁽²⁾` has poles at `ω = −z_j` for the roots `z_j` of
//!   the symmetric-block determinant;
//! - `T̊₀(−ω) ∝ S(−ω)^{-1/2}` has branch points at the zeros and poles of
//!   the bubble `S`.
//!
//! All of these are located exactly (the bubble is a rational function),
//! and `|ψ|` is additionally sampled on a lower-half-plane grid.

use serde::Serialize;

use crate::error::Result;
use crate::greens::{atomic_poles, symmetric_poles};
use crate::linalg::{poly_eval, poly_roots, C64};

use super::faddeev::FaddeevSolution;

const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanGrid {
    pub re_min: f64,
    pub re_max: f64,
    /// Most negative imaginary part sampled.
    pub im_min: f64,
    /// Least negative imaginary part sampled; must be below zero.
    pub im_max: f64,
    pub n_re: usize,
    pub n_im: usize,
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self {
            re_min: -10.0,
            re_max: 10.0,
            im_min: -5.0,
            im_max: -0.05,
            n_re: 81,
            n_im: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Singularity {
    pub location: C64,
    pub kind: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleReport {
    pub passed: bool,
    /// Singularities found in the lower half plane.
    pub offending: Vec<Singularity>,
    /// Every singularity of the continuation that was located.
    pub candidates: Vec<Singularity>,
    /// `max |ψ|` over the lower-half-plane scan grid.
    pub max_abs_psi_lower: f64,
    /// `max |ψ|` over the same real parts on the real axis.
    pub max_abs_psi_real: f64,
    pub scan: ScanGrid,
    pub note: String,
}

fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn add(a: &[C64], b: &[C64]) -> Vec<C64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or_default() + b.get(i).copied().unwrap_or_default())
        .collect()
}

fn scale(a: &[C64], s: C64) -> Vec<C64> {
    a.iter().map(|x| x * s).collect()
}

/// Numerator and denominator of the non-symmetric bubble as polynomials in
/// the total frequency (ascending coefficients).
fn bubble_rational(sol: &FaddeevSolution) -> Result<(Vec<C64>, Vec<C64>)> {
    let p = sol.model().params();
    let ap = atomic_poles(p)?;
    let ge = p.cap_gamma_e();
    let gr = p.cap_gamma_r();
    let q = C64::from(0.25 * p.omega_cf() * p.omega_cf());
    let one = C64::new(1.0, 0.0);
    let shifted_q = |pole: C64| {
        let prod = mul(&[-pole + I * ge, one], &[-pole + I * gr, one]);
        add(&prod, &[-q])
    };
    let q1 = shifted_q(ap.poles[0]);
    let q2 = shifted_q(ap.poles[1]);
    let t1 = scale(&mul(&[-ap.poles[0] + I * ge, one], &q2), ap.residues[0]);
    let t2 = scale(&mul(&[-ap.poles[1] + I * ge, one], &q1), ap.residues[1]);
    let numer = scale(&add(&t1, &t2), -I);
    Ok((numer, mul(&q1, &q2)))
}

pub fn verify_pole_assumption(sol: &FaddeevSolution, scan: &ScanGrid) -> Result<PoleReport> {
    let p = sol.model().params();
    if p.c6() == 0.0 {
        return Ok(PoleReport {
            passed: true,
            offending: Vec::new(),
            candidates: Vec::new(),
            max_abs_psi_lower: 0.0,
            max_abs_psi_real: 0.0,
            scan: *scan,
            note: "no interaction: psi vanishes identically".into(),
        });
    }

    let ap = atomic_poles(p)?;
    let sp = symmetric_poles(p)?;
    let mut candidates = Vec::new();
    for j in 0..2 {
        for k in 0..2 {
            // η_j(−ω) and, for the bubble, S(−ω) share these poles
            candidates.push(Singularity {
                location: -ap.poles[j] - ap.poles[k],
                kind: "pole of eta and of the bubble",
            });
        }
    }
    for z in sp.poles {
        candidates.push(Singularity {
            location: -z,
            kind: "pole of the symmetric-block propagator",
        });
    }
    let (numer, denom) = bubble_rational(sol)?;
    let lead = numer.iter().rposition(|c| c.norm() > 1e-14).unwrap_or(0);
    if lead > 0 {
        let dscale: f64 = denom.iter().map(|c| c.norm()).sum();
        for root in poly_roots(&numer[..=lead])? {
            let (d, _) = poly_eval(&denom, root);
            if d.norm() > 1e-10 * dscale.max(1.0) {
                candidates.push(Singularity {
                    location: -root,
                    kind: "bubble zero (branch point of the T-matrix)",
                });
            }
        }
    }
    let offending: Vec<Singularity> = candidates
        .iter()
        .filter(|s| s.location.im < 0.0)
        .cloned()
        .collect();

    let mut lower: f64 = 0.0;
    let mut real: f64 = 0.0;
    for a in 0..scan.n_re {
        let x = if scan.n_re == 1 {
            scan.re_min
        } else {
            scan.re_min + (scan.re_max - scan.re_min) * a as f64 / (scan.n_re - 1) as f64
        };
        real = real.max(max_component(&sol.psi_at(C64::from(x))?));
        for b in 0..scan.n_im {
            let y = if scan.n_im == 1 {
                scan.im_min
            } else {
                scan.im_min + (scan.im_max - scan.im_min) * b as f64 / (scan.n_im - 1) as f64
            };
            let v = sol.psi_at(C64::new(x, y))?;
            let m = max_component(&v);
            lower = if m.is_finite() { lower.max(m) } else { f64::INFINITY };
        }
    }
    let passed = offending.is_empty() && lower.is_finite();
    let note = if passed {
        "no singularity in the lower half plane".to_string()
    } else {
        format!("{} singularities in the lower half plane", offending.len())
    };
    Ok(PoleReport {
        passed,
        offending,
        candidates,
        max_abs_psi_lower: lower,
        max_abs_psi_real: real,
        scan: *scan,
        note,
    })
}

fn max_component(v: &super::Psi) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
