//! The connected three-photon amplitude on the `ω₁ + ω₂ + ω₃ = 0` shell.

use rayon::prelude::*;
use serde::Serialize;

use crate::conventions::SQRT_TWO_PI;
use crate::error::Result;
use crate::greens::{gac0_at, polariton_eigenvalues};
use crate::grid::{check_axis, Axis, Metadata, Overlay, Shell, SpectralGrid, Values};
use crate::linalg::C64;
use crate::registry::Model;

use super::{Psi, PsiSolution};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreePhotonAmplitude {
    pub omega1: f64,
    pub omega2: f64,
    pub value: C64,
}

/// Slot of each pair in the Faddeev vector.
const PAIR_12: usize = 0;
const PAIR_23: usize = 1;
const PAIR_13: usize = 2;

fn assemble(
    model: &Model,
    omega1: f64,
    omega2: f64,
    psi1: &Psi,
    psi2: &Psi,
    psi3: &Psi,
) -> C64 {
    let p = model.params();
    let omega3 = -omega1 - omega2;
    let feed = p.alpha() * SQRT_TWO_PI * gac0_at(C64::from(0.0), p);
    let legs = gac0_at(C64::from(omega1), p) * gac0_at(C64::from(omega2), p) * gac0_at(C64::from(omega3), p);
    feed * feed * feed * (psi3[PAIR_12] + psi2[PAIR_23] + psi1[PAIR_13]) * legs
}

/// `(α√2π G_{c₀a}[0])³ (ψ₁₂[ω₃] + ψ₂₃[ω₂] + ψ₁₃[ω₁]) Π_i G_{ac₀}[ω_i]` with
/// `ω₃ = −ω₁ − ω₂`.
pub fn three_photon_amplitude(
    omega1: f64,
    omega2: f64,
    model: &Model,
    solution: &dyn PsiSolution,
) -> Result<ThreePhotonAmplitude> {
    let psi1 = solution.psi(omega1)?;
    let psi2 = solution.psi(omega2)?;
    let psi3 = solution.psi(-omega1 - omega2)?;
    Ok(ThreePhotonAmplitude {
        omega1,
        omega2,
        value: assemble(model, omega1, omega2, &psi1, &psi2, &psi3),
    })
}

/// Complex amplitude over an `(ω₁, ω₂)` grid with the `±ε_k` family as an
/// overlay. `ψ` on the axes is evaluated once and reused.
pub fn three_photon_map(
    grid1: &Axis,
    grid2: &Axis,
    model: &Model,
    solution: &dyn PsiSolution,
) -> Result<SpectralGrid> {
    check_axis(grid1)?;
    check_axis(grid2)?;
    let psi_a: Vec<Psi> = grid1.values.iter().map(|&w| solution.psi(w)).collect::<Result<_>>()?;
    let psi_b: Vec<Psi> = grid2.values.iter().map(|&w| solution.psi(w)).collect::<Result<_>>()?;
    let rows: Vec<Vec<C64>> = grid1
        .values
        .par_iter()
        .enumerate()
        .map(|(i, &w1)| {
            grid2
                .values
                .iter()
                .enumerate()
                .map(|(j, &w2)| {
                    let psi3 = solution.psi(-w1 - w2)?;
                    Ok(assemble(model, w1, w2, &psi_a[i], &psi_b[j], &psi3))
                })
                .collect::<Result<Vec<C64>>>()
        })
        .collect::<Result<_>>()?;
    let values: Vec<C64> = rows.into_iter().flatten().collect();
    let p = model.params();
    let meta = Metadata {
        version: crate::VERSION.to_string(),
        params_hash: p.hash(),
        units: "gamma_e".into(),
        provenance: format!(
            "three-photon amplitude; bubble={}, tring={}, faddeev={}",
            model.bubble_method(),
            model.tring_method(),
            solution.method()
        ),
        alpha_power: 3,
        alpha: p.alpha(),
    };
    let mut axes = vec![grid1.clone(), grid2.clone()];
    axes[0].name = "omega1".into();
    axes[1].name = "omega2".into();
    SpectralGrid::new(axes, Values::Complex(values), Shell::PlaneDelta, meta)?.with_overlay(Overlay {
        name: "pm_eps".into(),
        rows: vec![polariton_eigenvalues(p).signed_family().to_vec()],
    })
}
