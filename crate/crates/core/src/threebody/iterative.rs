//! Term-by-term iteration of the Faddeev kernel on the real axis.
//!
//! `ψ⁽ⁿ⁺¹⁾(ω) = (−i/2π) B̂(−ω) ∫ dξ iG(−ξ−ω) iG(ξ) ψ⁽ⁿ⁾(ξ)`, starting from
//! `ψ⁽²⁾`. Each term is stored at a fixed set of nodes and interpolated
//! between them: Lagrange on Gauss panels over `[−L, L]`, and on each side
//! in `u ∈ (0, 1)` with `ξ = ±L/u²`. The integral for every target uses its
//! own rule, graded toward the propagator peaks, because `G(−ξ−ω)` moves
//! with `ω` and is far narrower than the tail node spacing.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::greens::{atomic_poles, gcc_atomic, symmetric_poles};
use crate::linalg::C64;
use crate::model::ValidatedParams;
use crate::quad::gauss_legendre;
use crate::registry::{FaddeevMethod, Model};

use super::{bmatrix_at, psi2_at, Psi, PsiSolution};

const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy)]
pub struct IterativeSeries {
    /// Smallest half-width of the paneled core; widened to cover the
    /// resonances of far-detuned poles.
    pub half_width: f64,
    /// Panel width near the resonances of `ψ`.
    pub panel_width: f64,
    /// Interpolation nodes per core panel.
    pub order: usize,
    /// Interpolation nodes of each mapped tail.
    pub tail_order: usize,
    /// Gauss points per integration subinterval.
    pub rule_order: usize,
    /// Terms below this fraction of `max|ψ⁽²⁾|` end the series.
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for IterativeSeries {
    fn default() -> Self {
        Self {
            half_width: 12.0,
            panel_width: 0.2,
            order: 12,
            tail_order: 60,
            rule_order: 20,
            tol: 1e-10,
            max_terms: 400,
        }
    }
}

/// One interpolation cell: Lagrange nodes in its own coordinate, which is
/// `ξ` on the core and `u` on a tail.
#[derive(Debug, Clone)]
struct Cell {
    lo: f64,
    hi: f64,
    /// `0` for core cells, otherwise the sign of `ξ` on the tail.
    tail: f64,
    first: usize,
    coords: Vec<f64>,
    bary: Vec<f64>,
}

impl Cell {
    /// Lagrange basis values at coordinate `t`.
    fn basis(&self, t: f64, out: &mut [f64]) {
        if let Some(k) = self.coords.iter().position(|&c| c == t) {
            out.iter_mut().for_each(|v| *v = 0.0);
            out[k] = 1.0;
            return;
        }
        let mut total = 0.0;
        for ((o, c), b) in out.iter_mut().zip(&self.coords).zip(&self.bary) {
            *o = b / (t - c);
            total += *o;
        }
        out.iter_mut().for_each(|v| *v /= total);
    }
}

fn barycentric_weights(coords: &[f64]) -> Vec<f64> {
    (0..coords.len())
        .map(|j| {
            let prod: f64 = (0..coords.len())
                .filter(|&k| k != j)
                .map(|k| coords[j] - coords[k])
                .product();
            1.0 / prod
        })
        .collect()
}

/// Half-width of the finely paneled zone around each feature of `ψ`.
const FEATURE_MARGIN: f64 = 4.0;
/// Panel width away from every feature.
const COARSE_PANEL: f64 = 1.0;

/// Panel edges on `[−l, l]`: `fine` wide within [`FEATURE_MARGIN`] of a
/// feature, at most [`COARSE_PANEL`] wide elsewhere.
fn core_cuts(l: f64, features: &[f64], fine: f64) -> Vec<f64> {
    let mut zones: Vec<(f64, f64)> = features
        .iter()
        .map(|f| ((f - FEATURE_MARGIN).max(-l), (f + FEATURE_MARGIN).min(l)))
        .filter(|(a, b)| a < b)
        .collect();
    zones.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for z in zones {
        match merged.last_mut() {
            Some(last) if z.0 <= last.1 => last.1 = last.1.max(z.1),
            _ => merged.push(z),
        }
    }
    let mut cuts = vec![-l];
    let fill = |cuts: &mut Vec<f64>, to: f64, width: f64| {
        let from = *cuts.last().unwrap();
        if to > from {
            let n = ((to - from) / width).ceil().max(1.0) as usize;
            cuts.extend((1..=n).map(|k| from + (to - from) * k as f64 / n as f64));
        }
    };
    for (a, b) in merged {
        fill(&mut cuts, a, COARSE_PANEL);
        fill(&mut cuts, b, fine);
    }
    fill(&mut cuts, l, COARSE_PANEL);
    cuts
}

#[derive(Debug, Clone)]
struct Discretization {
    half_width: f64,
    cells: Vec<Cell>,
    nodes: Vec<f64>,
    rule: (Vec<f64>, Vec<f64>),
    /// Real parts and half-widths of the atomic poles.
    peaks: Vec<(f64, f64)>,
}

impl Discretization {
    fn new(cfg: &IterativeSeries, model: &Model) -> Result<Self> {
        let p = model.params();
        let poles = atomic_poles(p)?.poles;
        // ψ varies fastest near −(p_j + p_k) and near the poles of G_{c₀c₀}(−ω)
        let mut features = vec![0.0];
        for a in &poles {
            for b in &poles {
                features.push(-(a.re + b.re));
            }
        }
        if let Ok(sym) = symmetric_poles(p) {
            features.extend(sym.poles.iter().map(|z| -z.re));
        }
        let reach = features
            .iter()
            .chain(poles.iter().map(|z| &z.re))
            .map(|x| x.abs())
            .fold(0.0, f64::max);
        let l = cfg.half_width.max(reach + FEATURE_MARGIN + 4.0);
        let cuts = core_cuts(l, &features, cfg.panel_width);

        let (gx, _) = gauss_legendre(cfg.order);
        let mut cells = Vec::new();
        let mut nodes = Vec::new();
        for seg in cuts.windows(2) {
            let (lo, h) = (seg[0], seg[1] - seg[0]);
            let coords: Vec<f64> = gx.iter().map(|x| lo + 0.5 * h * (x + 1.0)).collect();
            cells.push(Cell {
                lo,
                hi: lo + h,
                tail: 0.0,
                first: nodes.len(),
                bary: barycentric_weights(&coords),
                coords: coords.clone(),
            });
            nodes.extend(coords);
        }
        let (tx, _) = gauss_legendre(cfg.tail_order);
        let us: Vec<f64> = tx.iter().map(|x| 0.5 * (x + 1.0)).collect();
        let bary = barycentric_weights(&us);
        for sign in [1.0, -1.0] {
            cells.push(Cell {
                lo: 0.0,
                hi: 1.0,
                tail: sign,
                first: nodes.len(),
                coords: us.clone(),
                bary: bary.clone(),
            });
            nodes.extend(us.iter().map(|u| sign * l / (u * u)));
        }
        Ok(Self {
            half_width: l,
            cells,
            nodes,
            rule: gauss_legendre(cfg.rule_order),
            peaks: poles.iter().map(|z| (z.re, z.im.abs())).collect(),
        })
    }

    /// Weights `w_j` with `∫ K(ω, ξ) ψ(ξ) dξ ≈ Σ_j w_j ψ(ξ_j)` for the
    /// interpolant through the node values.
    fn row(&self, omega: f64, p: &ValidatedParams) -> Vec<C64> {
        let l = self.half_width;
        let pref = (-I / (2.0 * PI)) * I * I;
        // peaks of G(ξ) and of G(−ξ−ω), each with a geometric ladder of cuts
        let mut marks = Vec::new();
        for &(re, width) in &self.peaks {
            for centre in [re, -omega - re] {
                marks.push(centre);
                let mut d = 0.5 * width;
                while d < 1e7 {
                    marks.push(centre - d);
                    marks.push(centre + d);
                    d *= 2.0;
                }
            }
        }
        let mut row = vec![C64::new(0.0, 0.0); self.nodes.len()];
        let widest = self.cells.iter().map(|c| c.coords.len()).max().unwrap_or(0);
        let mut basis = vec![0.0; widest];
        let (gx, gw) = &self.rule;
        for cell in &self.cells {
            let mut cuts = vec![cell.lo, cell.hi];
            if cell.tail == 0.0 {
                cuts.extend(marks.iter().copied().filter(|&x| x > cell.lo && x < cell.hi));
            } else {
                cuts.extend((1..8).map(|k| k as f64 / 8.0));
                cuts.extend(
                    marks
                        .iter()
                        .filter(|&&x| x * cell.tail > l)
                        .map(|&x| (l / x.abs()).sqrt()),
                );
            }
            cuts.sort_by(f64::total_cmp);
            cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
            let b = &mut basis[..cell.coords.len()];
            for seg in cuts.windows(2) {
                let half = 0.5 * (seg[1] - seg[0]);
                let mid = 0.5 * (seg[1] + seg[0]);
                for (x, w) in gx.iter().zip(gw) {
                    let t = mid + half * x;
                    let (xi, jac) = if cell.tail == 0.0 {
                        (t, 1.0)
                    } else {
                        (cell.tail * l / (t * t), 2.0 * l / (t * t * t))
                    };
                    let k = pref
                        * gcc_atomic(C64::from(-xi - omega), p)
                        * gcc_atomic(C64::from(xi), p)
                        * (w * half * jac);
                    cell.basis(t, b);
                    for (j, bj) in b.iter().enumerate() {
                        row[cell.first + j] += k * *bj;
                    }
                }
            }
        }
        row
    }
}

#[derive(Debug, Clone)]
pub struct IterativeSolution {
    model: Model,
    disc: Discretization,
    /// Sum of all retained terms at the nodes.
    total: Vec<Psi>,
    pub terms: usize,
    pub last_term: f64,
}

impl IterativeSeries {
    pub fn solve_series(&self, model: &Model) -> Result<IterativeSolution> {
        let p = model.params();
        let disc = Discretization::new(self, model)?;

        let rows: Vec<(Vec<C64>, nalgebra::Matrix3<C64>, Psi)> = disc
            .nodes
            .par_iter()
            .map(|&w| {
                let bm = bmatrix_at(C64::from(-w), model)?.matrix;
                let src = psi2_at(C64::from(w), model)?;
                Ok((disc.row(w, p), bm, src))
            })
            .collect::<Result<Vec<_>>>()?;

        let source: Vec<Psi> = rows.iter().map(|r| r.2).collect();
        let scale = source
            .iter()
            .flat_map(|v| v.iter().map(|z| z.norm()))
            .fold(0.0, f64::max);
        let mut total = source.clone();
        let mut term = source;
        let mut terms = 1;
        let mut last = scale;
        if scale > 0.0 {
            loop {
                if terms > self.max_terms {
                    return Err(Error::ConvergenceFailure { residual: last / scale });
                }
                term = rows
                    .par_iter()
                    .map(|(row, bm, _)| {
                        let folded: Psi = row.iter().zip(&term).map(|(k, v)| v * *k).sum();
                        bm * folded
                    })
                    .collect();
                for (t, v) in total.iter_mut().zip(&term) {
                    *t += v;
                }
                terms += 1;
                last = term
                    .iter()
                    .flat_map(|v| v.iter().map(|z| z.norm()))
                    .fold(0.0, f64::max);
                if !last.is_finite() {
                    return Err(Error::ConvergenceFailure { residual: last });
                }
                if last < self.tol * scale {
                    break;
                }
            }
        }
        Ok(IterativeSolution {
            model: model.clone(),
            disc,
            total,
            terms,
            last_term: last / scale.max(f64::MIN_POSITIVE),
        })
    }
}

impl IterativeSolution {
    pub fn model(&self) -> &Model {
        &self.model
    }
}

impl PsiSolution for IterativeSolution {
    fn method(&self) -> &'static str {
        "iterative-series"
    }

    fn psi(&self, omega: f64) -> Result<Psi> {
        let row = self.disc.row(omega, self.model.params());
        let folded: Psi = row.iter().zip(&self.total).map(|(k, v)| v * *k).sum();
        let bm = bmatrix_at(C64::from(-omega), &self.model)?.matrix;
        Ok(bm * folded + psi2_at(C64::from(omega), &self.model)?)
    }
}

impl FaddeevMethod for IterativeSeries {
    fn name(&self) -> &'static str {
        "iterative-series"
    }

    fn solve(&self, model: &Model) -> Result<Arc<dyn PsiSolution>> {
        Ok(Arc::new(self.solve_series(model)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate, ModelParams};
    use crate::twobody::{bubble::bubble_residue, Sector};

    fn model() -> Model {
        Model::new(
            validate(ModelParams {
                gamma_e: 1.0,
                gamma_r: 0.15,
                gamma_c_f: 0.01,
                gamma_c_d: 0.3,
                delta_c: 0.0,
                delta_e: 0.0,
                delta_r: 0.0,
                g_sqrt_n: 1.2,
                omega_cf: 1.0,
                c6: -0.01,
                volume: 50.0,
                alpha: 1.0,
            })
            .unwrap(),
        )
    }

    #[test]
    fn interpolation_reproduces_cubics() {
        let coords = [0.1, 0.4, 0.5, 0.9];
        let cell = Cell {
            lo: 0.0,
            hi: 1.0,
            tail: 0.0,
            first: 0,
            bary: barycentric_weights(&coords),
            coords: coords.to_vec(),
        };
        let f = |x: f64| 1.0 - 2.0 * x + 3.0 * x * x * x;
        let mut b = [0.0; 4];
        cell.basis(0.73, &mut b);
        let got: f64 = b.iter().zip(&coords).map(|(b, c)| b * f(*c)).sum();
        assert!((got - f(0.73)).abs() < 1e-14);
    }

    #[test]
    fn cuts_are_fine_only_near_features() {
        let cuts = core_cuts(30.0, &[0.0, 20.0], 0.2);
        assert_eq!(cuts[0], -30.0);
        assert_eq!(*cuts.last().unwrap(), 30.0);
        let widths: Vec<(f64, f64)> = cuts.windows(2).map(|w| (0.5 * (w[0] + w[1]), w[1] - w[0])).collect();
        for (mid, h) in widths {
            let near = mid.abs() < 4.0 || (mid - 20.0).abs() < 4.0;
            assert!(h <= if near { 0.2 } else { 1.0 } + 1e-12, "{mid} {h}");
        }
    }

    #[test]
    fn row_applied_to_constant_is_the_bubble() {
        // (i/2π)∫G(−ξ−ω)G(ξ)dξ = i·S(−ω)
        let m = model();
        let disc = Discretization::new(&IterativeSeries::default(), &m).unwrap();
        for w in [0.0, 0.7, -3.0, 40.0, -1e3] {
            let got: C64 = disc.row(w, m.params()).iter().sum();
            let s = bubble_residue(C64::from(-w), Sector::Nonsymmetric, m.params()).unwrap();
            let want = I * s;
            assert!((got - want).norm() < 1e-9 * want.norm(), "{w}: {got} vs {want}");
        }
    }
}
