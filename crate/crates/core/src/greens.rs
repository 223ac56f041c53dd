//! Unperturbed contour Green's functions of the linear cavity-EIT system.
//!
//! In the spinwave basis the time-ordered propagator `Ĝᵀ[ω] = (ω − iM̂)⁻¹`
//! splits into a 3×3 block over `(a, b₀, c₀)` and identical 2×2 blocks over
//! `(b_k, c_k)` for every `k ≠ 0`. The anti-time-ordered and greater
//! functions follow from `Gᵀ̃ = −(Gᵀ)*` and, with `G^< = 0` in the vacuum,
//! `G^> = 2i Im Gᵀ`.

use nalgebra::{Matrix2, Matrix3, SMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{inverse2, inverse3, min_separation, poly_roots, C64};
use crate::model::ValidatedParams;

/// Basis index of the cavity mode in the symmetric block.
pub const A: usize = 0;
/// Basis index of the symmetric intermediate-state spinwave `b₀`.
pub const B0: usize = 1;
/// Basis index of the symmetric Rydberg spinwave `c₀`.
pub const C0: usize = 2;

/// Poles closer than this are treated as a double pole.
pub const DEGENERACY_TOL: f64 = 1e-10;

const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    TimeOrdered,
    AntiTimeOrdered,
    Greater,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenBlock<const N: usize> {
    pub omega: f64,
    pub branch: Branch,
    pub matrix: SMatrix<C64, N, N>,
}

/// `Ĝ₀[ω]` over `(a, b₀, c₀)`.
pub type GreenBlockSym = GreenBlock<3>;
/// `Ĝ_k[ω]` over `(b_k, c_k)`, the same for every `k ≠ 0`.
pub type GreenBlockK = GreenBlock<2>;

impl<const N: usize> GreenBlock<N> {
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    /// Elementwise `−conj`. The map is an involution, so it toggles between
    /// the time-ordered and anti-time-ordered branches.
    pub fn antitime(&self) -> Self {
        let branch = match self.branch {
            Branch::TimeOrdered => Branch::AntiTimeOrdered,
            Branch::AntiTimeOrdered => Branch::TimeOrdered,
            Branch::Greater => Branch::Greater,
        };
        Self {
            omega: self.omega,
            branch,
            matrix: self.matrix.map(|z| -z.conj()),
        }
    }

    /// Elementwise `2i Im`. `Im(−z*) = Im z`, so either ordered branch gives
    /// the same greater function.
    pub fn greater(&self) -> Self {
        Self {
            omega: self.omega,
            branch: Branch::Greater,
            matrix: self.matrix.map(|z| C64::new(0.0, 2.0 * z.im)),
        }
    }
}

pub fn green_antitime<const N: usize>(g: &GreenBlock<N>) -> GreenBlock<N> {
    g.antitime()
}

pub fn green_greater<const N: usize>(g: &GreenBlock<N>) -> GreenBlock<N> {
    g.greater()
}

/// `ω − iM̂₀` for the symmetric block at a (possibly complex) frequency.
pub(crate) fn sym_kernel(z: C64, p: &ValidatedParams) -> Matrix3<C64> {
    let g = C64::from(p.g_sqrt_n());
    let half_omega = C64::from(0.5 * p.omega_cf());
    let zero = C64::new(0.0, 0.0);
    Matrix3::new(
        z + I * p.cap_gamma_c(),
        -g,
        zero,
        -g,
        z + I * p.cap_gamma_e(),
        -half_omega,
        zero,
        -half_omega,
        z + I * p.cap_gamma_r(),
    )
}

pub(crate) fn k_kernel(z: C64, p: &ValidatedParams) -> Matrix2<C64> {
    let half_omega = C64::from(0.5 * p.omega_cf());
    Matrix2::new(
        z + I * p.cap_gamma_e(),
        -half_omega,
        -half_omega,
        z + I * p.cap_gamma_r(),
    )
}

pub(crate) fn green_sym_at(z: C64, p: &ValidatedParams) -> Result<Matrix3<C64>> {
    inverse3(&sym_kernel(z, p)).ok_or(Error::SingularMatrix { dim: 3, omega: z.re })
}

pub fn green_sym(omega: f64, p: &ValidatedParams) -> Result<GreenBlockSym> {
    Ok(GreenBlock {
        omega,
        branch: Branch::TimeOrdered,
        matrix: green_sym_at(C64::from(omega), p)?,
    })
}

pub fn green_k(omega: f64, p: &ValidatedParams) -> Result<GreenBlockK> {
    let matrix = inverse2(&k_kernel(C64::from(omega), p))
        .ok_or(Error::SingularMatrix { dim: 2, omega })?;
    Ok(GreenBlock {
        omega,
        branch: Branch::TimeOrdered,
        matrix,
    })
}

/// Closed form of the no-hopping Rydberg propagator
/// `G_cc(z) = (z + iΓ_e) / ((z + iΓ_e)(z + iΓ_r) − Ω²/4)`.
pub(crate) fn gcc_atomic(z: C64, p: &ValidatedParams) -> C64 {
    let e = z + I * p.cap_gamma_e();
    let r = z + I * p.cap_gamma_r();
    e / (e * r - 0.25 * p.omega_cf() * p.omega_cf())
}

/// `G_{c₀c₀}` of the symmetric block via the cofactor ratio, valid at
/// complex frequencies.
pub(crate) fn gc0c0_at(z: C64, p: &ValidatedParams) -> C64 {
    let c = z + I * p.cap_gamma_c();
    let e = z + I * p.cap_gamma_e();
    let r = z + I * p.cap_gamma_r();
    let g2 = p.g_sqrt_n() * p.g_sqrt_n();
    let q = 0.25 * p.omega_cf() * p.omega_cf();
    (c * e - g2) / (c * (e * r - q) - g2 * r)
}

/// `G_{a c₀}` (equal to `G_{c₀ a}`) at complex frequency.
pub(crate) fn gac0_at(z: C64, p: &ValidatedParams) -> C64 {
    let c = z + I * p.cap_gamma_c();
    let e = z + I * p.cap_gamma_e();
    let r = z + I * p.cap_gamma_r();
    let g2 = p.g_sqrt_n() * p.g_sqrt_n();
    let q = 0.25 * p.omega_cf() * p.omega_cf();
    C64::from(0.5 * p.g_sqrt_n() * p.omega_cf()) / (c * (e * r - q) - g2 * r)
}

/// Max-norm of `(ω − iM₀)G − I` for the symmetric block.
pub fn sym_residual(g: &GreenBlockSym, p: &ValidatedParams) -> f64 {
    let r = sym_kernel(C64::from(g.omega), p) * g.matrix - Matrix3::identity();
    r.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max-norm of `(ω − iM_k)G − I` for the `k ≠ 0` block.
pub fn k_residual(g: &GreenBlockK, p: &ValidatedParams) -> f64 {
    let r = k_kernel(C64::from(g.omega), p) * g.matrix - Matrix2::identity();
    r.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Simple poles of a scalar propagator together with their residues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleSet<const N: usize> {
    pub poles: [C64; N],
    pub residues: [C64; N],
}

impl<const N: usize> PoleSet<N> {
    /// `Σ_j Res_j / (z − z_j)`.
    pub fn reconstruct(&self, z: C64) -> C64 {
        self.poles
            .iter()
            .zip(&self.residues)
            .map(|(pole, res)| res / (z - pole))
            .sum()
    }
}

/// Dressed-state poles of the no-hopping `G_cc`.
pub type AtomicPoles = PoleSet<2>;

/// Poles of `G_{c₀c₀}` in the cavity-coupled symmetric block.
pub type SymmetricPoles = PoleSet<3>;

fn check_lower_half<const N: usize>(poles: &[C64; N]) -> Result<()> {
    for &pole in poles {
        if !(pole.im < 0.0) {
            return Err(Error::UndampedPole { pole });
        }
    }
    Ok(())
}

/// Roots of `(ω + iΓ_e)(ω + iΓ_r) − Ω²/4` and the residues of `G_cc` there.
///
/// Pole 1 takes the `+` branch of the square root, so for `Ω = 0` and
/// `γ_e > γ_r` it is the Rydberg-like pole `−iΓ_r` with residue 1.
pub fn atomic_poles(p: &ValidatedParams) -> Result<AtomicPoles> {
    let ge = p.cap_gamma_e();
    let gr = p.cap_gamma_r();
    let omega = p.omega_cf();
    let disc = (C64::from(omega * omega) - (ge - gr) * (ge - gr)).sqrt();
    let centre = -I * (ge + gr);
    let p1 = 0.5 * (centre + disc);
    let p2 = 0.5 * (centre - disc);
    let separation = (p1 - p2).norm();
    if separation < DEGENERACY_TOL {
        return Err(Error::DegeneratePoles { separation });
    }
    let poles = [p1, p2];
    check_lower_half(&poles)?;
    let residues = [(p1 + I * ge) / (p1 - p2), (p2 + I * ge) / (p2 - p1)];
    Ok(PoleSet { poles, residues })
}

/// Roots of `det(ω − iM̂₀)` and the residues of `G_{c₀c₀}` there.
pub fn symmetric_poles(p: &ValidatedParams) -> Result<SymmetricPoles> {
    let c = I * p.cap_gamma_c();
    let e = I * p.cap_gamma_e();
    let r = I * p.cap_gamma_r();
    let g2 = C64::from(p.g_sqrt_n() * p.g_sqrt_n());
    let q = C64::from(0.25 * p.omega_cf() * p.omega_cf());
    let coeffs = [
        c * (e * r - q) - g2 * r,
        e * r - q + c * (e + r) - g2,
        e + r + c,
        C64::new(1.0, 0.0),
    ];
    let roots = poly_roots(&coeffs)?;
    let separation = min_separation(&roots);
    if separation < DEGENERACY_TOL {
        return Err(Error::DegeneratePoles { separation });
    }
    let poles = [roots[0], roots[1], roots[2]];
    check_lower_half(&poles)?;
    let mut residues = [C64::new(0.0, 0.0); 3];
    for j in 0..3 {
        let zj = poles[j];
        let numer = (zj + c) * (zj + e) - g2;
        let denom: C64 = (0..3).filter(|&k| k != j).map(|k| zj - poles[k]).product();
        residues[j] = numer / denom;
    }
    Ok(PoleSet { poles, residues })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolaritonEnergies {
    /// Ascending.
    pub eps: [f64; 3],
}

impl PolaritonEnergies {
    /// `±ε_k`, the resonance family of the transmitted spectrum.
    pub fn signed_family(&self) -> [f64; 6] {
        let [a, b, c] = self.eps;
        [a, b, c, -a, -b, -c]
    }
}

pub fn single_excitation_hamiltonian(p: &ValidatedParams) -> Matrix3<f64> {
    let raw = p.raw();
    let g = raw.g_sqrt_n;
    let h = 0.5 * raw.omega_cf;
    Matrix3::new(
        -raw.delta_c, g, 0.0, //
        g, -raw.delta_e, h, //
        0.0, h, -raw.delta_r,
    )
}

/// Eigenvalues of the single-excitation Hamiltonian, sorted ascending.
pub fn polariton_eigenvalues(p: &ValidatedParams) -> PolaritonEnergies {
    let h = single_excitation_hamiltonian(p);
    let eig = SymmetricEigen::new(h);
    let mut eps = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]];
    eps.sort_by(f64::total_cmp);
    debug_assert!(eps
        .iter()
        .all(|&e| characteristic_residual(&h, e) < 1e-10));
    PolaritonEnergies { eps }
}

/// `|det(H − εI)|` relative to the matrix scale.
pub fn characteristic_residual(h: &Matrix3<f64>, eps: f64) -> f64 {
    let shifted = h - Matrix3::identity() * eps;
    let scale = h.amax().max(eps.abs()).max(1.0);
    shifted.determinant().abs() / scale.powi(3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate, ModelParams};

    fn base() -> ModelParams {
        ModelParams {
            gamma_e: 1.0,
            gamma_r: 0.15,
            gamma_c_f: 0.01,
            gamma_c_d: 0.3,
            delta_c: 0.0,
            delta_e: 0.0,
            delta_r: 0.0,
            g_sqrt_n: 1.2,
            omega_cf: 1.0,
            c6: -1.0,
            volume: 50.0,
            alpha: 1.0,
        }
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn decoupled_cavity_propagator() {
        let p = validate(base().with_g_sqrt_n(0.0).with_omega_cf(0.0)).unwrap();
        let g = green_sym(0.0, &p).unwrap();
        assert!(close(g.get(A, A), C64::new(0.0, -1.0 / 0.31), 1e-14));
    }

    #[test]
    fn cavity_atom_block_by_hand() {
        let p = validate(base().with_omega_cf(0.0)).unwrap();
        let g = green_sym(0.0, &p).unwrap();
        let gn2 = 1.2 * 1.2;
        let want = C64::new(0.0, 1.0) / (-0.31 - gn2);
        assert!(close(g.get(A, A), want, 1e-14));
    }

    #[test]
    fn rydberg_block_by_hand() {
        let p = validate(base().with_omega_cf(0.0)).unwrap();
        let g = green_k(0.0, &p).unwrap();
        assert!(close(g.get(1, 1), C64::new(0.0, -1.0 / 0.15), 1e-14));

        let p = validate(base().with_omega_cf(2.0)).unwrap();
        let g = green_k(0.0, &p).unwrap();
        let ie = C64::new(0.0, 1.0);
        let ir = C64::new(0.0, 0.15);
        assert!(close(g.get(1, 1), ie / (ie * ir - 1.0), 1e-14));
        assert!(close(g.get(1, 1), gcc_atomic(C64::from(0.0), &p), 1e-14));
    }

    #[test]
    fn k_block_equals_symmetric_block_without_cavity() {
        let p = validate(base().with_g_sqrt_n(0.0)).unwrap();
        for &w in &[-3.0, -0.4, 0.0, 0.7, 5.0] {
            let s = green_sym(w, &p).unwrap();
            let k = green_k(w, &p).unwrap();
            assert!(close(s.get(C0, C0), k.get(1, 1), 1e-13));
        }
    }

    #[test]
    fn symmetric_and_cofactor_forms_agree() {
        let p = validate(base()).unwrap();
        let g = green_sym(0.3, &p).unwrap();
        assert_eq!(g.get(A, C0), g.get(C0, A));
        assert!(close(g.get(C0, C0), gc0c0_at(C64::from(0.3), &p), 1e-13));
        assert!(close(g.get(A, C0), gac0_at(C64::from(0.3), &p), 1e-13));
    }

    #[test]
    fn conjugation_relations() {
        let p = validate(base()).unwrap();
        let g = green_sym(0.2, &p).unwrap();
        let gt = g.antitime();
        assert_eq!(gt.branch, Branch::AntiTimeOrdered);
        assert_eq!(gt.antitime(), g);
        let gg = g.greater();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(gt.get(i, j), -g.get(i, j).conj());
                // G^> + G^< = G^T + G^T~ with G^< = 0
                let lhs = gg.get(i, j);
                let rhs = g.get(i, j) + gt.get(i, j);
                assert!((lhs - rhs).norm() < 1e-15 * lhs.norm().max(1.0));
            }
        }
        assert_eq!(gt.greater().matrix, gg.matrix);
    }

    #[test]
    fn purely_imaginary_entry_is_fixed_by_antitime() {
        let p = validate(base().with_g_sqrt_n(0.0).with_omega_cf(0.0)).unwrap();
        let g = green_sym(0.0, &p).unwrap();
        let gaa = g.get(A, A);
        assert_eq!(g.antitime().get(A, A), gaa);
        assert!(close(g.greater().get(A, A), C64::new(0.0, -2.0 / 0.31), 1e-14));
    }

    #[test]
    fn real_entries_flip_sign_under_antitime() {
        let mut g = green_k(0.0, &validate(base()).unwrap()).unwrap();
        g.matrix = g.matrix.map(|z| C64::from(z.re));
        let t = g.antitime();
        assert_eq!(t.matrix, -g.matrix);
        assert!(g.greater().matrix.iter().all(|z| *z == C64::new(0.0, 0.0)));
    }

    #[test]
    fn undriven_atomic_poles() {
        let p = validate(base().with_omega_cf(0.0)).unwrap();
        let ap = atomic_poles(&p).unwrap();
        assert!(close(ap.poles[0], C64::new(0.0, -0.15), 1e-14));
        assert!(close(ap.poles[1], C64::new(0.0, -1.0), 1e-14));
        assert!(close(ap.residues[0], C64::new(1.0, 0.0), 1e-14));
        assert!(ap.residues[1].norm() < 1e-14);
    }

    #[test]
    fn symmetric_atomic_poles() {
        let mut raw = base().with_omega_cf(3.0);
        raw.gamma_r = 1.0;
        let p = validate(raw).unwrap();
        let ap = atomic_poles(&p).unwrap();
        assert!(close(ap.poles[0], C64::new(1.5, -1.0), 1e-14));
        assert!(close(ap.poles[1], C64::new(-1.5, -1.0), 1e-14));
        for r in ap.residues {
            assert!(close(r, C64::new(0.5, 0.0), 1e-14));
        }
    }

    #[test]
    fn coincident_poles_are_refused() {
        let mut raw = base().with_omega_cf(0.0);
        raw.gamma_r = 1.0;
        let p = validate(raw).unwrap();
        assert!(matches!(atomic_poles(&p), Err(Error::DegeneratePoles { .. })));
    }

    #[test]
    fn undamped_rydberg_pole_is_refused() {
        let mut raw = base().with_omega_cf(0.0);
        raw.gamma_r = 0.0;
        let p = validate(raw).unwrap();
        assert!(matches!(atomic_poles(&p), Err(Error::UndampedPole { .. })));
    }

    #[test]
    fn symmetric_poles_reconstruct_propagator() {
        let mut raw = base();
        raw.delta_c = -3.0;
        raw.delta_e = 0.7;
        let p = validate(raw).unwrap();
        let sp = symmetric_poles(&p).unwrap();
        let sum: C64 = sp.residues.iter().sum();
        assert!(close(sum, C64::new(1.0, 0.0), 1e-12));
        for &w in &[-4.0, -1.0, 0.0, 0.5, 3.3] {
            let z = C64::from(w);
            assert!(close(sp.reconstruct(z), gc0c0_at(z, &p), 1e-11));
        }
    }

    #[test]
    fn resonant_polaritons() {
        let p = validate(base().with_omega_cf(2.0)).unwrap();
        let e = polariton_eigenvalues(&p).eps;
        let w = (1.44f64 + 1.0).sqrt();
        assert!((e[0] + w).abs() < 1e-12 && e[1].abs() < 1e-12 && (e[2] - w).abs() < 1e-12);
    }

    #[test]
    fn decoupled_polaritons_are_minus_detunings() {
        let mut raw = base().with_g_sqrt_n(0.0).with_omega_cf(0.0);
        raw.delta_c = 1.0;
        raw.delta_e = -2.0;
        raw.delta_r = 0.5;
        let e = polariton_eigenvalues(&validate(raw).unwrap()).eps;
        assert_eq!(e, [-1.0, -0.5, 2.0]);
    }

    #[test]
    fn far_detuned_polariton_sits_near_the_detuning() {
        // Ω_cf = γ_e, Δ_e = −25γ_e: one polariton at |ε| ≈ 25
        let mut raw = base().with_omega_cf(1.0);
        raw.delta_e = -25.0;
        let e = polariton_eigenvalues(&validate(raw).unwrap()).eps;
        assert!(e.iter().any(|x| (x.abs() - 25.0).abs() < 0.2));
    }
}
