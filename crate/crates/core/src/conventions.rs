//! Fourier and normalization conventions, kept in one place.
//!
//! Frequency-domain operators follow `x(ω) = (2π)^{-1/2} ∫ dt e^{iωt} x(t)`.
//! A time-independent steady-state mean `⟨x⟩` therefore appears in frequency
//! space as `√(2π) ⟨x⟩ δ(ω)`. Every stationary observable in this crate is
//! stored as the coefficient of its delta shell, never as a broadened peak.
//!
//! Which factors each quantity owns:
//!
//! | quantity                         | prefactor owned                    |
//! |----------------------------------|------------------------------------|
//! | `a_mean_first` (time domain)     | `(-iα)` only                       |
//! | `a_mean_third` (δ(ω) coefficient)| `(-i√(2π)α)^3` and `(-i/2π)` on T₀ |
//! | `elastic_weight`                 | `-2π α⁴`                           |
//! | `inelastic_density`              | `-α⁴`, then `2γ_c^(d)` output      |
//! | pair amplitude                   | `i α²`                             |
//! | bubble `S(ω)`                    | `1/2π` on the frequency integral   |
//! | Faddeev ψ⁽²⁾                     | `(-i/2π)²`                         |
//! | three-photon amplitude           | `(α√(2π))^3`                       |

use std::f64::consts::PI;

pub const TWO_PI: f64 = 2.0 * PI;

/// `√(2π)`, the factor between a time-domain constant and its δ(ω) weight.
pub const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_7;

/// Converts a stationary time-domain mean into its δ(ω) coefficient.
#[inline]
pub fn delta_weight(mean: num_complex::Complex64) -> num_complex::Complex64 {
    mean * SQRT_TWO_PI
}
