use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rate `{name}` must be strictly positive (got {value})")]
    NonPositiveRate { name: &'static str, value: f64 },

    #[error("decay rate `{name}` must be non-negative (got {value})")]
    NegativeDecay { name: &'static str, value: f64 },

    #[error("parameter `{name}` is not finite")]
    NonFinite { name: &'static str },

    #[error("parameter `{name}` is out of range: {reason}")]
    OutOfRange { name: &'static str, reason: String },

    #[error("lattice volume {lattice} differs from sample volume {volume} by more than 1%")]
    InconsistentVolume { lattice: f64, volume: f64 },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("singular {dim}x{dim} propagator matrix at omega = {omega}")]
    SingularMatrix { dim: usize, omega: f64 },

    #[error("propagator poles coincide (separation {separation:e}); simple-pole residues are undefined")]
    DegeneratePoles { separation: f64 },

    #[error("propagator pole {pole} is not strictly below the real axis")]
    UndampedPole { pole: num_complex::Complex64 },

    #[error("root polishing did not converge (residual {residual:e})")]
    ConvergenceFailure { residual: f64 },

    #[error("quadrature tolerance not met (estimated error {error:e})")]
    ToleranceNotMet { error: f64 },

    #[error("closed-form blockade T-matrix requires C6 <= 0 (got {0})")]
    WrongSignC6(f64),

    #[error("pair bubble vanishes; blockade T-matrix is undefined")]
    ZeroBubble,

    #[error("hopping-corrected T-matrix denominator is resonant (|1 - i T (S0 - S)| = {0:e})")]
    ResonantDenominator(f64),

    #[error("inelastic density is not a non-negative real number: {re} + {im}i")]
    NonPhysicalDensity { re: f64, im: f64 },

    #[error("Faddeev pole system is singular (condition {condition:e}, residual {residual:e})")]
    SingularFaddeevSystem { condition: f64, residual: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("unknown {kind} method `{name}` (available: {available})")]
    UnknownMethod {
        kind: &'static str,
        name: String,
        available: String,
    },
}
