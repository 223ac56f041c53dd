//! Few-photon observables of a Rydberg-EIT ensemble inside an optical cavity.
//!
//! The crate evaluates Keldysh-contour diagram resummations for the linear
//! cavity response, the photon-pair amplitude, the fourth-order transmission
//! spectrum and the Faddeev-resummed three-photon correlation function. All
//! frequencies are in units of the intermediate-state decay rate `γ_e`.

pub mod conventions;
pub mod error;
pub mod greens;
pub mod grid;
pub mod linalg;
pub mod model;
pub mod presets;
pub mod quad;
pub mod registry;
pub mod spectra;
pub mod threebody;
pub mod twobody;
pub mod validation;

pub use error::{Error, Result};
pub use linalg::C64;
pub use model::{validate, LatticeSpec, ModelParams, ValidatedParams};
pub use registry::{MethodChoice, Model};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
