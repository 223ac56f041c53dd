//! Named, runtime-selectable algorithm variants.
//!
//! Each quantity with more than one evaluation route has a trait and a
//! registry of implementations keyed by name. A [`Model`] bundles validated
//! parameters with the chosen bubble and `T̊` routes; the Faddeev route is
//! chosen separately because it is only needed for three-photon output.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::model::{LatticeSpec, ValidatedParams};
use crate::threebody::{IterativeSeries, PoleClosure, PsiSolution};
use crate::twobody::{bubble, hopping_corrected, lattice, tring, Sector, TMatrixScalar};

/// Evaluates the pair bubble `S` at a complex total frequency in the upper
/// half plane (real axis included).
pub trait BubbleMethod: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;
    fn eval(&self, z: C64, sector: Sector, p: &ValidatedParams) -> Result<C64>;
}

/// Maps a non-symmetric bubble value to the position-summed `T̊`.
pub trait TRingMethod: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;
    fn eval(&self, s: C64, p: &ValidatedParams) -> Result<C64>;
}

/// Solves the three-body self-consistent equation for the Faddeev vector.
pub trait FaddeevMethod: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;
    fn solve(&self, model: &Model) -> Result<Arc<dyn PsiSolution>>;
}

#[derive(Debug)]
pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<&'static str, Arc<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &'static str, method: Arc<T>) {
        self.entries.insert(name, method);
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownMethod {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ResidueBubble;

impl BubbleMethod for ResidueBubble {
    fn name(&self) -> &'static str {
        "residue"
    }

    fn eval(&self, z: C64, sector: Sector, p: &ValidatedParams) -> Result<C64> {
        bubble::bubble_residue(z, sector, p)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct QuadratureBubble;

impl BubbleMethod for QuadratureBubble {
    fn name(&self) -> &'static str {
        "quadrature"
    }

    fn eval(&self, z: C64, sector: Sector, p: &ValidatedParams) -> Result<C64> {
        bubble::bubble_quadrature(z, sector, p)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedFormTRing;

impl TRingMethod for ClosedFormTRing {
    fn name(&self) -> &'static str {
        "closed-form"
    }

    fn eval(&self, s: C64, p: &ValidatedParams) -> Result<C64> {
        tring::tring_closed_form(s, p)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RadialTRing;

impl TRingMethod for RadialTRing {
    fn name(&self) -> &'static str {
        "radial"
    }

    fn eval(&self, s: C64, p: &ValidatedParams) -> Result<C64> {
        tring::tring_radial(s, p)
    }
}

/// Position sum on an `n³` lattice filling the sample volume.
#[derive(Debug, Clone, Copy)]
pub struct LatticeTRing {
    pub sites_per_side: usize,
}

impl Default for LatticeTRing {
    fn default() -> Self {
        Self { sites_per_side: 40 }
    }
}

impl TRingMethod for LatticeTRing {
    fn name(&self) -> &'static str {
        "lattice"
    }

    fn eval(&self, s: C64, p: &ValidatedParams) -> Result<C64> {
        let lat = LatticeSpec::cubic_for_volume(p.volume(), self.sites_per_side)?;
        lattice::tring_lattice_sum(s, p, &lat)
    }
}

pub fn bubble_methods() -> Registry<dyn BubbleMethod> {
    let mut r: Registry<dyn BubbleMethod> = Registry::new("bubble");
    r.register("residue", Arc::new(ResidueBubble));
    r.register("quadrature", Arc::new(QuadratureBubble));
    r
}

pub fn tring_methods() -> Registry<dyn TRingMethod> {
    let mut r: Registry<dyn TRingMethod> = Registry::new("tring");
    r.register("closed-form", Arc::new(ClosedFormTRing));
    r.register("radial", Arc::new(RadialTRing));
    r.register("lattice", Arc::new(LatticeTRing::default()));
    r
}

pub fn faddeev_methods() -> Registry<dyn FaddeevMethod> {
    let mut r: Registry<dyn FaddeevMethod> = Registry::new("faddeev");
    r.register("pole-closure", Arc::new(PoleClosure));
    r.register("iterative-series", Arc::new(IterativeSeries::default()));
    r
}

fn default_bubble() -> String {
    "residue".into()
}

fn default_tring() -> String {
    "closed-form".into()
}

fn default_faddeev() -> String {
    "pole-closure".into()
}

/// Method names as they appear in configuration files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodChoice {
    #[serde(default = "default_bubble")]
    pub bubble: String,
    #[serde(default = "default_tring")]
    pub tring: String,
    #[serde(default = "default_faddeev")]
    pub faddeev: String,
}

impl Default for MethodChoice {
    fn default() -> Self {
        Self {
            bubble: default_bubble(),
            tring: default_tring(),
            faddeev: default_faddeev(),
        }
    }
}

impl MethodChoice {
    pub fn faddeev_method(&self) -> Result<Arc<dyn FaddeevMethod>> {
        faddeev_methods().get(&self.faddeev)
    }
}

/// Validated parameters plus the selected two-body routes.
#[derive(Debug, Clone)]
pub struct Model {
    params: ValidatedParams,
    bubble: Arc<dyn BubbleMethod>,
    tring: Arc<dyn TRingMethod>,
}

impl Model {
    /// Residue bubble and closed-form `T̊`.
    pub fn new(params: ValidatedParams) -> Self {
        Self {
            params,
            bubble: Arc::new(ResidueBubble),
            tring: Arc::new(ClosedFormTRing),
        }
    }

    pub fn from_choice(params: ValidatedParams, choice: &MethodChoice) -> Result<Self> {
        Ok(Self {
            params,
            bubble: bubble_methods().get(&choice.bubble)?,
            tring: tring_methods().get(&choice.tring)?,
        })
    }

    pub fn with_methods(
        params: ValidatedParams,
        bubble: Arc<dyn BubbleMethod>,
        tring: Arc<dyn TRingMethod>,
    ) -> Self {
        Self { params, bubble, tring }
    }

    /// Same routes, different parameters.
    pub fn with_params(&self, params: ValidatedParams) -> Self {
        Self {
            params,
            bubble: Arc::clone(&self.bubble),
            tring: Arc::clone(&self.tring),
        }
    }

    pub fn params(&self) -> &ValidatedParams {
        &self.params
    }

    pub fn bubble_method(&self) -> &str {
        self.bubble.name()
    }

    pub fn tring_method(&self) -> &str {
        self.tring.name()
    }

    pub fn bubble(&self, z: C64, sector: Sector) -> Result<C64> {
        self.bubble.eval(z, sector, &self.params)
    }

    /// `T̊₀` at a complex total frequency.
    pub fn tring0_at(&self, z: C64) -> Result<C64> {
        let s = self.bubble(z, Sector::Nonsymmetric)?;
        self.tring.eval(s, &self.params)
    }

    pub fn tring0(&self, omega_total: f64) -> Result<C64> {
        self.tring0_at(C64::from(omega_total))
    }

    pub fn t_matrix(&self) -> Result<TMatrixScalar> {
        let zero = C64::new(0.0, 0.0);
        let s = self.bubble(zero, Sector::Nonsymmetric)?;
        let s0 = if self.params.g_sqrt_n() == 0.0 {
            s
        } else {
            self.bubble(zero, Sector::Symmetric)?
        };
        let tring0 = self.tring.eval(s, &self.params)?;
        Ok(TMatrixScalar {
            tring0,
            t0: hopping_corrected(tring0, s0, s)?,
        })
    }
}
