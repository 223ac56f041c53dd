//! TOML run configuration.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use rydcav::grid::Axis;
use rydcav::{presets, MethodChoice, ModelParams};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    /// Frequencies already in units of `γ_e`.
    #[default]
    #[value(name = "gamma-e")]
    #[serde(rename = "gamma-e")]
    GammaE,
    /// Frequencies in MHz; rescaled by the configured `gamma_e`.
    Mhz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Evenly spaced frequency grid, inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, points: usize) -> Self {
        Self { min, max, points }
    }

    fn axis(&self, name: &str) -> Result<Axis, CliError> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(CliError::Config(format!("grid `{name}` has non-finite bounds")));
        }
        if self.points == 0 || (self.points > 1 && self.max <= self.min) {
            return Err(CliError::Config(format!(
                "grid `{name}` needs max > min and at least one point"
            )));
        }
        Ok(Axis::linspace(name, self.min, self.max, self.points))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub dir: Option<PathBuf>,
    pub format: Option<Format>,
    #[serde(default)]
    pub svg: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overlays {
    #[serde(default)]
    pub polaritons: bool,
    #[serde(default)]
    pub check_poles: bool,
}

/// The file as written by the user. Either `preset` or `[params]` supplies
/// the model; when both are present `[params]` wins.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub preset: Option<String>,
    #[serde(default)]
    pub units: Units,
    pub params: Option<ModelParams>,
    #[serde(default)]
    pub grids: BTreeMap<String, GridSpec>,
    #[serde(default)]
    pub methods: MethodChoice,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default)]
    pub overlays: Overlays,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}

/// Configuration after presets, unit conversion and flag overrides. This
/// is what gets hashed and echoed into every output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub params: ModelParams,
    pub grids: BTreeMap<String, GridSpec>,
    pub methods: MethodChoice,
    pub format: Format,
    pub svg: bool,
    pub overlay_polaritons: bool,
    pub check_poles: bool,
}

impl Resolved {
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("resolved config serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    pub fn axis(&self, name: &str) -> Result<Axis, CliError> {
        self.grids
            .get(name)
            .ok_or_else(|| CliError::Config(format!("grid `{name}` is not defined")))?
            .axis(name)
    }
}

/// Flag values that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub preset: Option<String>,
    pub units: Option<Units>,
    pub format: Option<Format>,
    pub svg: bool,
    pub overlay_polaritons: bool,
    pub check_poles: bool,
}

pub fn default_grids() -> BTreeMap<String, GridSpec> {
    BTreeMap::from([
        ("omega".to_string(), GridSpec::new(-6.0, 6.0, 200)),
        ("omega_cf".to_string(), GridSpec::new(0.0, 6.0, 200)),
        ("omega1".to_string(), GridSpec::new(-6.0, 6.0, 150)),
        ("omega2".to_string(), GridSpec::new(-6.0, 6.0, 150)),
    ])
}

pub fn resolve(
    file: RunConfig,
    flags: &Overrides,
    default_preset: &str,
) -> Result<Resolved, CliError> {
    let named = |name: &str| {
        presets::by_name(name).ok_or_else(|| {
            CliError::Config(format!(
                "unknown preset `{name}` (available: {})",
                presets::NAMES.join(", ")
            ))
        })
    };
    // flag preset, then file params, then file preset
    let params = match (&flags.preset, file.params, &file.preset) {
        (Some(name), _, _) => named(name)?,
        (None, Some(p), _) => p,
        (None, None, Some(name)) => named(name)?,
        (None, None, None) => named(default_preset)?,
    };
    let units = flags.units.unwrap_or(file.units);
    let mut grids = default_grids();
    grids.extend(file.grids);
    let (params, grids) = match units {
        Units::GammaE => (params, grids),
        Units::Mhz => {
            if !(params.gamma_e.is_finite() && params.gamma_e > 0.0) {
                return Err(CliError::Config("gamma_e must be positive to convert from MHz".into()));
            }
            let scale = 1.0 / params.gamma_e;
            let grids = grids
                .into_iter()
                .map(|(k, g)| (k, GridSpec::new(g.min * scale, g.max * scale, g.points)))
                .collect();
            (params.in_gamma_e_units(), grids)
        }
    };
    Ok(Resolved {
        params,
        grids,
        methods: file.methods,
        format: flags.format.or(file.outputs.format).unwrap_or_default(),
        svg: flags.svg || file.outputs.svg,
        overlay_polaritons: flags.overlay_polaritons || file.overlays.polaritons,
        check_poles: flags.check_poles || file.overlays.check_poles,
    })
}
