//! Container for sampled spectra and correlation maps.
//!
//! Values are the coefficients of a delta shell (see [`Shell`]); no
//! broadening is ever applied. Storage is row-major with the first axis
//! slowest.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;

/// Support of the distribution whose coefficient is stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shell {
    /// `δ(ω)` or `δ(ω)δ(ω′)`.
    PointDelta,
    /// `δ(ω − ω′)`.
    LineDelta,
    /// `δ(ω₁ + ω₂ + ω₃)`.
    PlaneDelta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: &str, values: Vec<f64>) -> Self {
        Self {
            name: name.to_string(),
            values,
        }
    }

    /// `n` evenly spaced points from `lo` to `hi` inclusive.
    pub fn linspace(name: &str, lo: f64, hi: f64, n: usize) -> Self {
        let values = if n == 1 {
            vec![lo]
        } else {
            (0..n)
                .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                .collect()
        };
        Self::new(name, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "lowercase")]
pub enum Values {
    Real(Vec<f64>),
    Complex(Vec<C64>),
}

impl Values {
    pub fn len(&self) -> usize {
        match self {
            Values::Real(v) => v.len(),
            Values::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Reference curves drawn over a map, e.g. `±ε_k`. `rows[i]` holds the
/// family members at the `i`-th point of the first axis; a single row means
/// the family does not depend on that axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Overlay {
    pub name: String,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    pub params_hash: String,
    pub units: String,
    pub provenance: String,
    /// Power of `α` carried by the values, for the stripped columns.
    pub alpha_power: i32,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    pub axes: Vec<Axis>,
    pub values: Values,
    pub shell: Shell,
    pub metadata: Metadata,
    #[serde(default)]
    pub overlays: Vec<Overlay>,
}

fn check_monotone(axis: &Axis) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::InvalidGrid(format!("axis `{}` is empty", axis.name)));
    }
    if axis.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidGrid(format!("axis `{}` has non-finite values", axis.name)));
    }
    if axis.values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid(format!(
            "axis `{}` is not strictly increasing",
            axis.name
        )));
    }
    Ok(())
}

pub fn check_axis(axis: &Axis) -> Result<()> {
    check_monotone(axis)
}

impl SpectralGrid {
    pub fn new(axes: Vec<Axis>, values: Values, shell: Shell, metadata: Metadata) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::InvalidGrid(format!("expected 1 or 2 axes, got {}", axes.len())));
        }
        for axis in &axes {
            check_monotone(axis)?;
        }
        let expected: usize = axes.iter().map(Axis::len).product();
        if values.len() != expected {
            return Err(Error::InvalidGrid(format!(
                "{} values for a grid of {} points",
                values.len(),
                expected
            )));
        }
        Ok(Self {
            axes,
            values,
            shell,
            metadata,
            overlays: Vec::new(),
        })
    }

    pub fn with_overlay(mut self, overlay: Overlay) -> Result<Self> {
        let n = self.axes[0].len();
        if overlay.rows.len() != 1 && overlay.rows.len() != n {
            return Err(Error::InvalidGrid(format!(
                "overlay `{}` has {} rows for an axis of {}",
                overlay.name,
                overlay.rows.len(),
                n
            )));
        }
        self.overlays.push(overlay);
        Ok(self)
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Axis::len).collect()
    }

    /// Magnitudes (absolute value for complex grids).
    pub fn magnitudes(&self) -> Vec<f64> {
        match &self.values {
            Values::Real(v) => v.clone(),
            Values::Complex(v) => v.iter().map(|z| z.norm()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("grids always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let grid: Self =
            serde_json::from_str(text).map_err(|e| Error::InvalidGrid(e.to_string()))?;
        Self::new(grid.axes, grid.values, grid.shell, grid.metadata).and_then(|g| {
            grid.overlays
                .into_iter()
                .try_fold(g, |acc, o| acc.with_overlay(o))
        })
    }

    fn stripped(&self, v: f64) -> f64 {
        if self.metadata.alpha == 0.0 {
            f64::NAN
        } else {
            v / self.metadata.alpha.powi(self.metadata.alpha_power)
        }
    }

    /// Long-format CSV: one row per grid point. `header` lines are written
    /// first as `# ` comments.
    pub fn to_csv(&self, header: &[String], value_name: &str, with_overlays: bool) -> String {
        let mut out = String::new();
        for line in header {
            let _ = writeln!(out, "# {line}");
        }
        let mut cols: Vec<String> = self.axes.iter().map(|a| a.name.clone()).collect();
        match &self.values {
            Values::Real(_) => {
                cols.push(value_name.to_string());
                cols.push(format!("log10_{value_name}"));
                cols.push(format!("{value_name}_alpha_stripped"));
            }
            Values::Complex(_) => {
                cols.push(format!("abs_{value_name}"));
                cols.push(format!("re_{value_name}"));
                cols.push(format!("im_{value_name}"));
                cols.push(format!("abs_{value_name}_alpha_stripped"));
            }
        }
        if with_overlays {
            for o in &self.overlays {
                let width = o.rows.first().map_or(0, Vec::len);
                for k in 0..width {
                    cols.push(format!("{}_{}", o.name, k + 1));
                }
            }
        }
        let _ = writeln!(out, "{}", cols.join(","));

        let shape = self.shape();
        let inner = if shape.len() == 2 { shape[1] } else { 1 };
        for idx in 0..self.values.len() {
            let i0 = idx / inner;
            let mut row: Vec<String> = vec![self.axes[0].values[i0].to_string()];
            if shape.len() == 2 {
                row.push(self.axes[1].values[idx % inner].to_string());
            }
            match &self.values {
                Values::Real(v) => {
                    let x = v[idx];
                    row.push(x.to_string());
                    row.push(x.log10().to_string());
                    row.push(self.stripped(x).to_string());
                }
                Values::Complex(v) => {
                    let z = v[idx];
                    row.push(z.norm().to_string());
                    row.push(z.re.to_string());
                    row.push(z.im.to_string());
                    row.push(self.stripped(z.norm()).to_string());
                }
            }
            if with_overlays {
                for o in &self.overlays {
                    let r = if o.rows.len() == 1 { &o.rows[0] } else { &o.rows[i0] };
                    row.extend(r.iter().map(f64::to_string));
                }
            }
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}
