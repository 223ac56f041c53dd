//! Files written by the subcommands. Every file starts with the artifact
//! version, the config hash and the parameters in `γ_e` units.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use rydcav::grid::SpectralGrid;
use rydcav::{MethodChoice, ModelParams};

use crate::config::{Format, Resolved};
use crate::error::CliError;

/// Plain numeric table for outputs that are not sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn to_csv(&self, header: &[String]) -> String {
        let mut out = String::new();
        for line in header {
            let _ = writeln!(out, "# {line}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(f64::to_string).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Table(Table),
    Grid {
        grid: SpectralGrid,
        value_name: &'static str,
    },
    /// JSON-only documents such as the validation report.
    Document(Value),
}

/// What a subcommand produced, before it is written out.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub stem: &'static str,
    pub payload: Payload,
    /// Extra entries for the file header, e.g. the pole check.
    pub metadata: BTreeMap<String, Value>,
    pub svg: Option<String>,
}

impl Artifact {
    pub fn new(stem: &'static str, payload: Payload) -> Self {
        Self {
            stem,
            payload,
            metadata: BTreeMap::new(),
            svg: None,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    version: &'a str,
    config_hash: String,
    units: &'static str,
    params: &'a ModelParams,
    methods: &'a MethodChoice,
    metadata: &'a BTreeMap<String, Value>,
    data: Value,
}

fn header(cfg: &Resolved, metadata: &BTreeMap<String, Value>) -> Vec<String> {
    let mut lines = vec![
        format!("rydcav {}", rydcav::VERSION),
        format!("config_hash {}", cfg.hash()),
        "units gamma_e".to_string(),
        format!("params {}", serde_json::to_string(&cfg.params).expect("params serialize")),
        format!("methods {}", serde_json::to_string(&cfg.methods).expect("methods serialize")),
    ];
    for (k, v) in metadata {
        lines.push(format!("{k} {v}"));
    }
    lines
}

fn render(artifact: &Artifact, cfg: &Resolved, with_overlays: bool) -> (String, String) {
    let json = |data: Value| {
        let env = Envelope {
            version: rydcav::VERSION,
            config_hash: cfg.hash(),
            units: "gamma_e",
            params: &cfg.params,
            methods: &cfg.methods,
            metadata: &artifact.metadata,
            data,
        };
        let mut text = serde_json::to_string_pretty(&env).expect("envelope serializes");
        text.push('\n');
        text
    };
    let format = match artifact.payload {
        Payload::Document(_) => Format::Json,
        _ => cfg.format,
    };
    match (&artifact.payload, format) {
        (Payload::Table(t), Format::Csv) => ("csv".into(), t.to_csv(&header(cfg, &artifact.metadata))),
        (Payload::Grid { grid, value_name }, Format::Csv) => {
            let mut h = header(cfg, &artifact.metadata);
            h.push(format!("shell {}", serde_json::to_string(&grid.shell).expect("shell serializes")));
            h.push(format!("provenance {}", grid.metadata.provenance));
            ("csv".into(), grid.to_csv(&h, value_name, with_overlays))
        }
        (Payload::Table(t), Format::Json) => ("json".into(), json(serde_json::to_value(t).expect("table serializes"))),
        (Payload::Grid { grid, .. }, Format::Json) => {
            let mut grid = grid.clone();
            if !with_overlays {
                grid.overlays.clear();
            }
            ("json".into(), json(serde_json::to_value(&grid).expect("grid serializes")))
        }
        (Payload::Document(v), _) => ("json".into(), json(v.clone())),
    }
}

fn write(path: PathBuf, text: &str) -> Result<PathBuf, CliError> {
    std::fs::write(&path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(path)
}

/// Writes the artifact into `dir` and returns the paths written.
pub fn emit(artifact: &Artifact, cfg: &Resolved, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let (ext, text) = render(artifact, cfg, cfg.overlay_polaritons);
    let mut written = vec![write(dir.join(format!("{}.{ext}", artifact.stem)), &text)?];
    if let Some(svg) = &artifact.svg {
        // the svg carries the same header as an XML comment
        let mut doc = String::from("<!--\n");
        for line in header(cfg, &artifact.metadata) {
            let _ = writeln!(doc, "{}", line.replace("--", "- -"));
        }
        doc.push_str("-->\n");
        doc.push_str(svg);
        written.push(write(dir.join(format!("{}.svg", artifact.stem)), &doc)?);
    }
    Ok(written)
}
