use rayon::prelude::*;
use serde_json::Value;

use rydcav::greens::polariton_eigenvalues;
use rydcav::spectra::{elastic_weight, elastic_weight_factorized, linear_response, spectrum_sweep};
use rydcav::threebody::{solve_pole_values, three_photon_map, verify_pole_assumption, ScanGrid};
use rydcav::twobody::pair_amplitude_with;
use rydcav::validation::run_validation;
use rydcav::{validate, Model, ModelParams, ValidatedParams};

use crate::config::Resolved;
use crate::error::{CliError, Context};
use crate::output::{Artifact, Payload, Table};
use crate::svg;

fn checked(params: ModelParams) -> Result<ValidatedParams, CliError> {
    validate(params).map_err(|e| CliError::Config(format!("invalid parameters: {e}")))
}

fn model(cfg: &Resolved) -> Result<Model, CliError> {
    let p = checked(cfg.params)?;
    Model::from_choice(p, &cfg.methods).map_err(|e| CliError::Config(e.to_string()))
}

/// `ε₁ ≤ ε₂ ≤ ε₃` against `Ω_cf`.
pub fn polaritons(cfg: &Resolved) -> Result<Artifact, CliError> {
    let axis = cfg.axis("omega_cf")?;
    let mut table = Table::new(&["omega_cf", "eps_1", "eps_2", "eps_3"]);
    for &ocf in &axis.values {
        let p = checked(cfg.params.with_omega_cf(ocf))?;
        let e = polariton_eigenvalues(&p).eps;
        table.rows.push(vec![ocf, e[0], e[1], e[2]]);
    }
    Ok(Artifact::new("polaritons", Payload::Table(table)))
}

/// First- and third-order mean field and the elastic weight by both routes.
pub fn linear(cfg: &Resolved) -> Result<Artifact, CliError> {
    let m = model(cfg)?;
    let r = linear_response(&m).context("linear response")?;
    let direct = elastic_weight(&m).context("elastic weight")?;
    let fact = elastic_weight_factorized(&r);
    let mut table = Table::new(&[
        "re_a1",
        "im_a1",
        "re_a3",
        "im_a3",
        "elastic_weight",
        "elastic_weight_factorized",
    ]);
    table
        .rows
        .push(vec![r.a1.re, r.a1.im, r.a3.re, r.a3.im, direct.value, fact.value]);
    Ok(Artifact::new("linear", Payload::Table(table)))
}

/// Interaction-induced pair amplitude on the `ω₁ + ω₂ = 0` shell.
pub fn pair(cfg: &Resolved) -> Result<Artifact, CliError> {
    let m = model(cfg)?;
    let axis = cfg.axis("omega")?;
    let t = m.t_matrix().context("two-body T-matrix")?.t0;
    let rows = axis
        .values
        .par_iter()
        .map(|&w| {
            let a = pair_amplitude_with(w, m.params(), t)?;
            Ok(vec![w, a.value.re, a.value.im, a.value.norm()])
        })
        .collect::<rydcav::Result<Vec<_>>>()
        .context("pair amplitude")?;
    let mut table = Table::new(&["omega", "re", "im", "abs"]);
    table.rows = rows;
    Ok(Artifact::new("pair", Payload::Table(table)))
}

pub fn spectrum(cfg: &Resolved) -> Result<Artifact, CliError> {
    let m = model(cfg)?;
    let grid = spectrum_sweep(&cfg.axis("omega")?, &cfg.axis("omega_cf")?, &m)
        .context("inelastic spectrum")?;
    let mut artifact = Artifact::new(
        "spectrum",
        Payload::Grid {
            grid: grid.clone(),
            value_name: "density",
        },
    );
    if cfg.svg {
        artifact.svg = Some(svg::heatmap(&grid, "inelastic density (log scale)", cfg.overlay_polaritons));
    }
    Ok(artifact)
}

/// Three-photon map. A failed pole check still writes the map and is
/// reported as a validation failure.
pub fn threephoton(cfg: &Resolved) -> Result<(Artifact, Option<usize>), CliError> {
    let m = model(cfg)?;
    let method = cfg
        .methods
        .faddeev_method()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let solution = method.solve(&m).context("Faddeev solution")?;
    let grid = three_photon_map(&cfg.axis("omega1")?, &cfg.axis("omega2")?, &m, solution.as_ref())
        .context("three-photon map")?;
    let mut artifact = Artifact::new(
        "threephoton",
        Payload::Grid {
            grid: grid.clone(),
            value_name: "value",
        },
    );
    let mut failed = None;
    if cfg.check_poles {
        let poles = solve_pole_values(&m).context("pole values")?;
        let report = verify_pole_assumption(&poles, &ScanGrid::default()).context("pole check")?;
        if !report.passed {
            failed = Some(report.offending.len().max(1));
        }
        artifact.metadata.insert(
            "pole_check".into(),
            serde_json::to_value(&report).expect("pole report serializes"),
        );
    }
    if cfg.svg {
        artifact.svg = Some(svg::heatmap(&grid, "|three-photon amplitude| (log scale)", cfg.overlay_polaritons));
    }
    Ok((artifact, failed))
}

pub fn validate_suite(cfg: &Resolved) -> Result<(Artifact, usize), CliError> {
    let p = checked(cfg.params)?;
    let report = run_validation(p.raw()).context("validation suite")?;
    for c in &report.checks {
        eprintln!(
            "{} {}: metric {:e} (tolerance {:e}) {}",
            if c.passed { "pass" } else { "FAIL" },
            c.name,
            c.metric,
            c.tolerance,
            c.detail
        );
    }
    let failures = report.failures().count();
    let doc: Value = serde_json::to_value(&report).expect("report serializes");
    Ok((Artifact::new("validate", Payload::Document(doc)), failures))
}
