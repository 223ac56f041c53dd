mod commands;
mod config;
mod error;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{resolve, Format, Overrides, RunConfig, Units};
use crate::error::CliError;
use crate::output::emit;

/// Few-photon observables of a cavity-embedded Rydberg-EIT ensemble.
#[derive(Debug, Parser)]
#[command(name = "rydcav", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Tabulate the single-excitation eigenvalues against Ω_cf.
    Polaritons,
    /// First- and third-order mean field and the elastic weight.
    Linear,
    /// Interaction-induced photon-pair amplitude.
    Pair,
    /// Inelastic transmission spectrum over (Ω_cf, ω).
    Spectrum,
    /// Three-photon correlation map over (ω₁, ω₂).
    Threephoton,
    /// Run the oracle and invariant suite and write a JSON report.
    Validate,
}

#[derive(Debug, Clone, Default, Args)]
struct Opts {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, env = "RYDCAV_OUT_DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Also write a log-scale SVG heatmap (spectrum, threephoton).
    #[arg(long, global = true)]
    svg: bool,
    /// Add the ±ε_k families to tables and heatmaps.
    #[arg(long, global = true)]
    overlay_polaritons: bool,
    /// Verify the pole assumption and embed the report (threephoton).
    #[arg(long, global = true)]
    check_poles: bool,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Units of the frequencies in the configuration.
    #[arg(long, global = true, value_enum)]
    units: Option<Units>,
    /// Built-in parameter set; overrides the configuration file.
    #[arg(long, global = true)]
    preset: Option<String>,
}

fn default_preset(command: Command) -> &'static str {
    match command {
        Command::Threephoton => "three-photon-d",
        _ => "spectrum-resonant",
    }
}

fn run(command: Command, opts: &Opts) -> Result<Vec<PathBuf>, CliError> {
    let file = match &opts.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let dir = file.outputs.dir.clone();
    let flags = Overrides {
        preset: opts.preset.clone(),
        units: opts.units,
        format: opts.format,
        svg: opts.svg,
        overlay_polaritons: opts.overlay_polaritons,
        check_poles: opts.check_poles,
    };
    let cfg = resolve(file, &flags, default_preset(command))?;
    // --out or the env var, then the file, then ./out
    let out = opts.out.clone().or(dir).unwrap_or_else(|| PathBuf::from("out"));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let (artifact, failures) = pool.install(|| -> Result<_, CliError> {
        Ok(match command {
            Command::Polaritons => (commands::polaritons(&cfg)?, None),
            Command::Linear => (commands::linear(&cfg)?, None),
            Command::Pair => (commands::pair(&cfg)?, None),
            Command::Spectrum => (commands::spectrum(&cfg)?, None),
            Command::Threephoton => commands::threephoton(&cfg)?,
            Command::Validate => {
                let (a, n) = commands::validate_suite(&cfg)?;
                (a, (n > 0).then_some(n))
            }
        })
    })?;
    let written = emit(&artifact, &cfg, &out)?;
    match failures {
        Some(n) => Err(CliError::Validation(n)),
        None => Ok(written),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command, &cli.opts) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("rydcav: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
