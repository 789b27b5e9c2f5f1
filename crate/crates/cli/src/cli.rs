//! Argument parsing, configuration merging and output. All numerics live in
//! `adsres_core`.

use adsres_core::residue_reps::{lattice_svg, lattice_text, residue_rep, to_versioned_json, SCHEMA_VERSION};
use adsres_core::resolvent::resonance_list;
use adsres_core::scan::scan;
use adsres_core::verify::run_suite;
use adsres_core::{Resolvent, RunConfig, ScanGrid, Suite};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] adsres_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("invariant check failed: {}", .0.join(", "))]
    Invariants(Vec<String>),
}

impl CliError {
    /// 0 ok, 1 invariant failure, 2 usage/config/IO, 3 numerical nonconvergence.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invariants(_) => 1,
            CliError::Core(adsres_core::Error::NonConvergence { .. }) => 3,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "adsres", version, about = "Resonances of the d'Alembertian on AdS3")]
pub struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the resonances zeta = -il, l = 0..=lmax, with their residue representations.
    Resonances {
        #[arg(long, default_value_t = 5)]
        lmax: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Sample the continued resolvent on a rectangle of zeta values.
    Scan {
        /// re_min:re_max:re_points,im_min:im_max:im_points
        #[arg(long, allow_hyphen_values = true)]
        grid: ScanGrid,
        #[command(flatten)]
        common: Common,
    },
    /// Describe the residue representation at level l.
    Rep {
        #[arg(long)]
        l: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Run invariant suites: geometry, casimir, contour, residues, lattice, all.
    Check {
        #[arg(default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: adsres_core::Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
    Svg,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.to_possible_value().expect("no skipped variants");
        f.write_str(name.get_name())
    }
}

#[derive(Debug, clap::Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Contour height: the line Im lambda = -y.
    #[arg(long)]
    y: Option<f64>,
    #[arg(long)]
    lambda_max: Option<f64>,
    /// Relative tolerance of the lambda-line quadrature.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
}

impl Common {
    fn load(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                RunConfig::from_toml_str(&text)?
            }
            None => RunConfig::default(),
        };
        if let Some(y) = self.y {
            cfg.y = y;
            cfg.quadrature.y_max = cfg.quadrature.y_max.max(y.ceil());
        }
        if let Some(v) = self.lambda_max {
            cfg.quadrature.lambda_max = v;
        }
        if let Some(v) = self.tol {
            cfg.quadrature.tol = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(out) = &self.out {
            cfg.outputs.out = Some(out.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn format(&self, allowed: &[Format]) -> Result<Format> {
        match self.format {
            None => Ok(allowed[0]),
            Some(f) if allowed.contains(&f) => Ok(f),
            Some(f) => Err(CliError::Usage(format!(
                "format {f} is not available here (choose from {})",
                allowed.iter().map(Format::to_string).collect::<Vec<_>>().join(", ")
            ))),
        }
    }
}

fn emit(out: Option<&Path>, body: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout().write_all(body).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn json_bytes(value: &serde_json::Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialise");
    s.push('\n');
    s.into_bytes()
}

pub fn run(args: Args) -> Result<()> {
    match args.command {
        Command::Resonances { lmax, common } => {
            let cfg = common.load()?;
            common.format(&[Format::Json])?;
            let body = json!({
                "schema_version": SCHEMA_VERSION,
                "resonances": resonance_list(lmax),
            });
            emit(cfg.outputs.out.as_deref(), &json_bytes(&body))
        }
        Command::Scan { grid, common } => {
            let cfg = common.load()?;
            let format = common.format(&[Format::Csv, Format::Json])?;
            let resolvent = Resolvent::new(cfg.test_function.build()?, cfg.quadrature)?;
            let rows = scan(&resolvent, &grid, cfg.evaluation_point(), &cfg.contour(cfg.y))?;
            let body = match format {
                Format::Json => json_bytes(&json!({
                    "schema_version": SCHEMA_VERSION,
                    "grid": grid,
                    "y": cfg.y,
                    "rows": rows,
                })),
                _ => {
                    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
                    w.write_record(["re", "im", "abs", "arg", "flag", "pole"])
                        .and_then(|()| rows.iter().try_for_each(|r| w.serialize(r)))
                        .map_err(|e| CliError::Usage(format!("CSV encoding failed: {e}")))?;
                    w.into_inner().map_err(|e| CliError::Usage(format!("CSV encoding failed: {e}")))?
                }
            };
            emit(cfg.outputs.out.as_deref(), &body)
        }
        Command::Rep { l, common } => {
            let cfg = common.load()?;
            let radius = cfg.lattice.radius_for(l);
            let body = match common.format(&[Format::Json, Format::Text, Format::Svg])? {
                Format::Json => {
                    let mut s = to_versioned_json(&residue_rep(l));
                    s.push('\n');
                    s
                }
                Format::Svg => lattice_svg(l, radius),
                _ => lattice_text(l, radius),
            };
            emit(cfg.outputs.out.as_deref(), body.as_bytes())
        }
        Command::Check { suite, common } => {
            let cfg = common.load()?;
            let format = common.format(&[Format::Text, Format::Json])?;
            let report = run_suite(suite, &cfg)?;
            let body = match format {
                Format::Json => json_bytes(&serde_json::to_value(&report).expect("report serialises")),
                _ => report.to_text().into_bytes(),
            };
            emit(cfg.outputs.out.as_deref(), &body)?;
            if report.passed {
                Ok(())
            } else {
                Err(CliError::Invariants(report.failed_ids().into_iter().map(String::from).collect()))
            }
        }
    }
}
