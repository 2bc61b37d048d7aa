//! Command-line driver: config ingestion, dispatch and deterministic reports.

pub mod commands;
pub mod config;
pub mod error;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use commands::{NormSpace, Outcome, Table};
use config::RunConfig;
pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "blochop",
    version,
    about = "Norms and essential-norm estimates for Stević–Sharma type operators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON run configuration. Relative paths not found in the working
    /// directory are looked up in the config directory.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, env = "BLOCHOP_CONFIG_DIR")]
    pub config_dir: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write per-level (essnorm) or per-r (dilation-sweep) rows as CSV.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Grid depth M: the outermost ring has 1 - |z| = 2^-M.
    #[arg(long = "grid-M", global = true)]
    pub grid_m: Option<usize>,
    /// Number of limsup levels J.
    #[arg(long = "levels-J", global = true)]
    pub levels_j: Option<usize>,
    /// Fail when the lower estimate exceeds the upper estimate.
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Norm of `function` in the chosen space.
    Norm {
        #[arg(long, value_enum)]
        space: NormSpace,
    },
    /// Essential-norm estimate of the configured operator.
    Essnorm,
    /// Boundedness suprema of the E-coefficients.
    CheckBounded,
    /// Test-function certificates and the randomized decomposition check.
    VerifyPaper {
        /// Perturb one family coefficient to exercise the failure path.
        #[arg(long, hide = true)]
        tamper: bool,
    },
    /// The dilation monitoring sequence over the sample suite.
    DilationSweep,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Norm { .. } => "norm",
            Self::Essnorm => "essnorm",
            Self::CheckBounded => "check-bounded",
            Self::VerifyPaper { .. } => "verify-paper",
            Self::DilationSweep => "dilation-sweep",
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub command: &'static str,
    pub config_hash: String,
    pub results: serde_json::Value,
}

fn resolve(path: &Path, dir: Option<&Path>) -> PathBuf {
    match dir {
        Some(d) if path.is_relative() && !path.exists() => d.join(path),
        _ => path.to_path_buf(),
    }
}

/// The config after command-line overrides; this is what gets hashed.
pub fn effective_config(common: &Common) -> CliResult<RunConfig> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(&resolve(p, common.config_dir.as_deref()))?,
        None => RunConfig::default(),
    };
    if common.grid_m.is_some() {
        cfg.grid.depth = common.grid_m;
    }
    if common.levels_j.is_some() {
        cfg.grid.levels = common.levels_j;
    }
    if common.seed.is_some() {
        cfg.seed = common.seed;
    }
    if common.strict {
        cfg.strict = Some(true);
    }
    Ok(cfg)
}

/// Writes via a sibling temporary file and a rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let err = |source| CliError::Output {
        path: path.display().to_string(),
        source,
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, bytes).map_err(err)?;
    std::fs::rename(&tmp, path).map_err(err)
}

fn csv_bytes(t: &Table) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&t.header).expect("in-memory csv");
    for r in &t.rows {
        w.write_record(r).expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

/// Runs one invocation. The report is written even when `verify-paper`
/// fails its certificates; that failure is returned afterwards.
pub fn run(cli: &Cli) -> CliResult<()> {
    let cfg = effective_config(&cli.common)?;
    let Outcome { results, csv, failure } = match &cli.command {
        Command::Norm { space } => commands::norm(&cfg, *space)?,
        Command::Essnorm => commands::essnorm(&cfg)?,
        Command::CheckBounded => commands::check_bounded(&cfg)?,
        Command::VerifyPaper { tamper } => commands::verify_paper(&cfg, *tamper)?,
        Command::DilationSweep => commands::dilation_sweep(&cfg)?,
    };
    let report = Report {
        version: env!("CARGO_PKG_VERSION"),
        command: cli.command.name(),
        config_hash: cfg.hash(),
        results,
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    match &cli.common.out {
        Some(p) => write_atomic(p, text.as_bytes())?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Output {
                path: "stdout".into(),
                source,
            })?,
    }
    if let Some(p) = &cli.common.csv {
        match &csv {
            Some(t) => write_atomic(p, &csv_bytes(t))?,
            None => {
                return Err(CliError::schema(
                    "--csv",
                    format!("`{}` has no tabular output", cli.command.name()),
                ))
            }
        }
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
