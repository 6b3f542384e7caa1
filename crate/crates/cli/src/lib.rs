//! Command-line front end: band structures, splitting tables, closed-form
//! parameter sweeps and a self-check report.
//!
//! Every command is available as a library function returning in-memory
//! CSV or report data; [`run`] wires them to files and exit codes.

pub mod bands;
pub mod format;
pub mod split;
pub mod sweep;
pub mod validate;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use czphc_core::kp::MSource;
use czphc_core::lattice::PatternFourier;
use czphc_core::{load_config, ExperimentConfig};
use thiserror::Error;

pub use bands::{cmd_bands, BandModel, BandsOutput};
pub use split::{cmd_split, SplitRow};
pub use sweep::{cmd_sweep, SweepParam, SweepSpec};
pub use validate::{cmd_validate, Check, CheckStatus, ValidationReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(czphc_core::Error),
    #[error("{0}")]
    Compute(czphc_core::Error),
    #[error("failed checks: {}", .0.join(", "))]
    ChecksFailed(Vec<String>),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// 0 success, 1 computation or check failure, 2 usage or config error.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Config(_) => 2,
            Self::Compute(_) | Self::ChecksFailed(_) | Self::Io { .. } => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "czphc",
    version,
    about = "Rotating microcavity photonic crystal solver"
)]
pub struct Cli {
    /// JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Band structure along a k-path.
    Bands(BandsArgs),
    /// Coriolis-Zeeman splittings at T for a list of rotation rates.
    Split(SplitArgs),
    /// Closed-form splitting parameters over a lattice parameter range.
    Sweep(SweepArgs),
    /// Cross-checks between the solvers; nonzero exit on failure.
    Validate,
    /// Fourier coefficients of the phase pattern.
    DumpFourier(DumpArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MSourceArg {
    /// Square-pixel closed form.
    ClosedForm,
    /// Implied by the plane-wave band edges.
    Edges,
}

impl From<MSourceArg> for MSource {
    fn from(a: MSourceArg) -> Self {
        match a {
            MSourceArg::ClosedForm => MSource::ClosedForm,
            MSourceArg::Edges => MSource::BandEdges,
        }
    }
}

#[derive(Debug, Args)]
pub struct BandsArgs {
    /// Path such as `G:Z:T:G`; overrides the config.
    #[arg(long)]
    pub kpath: Option<String>,
    /// Samples per path segment; overrides the config.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, value_enum, default_value_t = BandModel::Opw)]
    pub model: BandModel,
    /// Source of the k·p orbital parameters.
    #[arg(long, value_enum, default_value_t = MSourceArg::Edges)]
    pub m_source: MSourceArg,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long)]
    pub emit_plotscript: bool,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// Comma-separated rotation rates, rad/s.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "0,1,10,100,1000"
    )]
    pub omega_list: Vec<f64>,
    #[arg(long, value_enum, default_value_t = MSourceArg::ClosedForm)]
    pub m_source: MSourceArg,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub param: SweepParam,
    /// First value (pitch in µm).
    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,
    /// Last value (pitch in µm).
    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Logarithmic spacing.
    #[arg(long)]
    pub log: bool,
    #[arg(long)]
    pub emit_plotscript: bool,
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    /// Index half-width; defaults to twice the basis half-width.
    #[arg(long)]
    pub halfwidth: Option<usize>,
}

/// Reads and validates a configuration file.
pub fn read_config(path: &Path) -> CliResult<ExperimentConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    load_config(&text).map_err(CliError::Config)
}

/// `m,n,value` rows for every `|m|, |n| <= halfwidth`.
pub fn cmd_dump_fourier(cfg: &ExperimentConfig, halfwidth: usize) -> String {
    let pf = PatternFourier::new(&cfg.lattice, halfwidth);
    let mut out = String::from("m,n,value\n");
    for (m, n, v) in pf.entries() {
        out.push_str(&format!("{m},{n},{}\n", format::float(v)));
    }
    out
}

pub(crate) fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes to `path`, or to stdout when no path was given.
fn emit(path: Option<&Path>, contents: &str) -> CliResult<()> {
    match path {
        Some(p) => write_file(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn require_output<'a>(cli: &'a Cli, why: &str) -> CliResult<&'a Path> {
    cli.output
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("--output is required {why}")))
}

/// Executes the parsed command line.
pub fn run(cli: &Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be >= 1".into()));
        }
        // a pool may already exist when run twice in one process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Usage("--config is required".into()))?;
    let mut cfg = read_config(path)?;
    let out = cli.output.as_deref();

    match &cli.command {
        Command::Bands(a) => {
            if a.kpath.is_some() || a.samples.is_some() {
                let spec = a.kpath.clone().unwrap_or_else(|| cfg.kpath.describe());
                let samples = a.samples.unwrap_or(cfg.kpath.samples_per_segment);
                cfg.kpath = czphc_core::kpath::KPath::parse(&spec, samples)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
            }
            let result = cmd_bands(&cfg, a.model, a.m_source.into())?;
            bands::write_outputs(&result, out, a.model, a.emit_plotscript)
        }
        Command::Split(a) => {
            let rows = cmd_split(&cfg, &a.omega_list, a.m_source.into())?;
            emit(out, &split::to_csv(&rows))
        }
        Command::Sweep(a) => {
            let spec = SweepSpec {
                param: a.param,
                from: a.from,
                to: a.to,
                points: a.points,
                log: a.log,
            };
            let plot = if a.emit_plotscript {
                Some(require_output(cli, "with --emit-plotscript")?)
            } else {
                None
            };
            let rows = cmd_sweep(&cfg.lattice, &spec)?;
            emit(out, &sweep::to_csv(&rows))?;
            match plot {
                Some(p) => write_file(&p.with_extension("gp"), &sweep::plotscript(p, a.param)),
                None => Ok(()),
            }
        }
        Command::Validate => {
            let report = cmd_validate(&cfg);
            print!("{}", report.to_text());
            if let Some(p) = out {
                write_file(p, &report.to_json())?;
            }
            let failed = report.failed_required();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::ChecksFailed(failed))
            }
        }
        Command::DumpFourier(a) => {
            let hw = a.halfwidth.unwrap_or(2 * cfg.basis_halfwidth);
            emit(out, &cmd_dump_fourier(&cfg, hw))
        }
    }
}
