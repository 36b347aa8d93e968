//! The `wg` command line.
//!
//! [`run`] takes the argument list and two writers and returns the process
//! exit code, so the binary is a thin wrapper and tests can drive it
//! in-process.
//!
//! Exit codes: 0 success, 1 domain or usage error, 2 a certification or
//! Monte Carlo comparison failed, 3 cache corruption.

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::error::WgError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_CACHE_CORRUPT: i32 = 3;

/// Environment variable naming the cache file.
pub const CACHE_ENV: &str = "WG_CACHE";

#[derive(Debug, Parser)]
#[command(name = "wg", version, about = "Exact Weingarten calculus", allow_negative_numbers = true)]
pub struct Cli {
    /// One JSON record per result instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Cap on worker threads.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// TOML file with defaults; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact Weingarten value at one dimension, or as a rational function.
    Value(ValueArgs),
    /// Truncated 1/d expansion from path counts.
    Series(SeriesArgs),
    /// Count or list graph paths with a given number of solid edges.
    Paths(PathsArgs),
    /// Monotone factorizations of a given length.
    Factorizations(FactorizationArgs),
    /// Exact Haar integral of an entry monomial.
    Moment(MomentArgs),
    /// Certify the path-count and Weingarten bounds with exact arithmetic.
    Bounds(BoundsArgs),
    /// Monte Carlo estimate compared against the exact moment.
    Mc(McArgs),
    /// Write or check the value cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

/// A group element, given directly or by its class.
#[derive(Debug, Args, Clone)]
pub struct ElementArgs {
    /// Permutation in one-line notation, e.g. 2,1.
    #[arg(long, group = "element")]
    pub perm: Option<String>,
    /// Pair partition, e.g. "1,2|3,4".
    #[arg(long, group = "element")]
    pub pairing: Option<String>,
    /// Cycle-type or coset-type, e.g. 2+1; a canonical representative is used.
    #[arg(long, group = "element")]
    pub class: Option<String>,
}

#[derive(Debug, Args)]
pub struct ValueArgs {
    /// u, o, coe, sp or aiii.
    #[arg(long)]
    pub family: String,
    #[command(flatten)]
    pub element: ElementArgs,
    /// Dimension d (required unless --symbolic).
    #[arg(long)]
    pub dim: Option<i64>,
    /// d⁻ = a - b for aiii.
    #[arg(long)]
    pub dm: Option<i64>,
    /// Print the rational function of d instead of a value.
    #[arg(long)]
    pub symbolic: bool,
    /// Skip the dimension range check.
    #[arg(long)]
    pub force: bool,
    /// Cache file to read from and append to (default: $WG_CACHE).
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long)]
    pub family: String,
    #[command(flatten)]
    pub element: ElementArgs,
    /// Highest genus g kept.
    #[arg(long)]
    pub order: usize,
}

#[derive(Debug, Args)]
pub struct PathsArgs {
    /// u, o or aiii (coe and sp use the orthogonal graph).
    #[arg(long)]
    pub family: String,
    #[command(flatten)]
    pub element: ElementArgs,
    /// Number of solid edges.
    #[arg(long)]
    pub solid: u32,
    /// aiii only: also fix the number of dashed edges.
    #[arg(long)]
    pub dashed: Option<u32>,
    /// List the paths instead of counting them.
    #[arg(long)]
    pub list: bool,
    /// Refuse to list more than this many paths.
    #[arg(long, default_value_t = 10_000)]
    pub limit: usize,
}

#[derive(Debug, Args)]
pub struct FactorizationArgs {
    /// u or o.
    #[arg(long)]
    pub family: String,
    #[command(flatten)]
    pub element: ElementArgs,
    /// Number of transpositions.
    #[arg(long)]
    pub length: u32,
    /// Only print the number of factorizations.
    #[arg(long)]
    pub count: bool,
    #[arg(long, default_value_t = 10_000)]
    pub limit: usize,
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    /// u, o, coe or aiii.
    #[arg(long)]
    pub family: String,
    /// Whole monomial, e.g. "rows=1,2;cols=2,1".
    #[arg(long, conflicts_with_all = ["rows", "cols", "crows", "ccols"])]
    pub monomial: Option<String>,
    #[arg(long)]
    pub rows: Option<String>,
    #[arg(long)]
    pub cols: Option<String>,
    /// Row indices of the conjugated factors (u, coe).
    #[arg(long)]
    pub crows: Option<String>,
    #[arg(long)]
    pub ccols: Option<String>,
    #[arg(long)]
    pub dim: i64,
    #[arg(long)]
    pub dm: Option<i64>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// u, o or sp.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub k: usize,
    /// Largest genus for the path-count bounds.
    #[arg(long, default_value_t = 3)]
    pub gmax: usize,
    /// Also check the Weingarten ratio bounds at this dimension.
    #[arg(long)]
    pub d: Option<i64>,
}

#[derive(Debug, Args)]
pub struct McArgs {
    /// u, o, coe or aiii.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub dim: usize,
    /// aiii signature a,b.
    #[arg(long)]
    pub sig: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monomial such as "rows=1;cols=1;crows=1;ccols=1"; repeatable, all
    /// monomials share the samples.
    #[arg(long, required = true)]
    pub moment: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    /// Solve tables and append them to the cache.
    Export {
        #[arg(long)]
        path: Option<PathBuf>,
        #[arg(long)]
        family: String,
        /// Levels 1..=k are exported.
        #[arg(long)]
        k: usize,
        /// Comma-separated dimensions.
        #[arg(long)]
        dim: String,
        #[arg(long)]
        dm: Option<i64>,
    },
    /// Recompute a random share of the records.
    Verify {
        #[arg(long)]
        path: Option<PathBuf>,
        /// Share of records to recompute, in (0, 1].
        #[arg(long)]
        fraction: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Defaults read from `--config`.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub threads: Option<usize>,
    pub json: Option<bool>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub fraction: Option<f64>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::new("--config", WgError::from(e)))?;
        toml::from_str(&text).map_err(|e| {
            CliError::new(
                "--config",
                WgError::Parse {
                    what: "config file",
                    reason: e.message().to_string(),
                },
            )
        })
    }
}

/// An error tagged with the argument it concerns.
#[derive(Debug)]
pub struct CliError {
    pub arg: String,
    pub error: WgError,
}

impl CliError {
    pub fn new(arg: impl Into<String>, error: WgError) -> Self {
        CliError { arg: arg.into(), error }
    }

    pub fn exit_code(&self) -> i32 {
        match self.error {
            WgError::CacheCorruption { .. } => EXIT_CACHE_CORRUPT,
            _ => EXIT_DOMAIN,
        }
    }
}

/// Settings shared by all subcommands after merging flags and config.
#[derive(Debug, Clone)]
pub struct Settings {
    pub json: bool,
    pub config: Config,
}

/// Runs one command line (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_DOMAIN } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let config = match &cli.config {
        Some(path) => match Config::load(path) {
            Ok(c) => c,
            Err(e) => return report(e, err),
        },
        None => Config::default(),
    };
    let threads = cli.threads.or(config.threads);
    let settings = Settings {
        json: cli.json || config.json.unwrap_or(false),
        config,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return report(
                CliError::new(
                    "--threads",
                    WgError::InvalidArgument {
                        arg: "threads",
                        reason: "must be at least 1".into(),
                    },
                ),
                err,
            );
        }
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => return report(CliError::new("--threads", WgError::Io(e.to_string())), err),
    };
    // the pool needs Send captures, so output is buffered and copied after
    let (result, out_buf, err_buf) = pool.install(|| {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let r = commands::dispatch(&cli.command, &settings, &mut o, &mut e);
        (r, o, e)
    });
    let _ = out.write_all(&out_buf);
    let _ = err.write_all(&err_buf);
    let code = match result {
        Ok(code) => code,
        Err(e) => report(e, err),
    };
    let _ = out.flush();
    code
}

fn report(e: CliError, err: &mut dyn Write) -> i32 {
    let _ = writeln!(err, "error: {}: {}", e.arg, e.error);
    e.exit_code()
}
