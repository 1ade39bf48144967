//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::exponents::{certify, sweep, CertificateRow, CertificateTable, ExponentError, ProblemParams};
use crate::pohozaev::{default_radii, energy_curve, pohozaev_sides, PohozaevError};
use crate::radial::{bubble_check, shoot, SolverError, BUBBLE_CHECK_SPACING};
use crate::rational::{parse_rational, to_f64, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_REFUSED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "LEL_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "lel", version, about = "Exponent certificates and radial checks for Δu + u^p = 0")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output file (default: stdout).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Output format (default depends on the command).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and verify the exponent certificate for one (N, p).
    Certify {
        #[arg(long)]
        dim: u32,
        /// Exponent as `a/b`, an integer or a finite decimal.
        #[arg(long, value_parser = exact_rational)]
        p: Rational,
    },
    /// Certify equally spaced midpoints of the admissible range per dimension.
    Sweep {
        /// Inclusive range `lo..hi`, or a comma list.
        #[arg(long, value_parser = dim_list)]
        dims: DimList,
        #[arg(long)]
        samples: usize,
    },
    /// Integrate the radial equation from the center.
    Shoot {
        #[arg(long)]
        dim: u32,
        #[arg(long, value_parser = exact_rational)]
        p: Rational,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        rmax: f64,
        #[arg(long)]
        tol: f64,
    },
    /// Evaluate both sides of the Pohozaev identity on a shot profile.
    Pohozaev {
        #[arg(long)]
        dim: u32,
        #[arg(long, value_parser = exact_rational)]
        p: Rational,
        #[arg(long)]
        alpha: f64,
        /// Comma-separated radii (default: 8 log-spaced radii below the stop radius).
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
        #[arg(long, default_value_t = 100.0)]
        rmax: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Residual of the sampled critical bubble.
    BubbleCheck {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        t: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimList(pub Vec<u32>);

fn exact_rational(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn dim_list(text: &str) -> Result<DimList, String> {
    let num = |s: &str| s.trim().parse::<u32>().map_err(|e| format!("bad dimension {s:?}: {e}"));
    let dims = if let Some((lo, hi)) = text.split_once("..") {
        let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
        if lo > hi {
            return Err(format!("empty range {text}"));
        }
        (lo..=hi).collect()
    } else {
        text.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if dims.is_empty() {
        return Err("no dimensions given".into());
    }
    Ok(DimList(dims))
}

/// A failure mapped to an exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<ExponentError> for Failure {
    fn from(e: ExponentError) -> Self {
        let code = match e {
            ExponentError::Refused(_) | ExponentError::EmptyZWindow { .. } => EXIT_REFUSED,
            ExponentError::Domain(_) => EXIT_USAGE,
            ExponentError::Internal(_) => EXIT_INTERNAL,
        };
        Failure::new(code, format!("{}: {e}", e.tag()))
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        let code = match e {
            SolverError::InvalidInput(_) | SolverError::OutOfRange { .. } => EXIT_USAGE,
            SolverError::BubbleDimension(_) => EXIT_REFUSED,
            SolverError::Ode(_) | SolverError::DegenerateGrid(_) => EXIT_INTERNAL,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<PohozaevError> for Failure {
    fn from(e: PohozaevError) -> Self {
        match e {
            PohozaevError::Profile(s) => s.into(),
            PohozaevError::NotSubcritical { .. } => Failure::new(EXIT_REFUSED, e.to_string()),
            PohozaevError::InvalidInput(_) => Failure::new(EXIT_USAGE, e.to_string()),
        }
    }
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::new(EXIT_INTERNAL, e.to_string())
}

fn json_text<T: Serialize + ?Sized>(value: &T) -> Result<String, Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(internal)?;
    text.push('\n');
    Ok(text)
}

fn csv_text(write: impl FnOnce(&mut Vec<u8>) -> Result<(), Failure>) -> Result<String, Failure> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    String::from_utf8(buf).map_err(internal)
}

fn table_csv(table: &CertificateTable) -> Result<String, Failure> {
    csv_text(|buf| table.write_csv(buf).map_err(internal))
}

fn worker_pool() -> Result<rayon::ThreadPool, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            Failure::new(EXIT_USAGE, format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))
        })?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(internal)
}

fn execute(cfg: &RunConfig) -> Result<String, Failure> {
    match &cfg.command {
        Command::Certify { dim, p } => {
            let params = ProblemParams::new(*dim, p.clone())?;
            let cert = certify(&params)?;
            match cfg.format.unwrap_or(Format::Json) {
                Format::Json => json_text(&cert),
                Format::Csv => {
                    let row = CertificateRow { dim: *dim, p: p.clone(), outcome: Ok(cert) };
                    table_csv(&CertificateTable { rows: vec![row] })
                }
            }
        }
        Command::Sweep { dims, samples } => {
            if let Some(bad) = dims.0.iter().find(|&&d| d < 2) {
                return Err(Failure::new(EXIT_USAGE, format!("dimensions must be >= 2, got {bad}")));
            }
            let table = worker_pool()?.install(|| sweep(&dims.0, *samples));
            if let Some(row) = table.rows.iter().find(|r| matches!(r.outcome, Err(ExponentError::Internal(_)))) {
                let err = row.outcome.as_ref().expect_err("matched an error");
                return Err(Failure::new(EXIT_INTERNAL, format!("N={} p={}: {err}", row.dim, row.p)));
            }
            match cfg.format.unwrap_or(Format::Csv) {
                Format::Csv => table_csv(&table),
                Format::Json => json_text(&table.to_json()),
            }
        }
        Command::Shoot { dim, p, alpha, rmax, tol } => {
            let prof = shoot(*dim, to_f64(p), *alpha, *rmax, *tol)?;
            match cfg.format.unwrap_or(Format::Csv) {
                Format::Csv => csv_text(|buf| prof.write_csv(buf).map_err(internal)),
                Format::Json => json_text(&ProfileJson {
                    dim: prof.dim(),
                    p: prof.p(),
                    alpha: prof.alpha(),
                    first_zero: prof.first_zero(),
                    series_radius: prof.series_radius(),
                    r: prof.grid(),
                    u: prof.u(),
                    du: prof.du(),
                }),
            }
        }
        Command::Pohozaev { dim, p, alpha, radii, rmax, tol } => {
            let prof = shoot(*dim, to_f64(p), *alpha, *rmax, *tol)?;
            let radii = radii.clone().unwrap_or_else(|| default_radii(&prof, *rmax));
            if radii.is_empty() {
                return Err(Failure::new(EXIT_USAGE, "no radii given"));
            }
            let pool = worker_pool()?;
            match cfg.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let reports = radii.iter().map(|&r| pohozaev_sides(&prof, r)).collect::<Result<Vec<_>, _>>()?;
                    json_text(&reports)
                }
                Format::Csv => {
                    let curve = pool.install(|| energy_curve(&prof, &radii))?;
                    csv_text(|buf| curve.write_csv(buf).map_err(internal))
                }
            }
        }
        Command::BubbleCheck { dim, t } => {
            let check = bubble_check(*dim, *t, BUBBLE_CHECK_SPACING)?;
            match cfg.format.unwrap_or(Format::Json) {
                Format::Json => json_text(&check),
                Format::Csv => {
                    let mut text = String::from("dim,t,max_residual,grid_spacing\n");
                    writeln!(
                        text,
                        "{},{:.16e},{:.16e},{:.16e}",
                        check.dim, check.t, check.max_residual, check.grid_spacing
                    )
                    .map_err(internal)?;
                    Ok(text)
                }
            }
        }
    }
}

#[derive(Serialize)]
struct ProfileJson<'a> {
    dim: u32,
    p: f64,
    alpha: f64,
    first_zero: Option<f64>,
    series_radius: f64,
    r: &'a [f64],
    u: &'a [f64],
    du: &'a [f64],
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code. Artifacts go to `--out` or `stdout`; diagnostics go to `stderr`.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = execute(&cfg).and_then(|text| match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| internal(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(internal),
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

/// [`run_with`] on the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
