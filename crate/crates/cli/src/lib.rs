//! Command-line front end of `radspec`.
//!
//! [`run`] parses the arguments, sets the working precision, dispatches one
//! subcommand and maps the outcome to a process exit code:
//! 0 success, 1 numerical failure, 2 usage error, 3 golden mismatch.

pub mod golden;
pub mod output;
pub mod parse;
pub mod tables;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use radspec_core::model::{dimensionless_from_physical, PhysicalParams};
use radspec_core::precision::{set_working_precision, DEFAULT_PRECISION};
use radspec_core::rpm::{Window, DEFAULT_GRID_POINTS};
use radspec_core::spectra::{alpha_grid, sweep, truncation_overlay, SpectralCurveSet};
use radspec_core::truncation::{count_nodes, truncation_solutions};
use radspec_core::{BigReal, Error};
use serde_json::{json, Value};

use golden::{compare, GoldenTable};
use output::{Cell, Table};
use parse::parse_real;
use tables::{curves_table, figure_problems, points_table, reproduce_figure, reproduce_table, RpmTableSpec};

pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "radspec",
    version,
    about = "Spectra of the Coulomb-plus-oscillator radial problem"
)]
pub struct Cli {
    /// Working precision in bits.
    #[arg(
        long,
        global = true,
        env = "RADSPEC_PRECISION",
        default_value_t = DEFAULT_PRECISION,
        value_parser = clap::value_parser!(u32).range(64..)
    )]
    pub precision: u32,

    /// Output format; `map` and `truncate` default to json, the rest to csv.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Output file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduce physical parameters to (gamma, s, alpha).
    Map(MapArgs),
    /// Closed-form polynomial solutions of degree n.
    Truncate(TruncateArgs),
    /// Rayleigh-Ritz levels by basis size.
    Ritz(RitzArgs),
    /// Riccati-Pade levels by Hankel dimension.
    Rpm(RpmArgs),
    /// Spectral curves over an alpha grid.
    Sweep(SweepArgs),
    /// Rebuild a published table or figure.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug)]
pub struct MapArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub l: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub phi1: String,
    #[arg(long)]
    pub m: String,
    #[arg(long = "M", allow_hyphen_values = true)]
    pub big_m: String,
    #[arg(long = "B0", allow_hyphen_values = true)]
    pub b0: String,
    #[arg(long)]
    pub omega: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub k: String,
}

#[derive(Args, Debug)]
pub struct TruncateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub s: String,
}

#[derive(Args, Debug)]
pub struct RitzArgs {
    #[arg(long)]
    pub s: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long)]
    pub nmax: usize,
    #[arg(long, default_value_t = 2)]
    pub nmin: usize,
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
}

#[derive(Args, Debug)]
pub struct RpmArgs {
    #[arg(long)]
    pub s: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long)]
    pub dmax: usize,
    /// First dimension printed; defaults to `dmax - 7` (at least 2).
    #[arg(long)]
    pub dmin: Option<usize>,
    /// Hankel offset.
    #[arg(long, default_value_t = 0)]
    pub d: usize,
    #[arg(long, allow_hyphen_values = true, requires = "wmax")]
    pub wmin: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "wmin")]
    pub wmax: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    pub grid: usize,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub s: String,
    #[arg(long, allow_hyphen_values = true)]
    pub amin: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub amax: f64,
    #[arg(long)]
    pub points: usize,
    #[arg(long)]
    pub levels: usize,
    /// Overlay truncation points of degree up to this value.
    #[arg(long)]
    pub overlay_nmax: Option<usize>,
    /// File for the truncation points; required with `--overlay-nmax`
    /// unless `--output` is given (then `<output stem>.points.csv`).
    #[arg(long)]
    pub points_output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Table1,
    Table2,
    Table3,
    Table4,
    Figure1,
    All,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub target: Target,
    /// Compare against the embedded published values.
    #[arg(long)]
    pub check: bool,
    /// Where `figure1` writes its truncation points.
    #[arg(long)]
    pub points_output: Option<PathBuf>,
}

/// Outcome of a failed run.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numerical(Error),
    Mismatch(Vec<String>),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Numerical(_) | Failure::Io(_) => EXIT_NUMERICAL,
            Failure::Mismatch(_) => EXIT_MISMATCH,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Numerical(e) => write!(f, "numerical failure: {e}"),
            Failure::Mismatch(lines) => {
                write!(f, "golden check failed ({} cells):", lines.len())?;
                for l in lines {
                    write!(f, "\n  {l}")?;
                }
                Ok(())
            }
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(m) | Error::InvalidParameter(m) => Failure::Usage(m),
            other => Failure::Numerical(other),
        }
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

/// Parses `argv` (program name first), runs, and returns the exit code.
/// Diagnostics go to standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("radspec: {f}");
            f.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    set_working_precision(cli.precision)?;
    let out = Sink {
        path: cli.output.as_deref(),
    };
    match &cli.command {
        Command::Map(a) => cmd_map(a, cli.format.unwrap_or(Format::Json), &out),
        Command::Truncate(a) => cmd_truncate(a, cli.format.unwrap_or(Format::Json), &out),
        Command::Ritz(a) => {
            let table = tables::ritz_table(&real(&a.s)?, &real(&a.alpha)?, a.nmin, a.nmax, a.levels)?;
            out.table(&table, cli.format.unwrap_or(Format::Csv))
        }
        Command::Rpm(a) => cmd_rpm(a, cli.format.unwrap_or(Format::Csv), &out),
        Command::Sweep(a) => cmd_sweep(a, cli.format.unwrap_or(Format::Csv), &out),
        Command::Reproduce(a) => cmd_reproduce(a, cli.format.unwrap_or(Format::Csv), &out),
    }
}

fn real(text: &str) -> Outcome<BigReal> {
    parse_real(text).map_err(|e| Failure::Usage(format!("`{text}`: {e}")))
}

fn number(v: &BigReal) -> Value {
    serde_json::Number::from_f64(v.to_f64()).map_or(Value::Null, Value::Number)
}

/// Standard output or a file.
struct Sink<'a> {
    path: Option<&'a Path>,
}

impl Sink<'_> {
    fn bytes(&self, bytes: &[u8]) -> Outcome {
        write_to(self.path, bytes)
    }

    fn table(&self, table: &Table, format: Format) -> Outcome {
        self.bytes(&render(table, format)?)
    }

    fn json(&self, value: &Value) -> Outcome {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
        text.push('\n');
        self.bytes(text.as_bytes())
    }
}

fn write_to(path: Option<&Path>, bytes: &[u8]) -> Outcome {
    let result = match path {
        Some(p) => fs::write(p, bytes),
        None => std::io::stdout().lock().write_all(bytes),
    };
    result.map_err(|e| {
        Failure::Io(format!(
            "{}: {e}",
            path.map_or("stdout".into(), |p| p.display().to_string())
        ))
    })
}

fn render(table: &Table, format: Format) -> Outcome<Vec<u8>> {
    Ok(match format {
        Format::Csv => table.to_csv()?,
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&table.to_json()?).map_err(|e| Failure::Io(e.to_string()))?;
            text.push('\n');
            text.into_bytes()
        }
    })
}

fn cmd_map(a: &MapArgs, format: Format, out: &Sink) -> Outcome {
    let params = PhysicalParams {
        m: real(&a.m)?,
        omega: real(&a.omega)?,
        big_m: real(&a.big_m)?,
        b0: real(&a.b0)?,
        k: real(&a.k)?,
        l: a.l,
        phi1: real(&a.phi1)?,
    };
    let p = dimensionless_from_physical(&params)?;
    match format {
        Format::Json => out.json(&json!({
            "gamma": number(&p.gamma),
            "s": number(&p.s),
            "alpha": number(&p.alpha),
        })),
        Format::Csv => {
            let mut t = Table::new(vec!["gamma".into(), "s".into(), "alpha".into()]);
            t.push(vec![Cell::Real(p.gamma), Cell::Real(p.s), Cell::Real(p.alpha)]);
            out.table(&t, Format::Csv)
        }
    }
}

fn cmd_truncate(a: &TruncateArgs, format: Format, out: &Sink) -> Outcome {
    let sols = truncation_solutions(a.n, &real(&a.s)?)?;
    match format {
        Format::Json => {
            let items = sols
                .iter()
                .map(|sol| {
                    Ok(json!({
                        "n": sol.n,
                        "i": sol.i,
                        "s": number(&sol.s),
                        "alpha": number(&sol.alpha_root),
                        "W": number(&sol.w),
                        "nodes": count_nodes(sol)?,
                        "coeffs": sol.coeffs.iter().map(number).collect::<Vec<_>>(),
                    }))
                })
                .collect::<Outcome<Vec<Value>>>()?;
            out.json(&Value::Array(items))
        }
        Format::Csv => {
            let mut t = Table::new(["n", "i", "alpha", "W"].iter().map(|h| h.to_string()).collect());
            for sol in &sols {
                t.push(vec![
                    Cell::from(sol.n),
                    Cell::from(sol.i),
                    Cell::Real(sol.alpha_root.clone()),
                    Cell::Real(sol.w.clone()),
                ]);
            }
            out.table(&t, Format::Csv)
        }
    }
}

fn cmd_rpm(a: &RpmArgs, format: Format, out: &Sink) -> Outcome {
    let window = match (&a.wmin, &a.wmax) {
        (Some(lo), Some(hi)) => Some(Window::new(real(lo)?, real(hi)?)?),
        _ => None,
    };
    let spec = RpmTableSpec {
        s: real(&a.s)?,
        alpha: real(&a.alpha)?,
        dmin: a.dmin.unwrap_or(a.dmax.saturating_sub(7).max(2)),
        dmax: a.dmax,
        d: a.d,
        levels: a.levels,
        window,
        grid_points: a.grid,
    };
    out.table(&tables::rpm_table(&spec)?, format)
}

fn points_path(explicit: Option<&Path>, curves: Option<&Path>) -> Outcome<PathBuf> {
    if let Some(p) = explicit {
        return Ok(p.to_path_buf());
    }
    let curves = curves.ok_or_else(|| {
        Failure::Usage("truncation points need --points-output when curves go to standard output".into())
    })?;
    let stem = curves
        .file_stem()
        .map_or("curves".into(), |s| s.to_string_lossy().into_owned());
    Ok(curves.with_file_name(format!("{stem}.points.csv")))
}

fn emit_sweep(set: &SpectralCurveSet, format: Format, out: &Sink, points: Option<&Path>) -> Outcome {
    let curves = curves_table(set);
    let overlay = points_table(set);
    match format {
        Format::Json => {
            let value = json!({
                "curves": curves.to_json()?,
                "points": overlay.to_json()?,
            });
            out.json(&value)
        }
        Format::Csv => {
            out.table(&curves, Format::Csv)?;
            if set.truncation_points.is_empty() {
                return Ok(());
            }
            let path = points_path(points, out.path)?;
            write_to(Some(&path), &overlay.to_csv()?)
        }
    }
}

fn cmd_sweep(a: &SweepArgs, format: Format, out: &Sink) -> Outcome {
    let grid = alpha_grid(a.amin, a.amax, a.points)?;
    let mut set = sweep(&real(&a.s)?, &grid, a.levels)?;
    if let Some(n_max) = a.overlay_nmax {
        truncation_overlay(&mut set, n_max)?;
    }
    emit_sweep(&set, format, out, a.points_output.as_deref())
}

fn check_table(which: GoldenTable, table: &Table) -> Outcome<Vec<String>> {
    Ok(compare(table, &which.cells()?)?
        .into_iter()
        .map(|m| {
            format!(
                "{} row {} W_{}: printed {}, computed {}",
                which.name(),
                m.row,
                m.level,
                m.expected,
                m.found.as_deref().unwrap_or("nothing")
            )
        })
        .collect())
}

fn cmd_reproduce(a: &ReproduceArgs, format: Format, out: &Sink) -> Outcome {
    let tables: &[GoldenTable] = match a.target {
        Target::Table1 => &[GoldenTable::Table1],
        Target::Table2 => &[GoldenTable::Table2],
        Target::Table3 => &[GoldenTable::Table3],
        Target::Table4 => &[GoldenTable::Table4],
        Target::Figure1 => &[],
        Target::All => &GoldenTable::ALL,
    };
    let with_figure = matches!(a.target, Target::Figure1 | Target::All);
    // `all` writes one file per target into the --output directory, or
    // labelled sections to standard output.
    let split = a.target == Target::All;
    if let (true, Some(dir)) = (split, out.path) {
        fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    }
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let mut problems = Vec::new();
    for &which in tables {
        let table = reproduce_table(which)?;
        let bytes = render(&table, format)?;
        if split {
            match out.path {
                Some(dir) => write_to(Some(&dir.join(format!("{}.{ext}", which.name()))), &bytes)?,
                None => write_to(
                    None,
                    &[format!("# {}\n", which.name()).as_bytes(), &bytes[..], b"\n"].concat(),
                )?,
            }
        } else {
            out.bytes(&bytes)?;
        }
        if a.check {
            problems.extend(check_table(which, &table)?);
        }
    }
    if with_figure {
        let set = reproduce_figure()?;
        if split {
            let dir = out.path;
            let curves = dir.map(|d| d.join(format!("figure1.{ext}")));
            let points = a
                .points_output
                .clone()
                .or_else(|| dir.map(|d| d.join("figure1.points.csv")));
            if curves.is_none() {
                write_to(None, b"# figure1\n")?;
            }
            let sink = Sink {
                path: curves.as_deref(),
            };
            emit_sweep(&set, format, &sink, points.as_deref())?;
        } else {
            emit_sweep(&set, format, out, a.points_output.as_deref())?;
        }
        if a.check {
            problems.extend(figure_problems(&set).into_iter().map(|p| format!("figure1: {p}")));
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Mismatch(problems))
    }
}
