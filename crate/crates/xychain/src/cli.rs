//! Command-line frontend: evaluation, grid scans, pseudocritical searches,
//! exponent fits, and data collapse with machine-readable output.
//!
//! Grids are emitted as CSV (`#`-prefixed metadata lines, then a header,
//! then rows; floats carry 17 significant digits so files round-trip
//! exactly), scalar fit summaries as JSON. Output is deterministic for a
//! fixed configuration: rows are computed by a worker pool but buffered and
//! written in grid order, and nothing wall-clock dependent is emitted.

use crate::criticality::{
    collapse_curves, collapse_quality, critical_exponent_nu, find_pseudocritical, fit_kappa1,
    fit_kappa2, pseudocritical_exponent, ApproachSide, LinearFit, PseudocritSearch,
};
use crate::error::{Error, Result};
use crate::geophase::{thermal_gp, thermal_gp_mode_sum};
use crate::grid::{linspace, logspace};
use crate::model::ModelParams;
use crate::quadrature::QuadratureSpec;
use crate::thermo::{
    free_energy, free_energy_finite_n, magnetization, magnetization_finite_n, susceptibility,
    susceptibility_finite_n, ThermalPoint,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

const EXIT_CODES_HELP: &str = "Exit codes:
  0  success
  2  parameter validation failure
  3  susceptibility divergence at the quantum critical point
  4  quadrature non-convergence

Temperatures accept an exponential shorthand: `e-5.5` means exp(-5.5).
The XYCHAIN_THREADS environment variable overrides the worker count
(default: available parallelism).";

#[derive(Debug, Parser)]
#[command(
    name = "xychain",
    version,
    about = "Finite-temperature thermodynamics, geometric phases, and criticality of the 1D anisotropic XY chain",
    after_help = EXIT_CODES_HELP
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate F, M_z, chi_z, and the geometric phase at a single point
    Eval(EvalArgs),
    /// Scan F, M_z, chi_z over a (lambda, T) grid
    Scan(ScanArgs),
    /// Locate the susceptibility maximum for each temperature
    Pseudocrit(PseudocritArgs),
    /// Fit kappa_1, kappa_2, the drift exponent, and nu
    Exponents(ExponentsArgs),
    /// Rescale susceptibility curves onto the collapse variable
    Collapse(CollapseArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Below,
    Above,
}

impl From<Side> for ApproachSide {
    fn from(side: Side) -> Self {
        match side {
            Side::Below => ApproachSide::Below,
            Side::Above => ApproachSide::Above,
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Anisotropy gamma in [0, 1]
    #[arg(long)]
    pub gamma: f64,
    /// Transverse field lambda >= 0
    #[arg(long)]
    pub lambda: f64,
    /// Temperature (T = 0 selects the analytic zero-temperature branch)
    #[arg(long, value_parser = parse_temperature)]
    pub temp: f64,
    /// Evaluate on an N-site chain instead of the thermodynamic limit
    #[arg(long)]
    pub n_sites: Option<usize>,
    /// Relative quadrature tolerance override
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    /// Output path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub gamma: f64,
    /// Single field value
    #[arg(long, conflicts_with = "lambda_range")]
    pub lambda: Option<f64>,
    /// Field range MIN:MAX:COUNT
    #[arg(long, value_parser = parse_range)]
    pub lambda_range: Option<Range>,
    /// Single temperature
    #[arg(long, value_parser = parse_temperature, conflicts_with = "temps")]
    pub temp: Option<f64>,
    /// Comma-separated temperature list (e.g. 0.02,0.21 or e-3,e-4)
    #[arg(long, value_parser = parse_temperature_list)]
    pub temps: Option<TempList>,
    #[arg(long)]
    pub n_sites: Option<usize>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PseudocritArgs {
    #[arg(long)]
    pub gamma: f64,
    /// Comma-separated temperatures, all > 0
    #[arg(long, value_parser = parse_temperature_list)]
    pub temps: TempList,
    /// Search bracket MIN:MAX
    #[arg(long, value_parser = parse_bracket)]
    pub bracket: Option<(f64, f64)>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExponentsArgs {
    #[arg(long)]
    pub gamma: f64,
    /// Temperatures for the kappa_1 and drift fits
    /// (default: 7 log-spaced points in [e^-6, e^-3])
    #[arg(long, value_parser = parse_temperature_list)]
    pub temps: Option<TempList>,
    /// Side from which the zero-temperature fit approaches lambda_c
    #[arg(long, value_enum, default_value = "below")]
    pub side: Side,
    #[arg(long, value_parser = parse_bracket)]
    pub bracket: Option<(f64, f64)>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CollapseArgs {
    #[arg(long)]
    pub gamma: f64,
    /// Temperatures, one rescaled curve each (e.g. e-3,e-4,e-5,e-5.5)
    #[arg(long, value_parser = parse_temperature_list)]
    pub temps: TempList,
    /// Collapse variable grid MIN:MAX:COUNT
    #[arg(long, value_parser = parse_range, default_value = "-1:1:41")]
    pub x_range: Range,
    #[arg(long, value_parser = parse_bracket)]
    pub bracket: Option<(f64, f64)>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TempList(pub Vec<f64>);

/// Accepts plain floats and the `e<exp>` shorthand, e.g. `e-5.5` = exp(-5.5).
pub fn parse_temperature(s: &str) -> std::result::Result<f64, String> {
    let t = parse_float_or_exp(s)?;
    if !t.is_finite() || t < 0.0 {
        return Err(format!("temperature must be finite and >= 0, got {s}"));
    }
    Ok(t)
}

fn parse_float_or_exp(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    if let Some(exp) = s.strip_prefix('e') {
        let e: f64 = exp
            .parse()
            .map_err(|_| format!("invalid exponent in `{s}`"))?;
        return Ok(e.exp());
    }
    s.parse().map_err(|_| format!("invalid number `{s}`"))
}

pub fn parse_temperature_list(s: &str) -> std::result::Result<TempList, String> {
    let temps = s
        .split(',')
        .map(parse_temperature)
        .collect::<std::result::Result<Vec<f64>, String>>()?;
    if temps.is_empty() {
        return Err("temperature list is empty".into());
    }
    Ok(TempList(temps))
}

pub fn parse_range(s: &str) -> std::result::Result<Range, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected MIN:MAX:COUNT, got `{s}`"));
    }
    let min = parse_float_or_exp(parts[0])?;
    let max = parse_float_or_exp(parts[1])?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| format!("invalid count in `{s}`"))?;
    if !(min < max) || count < 2 {
        return Err(format!("range needs min < max and count >= 2, got `{s}`"));
    }
    Ok(Range { min, max, count })
}

pub fn parse_bracket(s: &str) -> std::result::Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err(format!("expected MIN:MAX, got `{s}`"));
    }
    let min = parse_float_or_exp(parts[0])?;
    let max = parse_float_or_exp(parts[1])?;
    if !(min < max) {
        return Err(format!("bracket needs min < max, got `{s}`"));
    }
    Ok((min, max))
}

/// Exit code contract: validation 2, critical divergence 3, quadrature
/// non-convergence 4, anything else 1.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidParams(_) => 2,
        Error::CriticalDivergence { .. } => 3,
        Error::NonConvergence { .. } => 4,
        _ => 1,
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let threads = match std::env::var("XYCHAIN_THREADS") {
        Ok(v) => v.parse::<usize>().map_err(|_| {
            Error::InvalidParams(format!("XYCHAIN_THREADS must be a positive integer, got `{v}`"))
        })?,
        Err(_) => 0, // rayon default: available parallelism
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParams(format!("worker pool: {e}")))?;
    pool.install(|| dispatch(cli))
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Pseudocrit(args) => cmd_pseudocrit(args),
        Command::Exponents(args) => cmd_exponents(args),
        Command::Collapse(args) => cmd_collapse(args),
    }
}

fn quad_spec(rel_tol: Option<f64>) -> QuadratureSpec {
    match rel_tol {
        Some(r) => QuadratureSpec {
            rel_tol: r,
            ..QuadratureSpec::default()
        },
        None => QuadratureSpec::default(),
    }
}

fn search_config(bracket: Option<(f64, f64)>) -> PseudocritSearch {
    match bracket {
        Some(bracket) => PseudocritSearch {
            bracket,
            ..PseudocritSearch::default()
        },
        None => PseudocritSearch::default(),
    }
}

fn writer(out: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

/// 17 significant digits: round-trip exact for f64.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_metadata(w: &mut dyn Write, config: &str) -> Result<()> {
    writeln!(w, "# xychain {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(w, "# config: {config}")?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct EvalRecord {
    gamma: f64,
    lambda: f64,
    temperature: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_sites: Option<usize>,
    free_energy: f64,
    magnetization: f64,
    susceptibility: f64,
    geometric_phase: f64,
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let p = ModelParams::new(args.gamma, args.lambda)?;
    let t = ThermalPoint::new(args.temp)?;
    let quad = quad_spec(args.rel_tol);

    let record = match args.n_sites {
        None => EvalRecord {
            gamma: args.gamma,
            lambda: args.lambda,
            temperature: args.temp,
            n_sites: None,
            free_energy: free_energy(p, t, &quad)?,
            magnetization: magnetization(p, t, &quad)?,
            susceptibility: susceptibility(p, t, &quad)?,
            // beta_g and beta_T share the closed form pi (1 + M_z).
            geometric_phase: thermal_gp(p, t, &quad)?.radians(),
        },
        Some(n) => EvalRecord {
            gamma: args.gamma,
            lambda: args.lambda,
            temperature: args.temp,
            n_sites: Some(n),
            free_energy: free_energy_finite_n(p, t, n)?,
            magnetization: magnetization_finite_n(p, t, n)?,
            susceptibility: susceptibility_finite_n(p, t, n)?,
            geometric_phase: thermal_gp_mode_sum(p, t, n)?.radians(),
        },
    };

    let mut w = writer(args.out.as_ref())?;
    match args.format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut w, &record)
                .map_err(|e| Error::InvalidParams(format!("json write: {e}")))?;
            writeln!(w)?;
        }
        OutputFormat::Csv => {
            let config = format!(
                "eval --gamma {} --lambda {} --temp {}{}",
                args.gamma,
                args.lambda,
                args.temp,
                args.n_sites
                    .map(|n| format!(" --n-sites {n}"))
                    .unwrap_or_default()
            );
            write_metadata(w.as_mut(), &config)?;
            writeln!(
                w,
                "gamma,lambda,temperature,free_energy,magnetization,susceptibility,geometric_phase"
            )?;
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                fmt_f64(record.gamma),
                fmt_f64(record.lambda),
                fmt_f64(record.temperature),
                fmt_f64(record.free_energy),
                fmt_f64(record.magnetization),
                fmt_f64(record.susceptibility),
                fmt_f64(record.geometric_phase),
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_scan(args: ScanArgs) -> Result<()> {
    let lambdas: Vec<f64> = match (&args.lambda, &args.lambda_range) {
        (Some(l), None) => vec![*l],
        (None, Some(r)) => linspace(r.min, r.max, r.count),
        _ => {
            return Err(Error::InvalidParams(
                "scan needs exactly one of --lambda or --lambda-range".into(),
            ))
        }
    };
    let temps: Vec<f64> = match (&args.temp, &args.temps) {
        (Some(t), None) => vec![*t],
        (None, Some(list)) => list.0.clone(),
        _ => {
            return Err(Error::InvalidParams(
                "scan needs exactly one of --temp or --temps".into(),
            ))
        }
    };
    let quad = quad_spec(args.rel_tol);
    let gamma = args.gamma;
    ModelParams::new(gamma, lambdas[0].max(0.0))?; // fail fast on bad gamma

    // Row-major (lambda outer, T inner); rows computed in parallel, emitted
    // in deterministic grid order.
    let grid: Vec<(f64, f64)> = lambdas
        .iter()
        .flat_map(|&l| temps.iter().map(move |&t| (l, t)))
        .collect();
    let rows: Vec<String> = grid
        .par_iter()
        .map(|&(lambda, temp)| scan_row(gamma, lambda, temp, args.n_sites, &quad))
        .collect();

    let mut w = writer(args.out.as_ref())?;
    let config = format!(
        "scan --gamma {gamma} --lambdas {} --temps {}{}",
        lambdas
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(";"),
        temps
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(";"),
        args.n_sites
            .map(|n| format!(" --n-sites {n}"))
            .unwrap_or_default()
    );
    write_metadata(w.as_mut(), &config)?;
    writeln!(
        w,
        "gamma,lambda,temperature,free_energy,magnetization,susceptibility,error"
    )?;
    for row in rows {
        writeln!(w, "{row}")?;
    }
    w.flush()?;
    Ok(())
}

/// One scan row; isolated failures land in the error column instead of
/// aborting the grid.
fn scan_row(
    gamma: f64,
    lambda: f64,
    temp: f64,
    n_sites: Option<usize>,
    quad: &QuadratureSpec,
) -> String {
    let outcome = (|| -> Result<(f64, f64, f64)> {
        let p = ModelParams::new(gamma, lambda)?;
        let t = ThermalPoint::new(temp)?;
        match n_sites {
            None => Ok((
                free_energy(p, t, quad)?,
                magnetization(p, t, quad)?,
                susceptibility(p, t, quad)?,
            )),
            Some(n) => Ok((
                free_energy_finite_n(p, t, n)?,
                magnetization_finite_n(p, t, n)?,
                susceptibility_finite_n(p, t, n)?,
            )),
        }
    })();
    match outcome {
        Ok((f, m, chi)) => format!(
            "{},{},{},{},{},{},",
            fmt_f64(gamma),
            fmt_f64(lambda),
            fmt_f64(temp),
            fmt_f64(f),
            fmt_f64(m),
            fmt_f64(chi),
        ),
        Err(err) => format!(
            "{},{},{},,,,{}",
            fmt_f64(gamma),
            fmt_f64(lambda),
            fmt_f64(temp),
            error_tag(&err),
        ),
    }
}

fn error_tag(err: &Error) -> &'static str {
    match err {
        Error::CriticalDivergence { .. } => "critical-divergence",
        Error::NonConvergence { .. } => "quadrature-non-convergence",
        Error::NonFiniteIntegrand { .. } => "non-finite-integrand",
        Error::InvalidParams(_) => "invalid-params",
        _ => "error",
    }
}

fn cmd_pseudocrit(args: PseudocritArgs) -> Result<()> {
    let quad = quad_spec(args.rel_tol);
    let search = search_config(args.bracket);
    let gamma = args.gamma;

    let rows: Vec<String> = args
        .temps
        .0
        .par_iter()
        .map(|&t| match find_pseudocritical(gamma, t, &search, &quad) {
            Ok(r) => format!(
                "{},{},{},",
                fmt_f64(r.temperature),
                fmt_f64(r.lambda_m),
                fmt_f64(r.chi_max)
            ),
            Err(err) => format!("{},,,{}", fmt_f64(t), error_tag(&err)),
        })
        .collect();

    let mut w = writer(args.out.as_ref())?;
    let config = format!(
        "pseudocrit --gamma {gamma} --temps {} --bracket {}:{}",
        args.temps
            .0
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(";"),
        search.bracket.0,
        search.bracket.1
    );
    write_metadata(w.as_mut(), &config)?;
    writeln!(w, "temperature,lambda_m,chi_max,error")?;
    for row in rows {
        writeln!(w, "{row}")?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct ExponentsSummary {
    gamma: f64,
    side: ApproachSide,
    temperatures: Vec<f64>,
    deltas: Vec<f64>,
    kappa1: LinearFit,
    kappa2: LinearFit,
    drift: LinearFit,
    drift_exponent: f64,
    nu: f64,
}

fn cmd_exponents(args: ExponentsArgs) -> Result<()> {
    let quad = quad_spec(args.rel_tol);
    let search = search_config(args.bracket);
    let temps = match &args.temps {
        Some(list) => list.0.clone(),
        None => logspace((-6.0f64).exp(), (-3.0f64).exp(), 7),
    };
    let deltas = logspace(1e-6, 1e-3, 20);
    let side: ApproachSide = args.side.into();

    let kappa1 = fit_kappa1(args.gamma, &temps, &search, &quad)?;
    let kappa2 = fit_kappa2(args.gamma, &deltas, side, &quad)?;
    let drift = pseudocritical_exponent(args.gamma, &temps, &search, &quad)?;
    let nu = critical_exponent_nu(&kappa1, &kappa2)?;

    let summary = ExponentsSummary {
        gamma: args.gamma,
        side,
        temperatures: temps,
        deltas,
        kappa1,
        kappa2,
        drift,
        drift_exponent: drift.slope,
        nu,
    };
    let mut w = writer(args.out.as_ref())?;
    serde_json::to_writer_pretty(&mut w, &summary)
        .map_err(|e| Error::InvalidParams(format!("json write: {e}")))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn cmd_collapse(args: CollapseArgs) -> Result<()> {
    let quad = quad_spec(args.rel_tol);
    let search = search_config(args.bracket);
    let x_grid = linspace(args.x_range.min, args.x_range.max, args.x_range.count);

    let data = collapse_curves(args.gamma, &args.temps.0, &x_grid, &search, &quad)?;
    let quality = collapse_quality(&data)?;
    let summary = serde_json::json!({
        "gamma": args.gamma,
        "temperatures": args.temps.0,
        "collapse_quality": quality,
    });

    let mut w = writer(args.out.as_ref())?;
    let config = format!(
        "collapse --gamma {} --temps {} --x-range {}:{}:{}",
        args.gamma,
        args.temps
            .0
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(";"),
        args.x_range.min,
        args.x_range.max,
        args.x_range.count
    );
    write_metadata(w.as_mut(), &config)?;
    writeln!(w, "temperature,x,f")?;
    for curve in &data.curves {
        for &(x, f) in &curve.points {
            writeln!(
                w,
                "{},{},{}",
                fmt_f64(curve.temperature),
                fmt_f64(x),
                fmt_f64(f)
            )?;
        }
    }
    writeln!(w, "# summary: {summary}")?;
    w.flush()?;
    if args.out.is_some() {
        println!("{summary}");
    }
    Ok(())
}
