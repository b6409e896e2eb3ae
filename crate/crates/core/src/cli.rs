//! Command-line front end.
//!
//! Subcommands: `solve` (construct + verify a profile), `verify` (recheck an
//! exported JSON profile), `sweep` (tabulate the amplitude across a lambda
//! range as CSV), `phi` (evaluate the time map at one point), `spectrum`
//! (first Dirichlet eigenvalue of an interval or ball), and `certify`
//! (existence/nonexistence certificate).
//!
//! Exit codes are a stable contract: `0` success, `1` usage or input errors,
//! `2` domain/admissibility errors, `3` verification failure.  Scalar and
//! CSV output is printed with 17 significant digits; structured output is
//! JSON.  The environment variable `TIMEMAP_QUAD_TOL` (a decimal string)
//! overrides the quadrature tolerance used by `solve`, `sweep`, and `phi`.

use crate::format_17sig;
use crate::numerics::{QuadratureConfig, RootFindConfig};
use crate::solution::{ExportFormat, SolutionProfile};
use crate::spectral::{self, SpectralError};
use crate::timemap::{self, ProblemSpec};
use crate::verify::{full_report, VerificationReport};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_DOMAIN: i32 = 2;
const EXIT_VERIFICATION: i32 = 3;

#[derive(Parser)]
#[command(
    name = "semilinear",
    version,
    about = "Constructs and verifies solutions of -u'' = lambda u + f(u) with zero boundary values"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct the solution profile for (a, b, lambda) and verify it
    Solve(SolveArgs),
    /// Re-run the verification oracles on an exported JSON profile
    Verify(VerifyArgs),
    /// Tabulate amplitude and residuals over a lambda range as CSV
    Sweep(SweepArgs),
    /// Evaluate the time map at a single amplitude
    Phi(PhiArgs),
    /// First Dirichlet eigenvalue of an interval or a ball
    Spectrum(SpectrumArgs),
    /// Existence/nonexistence certificate for (dimension, lambda, lambda1)
    Certify(CertifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct SolveArgs {
    /// Left endpoint
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    /// Right endpoint
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    /// Linear coefficient; must lie strictly between 0 and pi^2/(b-a)^2
    #[arg(long, allow_negative_numbers = true)]
    lambda: f64,
    /// Number of table intervals on the left half
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Target tolerance; drives the quadrature and root-finder settings
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Profile output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the profile here instead of standard output (the verification
    /// report is then printed to standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Path to a JSON profile produced by `solve --format json`
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    /// First lambda of the sweep (inclusive)
    #[arg(long, allow_negative_numbers = true)]
    lambda_min: f64,
    /// Last lambda of the sweep (inclusive)
    #[arg(long, allow_negative_numbers = true)]
    lambda_max: f64,
    /// Number of rows; lambda is spaced evenly between min and max
    #[arg(long)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PhiArgs {
    /// Amplitude (nonnegative)
    #[arg(long, allow_negative_numbers = true)]
    k: f64,
    /// Linear coefficient (positive)
    #[arg(long, allow_negative_numbers = true)]
    lambda: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Interval,
    Ball,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long, value_enum)]
    shape: Shape,
    /// Left endpoint (interval shape)
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Right endpoint (interval shape)
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Space dimension (ball shape)
    #[arg(long)]
    dim: Option<usize>,
    /// Ball radius (ball shape)
    #[arg(long, allow_negative_numbers = true)]
    radius: Option<f64>,
    /// Radial grid size (ball shape)
    #[arg(long, default_value_t = 2048)]
    grid: usize,
}

#[derive(Args)]
struct CertifyArgs {
    /// Space dimension N >= 1
    #[arg(long)]
    dim: usize,
    #[arg(long, allow_negative_numbers = true)]
    lambda: f64,
    /// First Dirichlet eigenvalue of the domain (positive)
    #[arg(long, allow_negative_numbers = true)]
    lambda1: f64,
    /// Assert that the domain is star-shaped (enables the nonexistence rule
    /// for N >= 3)
    #[arg(long)]
    starshaped: bool,
}

/// Parses arguments and dispatches; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version are successes; everything else is usage.
            return if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                EXIT_OK
            } else {
                eprint!("{err}");
                EXIT_USAGE
            };
        }
    };
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Phi(args) => cmd_phi(args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Certify(args) => cmd_certify(args),
    }
}

fn usage_error(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn domain_error(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    EXIT_DOMAIN
}

/// Derives the numeric configs from `--tol` and the `TIMEMAP_QUAD_TOL`
/// override; with the default `--tol` the derived values match the library
/// defaults (up to one floating-point rounding).
fn numeric_configs(tol: f64) -> Result<(QuadratureConfig, RootFindConfig), String> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(format!("--tol must be a positive number, got {tol}"));
    }
    let mut quad = QuadratureConfig {
        abs_tol: tol / 100.0,
        rel_tol: tol / 100.0,
        ..QuadratureConfig::default()
    };
    let root = RootFindConfig {
        f_tol: tol / 10.0,
        x_tol: tol / 100.0,
        ..RootFindConfig::default()
    };

    if let Ok(raw) = std::env::var("TIMEMAP_QUAD_TOL") {
        let value: f64 = raw
            .trim()
            .parse()
            .map_err(|_| format!("TIMEMAP_QUAD_TOL must be a decimal number, got {raw:?}"))?;
        if !(value.is_finite() && value > 0.0) {
            return Err(format!("TIMEMAP_QUAD_TOL must be positive, got {raw:?}"));
        }
        quad.abs_tol = value;
        quad.rel_tol = value;
    }
    Ok((quad, root))
}

fn report_json(report: &VerificationReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

fn write_or_print(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|err| format!("cannot write {}: {err}", path.display())),
        None => {
            print!("{content}");
            if !content.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn cmd_solve(args: SolveArgs) -> i32 {
    if args.n < 16 {
        return usage_error("--n must be at least 16");
    }
    let (quad, root) = match numeric_configs(args.tol) {
        Ok(pair) => pair,
        Err(msg) => return usage_error(msg),
    };
    let spec = match ProblemSpec::new(args.a, args.b, args.lambda) {
        Ok(spec) => spec,
        Err(err) => return usage_error(err),
    };
    if let Err(err) = spec.require_admissible() {
        return domain_error(err);
    }
    let profile = match SolutionProfile::construct(&spec, args.n, &quad, &root) {
        Ok(profile) => profile,
        Err(err) => return domain_error(err),
    };
    let report = full_report(&profile);

    let solve = profile
        .time_map_solve()
        .expect("constructed profile records its solve");
    eprintln!("M = {}", format_17sig(profile.amplitude()));
    eprintln!("phi_residual = {}", format_17sig(solve.residual));
    eprintln!("u(mid) = 1");
    eprintln!(
        "verification: {}",
        if report.passed { "PASSED" } else { "FAILED" }
    );

    let format = match args.format {
        Format::Csv => ExportFormat::Csv,
        Format::Json => ExportFormat::Json,
    };
    let rendered = match profile.export(format, args.n) {
        Ok(text) => text,
        Err(err) => return usage_error(err),
    };
    if let Err(msg) = write_or_print(&args.out, &rendered) {
        return usage_error(msg);
    }
    if args.out.is_some() {
        println!("{}", report_json(&report));
    }

    if report.passed {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    }
}

fn cmd_verify(args: VerifyArgs) -> i32 {
    let raw = match std::fs::read_to_string(&args.input) {
        Ok(raw) => raw,
        Err(err) => return usage_error(format!("cannot read {}: {err}", args.input.display())),
    };
    let profile = match SolutionProfile::from_json(&raw) {
        Ok(profile) => profile,
        Err(err) => return usage_error(err),
    };
    let report = full_report(&profile);
    println!("{}", report_json(&report));
    eprintln!(
        "verification: {}",
        if report.passed { "PASSED" } else { "FAILED" }
    );
    if report.passed {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    }
}

fn cmd_sweep(args: SweepArgs) -> i32 {
    if args.steps < 2 {
        return usage_error("--steps must be at least 2");
    }
    let (quad, root) = match numeric_configs(1e-10) {
        Ok(pair) => pair,
        Err(msg) => return usage_error(msg),
    };
    // NaN endpoints fall through to the per-endpoint validation below.
    if args.lambda_min >= args.lambda_max {
        return usage_error(format!(
            "need --lambda-min < --lambda-max, got {} and {}",
            args.lambda_min, args.lambda_max
        ));
    }
    // Both ends must be admissible; the interior then is as well.
    for lambda in [args.lambda_min, args.lambda_max] {
        let spec = match ProblemSpec::new(args.a, args.b, lambda) {
            Ok(spec) => spec,
            Err(err) => return usage_error(err),
        };
        if let Err(err) = spec.require_admissible() {
            return domain_error(err);
        }
    }

    let mut csv = String::from("lambda,M,phi_residual,verify_passed\n");
    for i in 0..args.steps {
        let theta = i as f64 / (args.steps - 1) as f64;
        let lambda = if i + 1 == args.steps {
            args.lambda_max
        } else {
            args.lambda_min * (1.0 - theta) + args.lambda_max * theta
        };
        let spec = ProblemSpec::new(args.a, args.b, lambda).expect("validated above");
        let profile = match SolutionProfile::construct(&spec, 256, &quad, &root) {
            Ok(profile) => profile,
            Err(err) => return domain_error(format!("lambda = {lambda}: {err}")),
        };
        let report = full_report(&profile);
        let solve = profile
            .time_map_solve()
            .expect("constructed profile records its solve");
        csv.push_str(&format!(
            "{},{},{},{}\n",
            format_17sig(lambda),
            format_17sig(profile.amplitude()),
            format_17sig(solve.residual),
            report.passed
        ));
    }
    if let Err(msg) = write_or_print(&args.out, &csv) {
        return usage_error(msg);
    }
    EXIT_OK
}

fn cmd_phi(args: PhiArgs) -> i32 {
    if !(args.k.is_finite() && args.k >= 0.0) {
        return domain_error(format!("--k must be nonnegative, got {}", args.k));
    }
    if !(args.lambda.is_finite() && args.lambda > 0.0) {
        return domain_error(format!("--lambda must be positive, got {}", args.lambda));
    }
    let (quad, _) = match numeric_configs(1e-10) {
        Ok(pair) => pair,
        Err(msg) => return usage_error(msg),
    };
    match timemap::time_map(args.k, args.lambda, &quad) {
        Ok(value) => {
            println!("{}", format_17sig(value));
            EXIT_OK
        }
        Err(err) => domain_error(err),
    }
}

fn cmd_spectrum(args: SpectrumArgs) -> i32 {
    let result = match args.shape {
        Shape::Interval => {
            let (a, b) = match (args.a, args.b) {
                (Some(a), Some(b)) => (a, b),
                _ => return usage_error("--shape interval requires --a and --b"),
            };
            spectral::lambda1_interval(a, b)
        }
        Shape::Ball => {
            let (dim, radius) = match (args.dim, args.radius) {
                (Some(dim), Some(radius)) => (dim, radius),
                _ => return usage_error("--shape ball requires --dim and --radius"),
            };
            spectral::lambda1_ball(dim, radius, args.grid)
        }
    };
    match result {
        Ok(result) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&result).expect("result serializes")
            );
            EXIT_OK
        }
        Err(err @ SpectralError::NoConvergence { .. }) => domain_error(err),
        Err(err) => usage_error(err),
    }
}

fn cmd_certify(args: CertifyArgs) -> i32 {
    match spectral::classify(args.dim, args.lambda, args.lambda1, args.starshaped) {
        Ok(cert) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&cert).expect("certificate serializes")
            );
            EXIT_OK
        }
        Err(err) => usage_error(err),
    }
}
