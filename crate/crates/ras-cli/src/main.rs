//! Command-line front end: construct soliton data from a profile, verify
//! hand-written candidates, or run the example gallery. Exit codes: 0 all
//! checks pass, 1 a check failed, 2 parse or domain error, 3 quadrature
//! failure.

mod gallery;
mod report;
mod runner;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ras_core::construct::Family;
use ras_core::{Error, Result};

use gallery::GalleryOptions;
use runner::{default_tensor_tol, default_tol, parse_floats, RunSpec};

#[derive(Parser)]
#[command(
    name = "ras",
    version,
    about = "Construct and verify gradient Ricci almost solitons on pseudo-Euclidean space"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a soliton from a profile by quadrature, then verify it
    Construct(RunArgs),
    /// Verify hand-written curves without running the construction
    Verify(VerifyArgs),
    /// Run the built-in example gallery
    Gallery(GalleryArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum FamilyArg {
    Translation,
    Radial,
    Warped,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Translation => Family::Translation,
            FamilyArg::Radial => Family::Radial,
            FamilyArg::Warped => Family::Warped,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Soliton family
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Catalog name (paperA, paperB, paperC, linear, const(a)) or an
    /// expression in xi (translation, warped) or r (radial)
    #[arg(long)]
    profile: String,
    /// Base dimension (default 3, or the signature length)
    #[arg(long)]
    n: Option<usize>,
    /// Fiber dimension for the warped family (default 2)
    #[arg(long)]
    m: Option<usize>,
    /// Metric signature as +/- symbols, e.g. "-++"
    #[arg(long, allow_hyphen_values = true)]
    signature: Option<String>,
    /// Direction coefficients, comma separated, e.g. "1,0,0"
    #[arg(long, allow_hyphen_values = true)]
    alphas: Option<String>,
    /// Integration constant scaling f'
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    c: f64,
    /// Additive constant of the potential
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    k: f64,
    /// Anchor of the quadrature tables (default: family canonical point)
    #[arg(long, allow_negative_numbers = true)]
    base: Option<f64>,
    /// Invariant sampling window "lo,hi" (default: profile domain, else a
    /// family default)
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Uniform sample count for system-level checks
    #[arg(long, default_value_t = 256)]
    samples: usize,
    /// Coordinate box "lo,hi" for grid checks
    #[arg(long = "box", default_value = "-1,1", allow_hyphen_values = true)]
    grid_box: String,
    /// Grid points per axis
    #[arg(long, default_value_t = 3)]
    per_axis: usize,
    /// Tolerance for system and PDE residuals
    #[arg(long)]
    tol: Option<f64>,
    /// Tolerance for the full tensor residual
    #[arg(long)]
    tensor_tol: Option<f64>,
    /// Write the structured JSON report here
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the samples table (CSV) here
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Potential expression; for the warped family, the warping function
    #[arg(long)]
    f: String,
    /// Soliton function expression
    #[arg(long)]
    rho: String,
    /// Base potential expression (warped family only)
    #[arg(long)]
    h: Option<String>,
}

#[derive(Args)]
struct GalleryArgs {
    /// Signature override for the translation case
    #[arg(long, allow_hyphen_values = true)]
    signature: Option<String>,
    /// Direction override for the translation case
    #[arg(long, allow_hyphen_values = true)]
    alphas: Option<String>,
    /// Tolerance for system and PDE residuals
    #[arg(long)]
    tol: Option<f64>,
    /// Tolerance for the full tensor residual
    #[arg(long)]
    tensor_tol: Option<f64>,
}

fn pair(text: &str, what: &str) -> Result<(f64, f64)> {
    let v = parse_floats(text)?;
    if v.len() != 2 {
        return Err(Error::Invalid(format!("{what} wants \"lo,hi\", got {text:?}")));
    }
    Ok((v[0], v[1]))
}

fn to_spec(args: &RunArgs) -> Result<RunSpec> {
    Ok(RunSpec {
        family: args.family.into(),
        profile: args.profile.clone(),
        n: args.n,
        m: args.m,
        signature: args.signature.clone(),
        alphas: args.alphas.clone(),
        c: args.c,
        k: args.k,
        base: args.base,
        window: match &args.window {
            Some(w) => Some(pair(w, "--window")?),
            None => None,
        },
        samples: args.samples,
        grid_box: pair(&args.grid_box, "--box")?,
        per_axis: args.per_axis,
        tol: args.tol.unwrap_or_else(default_tol),
        tensor_tol: args.tensor_tol.unwrap_or_else(default_tensor_tol),
    })
}

fn emit(args: &RunArgs, outcome: &runner::Outcome) -> Result<()> {
    print!("{}", outcome.report.render());
    if let Some(path) = &args.out {
        outcome
            .report
            .write_json(path)
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    if let Some(path) = &args.csv {
        report::write_csv(&outcome.rows, path)
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_construct(args: &RunArgs) -> Result<bool> {
    let spec = to_spec(args)?;
    let sd = runner::build_construct(&spec)?;
    let outcome = runner::run_checks(&sd, &spec)?;
    emit(args, &outcome)?;
    Ok(outcome.report.all_pass())
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    let spec = to_spec(&args.run)?;
    let sd = runner::build_verify(&spec, &args.f, &args.rho, args.h.as_deref())?;
    let outcome = runner::run_checks(&sd, &spec)?;
    emit(&args.run, &outcome)?;
    Ok(outcome.report.all_pass())
}

fn cmd_gallery(args: &GalleryArgs) -> Result<bool> {
    gallery::run(&GalleryOptions {
        signature: args.signature.clone(),
        alphas: args.alphas.clone(),
        tol: args.tol.unwrap_or_else(default_tol),
        tensor_tol: args.tensor_tol.unwrap_or_else(default_tensor_tol),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match &cli.cmd {
        Cmd::Construct(a) => cmd_construct(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Gallery(a) => cmd_gallery(a),
    };
    match run {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::QuadratureFailure { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
