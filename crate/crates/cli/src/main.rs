//! `hpharm`: classification of r-harmonic invariant unit vector fields on
//! 3-dimensional unimodular Lie groups, pointwise energy densities, and the
//! verification battery.
//!
//! Exit codes: 0 when the result holds, 1 when a checked predicate or the
//! battery fails, 2 on invalid input.

mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hpharm_core::battery::{run_battery, BatteryConfig};
use hpharm_core::lie3::DEFAULT_SKYRMION_COUPLING;
use hpharm_core::par::Execution;

use crate::input::{parse_matrix, parse_triple, MatrixPayload};
use crate::report::{to_json, DensityInput, Kind, VerifyReport};

#[derive(Debug, Parser)]
#[command(
    name = "hpharm",
    version,
    about = "Higher-power harmonicity of invariant vector fields on 3-dimensional unimodular Lie groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Algebra class, curvatures and the sets H_r, Z_r of a group
    Classify(ClassifyArgs),
    /// Predicates of an invariant unit field, with exit code 0 if the requested one holds
    Check(CheckArgs),
    /// Pointwise energy densities of a map from its Jacobian and metrics
    Density(DensityArgs),
    /// Seeded property battery over all modules
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Structure constants `l1,l2,l3` with [e_i, e_j] = eps_ijk l_k e_k
    #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
    lambda: [f64; 3],
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
    lambda: [f64; 3],
    /// Field `a1,a2,a3` in the frame of --lambda; normalized to unit length
    #[arg(long, allow_hyphen_values = true, value_parser = parse_triple)]
    sigma: [f64; 3],
    /// Energy degree
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    r: u8,
    #[arg(long, value_enum)]
    kind: Kind,
    /// Skyrmion coupling c > 0 (energy E_1 + c E_2 up to normalization)
    #[arg(long, default_value_t = DEFAULT_SKYRMION_COUPLING)]
    coupling: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct DensityArgs {
    /// JSON payload {"J": [[..]], "G": [[..]], "H": [[..]]}; metrics default to identities
    #[arg(long, conflicts_with_all = ["jacobian", "g", "h"])]
    file: Option<PathBuf>,
    /// Jacobian (n x m) as rows `a,b;c,d`
    #[arg(long, allow_hyphen_values = true, required_unless_present = "file")]
    jacobian: Option<String>,
    /// Domain metric (m x m), identity by default
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    /// Codomain metric (n x n), identity by default
    #[arg(long, allow_hyphen_values = true)]
    h: Option<String>,
    /// Degree for the conformality verdict; m/2 by default (1 for odd m)
    #[arg(long)]
    r: Option<usize>,
    /// Conformal factor for the invariance check at m = 2r
    #[arg(long, default_value_t = 2.0)]
    rho: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Run trials on the calling thread only
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    json: bool,
    /// Corrupt the residuals of one property (harness self-test)
    #[arg(long, hide = true)]
    inject_fault: Option<String>,
}

fn classify(a: ClassifyArgs) -> Result<ExitCode, String> {
    let r = report::classify(a.lambda).map_err(|e| e.to_string())?;
    print_doc(a.json, &r, report::render_report);
    Ok(ExitCode::SUCCESS)
}

fn check(a: CheckArgs) -> Result<ExitCode, String> {
    let r = report::check(a.lambda, a.sigma, a.r as usize, a.kind, a.coupling)
        .map_err(|e| e.to_string())?;
    let holds = r.check.as_ref().is_some_and(|c| c.holds);
    print_doc(a.json, &r, report::render_report);
    Ok(if holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn density(a: DensityArgs) -> Result<ExitCode, String> {
    let (j, g, h) = match a.file {
        Some(path) => MatrixPayload::from_file(&path)?.resolve()?,
        None => MatrixPayload {
            j: parse_matrix(a.jacobian.as_deref().expect("required by clap"))?,
            g: a.g.as_deref().map(parse_matrix).transpose()?,
            h: a.h.as_deref().map(parse_matrix).transpose()?,
        }
        .resolve()?,
    };
    let d = report::density(DensityInput { j, g, h }, a.r, a.rho).map_err(|e| e.to_string())?;
    print_doc(a.json, &d, report::render_density);
    Ok(ExitCode::SUCCESS)
}

fn verify(a: VerifyArgs) -> Result<ExitCode, String> {
    let cfg = BatteryConfig {
        seed: a.seed,
        trials: a.trials,
        execution: if a.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        },
        inject_fault: a.inject_fault,
    };
    let rep = run_battery(&cfg).map_err(|e| e.to_string())?;
    if a.json {
        println!("{}", to_json(&VerifyReport::from(&rep)));
    } else {
        print!("{}", rep.render());
    }
    Ok(if rep.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn print_doc<T: serde::Serialize>(json: bool, doc: &T, text: fn(&T) -> String) {
    if json {
        println!("{}", to_json(doc));
    } else {
        print!("{}", text(doc));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify(a) => classify(a),
        Command::Check(a) => check(a),
        Command::Density(a) => density(a),
        Command::Verify(a) => verify(a),
    };
    result.unwrap_or_else(|msg| {
        eprintln!("error: {msg}");
        ExitCode::from(2)
    })
}
