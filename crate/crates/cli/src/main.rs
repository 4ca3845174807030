use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eqmorse::morse::verify_identities;
use eqmorse::Tolerances;
use eqmorse_cli::pipeline::build_problem;
use eqmorse_cli::{exit, parse_problem, run_pipeline, svg, CliError, Mode, RunConfig};

#[derive(Parser)]
#[command(name = "eqmorse", version, about = "Equivariant Morse index verification for polynomial vector fields")]
#[command(after_help = tolerance_help())]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the index by both routes and check every identity.
    Verify(Common),
    /// Compute the index and the lattice-point bounds.
    Bounds(Common),
    /// Print the subgroup classes and the table of marks.
    Marks(Common),
    /// Draw the boundary strata, tangencies and zeros as SVG.
    Render(Common),
    /// Normal-map degrees, treating the field as a nonvanishing invariant field.
    Gauss(Common),
}

#[derive(Args)]
struct Common {
    /// Problem file (JSON).
    problem: PathBuf,
    /// Marching-squares grid resolution per axis.
    #[arg(long)]
    grid: Option<usize>,
    /// Tolerance profile: default, strict or loose.
    #[arg(long = "tol-profile")]
    tol_profile: Option<String>,
    /// Seed for the stability perturbation.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Rerun with a refined grid and a small invariant perturbation.
    #[arg(long)]
    stability: bool,
    /// Include stage timings in the report.
    #[arg(long)]
    timings: bool,
}

fn tolerance_help() -> String {
    let mut s = String::from("Tolerance defaults (override per problem under options.tolerances):\n");
    for (name, value) in Tolerances::default().entries() {
        s.push_str(&format!("  {name:<20} {value:e}\n"));
    }
    s.push_str("\nExit codes: 0 pass, 1 verification failure, 2 refused input, 3 internal inconsistency");
    s
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(args: &Common, cfg: &RunConfig) -> Result<i32, CliError> {
    let spec = parse_problem(&args.problem)?;
    let problem = build_problem(&spec, cfg)?;
    let report = verify_identities(&problem).map_err(|e| match e.hypothesis() {
        Some(h) => CliError::Refusal {
            stage: "index".into(),
            hypothesis: h.into(),
            message: e.to_string(),
        },
        None => CliError::Internal {
            stage: "index".into(),
            message: e.to_string(),
        },
    })?;
    match svg::render(&problem, &report) {
        Some(text) => {
            write_out(args.out.as_deref(), &text)?;
            Ok(if report.passed() { exit::PASS } else { exit::FAIL })
        }
        None => {
            eprintln!("warning: nothing to render for a one-dimensional problem");
            Ok(exit::PASS)
        }
    }
}

fn run(command: Command) -> Result<i32, CliError> {
    let (mode, args) = match command {
        Command::Verify(a) => (Mode::Verify, a),
        Command::Bounds(a) => (Mode::Bounds, a),
        Command::Marks(a) => (Mode::Marks, a),
        Command::Gauss(a) => (Mode::Gauss, a),
        Command::Render(a) => {
            let cfg = RunConfig {
                tol_profile: a.tol_profile.clone(),
                grid: a.grid,
                ..RunConfig::default()
            };
            return render(&a, &cfg);
        }
    };
    let cfg = RunConfig {
        mode,
        tol_profile: args.tol_profile.clone(),
        grid: args.grid,
        seed: args.seed,
        stability: args.stability,
        timings: args.timings,
    };
    let spec = parse_problem(&args.problem)?;
    let report = run_pipeline(&spec, &cfg);
    if let Some(r) = &report.refusal {
        match &r.hypothesis {
            Some(h) => eprintln!("refused at {}: hypothesis \"{h}\" violated: {}", r.stage, r.message),
            None => eprintln!("internal inconsistency at {}: {}", r.stage, r.message),
        }
    }
    write_out(args.out.as_deref(), &report.to_json())?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
