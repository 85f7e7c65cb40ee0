//! Command-line front end for `owl-core`.

pub mod error;
pub mod io;
pub mod random;
pub mod report;
pub mod selftest;
pub mod weight_spec;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ndarray::Array1;
use owl_core::norm::unit_ball_vertices_2d;
use owl_core::solver::{solve, Algorithm, Problem, SolverConfig, StepMode};
use owl_core::{dual_norm, evaluate, prox};

pub use error::CliError;
use report::{InputDigest, RunReport};
pub use weight_spec::WeightSpec;

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_NOT_CONVERGED: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "owl",
    version,
    about = "Sorted weighted l1 (OWL/OSCAR) norm toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve ½‖y − Ax‖² + Ω(x) and print a JSON report.
    Solve(SolveArgs),
    /// Apply the proximity operator of Ω to a vector.
    Prox(VectorArgs),
    /// Evaluate Ω (or its dual with --dual) at a vector.
    Norm(NormArgs),
    /// Print the vertices of the 2-D unit ball as x,y CSV.
    Ball(BallArgs),
    /// Run the randomized invariant checks (seed from OWL_SEED).
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Ista,
    Fista,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StepArg {
    Fixed,
    Backtracking,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Design matrix A, one row per line.
    pub matrix: PathBuf,
    /// Response vector y.
    pub response: PathBuf,
    /// oscar:<l1>,<l2> | l1:<l> | linf:<t1> | file:<path>
    #[arg(long)]
    pub weights: WeightSpec,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Fista)]
    pub algorithm: AlgorithmArg,
    /// Relative duality-gap tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    #[arg(long, value_enum, default_value_t = StepArg::Fixed)]
    pub step: StepArg,
    /// Skip the first line of each CSV file.
    #[arg(long)]
    pub header: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VectorArgs {
    pub vector: PathBuf,
    #[arg(long)]
    pub weights: WeightSpec,
    #[arg(long)]
    pub header: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[command(flatten)]
    pub input: VectorArgs,
    #[arg(long)]
    pub dual: bool,
}

#[derive(Debug, Args)]
pub struct BallArgs {
    #[arg(long)]
    pub weights: WeightSpec,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Text produced by a command and the exit code it asks for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            exit_code: EXIT_OK,
        }
    }
}

/// Writes `text` to `out` if given; otherwise returns it for stdout.
fn emit(text: String, out: Option<&PathBuf>) -> Result<String, CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| CliError::io(path, e))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Prox(args) => cmd_prox(&args),
        Command::Norm(args) => cmd_norm(&args),
        Command::Ball(args) => cmd_ball(&args),
        Command::Selftest => Ok(cmd_selftest(selftest::seed_from_env())),
    }
}

pub fn cmd_solve(args: &SolveArgs) -> Result<Outcome, CliError> {
    let a = io::read_matrix(&args.matrix, args.header)?;
    let y = io::read_vector(&args.response, args.header)?;
    if y.len() != a.nrows() {
        return Err(CliError::Dimension(format!(
            "matrix has {} rows but response has {} entries",
            a.nrows(),
            y.len()
        )));
    }
    let w = args.weights.resolve(a.ncols())?;
    let digest = InputDigest {
        rows: a.nrows(),
        cols: a.ncols(),
        weights: args.weights.to_string(),
    };
    let problem = Problem::new(a, Array1::from(y), w)?;
    let (algorithm, name) = match args.algorithm {
        AlgorithmArg::Ista => (Algorithm::Ista, "ista"),
        AlgorithmArg::Fista => (Algorithm::Fista, "fista"),
    };
    let config = SolverConfig {
        algorithm,
        max_iterations: args.max_iter,
        gap_tolerance: args.tol,
        step_mode: match args.step {
            StepArg::Fixed => StepMode::Fixed,
            StepArg::Backtracking => StepMode::Backtracking,
        },
        ..Default::default()
    };
    let started = Instant::now();
    let result = solve(&problem, &config)?;
    let elapsed = started.elapsed().as_secs_f64() * 1e3;
    let report = RunReport::new(digest, name, &result, elapsed);
    Ok(Outcome {
        stdout: emit(report.to_json()?, args.out.as_ref())?,
        exit_code: if result.converged {
            EXIT_OK
        } else {
            EXIT_NOT_CONVERGED
        },
    })
}

pub fn cmd_prox(args: &VectorArgs) -> Result<Outcome, CliError> {
    let v = io::read_vector(&args.vector, args.header)?;
    let w = args.weights.resolve(v.len())?;
    let p = prox(&v, &w)?;
    Ok(Outcome::ok(emit(io::format_vector(&p), args.out.as_ref())?))
}

pub fn cmd_norm(args: &NormArgs) -> Result<Outcome, CliError> {
    let input = &args.input;
    let x = io::read_vector(&input.vector, input.header)?;
    let w = input.weights.resolve(x.len())?;
    let value = if args.dual {
        dual_norm(&x, &w)?
    } else {
        evaluate(&x, &w)?
    };
    Ok(Outcome::ok(emit(
        format!("{}\n", io::fmt_float(value)),
        input.out.as_ref(),
    )?))
}

/// `x,y` per vertex, counter-clockwise from the positive x axis; the polyline
/// closes by joining the last vertex back to the first.
pub fn ball_csv(weights: &WeightSpec) -> Result<String, CliError> {
    let w = weights.resolve(2)?;
    let ball = unit_ball_vertices_2d(&w)?;
    let mut csv = String::new();
    for [x, y] in ball.vertices {
        csv.push_str(&format!("{},{}\n", io::fmt_float(x), io::fmt_float(y)));
    }
    Ok(csv)
}

pub fn cmd_ball(args: &BallArgs) -> Result<Outcome, CliError> {
    Ok(Outcome::ok(emit(
        ball_csv(&args.weights)?,
        args.out.as_ref(),
    )?))
}

pub fn cmd_selftest(seed: u64) -> Outcome {
    let outcomes = selftest::run(seed);
    let mut stdout = format!("seed {seed}\n");
    for o in &outcomes {
        stdout.push_str(&o.line());
        stdout.push('\n');
    }
    let all = outcomes.iter().all(selftest::CheckOutcome::passed);
    Outcome {
        stdout,
        exit_code: if all { EXIT_OK } else { EXIT_ERROR },
    }
}
