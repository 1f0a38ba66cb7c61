//! `casimir`: Casimir forces and energies between one-dimensional mirrors.
//!
//! Exit status is 0 on success, 1 for usage and parse errors, 2 when a
//! computation fails.

mod commands;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use casimir_core::{CasimirError, QuadratureSpec, ScattererModel};
use clap::{Args, Parser, Subcommand};

use commands::{Evaluation, Method, ModesRequest, Spacing};
use output::{Format, Table};

const USAGE_ERROR: u8 = 1;
const NUMERICAL_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "casimir", version, about = "Casimir forces between one-dimensional mirrors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Force between two mirrors.
    Force(PairArgs),
    /// Distance-dependent vacuum energy of two mirrors.
    Energy(PairArgs),
    /// Force and energy over a range of separations.
    Sweep(SweepArgs),
    /// Energy differences from the mode sum in growing boxes.
    Modes(ModesArgs),
    /// Unitarity and determinant residuals of a model on a k grid.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct Mirrors {
    /// Left mirror, e.g. `delta:g=1`, `perfect`, `barrier:v0=2,a=0.1`.
    #[arg(long)]
    m1: ScattererModel,
    /// Right mirror.
    #[arg(long)]
    m2: ScattererModel,
}

#[derive(Args)]
struct Numerics {
    /// Relative tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Method::Quad)]
    method: Method,
    /// Number of series terms for `--method series`.
    #[arg(long, default_value_t = 512)]
    terms: usize,
    /// Quadrature panel budget.
    #[arg(long, default_value_t = 2000)]
    budget: usize,
    /// Allow non-causal models in the rotated integrals.
    #[arg(long)]
    allow_noncausal: bool,
}

#[derive(Args)]
struct Units {
    /// Report newtons and joules instead of reduced units.
    #[arg(long, requires = "length_unit")]
    si: bool,
    /// Length unit in metres for `--si`.
    #[arg(long = "L-unit", id = "length_unit")]
    length_unit: Option<f64>,
}

#[derive(Args)]
struct PairArgs {
    #[command(flatten)]
    mirrors: Mirrors,
    /// Mirror separation.
    #[arg(long = "L")]
    distance: f64,
    #[command(flatten)]
    numerics: Numerics,
    #[command(flatten)]
    units: Units,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    mirrors: Mirrors,
    #[arg(long)]
    start: f64,
    #[arg(long)]
    stop: f64,
    #[arg(long)]
    count: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Log)]
    spacing: Spacing,
    #[command(flatten)]
    numerics: Numerics,
    #[command(flatten)]
    units: Units,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct ModesArgs {
    #[command(flatten)]
    mirrors: Mirrors,
    #[arg(long = "La", default_value_t = 1.0)]
    distance_a: f64,
    #[arg(long = "Lb", default_value_t = 2.0)]
    distance_b: f64,
    /// Box lengths to compare.
    #[arg(long = "box", value_delimiter = ',', default_values_t = [500.0, 1000.0, 2000.0, 4000.0])]
    box_lengths: Vec<f64>,
    /// Fixed cutoff; by default it grows with the square root of the box length.
    #[arg(long)]
    k_max: Option<f64>,
    /// Phase samples per mode spacing.
    #[arg(long, default_value_t = 8)]
    resolution: usize,
    #[command(flatten)]
    units: Units,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct ValidateArgs {
    model: ScattererModel,
    #[arg(long, default_value_t = 1e-3)]
    k_min: f64,
    #[arg(long, default_value_t = 1e3)]
    k_max: f64,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

impl Numerics {
    fn evaluation(&self, units: &Units) -> Evaluation {
        Evaluation {
            spec: QuadratureSpec {
                rel_tol: self.tol,
                budget: self.budget,
                allow_noncausal: self.allow_noncausal,
                ..QuadratureSpec::default()
            },
            method: self.method,
            terms: self.terms,
            si_unit: units.si_unit(),
        }
    }
}

impl Units {
    fn si_unit(&self) -> Option<f64> {
        if self.si {
            self.length_unit
        } else {
            None
        }
    }
}

fn exit_code(err: &CasimirError) -> u8 {
    match err {
        CasimirError::InvalidParameter(_) | CasimirError::ModelParse { .. } | CasimirError::NonCausalModel(_) => {
            USAGE_ERROR
        }
        _ => NUMERICAL_ERROR,
    }
}

fn fail(err: &CasimirError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_code(err))
}

fn emit(table: &Table, format: Format) -> ExitCode {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match table.write(format, &mut lock).and_then(|_| lock.flush()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            ExitCode::from(NUMERICAL_ERROR)
        }
    }
}

fn check_units(units: &Units) -> Result<(), CasimirError> {
    match units.length_unit {
        Some(u) if !(u.is_finite() && u > 0.0) => {
            Err(CasimirError::InvalidParameter(format!("--L-unit must be positive, got {u}")))
        }
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Force(args) => {
            let eval = args.numerics.evaluation(&args.units);
            match check_units(&args.units)
                .and_then(|_| commands::force(args.mirrors.m1, args.mirrors.m2, args.distance, &eval))
            {
                Ok(table) => emit(&table, args.format),
                Err(e) => fail(&e),
            }
        }
        Command::Energy(args) => {
            let eval = args.numerics.evaluation(&args.units);
            match check_units(&args.units)
                .and_then(|_| commands::energy(args.mirrors.m1, args.mirrors.m2, args.distance, &eval))
            {
                Ok(table) => emit(&table, args.format),
                Err(e) => fail(&e),
            }
        }
        Command::Sweep(args) => {
            let eval = args.numerics.evaluation(&args.units);
            let points = match check_units(&args.units)
                .and_then(|_| commands::sweep_points(args.start, args.stop, args.count, args.spacing))
            {
                Ok(p) => p,
                Err(e) => return fail(&e),
            };
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(jobs) = args.jobs {
                if jobs == 0 {
                    return fail(&CasimirError::InvalidParameter("--jobs must be at least 1".into()));
                }
                pool = pool.num_threads(jobs);
            }
            let pool = match pool.build() {
                Ok(pool) => pool,
                Err(e) => {
                    eprintln!("error: cannot start worker threads: {e}");
                    return ExitCode::from(NUMERICAL_ERROR);
                }
            };
            let outcome = pool.install(|| commands::sweep(args.mirrors.m1, args.mirrors.m2, &points, &eval));
            let status = emit(&outcome.table, args.format);
            match outcome.failure {
                Some((l, err)) => {
                    eprintln!("error: sweep stopped at L = {l}: {err}");
                    ExitCode::from(exit_code(&err))
                }
                None => status,
            }
        }
        Command::Modes(args) => {
            let req = ModesRequest {
                m1: args.mirrors.m1,
                m2: args.mirrors.m2,
                distance_a: args.distance_a,
                distance_b: args.distance_b,
                box_lengths: args.box_lengths,
                k_max: args.k_max,
                resolution: args.resolution,
                si_unit: args.units.si_unit(),
            };
            match check_units(&args.units).and_then(|_| commands::modes(&req)) {
                Ok((table, decreasing)) => {
                    let trend = if decreasing { "decreasing" } else { "not monotone" };
                    eprintln!("deviation across box lengths: {trend}");
                    emit(&table, args.format)
                }
                Err(e) => fail(&e),
            }
        }
        Command::Validate(args) => match commands::validate(args.model, args.k_min, args.k_max, args.points) {
            Ok((table, pass)) => {
                if !args.model.is_causal() {
                    eprintln!("note: {} is not causal", args.model);
                }
                let status = emit(&table, args.format);
                if pass {
                    status
                } else {
                    eprintln!("error: residuals exceed {:e}", commands::VALIDATION_THRESHOLD);
                    ExitCode::from(NUMERICAL_ERROR)
                }
            }
            Err(e) => fail(&e),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    run(cli)
}
