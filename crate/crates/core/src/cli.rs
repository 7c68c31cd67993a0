//! `ratelab <rate|fig2|fig3|solve|verify>`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 numerical or solver error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::entangling::{
    binary_spectrum_state, entangling_rate, figure2_scan, gamma_no_ancilla_max, log_variance,
    schmidt_decompose, AssistedState,
};
use crate::error::Error;
use crate::linalg::DensityMatrix;
use crate::matrix_io::{read_matrix, read_state, write_matrix};
use crate::report::{emit, figure2_csv, figure3_csv, sig12, to_json};
use crate::solver::{
    alternate_solve, embezzling_state, figure3_p_grid, figure3_scan, SimProblem, SolverConfig,
};
use crate::verify::{run_suite, Suite};

/// Largest interacting dimension for which the optimal Hamiltonian is
/// written out densely.
pub const MAX_DENSE_HAMILTONIAN: usize = 1024;

#[derive(Debug, Parser)]
#[command(name = "ratelab", version, about = "Entangling and mixing rates of bipartite Hamiltonians")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entangling rate of a state under a Hamiltonian, or its maximum over H.
    Rate(RateArgs),
    /// Optimal binary-spectrum rate for d = 2, 4, ..., up to --d.
    Fig2(Fig2Args),
    /// Maximal mixing rate for the embezzling family over a grid of weights.
    Fig3(Fig3Args),
    /// One solver run for a fixed average state and weight.
    Solve(SolveArgs),
    /// Randomized verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Alternating rounds per restart.
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
    pub iters: u64,
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u64).range(1..))]
    pub restarts: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            inner_iterations: self.iters as usize,
            restarts: self.restarts as usize,
            master_seed: self.seed,
            ..SolverConfig::default()
        }
    }
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["state", "lambda"])))]
pub struct RateArgs {
    /// State file (two or four dims).
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Largest Schmidt coefficient of the binary-spectrum state.
    #[arg(long, requires = "d", conflicts_with = "state")]
    pub lambda: Option<f64>,
    /// Local dimension of the binary-spectrum state.
    #[arg(long, requires = "lambda")]
    pub d: Option<usize>,
    /// Hamiltonian file; when omitted the no-ancilla maximum is reported and
    /// the maximizing Hamiltonian is written to --out.
    #[arg(long)]
    pub ham: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Where the optimal Hamiltonian goes when --ham is omitted.
    #[arg(long, default_value = "optimal_hamiltonian.json")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct Fig2Args {
    /// Largest dimension; rows for d = 2, 4, ..., 2^floor(log2 d).
    #[arg(long, default_value_t = 1024)]
    pub d: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct Fig3Args {
    /// Embezzling-state dimensions.
    #[arg(long, value_delimiter = ',', default_value = "4,8")]
    pub dims: Vec<usize>,
    /// Weights per dimension, evenly spaced in (lambda_min, 1/2].
    #[arg(long, default_value_t = 10)]
    pub pcount: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("average").required(true).args(["dims", "rho"])))]
pub struct SolveArgs {
    /// Use the embezzling state of this dimension as the average state.
    #[arg(long)]
    pub dims: Option<usize>,
    /// Average-state matrix file.
    #[arg(long)]
    pub rho: Option<PathBuf>,
    /// Weight of the second member, in (0, 1/2].
    #[arg(long)]
    pub p: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = Suite::NAMES)]
    pub suite: String,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub instances: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(Error),
    VerificationFailed,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::VerificationFailed => 1,
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn input(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn numeric(e: Error) -> CliError {
    CliError::Numeric(e)
}

fn write(path: Option<&Path>, text: &str) -> CliResult<()> {
    emit(path, text).map_err(|e| CliError::Usage(e.to_string()))
}

#[derive(Debug, Serialize)]
struct RateReport {
    dims: Vec<usize>,
    gamma: f64,
    /// True when `gamma` is the maximum over unit-norm Hamiltonians.
    maximized: bool,
    hamiltonian_file: Option<String>,
}

fn cmd_rate(args: &RateArgs) -> CliResult<()> {
    let state: AssistedState = match (&args.state, args.lambda, args.d) {
        (Some(path), _, _) => read_state(path).map_err(input)?,
        (None, Some(lambda), Some(d)) => binary_spectrum_state(lambda, d).map_err(input)?.into(),
        _ => return Err(CliError::Usage("give --state or --lambda with --d".into())),
    };
    let dims = state.dims();
    let dim_list = if dims.a == 1 && dims.b == 1 {
        vec![dims.alice, dims.bob]
    } else {
        vec![dims.a, dims.alice, dims.bob, dims.b]
    };
    let report = if let Some(path) = &args.ham {
        let h = read_matrix(path).map_err(input)?;
        if h.dim() != dims.interacting() {
            return Err(CliError::Usage(format!(
                "Hamiltonian has dim {}, state needs {}",
                h.dim(),
                dims.interacting()
            )));
        }
        RateReport {
            dims: dim_list,
            gamma: entangling_rate(&state, &h).map_err(numeric)?,
            maximized: false,
            hamiltonian_file: None,
        }
    } else {
        if dims.a != 1 || dims.b != 1 {
            return Err(CliError::Usage(
                "the maximum over H is only available without ancillas; pass --ham".into(),
            ));
        }
        let psi = state.across_cut();
        if dims.interacting() <= MAX_DENSE_HAMILTONIAN {
            let (gamma, h) = gamma_no_ancilla_max(&psi).map_err(numeric)?;
            write_matrix(&args.out, &h).map_err(input)?;
            RateReport {
                dims: dim_list,
                gamma,
                maximized: true,
                hamiltonian_file: Some(args.out.display().to_string()),
            }
        } else {
            let schmidt = schmidt_decompose(&psi).map_err(numeric)?;
            eprintln!(
                "note: interacting dimension {} exceeds {MAX_DENSE_HAMILTONIAN}; optimal Hamiltonian not written",
                dims.interacting()
            );
            RateReport {
                dims: dim_list,
                gamma: 2.0 * log_variance(&schmidt.coefficients).sqrt(),
                maximized: true,
                hamiltonian_file: None,
            }
        }
    };
    let text = match args.format {
        Format::Json => to_json(&report),
        Format::Csv => format!(
            "dims,gamma,maximized,hamiltonian_file\n{},{},{},{}\n",
            report.dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x"),
            sig12(report.gamma),
            report.maximized,
            report.hamiltonian_file.as_deref().unwrap_or("")
        ),
    };
    write(None, &text)
}

fn cmd_fig2(args: &Fig2Args) -> CliResult<()> {
    if args.d < 2 {
        return Err(CliError::Usage(format!("--d must be >= 2, got {}", args.d)));
    }
    let mut dims = Vec::new();
    let mut d = 2usize;
    while d <= args.d {
        dims.push(d);
        d = match d.checked_mul(2) {
            Some(next) => next,
            None => break,
        };
    }
    let rows = figure2_scan(&dims).map_err(numeric)?;
    let text = match args.output.format {
        Format::Csv => figure2_csv(&rows),
        Format::Json => to_json(&rows),
    };
    write(args.output.out.as_deref(), &text)
}

#[derive(Serialize)]
struct Figure3Json<'a> {
    p_grid: Vec<(usize, Vec<f64>)>,
    config: SolverConfig,
    rows: &'a [crate::solver::Figure3Row],
}

fn cmd_fig3(args: &Fig3Args) -> CliResult<()> {
    if args.pcount == 0 || args.dims.is_empty() || args.dims.iter().any(|&d| d < 2) {
        return Err(CliError::Usage("--dims entries must be >= 2 and --pcount >= 1".into()));
    }
    let config = args.solver.config();
    let rows = figure3_scan(&args.dims, args.pcount, &config).map_err(numeric)?;
    for r in rows.iter().filter(|r| r.error.is_some()) {
        eprintln!("D={} p={}: {}", r.d, sig12(r.p), r.error.as_deref().unwrap_or(""));
    }
    let text = match args.output.format {
        Format::Csv => figure3_csv(&rows),
        Format::Json => {
            let p_grid = args
                .dims
                .iter()
                .map(|&d| figure3_p_grid(d, args.pcount).map(|g| (d, g)))
                .collect::<crate::Result<Vec<_>>>()
                .map_err(numeric)?;
            to_json(&Figure3Json {
                p_grid,
                config,
                rows: &rows,
            })
        }
    };
    write(args.output.out.as_deref(), &text)
}

fn cmd_solve(args: &SolveArgs) -> CliResult<()> {
    let rho: DensityMatrix = match (&args.rho, args.dims) {
        (Some(path), _) => DensityMatrix::new(read_matrix(path).map_err(input)?).map_err(input)?,
        (None, Some(d)) => embezzling_state(d).map_err(input)?,
        _ => return Err(CliError::Usage("give --dims or --rho".into())),
    };
    let problem = SimProblem::new(rho, args.p).map_err(input)?;
    let result = alternate_solve(&problem, &args.solver.config()).map_err(numeric)?;
    let text = match args.format {
        Format::Json => to_json(&result),
        Format::Csv => format!(
            "dim,p,F_max,duality_gap,precision\n{},{},{},{},{}\n",
            result.dim,
            sig12(result.p),
            sig12(result.f_max),
            sig12(result.duality_gap),
            sig12(result.estimated_precision)
        ),
    };
    write(args.out.as_deref(), &text)
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    let suite: Suite = args.suite.parse().map_err(input)?;
    let report = run_suite(suite, args.instances as usize, args.seed);
    eprintln!("wall clock: {:.2} s", report.wall_clock_seconds);
    let text = match args.output.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = String::from("check,instances,passed,skipped,failed\n");
            for c in &report.checks {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    c.check, c.instances, c.passed, c.skipped, c.failed
                ));
            }
            out
        }
    };
    write(args.output.out.as_deref(), &text)?;
    if args.output.format == Format::Csv {
        for s in &report.skipped {
            eprintln!("skipped {}#{}: {}", s.check, s.instance, s.reason);
        }
        for f in &report.failures {
            eprintln!(
                "FAILED {}#{}: expected {}, observed {} [{}]",
                f.check, f.instance, f.expected, f.observed, f.inputs
            );
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::VerificationFailed)
    }
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Rate(a) => cmd_rate(a),
        Command::Fig2(a) => cmd_fig2(a),
        Command::Fig3(a) => cmd_fig3(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::Numeric(err) => eprintln!("numerical error: {err}"),
                CliError::VerificationFailed => eprintln!("verification failed"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn grammar_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let err = Cli::try_parse_from(["ratelab", "fig2", "--bogus"]).unwrap_err();
        assert!(err.use_stderr());
    }

    #[test]
    fn rate_needs_a_source() {
        assert!(Cli::try_parse_from(["ratelab", "rate"]).is_err());
        assert!(Cli::try_parse_from(["ratelab", "rate", "--lambda", "0.9"]).is_err());
        assert!(Cli::try_parse_from(["ratelab", "rate", "--lambda", "0.9", "--d", "2"]).is_ok());
    }

    #[test]
    fn dims_list_parses() {
        let cli = Cli::try_parse_from(["ratelab", "fig3", "--dims", "4,8,16"]).unwrap();
        match cli.command {
            Command::Fig3(a) => assert_eq!(a.dims, vec![4, 8, 16]),
            _ => unreachable!(),
        }
    }
}
