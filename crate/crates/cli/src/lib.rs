//! Command-line front end: state files, named benchmark states, parameter
//! sweeps and convex-roof minimization.
//!
//! Results go to stdout as `name=value` lines or CSV; diagnostics go to
//! stderr. Exit codes: 0 success, 1 malformed input or unknown name,
//! 2 normalization failure, 3 method and qubit-count mismatch, 4 optimizer
//! budget exhausted under `--strict`.

pub mod catalog;
pub mod error;
pub mod format;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use egf_core::multiparty::{egf_mixed_ensemble, egf_pure, ReductionRoof};
use egf_core::tripartite::{egf_definition1, egf_theorem1, PairEfMode, TripartiteAmplitudes};
use egf_core::{OptimizerConfig, PureState};
use num_complex::Complex64;

pub use error::CliError;
use format::format_value;
use sweep::Family;

#[derive(Debug, Parser)]
#[command(name = "egf", version, about = "Generalized entanglement of formation for multi-qubit states")]
pub struct Cli {
    /// Absolute tolerance for pass/fail checks
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Suppress diagnostics on stderr
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// E_GF of a pure state file
    Pure(PureArgs),
    /// Upper bound on the E_GF of the mixed state averaged from an ensemble file
    Mixed(MixedArgs),
    /// Closed-form E_GF along a named one-parameter family, as CSV
    Sweep(SweepArgs),
    /// Catalog of benchmark states with known E_GF
    Known(KnownArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Closed form (3 qubits)
    Theorem1,
    /// Partial traces and eigensolver entropies (3 qubits)
    Definition1,
    /// Recursive sum over all reductions (any qubit count)
    Nparty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairEf {
    /// Conditional branches of the traced qubit
    Branches,
    /// Exact two-qubit roof through the concurrence
    Wootters,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Roof {
    /// Mixed reductions use the computational basis of the traced qubits
    TracedBasis,
    /// Mixed reductions are minimized over all decompositions
    ConvexRoof,
}

#[derive(Debug, Args)]
pub struct OptimizerArgs {
    /// Number of starts: the eigenbasis, any seed decompositions, then random ones
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    /// Objective evaluations per restart
    #[arg(long, default_value_t = 2000)]
    pub max_evals: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Ensemble size cap (default: rank squared)
    #[arg(long)]
    pub cardinality_cap: Option<usize>,
    /// Objective gain below which a descent sweep counts as stalled
    #[arg(long, default_value_t = 1e-8)]
    pub stall_tolerance: f64,
    /// Restarts for minimizations nested inside larger reductions
    #[arg(long, default_value_t = 8)]
    pub nested_restarts: usize,
    /// Hard cap on total objective evaluations
    #[arg(long)]
    pub eval_budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = Roof::TracedBasis)]
    pub roof: Roof,
}

impl OptimizerArgs {
    pub fn config(&self) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.restarts,
            max_evals: self.max_evals,
            seed: self.seed,
            cardinality_cap: self.cardinality_cap,
            tolerance: self.stall_tolerance,
            nested_restarts: self.nested_restarts,
            eval_budget: self.eval_budget,
            roof: match self.roof {
                Roof::TracedBasis => ReductionRoof::TracedBasis,
                Roof::ConvexRoof => ReductionRoof::ConvexRoof,
            },
            ..OptimizerConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct PureArgs {
    /// State file
    pub state: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Nparty)]
    pub method: Method,
    /// Also print every closed-form intermediate as name=value (3 qubits)
    #[arg(long)]
    pub report: bool,
    /// Pair entanglement of formation used by definition1
    #[arg(long, value_enum, default_value_t = PairEf::Branches)]
    pub pair_ef: PairEf,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Debug, Args)]
pub struct MixedArgs {
    /// Ensemble file
    pub ensemble: PathBuf,
    /// Exit with code 4 if the optimizer did not converge
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Number of grid points, endpoints included
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(2..))]
    pub points: u64,
    /// Output path (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KnownArgs {
    /// Print every catalog id
    #[arg(long, conflicts_with = "name", required_unless_present = "name")]
    pub list: bool,
    /// Check one catalog entry
    #[arg(long)]
    pub name: Option<String>,
    /// Single-qubit factor of the extended Bell states, as `re im re im`
    #[arg(long, num_args = 4, allow_negative_numbers = true, value_names = ["RE0", "IM0", "RE1", "IM1"])]
    pub chi: Option<Vec<f64>>,
}

/// Stdout text and exit code of a command, plus stderr diagnostics.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub diagnostics: Vec<String>,
    pub code: i32,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn require_three(psi: &PureState, what: &str) -> Result<TripartiteAmplitudes, CliError> {
    if psi.n() != 3 {
        return Err(CliError::Mismatch(format!("{what} needs a 3-qubit state, got {} qubits", psi.n())));
    }
    Ok(TripartiteAmplitudes::from_state(psi)?)
}

pub fn cmd_pure(args: &PureArgs) -> Result<Outcome, CliError> {
    let path = args.state.display().to_string();
    let psi = format::parse_state(&path, &read(&args.state)?)?;
    let value = match args.method {
        Method::Theorem1 => egf_theorem1(&require_three(&psi, "theorem1")?)?.egf,
        Method::Definition1 => {
            require_three(&psi, "definition1")?;
            let mode = match args.pair_ef {
                PairEf::Branches => PairEfMode::BranchDecomposition,
                PairEf::Wootters => PairEfMode::WoottersOracle,
            };
            egf_definition1(&psi, mode)?
        }
        Method::Nparty => egf_pure(&psi, &args.optimizer.config())?,
    };
    let mut stdout = format!("egf={}\n", format_value(value));
    if args.report {
        let report = egf_theorem1(&require_three(&psi, "--report")?)?;
        for (name, v) in report.fields() {
            if name != "egf" {
                stdout.push_str(&format!("{name}={}\n", format_value(v)));
            }
        }
    }
    Ok(Outcome {
        stdout,
        ..Outcome::default()
    })
}

pub fn cmd_mixed(args: &MixedArgs) -> Result<Outcome, CliError> {
    let path = args.ensemble.display().to_string();
    let ens = format::parse_ensemble(&path, &read(&args.ensemble)?)?;
    let result = egf_mixed_ensemble(&ens, &args.optimizer.config())?;
    let mut out = Outcome {
        stdout: format!(
            "egf_upper_bound={} converged={} restarts={}\n",
            format_value(result.best_value),
            result.converged,
            result.restarts_used
        ),
        ..Outcome::default()
    };
    if !result.converged {
        out.diagnostics
            .push("warning: a restart hit its evaluation limit before converging".to_string());
        if args.strict {
            out.code = CliError::BudgetExhausted.exit_code();
        }
    }
    Ok(out)
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<Outcome, CliError> {
    let rows = sweep::sweep(args.family, args.points as usize)?;
    let csv = sweep::to_csv(&rows);
    match &args.out {
        None => Ok(Outcome {
            stdout: csv,
            ..Outcome::default()
        }),
        Some(path) => {
            std::fs::write(path, csv).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            Ok(Outcome {
                diagnostics: vec![format!("wrote {} rows to {}", rows.len(), path.display())],
                ..Outcome::default()
            })
        }
    }
}

fn parse_chi(values: &[f64]) -> Result<PureState, CliError> {
    let amps = vec![Complex64::new(values[0], values[1]), Complex64::new(values[2], values[3])];
    PureState::new(amps).map_err(|e| CliError::Normalization(format!("--chi: {e}")))
}

pub fn cmd_known(args: &KnownArgs, tolerance: f64) -> Result<Outcome, CliError> {
    let chi = match &args.chi {
        Some(v) => parse_chi(v)?,
        None => catalog::default_chi(),
    };
    let entries = catalog::catalog(&chi)?;
    let mut stdout = String::new();
    if args.list {
        for k in &entries {
            stdout.push_str(&k.id);
            stdout.push('\n');
        }
        return Ok(Outcome {
            stdout,
            ..Outcome::default()
        });
    }
    let name = args.name.as_deref().unwrap_or_default();
    let entry = entries
        .iter()
        .find(|k| k.id == name)
        .ok_or_else(|| CliError::UnknownName(name.to_string()))?;
    stdout.push_str(&format!("id={}\n", entry.id));
    for (idx, z) in entry.state.amps().iter().enumerate() {
        stdout.push_str(&format!("amp_{idx:03b}={} {}\n", format_value(z.re), format_value(z.im)));
    }
    let computed = egf_theorem1(&TripartiteAmplitudes::from_state(&entry.state)?)?.egf;
    let pass = (computed - entry.expected).abs() <= tolerance;
    stdout.push_str(&format!(
        "expected={}\ncomputed={}\npass={pass}\n",
        format_value(entry.expected),
        format_value(computed)
    ));
    Ok(Outcome {
        stdout,
        ..Outcome::default()
    })
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Pure(a) => cmd_pure(a),
        Command::Mixed(a) => cmd_mixed(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Known(a) => cmd_known(a, cli.tolerance),
    }
}

/// Parses `args`, runs the command and writes its output. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            if !cli.quiet {
                for d in &outcome.diagnostics {
                    let _ = writeln!(stderr, "{d}");
                }
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
