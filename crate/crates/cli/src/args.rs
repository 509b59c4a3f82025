//! Command-line grammar and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use genent::fit::FitModel;
use genent::operators::Spin;

use crate::commands::*;
use crate::error::{spec, Result};
use crate::output::emit_json;
use crate::spec::{merge, Model, Range, SweepConfig, SweepFlags};

#[derive(Debug, Parser)]
#[command(
    name = "genent",
    version,
    about = "Relative purity, LMG and XY-chain sweeps, and exponent fits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build named states.
    #[command(subcommand)]
    State(StateCommand),
    /// Evaluate purities of a state.
    #[command(subcommand)]
    Purity(PurityCommand),
    /// Lipkin-Meshkov-Glick model.
    #[command(subcommand)]
    Lmg(LmgCommand),
    /// Anisotropic XY chain in a transverse field.
    #[command(subcommand)]
    Xy(XyCommand),
    /// Exact-diagonalization cross-checks.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Fit a power law or logarithm to two CSV columns.
    Fit(FitArgs),
}

#[derive(Debug, Subcommand)]
pub enum StateCommand {
    /// Emit a state's nonzero amplitudes as JSON (index, re, im).
    Make(MakeArgs),
}

#[derive(Debug, Args)]
pub struct MakeArgs {
    #[arg(long, value_enum)]
    pub kind: MakeKind,
    #[arg(long)]
    pub n: usize,
    /// Site spin, e.g. 0.5, 1/2 or 1.
    #[arg(long = "s", value_parser = parse_spin)]
    pub spin: Option<Spin>,
    /// Comma-separated real amplitudes of the single-site state (product).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub local: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum PurityCommand {
    /// Relative purity of a JSON state with respect to an observable set.
    Compute(PurityArgs),
}

#[derive(Debug, Args)]
pub struct PurityArgs {
    /// State JSON as written by `state make`; `-` reads stdin.
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, value_enum, default_value = "local")]
    pub basis: BasisChoice,
    /// Include the per-generator contributions K⟨A⟩².
    #[arg(long)]
    pub per_generator: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CommonSweep {
    /// TOML sweep config; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "n")]
    pub n: Option<usize>,
    /// Comma-separated output columns (default: all).
    #[arg(long, value_delimiter = ',')]
    pub columns: Option<Vec<String>>,
    /// CSV path; stdout when omitted (no sidecar is written then).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum LmgCommand {
    /// Sweep V and W; rows are W-major.
    Sweep(LmgSweepArgs),
}

#[derive(Debug, Args)]
pub struct LmgSweepArgs {
    /// `start:stop:steps` or a single value.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub v: Option<Range>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub w: Option<Range>,
    /// Minimum slope jump flagged as a first-order transition.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[command(flatten)]
    pub common: CommonSweep,
}

#[derive(Debug, Subcommand)]
pub enum XyCommand {
    /// Sweep gamma and g; rows are gamma-major.
    Sweep(XySweepArgs),
    /// Distribution of the fermion number in the ground state, as CSV (n, prob).
    Dist(XyDistArgs),
}

#[derive(Debug, Args)]
pub struct XySweepArgs {
    #[arg(long, value_parser = parse_range)]
    pub gamma: Option<Range>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub g: Option<Range>,
    #[command(flatten)]
    pub common: CommonSweep,
}

#[derive(Debug, Args)]
pub struct XyDistArgs {
    #[arg(long = "n")]
    pub n: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub g: f64,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// ED of the qubit chain (even-parity sector) against the analytic solution.
    Xy(OracleXyArgs),
    /// ED of the N-qubit LMG Hamiltonian against the collective-spin solver.
    Lmg(OracleLmgArgs),
}

#[derive(Debug, Args)]
pub struct OracleXyArgs {
    #[arg(long = "n")]
    pub n: usize,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub g: Range,
    #[arg(long, value_parser = parse_range)]
    pub gamma: Range,
    #[arg(long, value_delimiter = ',')]
    pub columns: Option<Vec<String>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleLmgArgs {
    #[arg(long = "n")]
    pub n: usize,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub v: Range,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub w: Range,
    /// Report ground states that leave the J = N/2 sector instead of failing.
    #[arg(long)]
    pub unchecked: bool,
    #[arg(long, value_delimiter = ',')]
    pub columns: Option<Vec<String>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Power,
    Log,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub csv: PathBuf,
    #[arg(long = "x-col")]
    pub x_col: String,
    #[arg(long = "y-col")]
    pub y_col: String,
    /// Inclusive `lo:hi` window on the (shifted) abscissa.
    #[arg(long, allow_hyphen_values = true)]
    pub window: String,
    #[arg(long, value_enum, default_value = "power")]
    pub model: ModelArg,
    /// Fit against `|x - center|`, e.g. the distance to a critical point.
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<f64>,
    /// Constant added to the ordinate before fitting.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub y_offset: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_range(s: &str) -> std::result::Result<Range, String> {
    s.parse().map_err(|e: crate::error::CliError| e.to_string())
}

fn parse_spin(s: &str) -> std::result::Result<Spin, String> {
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| format!("bad spin '{s}'"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("bad spin '{s}'"))?;
            a / b
        }
        None => s.trim().parse().map_err(|_| format!("bad spin '{s}'"))?,
    };
    Spin::from_f64(value).map_err(|e| e.to_string())
}

fn load_config(path: &Option<PathBuf>) -> Result<Option<SweepConfig>> {
    path.as_deref().map(SweepConfig::load).transpose()
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::State(StateCommand::Make(a)) => {
            let m = MakeSpec {
                kind: a.kind,
                n: a.n,
                spin: a.spin,
                local: a.local,
                g: a.g,
                gamma: a.gamma,
            };
            run_make(&m, a.out.as_deref())
        }
        Command::Purity(PurityCommand::Compute(a)) => {
            let state = StateFile::load(&a.state)?;
            emit_json(
                &compute_purity(&state, a.basis, a.per_generator)?,
                a.out.as_deref(),
            )
        }
        Command::Lmg(LmgCommand::Sweep(a)) => {
            let flags = SweepFlags {
                n: a.common.n,
                grids: vec![("v", a.v), ("w", a.w)],
                columns: a.common.columns,
                out: a.common.out,
                threshold: a.threshold,
            };
            run_sweep(&merge(Model::Lmg, load_config(&a.common.config)?, flags)?)
        }
        Command::Xy(XyCommand::Sweep(a)) => {
            let flags = SweepFlags {
                n: a.common.n,
                grids: vec![("gamma", a.gamma), ("g", a.g)],
                columns: a.common.columns,
                out: a.common.out,
                threshold: None,
            };
            run_sweep(&merge(Model::Xy, load_config(&a.common.config)?, flags)?)
        }
        Command::Xy(XyCommand::Dist(a)) => run_dist(
            &DistSpec {
                n: a.n,
                g: a.g,
                gamma: a.gamma,
            },
            a.out.as_deref(),
        ),
        Command::Oracle(OracleCommand::Xy(a)) => run_oracle(
            &OracleSpec {
                model: Model::Xy,
                n: a.n,
                first: a.g,
                second: a.gamma,
                columns: a.columns.unwrap_or_default(),
                unchecked: false,
            },
            a.out.as_deref(),
        ),
        Command::Oracle(OracleCommand::Lmg(a)) => run_oracle(
            &OracleSpec {
                model: Model::Lmg,
                n: a.n,
                first: a.v,
                second: a.w,
                columns: a.columns.unwrap_or_default(),
                unchecked: a.unchecked,
            },
            a.out.as_deref(),
        ),
        Command::Fit(a) => {
            let f = FitSpec {
                csv: a.csv,
                x: a.x_col,
                y: a.y_col,
                window: parse_window(&a.window)?,
                model: match a.model {
                    ModelArg::Power => FitModel::Power,
                    ModelArg::Log => FitModel::Log,
                },
                center: a.center,
                y_offset: a.y_offset,
            };
            if !f.y_offset.is_finite() || f.center.is_some_and(|c| !c.is_finite()) {
                return Err(spec("center and y-offset must be finite"));
            }
            emit_json(&run_fit_spec(&f)?, a.out.as_deref())
        }
    }
}
