//! Command-line front end: single filtered solves, refinement sweeps, and the
//! tables and figure data of the worked examples.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 ran but the outcome is an
//! empty window, an empty selection or an undetermined sweep, 64 bad usage.

pub mod report;
pub mod reproduce;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::filter::{
    sweep, Policy, ReferencePolicy, SolveStatus, SweepOptions, SweepStatus, TrialFamily,
    DEFAULT_STABILIZATION_TOL,
};
use crate::galerkin::Interval;
use crate::models::{Model, Refinement};
use report::{record_table, Format, Table};
use reproduce::{run_schedule, FigureId, Setup, TableId};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_UNDETERMINED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "spectral-filter", version, about = "Pollution-free eigenvalue approximation in spectral gaps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One filtered solve at a single refinement.
    Solve {
        #[command(flatten)]
        run: RunArgs,
        /// Fourier modes each side (model1).
        #[arg(long)]
        k: Option<usize>,
        /// Mesh size as 1/N (model2, model3).
        #[arg(long)]
        h: Option<String>,
    },
    /// The filter along a schedule of refinements.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated list: n values (model1) or 1/N meshes.
        #[arg(long, value_delimiter = ',', required = true)]
        schedule: Vec<String>,
        /// Upgrade the reference space up to this level when the head of
        /// sigma_P collapses, saturates or fails to settle.
        #[arg(long)]
        escalate_to: Option<String>,
        /// Absolute tolerance for head stabilization.
        #[arg(long, default_value_t = DEFAULT_STABILIZATION_TOL)]
        stab_tol: f64,
    },
    /// Computed against published table values.
    Table {
        which: TableId,
        /// Finest mesh to include, as 1/N.
        #[arg(long, default_value = "1/256")]
        finest: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Plottable columns for one of the figures.
    FigureData {
        which: FigureId,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Decimal places for every number.
    #[arg(long, default_value_t = 8)]
    pub precision: usize,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub model: Model,
    /// Interval endpoints A B; defaults to the model's worked example.
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    pub interval: Option<Vec<f64>>,
    /// Reference space for model1, in modes each side.
    #[arg(long, default_value_t = 0)]
    pub ref_k: usize,
    /// Reference mesh for model2 and model3.
    #[arg(long, default_value = "1/2")]
    pub ref_h: String,
    /// auto | dim=D | threshold=T
    #[arg(long, default_value = "auto")]
    pub policy: Policy,
    /// Add the subspace gaps to the exact eigenspace where it is known.
    #[arg(long)]
    pub diagnostics: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl clap::builder::ValueParserFactory for Model {
    type Parser = clap::builder::ValueParser;
    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<Model>())
    }
}

impl clap::builder::ValueParserFactory for Policy {
    type Parser = clap::builder::ValueParser;
    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<Policy>())
    }
}

/// Failure classes, mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn level(model: Model, text: &str) -> Result<Refinement, Failure> {
    let level = match model {
        Model::Model1 => {
            let n = text
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("expected an odd n for model1, got {text:?}")))?;
            Refinement::from_n(n).map_err(usage)?
        }
        _ => Refinement::parse_mesh(text).map_err(usage)?,
    };
    Ok(level)
}

impl RunArgs {
    fn setup(&self) -> Result<Setup, Failure> {
        let example = match self.model {
            Model::Model1 => reproduce::model1_setup(),
            Model::Model2 => reproduce::model2_setup(),
            Model::Model3 => reproduce::model3_gap_setup(),
        };
        let delta = match &self.interval {
            Some(v) => Interval::new(v[0], v[1]).map_err(usage)?,
            None => example.delta,
        };
        let reference = match self.model {
            Model::Model1 => Refinement::Modes(self.ref_k),
            _ => Refinement::parse_mesh(&self.ref_h).map_err(usage)?,
        };
        Ok(Setup {
            model: self.model,
            delta,
            reference,
            policy: self.policy,
        })
    }
}

fn emit(table: &Table, output: &OutputArgs) -> Result<(), Failure> {
    match &output.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(&mut w, output.format, output.precision)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write(&mut w, output.format, output.precision)?;
        }
    }
    Ok(())
}

fn execute(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Solve { run, k, h } => {
            let setup = run.setup()?;
            let level = match (setup.model, k, h) {
                (Model::Model1, Some(k), None) => Refinement::Modes(k),
                (Model::Model1, _, _) => return Err(Failure::Usage("model1 takes --k".into())),
                (_, None, Some(h)) => level(setup.model, &h)?,
                _ => return Err(Failure::Usage(format!("{} takes --h", setup.model))),
            };
            setup.model.inclusion(&setup.reference, &level).map_err(usage)?;
            let records = run_schedule(&setup, &[level], run.diagnostics)?;
            emit(&record_table(&records, true), &run.output)?;
            Ok(match records[0].status {
                SolveStatus::Solved => EXIT_OK,
                SolveStatus::EmptyWindow => {
                    eprintln!("empty window: no Galerkin eigenvalue in {}", setup.delta);
                    EXIT_UNDETERMINED
                }
                SolveStatus::EmptySelection => {
                    eprintln!("empty filtered subspace");
                    EXIT_UNDETERMINED
                }
            })
        }
        Command::Sweep {
            run,
            schedule,
            escalate_to,
            stab_tol,
        } => {
            let setup = run.setup()?;
            let schedule = schedule
                .iter()
                .map(|s| level(setup.model, s))
                .collect::<Result<Vec<_>, _>>()?;
            let reference_policy = match escalate_to {
                Some(max) => ReferencePolicy::Escalate {
                    start: setup.reference,
                    max: level(setup.model, &max)?,
                },
                None => ReferencePolicy::Fixed(setup.reference),
            };
            if !(stab_tol > 0.0 && stab_tol.is_finite()) {
                return Err(usage(Error::InvalidTolerance(stab_tol)));
            }
            for lvl in &schedule {
                setup.model.inclusion(&setup.reference, lvl).map_err(usage)?;
            }
            for pair in schedule.windows(2) {
                if pair[0] == pair[1] {
                    return Err(Failure::Usage(format!("{} repeated in schedule", pair[0])));
                }
                setup.model.inclusion(&pair[0], &pair[1]).map_err(usage)?;
            }
            let report = sweep(
                &setup.model,
                setup.delta,
                &schedule,
                &reference_policy,
                setup.policy,
                SweepOptions {
                    stabilization_tol: stab_tol,
                    diagnostics: run.diagnostics,
                },
            )?;
            emit(&record_table(&report.records, false), &run.output)?;
            for e in &report.escalations {
                eprintln!("reference {} -> {} ({:?})", e.from, e.to, e.reason);
            }
            Ok(match report.status {
                SweepStatus::Stabilized { head_count } => {
                    eprintln!("stabilized: {head_count} nonzero eigenvalue(s), reference {}", report.reference);
                    EXIT_OK
                }
                SweepStatus::Undetermined => {
                    eprintln!("undetermined: sigma_P did not settle, reference {}", report.reference);
                    EXIT_UNDETERMINED
                }
            })
        }
        Command::Table {
            which,
            finest,
            output,
        } => {
            let Refinement::Mesh(finest) = Refinement::parse_mesh(&finest).map_err(usage)? else {
                unreachable!("meshes parse to meshes")
            };
            emit(&which.table(finest)?, &output)?;
            Ok(EXIT_OK)
        }
        Command::FigureData { which, output } => {
            emit(&which.table()?, &output)?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            EXIT_FAILURE
        }
    }
}
