//! Command-line front end for `unitary-model`: JSON instance files in,
//! JSON reports out.
//!
//! Every command produces a [`Report`] whose status is `pass` when no entry
//! failed, `unknown` when some probabilistic check found no evidence either
//! way, and `fail` otherwise. Reports contain no timing or other
//! run-dependent data, so the same inputs and seed give byte-identical output.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use unitary_model::model::{summarize, Check, CheckStatus};
use unitary_model::numlin::Tolerance;

mod commands;
mod generate;
pub mod io;
pub mod suites;

pub use generate::GenerateKind;
pub use io::{Files, BUNDLED};

/// Exit code for a report with at least one failed entry.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for unreadable input or invalid arguments.
pub const EXIT_USAGE: i32 = 2;
/// Exit code for a report with unknown entries but no failures.
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] unitary_model::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_USAGE
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FactorMode {
    Path,
    Cylinder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LiftMode {
    TcofFib,
    CofTfib,
    Generator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Mc,
    Monoidal,
    Simplicial,
    Adjunctions,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Mc => "mc",
            Suite::Monoidal => "monoidal",
            Suite::Simplicial => "simplicial",
            Suite::Adjunctions => "adjunctions",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct GenerateParams {
    #[arg(long, value_enum)]
    pub kind: GenerateKind,
    /// Object count (groupoids) or maximum object count (functor targets).
    #[arg(long, default_value_t = 2)]
    pub objects: usize,
    /// Order of the vertex groups of a generated groupoid.
    #[arg(long, default_value_t = 2)]
    pub order: usize,
    /// Object dimensions of a generated category, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Validate a category, functor, groupoid or simplicial-set file.
    Validate { input: PathBuf },
    /// Factor a functor through the path object or the mapping cylinder.
    Factorize {
        #[arg(long, value_enum)]
        mode: FactorMode,
        input: PathBuf,
        /// Extra path objects `[{x, u, y}]` to materialize (path mode only).
        triples: Option<PathBuf>,
    },
    /// Solve a lifting square, or lift a unitary along a functor.
    Lift {
        #[arg(long, value_enum)]
        mode: LiftMode,
        input: PathBuf,
    },
    /// Maximal tensor product of two categories.
    Tensor { left: PathBuf, right: PathBuf },
    /// The groupoid C*-category of a finite groupoid.
    GroupoidCstar { input: PathBuf },
    /// Presentation and normal form of the fundamental groupoid of a simplicial set.
    FundamentalGroupoid { input: PathBuf },
    /// Nerve of a finite groupoid, truncated at `--dim-cap`.
    Nerve { input: PathBuf },
    /// The C*-category of the fundamental groupoid of a simplicial set.
    Pi { input: PathBuf },
    /// Run a verification suite on bundled and seeded random instances.
    VerifyAxioms {
        #[arg(long, value_enum)]
        suite: Suite,
    },
    /// Generate a random instance.
    Generate(GenerateParams),
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Validate { .. } => "validate".into(),
            Command::Factorize { mode, .. } => format!("factorize --mode {}", value_name(*mode)),
            Command::Lift { mode, .. } => format!("lift --mode {}", value_name(*mode)),
            Command::Tensor { .. } => "tensor".into(),
            Command::GroupoidCstar { .. } => "groupoid-cstar".into(),
            Command::FundamentalGroupoid { .. } => "fundamental-groupoid".into(),
            Command::Nerve { .. } => "nerve".into(),
            Command::Pi { .. } => "pi".into(),
            Command::VerifyAxioms { suite } => format!("verify-axioms --suite {}", suite.name()),
            Command::Generate(p) => format!("generate --kind {}", value_name(p.kind)),
        }
    }
}

fn value_name(v: impl ValueEnum) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "umodel",
    version,
    about = "Finite C*-categories and the unitary model structure"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Absolute and relative tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Coset limit when enumerating vertex groups.
    #[arg(long, global = true, default_value_t = unitary_model::gpd::COSET_BUDGET)]
    pub coset_budget: usize,
    /// Highest simplex dimension built by `nerve`.
    #[arg(long, global = true, default_value_t = 2)]
    pub dim_cap: usize,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Write the computed instance (category, functor, groupoid, ...) here.
    #[arg(long, global = true)]
    pub artifact: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub tolerance: Tolerance,
    pub coset_budget: usize,
    pub dim_cap: usize,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            seed: 1,
            tolerance: Tolerance::default(),
            coset_budget: unitary_model::gpd::COSET_BUDGET,
            dim_cap: 2,
        }
    }
}

impl TryFrom<&Cli> for RunConfig {
    type Error = CliError;

    fn try_from(cli: &Cli) -> CliResult<Self> {
        if cli.coset_budget == 0 {
            return Err(CliError::Usage("--coset-budget must be positive".into()));
        }
        let tolerance = Tolerance::uniform(cli.tolerance)
            .map_err(|e| CliError::Usage(format!("--tolerance {}: {e}", cli.tolerance)))?;
        Ok(RunConfig {
            command: cli.command.clone(),
            seed: cli.seed,
            tolerance,
            coset_budget: cli.coset_budget,
            dim_cap: cli.dim_cap,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub status: CheckStatus,
    pub entries: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
}

impl Report {
    pub fn new(command: impl Into<String>, entries: Vec<Check>, result: Option<Value>) -> Self {
        Report {
            command: command.into(),
            status: summarize(&entries),
            entries,
            result,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            CheckStatus::Pass => 0,
            CheckStatus::Fail => EXIT_FAIL,
            CheckStatus::Unknown => EXIT_UNKNOWN,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Runs one command. Input files are resolved against the working
/// directory, falling back to the bundled copy of the same name.
pub fn run(config: &RunConfig) -> CliResult<Report> {
    run_with(config, &Files::working_dir())
}

pub fn run_with(config: &RunConfig, files: &Files) -> CliResult<Report> {
    let name = config.command.name();
    let (entries, result) = match &config.command {
        Command::Validate { input } => commands::validate(config, files, input)?,
        Command::Factorize { mode, input, triples } => {
            commands::factorize(config, files, *mode, input, triples.as_deref())?
        }
        Command::Lift { mode, input } => commands::lift(config, files, *mode, input)?,
        Command::Tensor { left, right } => commands::tensor(config, files, left, right)?,
        Command::GroupoidCstar { input } => commands::groupoid_cstar(config, files, input)?,
        Command::FundamentalGroupoid { input } => commands::fundamental(config, files, input)?,
        Command::Nerve { input } => commands::nerve(config, files, input)?,
        Command::Pi { input } => commands::pi(config, files, input)?,
        Command::VerifyAxioms { suite } => (suites::run_suite(*suite, config)?, None),
        Command::Generate(params) => generate::generate(config, params)?,
    };
    Ok(Report::new(name, entries, result))
}
