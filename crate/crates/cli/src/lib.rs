//! Command-line front end for `torusdyn`.
//!
//! [`run`] is the whole program minus process plumbing: it parses argv,
//! executes one subcommand and returns the exit code together with what
//! should go to stdout and stderr. Reports are JSON documents tagged with
//! `"schema": 1`; `--tsv` switches the orbit-style commands to plain rows.

use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use torusdyn::{Error, Execution};

mod commands;
pub mod repro;
pub mod survey;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "torusdyn", version, about = "Dynamics of monomial maps of the torus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "tsv")]
    pub json: bool,
    /// Emit tab-separated rows instead of JSON.
    #[arg(long, global = true)]
    pub tsv: bool,
    /// Bits of precision for the dynamical degree enclosure.
    #[arg(long, global = true, value_name = "BITS")]
    pub precision_bits: Option<u32>,
    /// Run without the thread pool.
    #[arg(long, global = true)]
    pub sequential: bool,
    /// Add wall-clock timing to the report (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Args, Debug, Clone)]
pub struct MatrixArg {
    /// Exponent matrix, rows separated by `;` (e.g. "0 1; 1 1") or JSON.
    #[arg(long, short = 'm', allow_hyphen_values = true)]
    pub matrix: String,
}

#[derive(Args, Debug, Clone)]
pub struct MatrixPointArgs {
    #[command(flatten)]
    pub matrix: MatrixArg,
    /// Rational point on the torus, e.g. "2,3/5,-1".
    #[arg(long, short = 'p', allow_hyphen_values = true)]
    pub point: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Spectral data, degree growth and the zero-height subgroup of a map.
    Analyze {
        #[command(flatten)]
        m: MatrixArg,
        #[arg(short = 'n', long = "iterations", default_value_t = 20)]
        iterations: usize,
    },
    /// Degree sequence deg(φ^n) for n = 1..=N.
    Degrees {
        #[command(flatten)]
        m: MatrixArg,
        #[arg(short = 'n', long = "iterations", default_value_t = 10)]
        iterations: usize,
    },
    /// Exact heights along the orbit of a point.
    Orbit {
        #[command(flatten)]
        mp: MatrixPointArgs,
        #[arg(short = 'n', long = "iterations", default_value_t = 20)]
        iterations: usize,
    },
    /// Arithmetic degree of a point: exact value, numeric estimate, spectrum.
    Alpha {
        #[command(flatten)]
        mp: MatrixPointArgs,
        #[arg(short = 'n', long = "iterations", default_value_t = 40)]
        iterations: usize,
    },
    /// Canonical height estimate with residue-class limits.
    Hhat {
        #[command(flatten)]
        mp: MatrixPointArgs,
        #[arg(short = 'n', long = "iterations", default_value_t = 40)]
        iterations: usize,
    },
    /// Positivity of the canonical height: certificate and decision.
    Certify {
        #[command(flatten)]
        mp: MatrixPointArgs,
        #[arg(short = 'n', long = "iterations", default_value_t = 40)]
        iterations: usize,
    },
    /// Whether the orbit of a point is finite.
    Preper {
        #[command(flatten)]
        mp: MatrixPointArgs,
        /// Maximum number of exact steps for cycle detection.
        #[arg(long, default_value_t = torusdyn::dynamics::DEFAULT_CYCLE_CAP)]
        cap: usize,
        #[arg(short = 'n', long = "iterations", default_value_t = 20)]
        iterations: usize,
    },
    /// Exact orbit of a rational map given by coordinate functions.
    GenericOrbit {
        /// Coordinate functions, e.g. "y, z, x + y*z".
        #[arg(long)]
        map: String,
        /// Inverse map, for two-sided height estimates.
        #[arg(long)]
        inverse: Option<String>,
        /// Affine starting point; zero coordinates are allowed.
        #[arg(long, short = 'p', allow_hyphen_values = true)]
        point: String,
        #[arg(short = 'n', long = "iterations", default_value_t = 10)]
        iterations: usize,
        /// Degree used to normalise heights, h_n / δ^n.
        #[arg(long)]
        delta: Option<f64>,
        /// Include the orbit points in the report.
        #[arg(long)]
        points: bool,
        /// Abort once the coordinates of one point need more bits than this.
        #[arg(long, default_value_t = torusdyn::dynamics::DEFAULT_GENERIC_BUDGET_BITS)]
        budget_bits: u64,
    },
    /// Re-run the registered worked examples and report pass/fail.
    Repro {
        /// Case ids or aliases; all cases when empty.
        ids: Vec<String>,
        /// List the registered cases without running them.
        #[arg(long)]
        list: bool,
    },
    /// Property checks over random nonsingular matrices.
    Survey {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        /// Entries are drawn from [-bound, bound].
        #[arg(long, default_value_t = 3)]
        bound: i64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(short = 'n', long = "iterations", default_value_t = 20)]
        iterations: usize,
    },
}

/// What a finished invocation wants written out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Failure of a command, already classified by exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
    Exhausted(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Exhausted(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Exhausted(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_resource_exhaustion() {
            CliError::Exhausted(e.to_string())
        } else if matches!(e, Error::Parse(_) | Error::InvalidInput(_) | Error::DimensionMismatch { .. }) {
            CliError::Usage(e.to_string())
        } else {
            CliError::Domain(e.to_string())
        }
    }
}

/// Body of a command before it is wrapped in the report envelope.
pub(crate) struct CommandOutput {
    pub inputs: Value,
    pub results: Value,
    pub tsv: Option<String>,
    /// Some(false) when a pass/fail expectation failed.
    pub passed: Option<bool>,
}

pub(crate) struct Ctx {
    pub exec: Execution,
    pub precision_bits: u32,
}

/// Parse `args` (including the program name) and execute.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let g = &cli.global;
    let ctx = Ctx {
        exec: if g.sequential { Execution::Sequential } else { Execution::Parallel },
        precision_bits: g.precision_bits.unwrap_or(torusdyn::poly::DEFAULT_PRECISION),
    };
    let started = Instant::now();
    let out = match commands::dispatch(&cli.command, &ctx) {
        Ok(o) => o,
        Err(e) => {
            return Outcome { code: e.code(), stdout: String::new(), stderr: format!("error: {}\n", e.message()) };
        }
    };
    if g.tsv {
        if let Some(t) = out.tsv {
            return Outcome { code: 0, stdout: t, stderr: String::new() };
        }
        return Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: --tsv is not supported by `{}`\n", command_name(&cli.command)),
        };
    }
    let mut report = json!({
        "schema": SCHEMA_VERSION,
        "command": command_name(&cli.command),
        "inputs": out.inputs,
        "results": out.results,
        "precision": {
            "bits": ctx.precision_bits,
            "cap": torusdyn::poly::precision_cap(),
        },
        "execution": ctx.exec,
    });
    if let Some(p) = out.passed {
        report["passed"] = Value::Bool(p);
    }
    if g.timing {
        report["timing"] = json!({ "elapsed_ms": started.elapsed().as_secs_f64() * 1e3 });
    }
    let mut stdout = serde_json::to_string_pretty(&report).expect("report serializes");
    stdout.push('\n');
    Outcome { code: 0, stdout, stderr: String::new() }
}

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Analyze { .. } => "analyze",
        Command::Degrees { .. } => "degrees",
        Command::Orbit { .. } => "orbit",
        Command::Alpha { .. } => "alpha",
        Command::Hhat { .. } => "hhat",
        Command::Certify { .. } => "certify",
        Command::Preper { .. } => "preper",
        Command::GenericOrbit { .. } => "generic-orbit",
        Command::Repro { .. } => "repro",
        Command::Survey { .. } => "survey",
    }
}
