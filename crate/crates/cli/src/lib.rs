//! Command-line front end for `nct-spin-core`.
//!
//! Settings resolve in three layers: built-in defaults, then an optional
//! `--config` file of `key = value` lines, then explicit flags. Exit codes are
//! 0 when every check passes, 1 when a check fails and 2 for usage or
//! parameter errors.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::CommandOutput;
pub use config::{Command, OutputFormat, RunConfig};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "NCT_SPIN_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] nct_spin_core::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

#[derive(Debug, Parser)]
#[command(name = "nct-spin", version, about = "Spectral triples on the noncommutative torus: axiom checks, Dirac spectra, spin-structure classification")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Run the axiom suite
    Verify(Flags),
    /// Dirac spectrum tables
    Spectrum(Flags),
    /// Verdict matrix of the four real structures
    Classify(Flags),
    /// Orientation (Hochschild cycle) condition
    Hochschild(Flags),
    /// Eigenvalue counting trend across truncations
    Resolvent(Flags),
}

#[derive(Debug, Clone, Default, Args)]
struct Flags {
    /// Flat key=value file; explicit flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Window half-width [default: 6]
    #[arg(long = "n-max")]
    n_max: Option<String>,
    /// Spin structure such as 0,0 or 0,1/2 (repeatable)
    #[arg(long)]
    spin: Vec<String>,
    /// All four spin structures
    #[arg(long)]
    all_spins: bool,
    /// Deformation angle in turns [default: (√5-1)/2]
    #[arg(long = "lambda-turns", visible_alias = "lambda", allow_hyphen_values = true)]
    lambda_turns: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    psi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// Complex, e.g. 1, i, 0.5-2i [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    tau1: Option<String>,
    /// [default: i]
    #[arg(long, allow_hyphen_values = true)]
    tau2: Option<String>,
    /// [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    tau0: Option<String>,
    /// [default: 0]
    #[arg(long = "eps-const", allow_hyphen_values = true)]
    eps_const: Option<String>,
    /// Residual tolerance [default: 1e-12]
    #[arg(long)]
    tol: Option<String>,
    /// Mask depth override (hochschild, counterexample)
    #[arg(long)]
    depth: Option<String>,
    /// Directory receiving the JSON report and CSV tables
    #[arg(long)]
    out: Option<String>,
    /// json, csv or text [default: json]
    #[arg(long)]
    format: Option<String>,
    /// Also evaluate the Hochschild condition
    #[arg(long)]
    hochschild: bool,
    /// Also build the unconstrained counterexample (classify)
    #[arg(long)]
    counterexample: bool,
    /// Coefficient window K of the intertwiner search [default: 3]
    #[arg(long)]
    k: Option<String>,
    /// Truncations compared by resolvent [default: 4,6,8]
    #[arg(long)]
    windows: Option<String>,
    /// Radii of the counting function [default: 1,1.5,2,2.5]
    #[arg(long)]
    radii: Option<String>,
}

impl Sub {
    fn split(self) -> (Command, Flags) {
        match self {
            Sub::Verify(f) => (Command::Verify, f),
            Sub::Spectrum(f) => (Command::Spectrum, f),
            Sub::Classify(f) => (Command::Classify, f),
            Sub::Hochschild(f) => (Command::Hochschild, f),
            Sub::Resolvent(f) => (Command::Resolvent, f),
        }
    }
}

fn resolve(command: Command, f: Flags) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::new(command);
    if let Some(path) = &f.config {
        cfg.apply_file(path)?;
    }
    let pairs = [
        ("n_max", &f.n_max),
        ("lambda_turns", &f.lambda_turns),
        ("phi", &f.phi),
        ("psi", &f.psi),
        ("theta", &f.theta),
        ("tau1", &f.tau1),
        ("tau2", &f.tau2),
        ("tau0", &f.tau0),
        ("eps_const", &f.eps_const),
        ("tol", &f.tol),
        ("depth", &f.depth),
        ("out", &f.out),
        ("format", &f.format),
        ("k", &f.k),
        ("windows", &f.windows),
        ("radii", &f.radii),
    ];
    for (key, value) in pairs {
        if let Some(v) = value {
            cfg.apply(key, v)?;
        }
    }
    if !f.spin.is_empty() {
        cfg.apply("spin", &f.spin.join(";"))?;
    }
    if f.all_spins {
        cfg.apply("all_spins", "true")?;
    }
    cfg.hochschild |= f.hochschild;
    cfg.counterexample |= f.counterexample;
    Ok(cfg)
}

/// Runs `cfg` on a pool sized by [`THREADS_ENV`] when set.
pub fn execute(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| match cfg.command {
        Command::Verify => commands::cmd_verify(cfg),
        Command::Spectrum => commands::cmd_spectrum(cfg),
        Command::Classify => commands::cmd_classify(cfg),
        Command::Hochschild => commands::cmd_hochschild(cfg),
        Command::Resolvent => commands::cmd_resolvent(cfg),
    })
}

/// Writes `<command>.json` and any extra artifacts into `cfg.out`.
pub fn write_outputs(cfg: &RunConfig, output: &CommandOutput) -> Result<(), CliError> {
    let Some(dir) = &cfg.out else { return Ok(()) };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    std::fs::write(dir.join(format!("{}.json", cfg.command.name())), &output.json).map_err(io)?;
    for (name, body) in &output.files {
        std::fs::write(dir.join(name), body).map_err(io)?;
    }
    Ok(())
}

/// Result of one invocation as the binary would report it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: String) -> Self {
        Self {
            exit_code: 2,
            stdout: String::new(),
            stderr: msg,
        }
    }
}

/// Parses `args` (program name first), runs the command and writes outputs.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    exit_code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome::usage(text)
            };
        }
    };
    let (command, flags) = cli.command.split();
    let result = resolve(command, flags).and_then(|cfg| {
        let output = execute(&cfg)?;
        write_outputs(&cfg, &output)?;
        Ok((cfg, output))
    });
    match result {
        Ok((cfg, output)) => Outcome {
            exit_code: output.exit_code,
            stdout: output.stdout(cfg.format).to_string(),
            stderr: String::new(),
        },
        Err(e) => Outcome::usage(format!("error: {e}\n")),
    }
}
