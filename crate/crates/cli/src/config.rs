//! Run configuration: defaults, `key=value` files and flag overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nct_spin_core::{PhaseAngle, SpinStructure, C64};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Verify,
    Spectrum,
    Classify,
    Hochschild,
    Resolvent,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Verify => "verify",
            Self::Spectrum => "spectrum",
            Self::Classify => "classify",
            Self::Hochschild => "hochschild",
            Self::Resolvent => "resolvent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "text" | "txt" => Ok(Self::Text),
            other => Err(format!("unknown format {other:?} (json, csv or text)")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Json => "json",
            Self::Csv => "csv",
            Self::Text => "text",
        })
    }
}

/// Fully resolved settings of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n_max: usize,
    pub spins: Vec<SpinStructure>,
    /// `λ = exp(2πi·lambda_turns)`.
    pub lambda_turns: f64,
    pub phi: f64,
    pub psi: f64,
    pub theta: f64,
    pub tau1: C64,
    pub tau2: C64,
    pub tau0: C64,
    pub eps_const: C64,
    pub tolerance: f64,
    /// Overrides the mask depth of the Hochschild check and the counterexample.
    pub depth: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub hochschild: bool,
    pub counterexample: bool,
    /// Coefficient window `K` of the intertwiner search.
    pub k_window: usize,
    /// Truncations compared by `resolvent`.
    pub windows: Vec<usize>,
    pub radii: Vec<f64>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            n_max: 6,
            spins: vec![SpinStructure::default()],
            lambda_turns: PhaseAngle::golden().turns(),
            phi: 0.0,
            psi: 0.0,
            theta: 0.0,
            tau1: C64::new(1.0, 0.0),
            tau2: C64::new(0.0, 1.0),
            tau0: C64::new(0.0, 0.0),
            eps_const: C64::new(0.0, 0.0),
            tolerance: nct_spin_core::DEFAULT_TOLERANCE,
            depth: None,
            out: None,
            format: OutputFormat::Json,
            hochschild: false,
            counterexample: false,
            k_window: 3,
            windows: vec![4, 6, 8],
            radii: vec![1.0, 1.5, 2.0, 2.5],
        }
    }

    pub fn lambda(&self) -> PhaseAngle {
        PhaseAngle::new(self.lambda_turns)
    }

    /// Sets one setting from its textual form. Keys accept `-` or `_`.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let value = value.trim();
        let bad = |what: &str| CliError::Usage(format!("invalid value {value:?} for {key}: {what}"));
        match key.trim().replace('-', "_").as_str() {
            "n_max" => self.n_max = value.parse().map_err(|_| bad("expected a positive integer"))?,
            "spin" => {
                self.spins = if value.eq_ignore_ascii_case("all") {
                    SpinStructure::ALL.to_vec()
                } else {
                    value
                        .split(';')
                        .map(|s| s.parse::<SpinStructure>().map_err(|e| bad(&e.to_string())))
                        .collect::<Result<_, _>>()?
                }
            }
            "all_spins" => {
                if parse_bool(value).ok_or_else(|| bad("expected true or false"))? {
                    self.spins = SpinStructure::ALL.to_vec();
                }
            }
            "lambda" | "lambda_turns" => self.lambda_turns = parse_real(value).ok_or_else(|| bad("expected a real"))?,
            "phi" => self.phi = parse_real(value).ok_or_else(|| bad("expected a real"))?,
            "psi" => self.psi = parse_real(value).ok_or_else(|| bad("expected a real"))?,
            "theta" => self.theta = parse_real(value).ok_or_else(|| bad("expected a real"))?,
            "tau1" => self.tau1 = parse_complex(value).ok_or_else(|| bad("expected a complex number"))?,
            "tau2" => self.tau2 = parse_complex(value).ok_or_else(|| bad("expected a complex number"))?,
            "tau0" => self.tau0 = parse_complex(value).ok_or_else(|| bad("expected a complex number"))?,
            "eps_const" | "eps" => {
                self.eps_const = parse_complex(value).ok_or_else(|| bad("expected a complex number"))?
            }
            "tol" | "tolerance" => {
                let t = parse_real(value).filter(|t| *t > 0.0);
                self.tolerance = t.ok_or_else(|| bad("expected a positive real"))?
            }
            "depth" => self.depth = Some(value.parse().map_err(|_| bad("expected an integer"))?),
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = value.parse().map_err(|e: String| bad(&e))?,
            "hochschild" => self.hochschild = parse_bool(value).ok_or_else(|| bad("expected true or false"))?,
            "counterexample" => {
                self.counterexample = parse_bool(value).ok_or_else(|| bad("expected true or false"))?
            }
            "k" | "k_window" => self.k_window = value.parse().map_err(|_| bad("expected an integer"))?,
            "windows" => {
                self.windows = value
                    .split(',')
                    .map(|s| s.trim().parse().map_err(|_| bad("expected integers")))
                    .collect::<Result<_, _>>()?
            }
            "radii" => {
                self.radii = value
                    .split(',')
                    .map(|s| parse_real(s).ok_or_else(|| bad("expected reals")))
                    .collect::<Result<_, _>>()?
            }
            other => return Err(CliError::Usage(format!("unknown setting {other:?}"))),
        }
        Ok(())
    }

    /// Applies every line of a flat `key = value` file; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("{}:{}: expected key = value", path.display(), lineno + 1))
            })?;
            self.apply(key, value)?;
        }
        Ok(())
    }

    /// Ordered `(key, value)` echo of every setting.
    pub fn echo(&self) -> Vec<(&'static str, String)> {
        let spins: Vec<String> = self.spins.iter().map(|s| s.to_string()).collect();
        let joined = |v: Vec<String>| v.join(",");
        vec![
            ("command", self.command.name().to_string()),
            ("n_max", self.n_max.to_string()),
            ("spin", spins.join(";")),
            ("lambda_turns", float(self.lambda_turns)),
            ("phi", float(self.phi)),
            ("psi", float(self.psi)),
            ("theta", float(self.theta)),
            ("tau1", complex(self.tau1)),
            ("tau2", complex(self.tau2)),
            ("tau0", complex(self.tau0)),
            ("eps_const", complex(self.eps_const)),
            ("tolerance", float(self.tolerance)),
            ("depth", self.depth.map_or_else(|| "default".into(), |d| d.to_string())),
            ("format", self.format.to_string()),
            ("hochschild", self.hochschild.to_string()),
            ("counterexample", self.counterexample.to_string()),
            ("k", self.k_window.to_string()),
            ("windows", joined(self.windows.iter().map(|w| w.to_string()).collect())),
            ("radii", joined(self.radii.iter().map(|r| float(*r)).collect())),
        ]
    }
}

/// Fixed 17-significant-digit rendering shared by every output.
pub fn float(x: f64) -> String {
    if x == 0.0 {
        // no "-0"
        format!("{:.16e}", 0.0)
    } else {
        format!("{x:.16e}")
    }
}

fn complex(z: C64) -> String {
    format!("{}{}{}i", float(z.re), if z.im < 0.0 { "" } else { "+" }, float(z.im))
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "on" => Some(true),
        "false" | "0" | "no" | "off" => Some(false),
        _ => None,
    }
}

fn parse_real(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Accepts `1`, `-0.5`, `2i`, `i`, `1+2i`, `1 - 0.5i`.
pub fn parse_complex(s: &str) -> Option<C64> {
    C64::from_str(s.trim()).ok().filter(|z| z.re.is_finite() && z.im.is_finite())
}
