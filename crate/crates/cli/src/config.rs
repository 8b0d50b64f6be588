use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use ifm_core::optics::PixelPattern;
use ifm_core::schemes::SchemeKind;
use ifm_core::IfmError;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Experiment settings as given on the command line or in a JSON config
/// file. Both sources use the same keys; every field is optional here and
/// checked when resolved into a [`RunConfig`].
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Scheme kind, e.g. multipixel-zeno
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<String>,

    /// Number of pixels (OAM dimension)
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,

    /// Number of cycles
    #[arg(long = "N")]
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,

    /// Occupancy bits, 1 = opaque, e.g. 1010
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<String>,

    /// Comma-separated per-pixel transmissions in [0, 1]
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transmissions: Option<Vec<f64>>,

    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,

    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    /// Comma-separated cycle counts to sweep
    #[arg(long = "sweep-N", value_delimiter = ',')]
    #[serde(rename = "sweep-N", default, skip_serializing_if = "Option::is_none")]
    pub sweep_n: Option<Vec<usize>>,

    /// Comma-separated transmissions to sweep, applied to every pixel
    #[arg(long = "sweep-T", value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(rename = "sweep-T", default, skip_serializing_if = "Option::is_none")]
    pub sweep_t: Option<Vec<f64>>,

    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,

    /// Write the report here instead of stdout
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,

    /// JSON file with the same keys; flags override it
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Settings {
    pub fn from_json(text: &str) -> Result<Settings, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Settings, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Fields set in `self` win over `base`.
    pub fn overlay(self, base: Settings) -> Settings {
        Settings {
            scheme: self.scheme.or(base.scheme),
            d: self.d.or(base.d),
            n: self.n.or(base.n),
            pattern: self.pattern.or(base.pattern),
            transmissions: self.transmissions.or(base.transmissions),
            shots: self.shots.or(base.shots),
            seed: self.seed.or(base.seed),
            sweep_n: self.sweep_n.or(base.sweep_n),
            sweep_t: self.sweep_t.or(base.sweep_t),
            format: self.format.or(base.format),
            out: self.out.or(base.out),
            config: self.config.or(base.config),
        }
    }

    /// Loads `--config` if given and lays the flags over it.
    pub fn merged(self) -> Result<Settings, CliError> {
        match &self.config {
            Some(path) => {
                let file = Self::from_file(path)?;
                Ok(self.overlay(file))
            }
            None => Ok(self),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Run,
    Sweep,
    Shots,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepAxis {
    Cycles(Vec<usize>),
    Transmission(Vec<f64>),
}

pub const DEFAULT_SHOTS: u64 = 10_000;

/// A validated experiment request.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub scheme: SchemeKind,
    pub d: usize,
    /// `None` only when sweeping over cycle counts.
    pub cycles: Option<usize>,
    /// `None` only when sweeping over transmissions.
    pub pattern: Option<PixelPattern>,
    pub shots: Option<u64>,
    pub seed: u64,
    pub sweep: Option<SweepAxis>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn pattern_error(field: &str, err: IfmError) -> CliError {
    usage(format!("{field}: {err}"))
}

impl RunConfig {
    pub fn resolve(mode: Mode, s: &Settings) -> Result<RunConfig, CliError> {
        let scheme: SchemeKind = s
            .scheme
            .as_deref()
            .ok_or_else(|| usage("--scheme is required"))?
            .parse()
            .map_err(|e| pattern_error("--scheme", e))?;

        let d = match (s.d, scheme.is_single_pixel()) {
            (Some(1) | None, true) => 1,
            (Some(d), true) => {
                return Err(usage(format!("--d: {scheme} is single-pixel, got d = {d}")))
            }
            (Some(0), false) => return Err(usage("--d: must be at least 1")),
            (Some(d), false) => d,
            (None, false) => return Err(usage("--d is required")),
        };

        let sweep = match (&s.sweep_n, &s.sweep_t) {
            (Some(_), Some(_)) => {
                return Err(usage("--sweep-N and --sweep-T are mutually exclusive"))
            }
            (Some(ns), None) => {
                if ns.is_empty() {
                    return Err(usage("--sweep-N: empty sweep axis"));
                }
                if ns.contains(&0) {
                    return Err(usage("--sweep-N: cycle counts must be at least 1"));
                }
                Some(SweepAxis::Cycles(ns.clone()))
            }
            (None, Some(ts)) => {
                if ts.is_empty() {
                    return Err(usage("--sweep-T: empty sweep axis"));
                }
                if let Some(t) = ts.iter().find(|t| !(0.0..=1.0).contains(*t)) {
                    return Err(usage(format!("--sweep-T: transmission {t} outside [0, 1]")));
                }
                Some(SweepAxis::Transmission(ts.clone()))
            }
            (None, None) => None,
        };
        match (mode, &sweep) {
            (Mode::Sweep, None) => return Err(usage("sweep needs --sweep-N or --sweep-T")),
            (Mode::Run | Mode::Shots, Some(_)) => {
                return Err(usage(
                    "--sweep-N/--sweep-T are only valid for the sweep command",
                ))
            }
            _ => {}
        }

        let pattern = match (&s.pattern, &s.transmissions) {
            (Some(_), Some(_)) => {
                return Err(usage(
                    "--pattern and --transmissions are mutually exclusive",
                ))
            }
            (Some(bits), None) => Some(
                bits.parse::<PixelPattern>()
                    .map_err(|e| pattern_error("--pattern", e))?,
            ),
            (None, Some(t)) => Some(
                PixelPattern::from_transmissions(t.clone())
                    .map_err(|e| pattern_error("--transmissions", e))?,
            ),
            (None, None) => None,
        };
        let pattern = match (pattern, &sweep) {
            (Some(_), Some(SweepAxis::Transmission(_))) => {
                return Err(usage(
                    "--sweep-T sets every pixel; drop --pattern/--transmissions",
                ))
            }
            (None, Some(SweepAxis::Transmission(_))) => None,
            (None, _) => return Err(usage("--pattern or --transmissions is required")),
            (Some(p), _) => {
                if p.dim() != d {
                    let field = if s.pattern.is_some() {
                        "--pattern"
                    } else {
                        "--transmissions"
                    };
                    return Err(usage(format!(
                        "{field}: length {} does not match --d {d}",
                        p.dim()
                    )));
                }
                Some(p)
            }
        };

        let cycles = if scheme.is_single_pass() {
            Some(1)
        } else if matches!(sweep, Some(SweepAxis::Cycles(_))) {
            None
        } else {
            match s.n {
                Some(0) => return Err(usage("--N: must be at least 1")),
                Some(n) => Some(n),
                None => return Err(usage("--N is required for multi-pass schemes")),
            }
        };

        let shots = match mode {
            Mode::Shots => match s.shots.unwrap_or(DEFAULT_SHOTS) {
                0 => return Err(usage("--shots: must be at least 1")),
                n => Some(n),
            },
            _ => None,
        };

        let format = s.format.unwrap_or(match mode {
            Mode::Sweep => Format::Csv,
            _ => Format::Json,
        });

        Ok(RunConfig {
            mode,
            scheme,
            d,
            cycles,
            pattern,
            shots,
            seed: s.seed.unwrap_or(0),
            sweep,
            format,
            out: s.out.clone(),
        })
    }

    /// Settings that resolve back to this config under the same mode.
    pub fn to_settings(&self) -> Settings {
        let (pattern, transmissions) = match &self.pattern {
            Some(p) if p.is_binary() => (Some(p.to_string()), None),
            Some(p) => (None, Some(p.transmissions().to_vec())),
            None => (None, None),
        };
        let (sweep_n, sweep_t) = match &self.sweep {
            Some(SweepAxis::Cycles(n)) => (Some(n.clone()), None),
            Some(SweepAxis::Transmission(t)) => (None, Some(t.clone())),
            None => (None, None),
        };
        Settings {
            scheme: Some(self.scheme.as_str().to_string()),
            d: Some(self.d),
            n: self.cycles,
            pattern,
            transmissions,
            shots: self.shots,
            seed: Some(self.seed),
            sweep_n,
            sweep_t,
            format: Some(self.format),
            out: self.out.clone(),
            config: None,
        }
    }
}
