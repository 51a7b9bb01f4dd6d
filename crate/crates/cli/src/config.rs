//! Run configuration shared by every command.
//!
//! Values resolve in precedence order: command-line flags, then a flat
//! `key = value` config file, then the built-in defaults. Numeric inputs
//! are rejected when they are not finite, and the integration tolerance
//! must sit inside the solver's supported range.

use std::path::{Path, PathBuf};

use deepwater::ode::{MAX_TOL, MIN_TOL};
use deepwater::WaveParams;

use crate::error::AppError;

pub const DEFAULT_EPSILON: f64 = 0.1;
pub const DEFAULT_K: f64 = 1.0;
pub const DEFAULT_G: f64 = 9.81;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_SEED: u64 = 0;

/// Which artifacts the portrait and trajectory commands write.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Svg,
    Both,
}

impl OutputFormat {
    pub fn wants_csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn wants_svg(self) -> bool {
        matches!(self, OutputFormat::Svg | OutputFormat::Both)
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self, AppError> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "svg" => Ok(OutputFormat::Svg),
            "both" => Ok(OutputFormat::Both),
            other => Err(AppError::Usage(format!(
                "--format must be one of csv, svg, both; got '{other}'"
            ))),
        }
    }
}

/// Values supplied on the command line; `None` falls through to the config
/// file and then to the defaults.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub epsilon: Option<f64>,
    pub k: Option<f64>,
    pub g: Option<f64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub seed: Option<u64>,
}

/// Fully resolved configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Wave amplitude (m).
    pub epsilon: f64,
    /// Wavenumber (rad/m).
    pub k: f64,
    /// Gravitational acceleration (m/s^2).
    pub g: f64,
    /// Integration tolerance for trajectory work.
    pub tol: f64,
    /// Directory that receives every artifact.
    pub out: PathBuf,
    pub format: OutputFormat,
    /// Seed for the validation RNG.
    pub seed: u64,
}

impl RunConfig {
    /// Overlays flags on the optional config file on the defaults.
    pub fn resolve(flags: &Overrides, config_file: Option<&Path>) -> Result<Self, AppError> {
        let file = match config_file {
            Some(path) => FileValues::load(path)?,
            None => FileValues::default(),
        };

        let epsilon = pick_finite("epsilon", flags.epsilon, file.epsilon, DEFAULT_EPSILON)?;
        let k = pick_finite("k", flags.k, file.k, DEFAULT_K)?;
        let g = pick_finite("g", flags.g, file.g, DEFAULT_G)?;
        let tol = pick_finite("tol", flags.tol, file.tol, DEFAULT_TOL)?;
        if !(MIN_TOL..=MAX_TOL).contains(&tol) {
            return Err(AppError::Usage(format!(
                "--tol must lie in [{MIN_TOL:e}, {MAX_TOL:e}], got {tol:e}"
            )));
        }

        let format = flags
            .format
            .clone()
            .or(file.format)
            .map_or(Ok(OutputFormat::Csv), |s| s.parse())?;
        let out = flags
            .out
            .clone()
            .or_else(|| file.out.map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        let seed = flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED);

        Ok(RunConfig {
            epsilon,
            k,
            g,
            tol,
            out,
            format,
            seed,
        })
    }

    /// Builds the validated parameter bundle. A non-positive amplitude,
    /// wavenumber, or gravity came straight from a flag, so it reports as
    /// a usage error; an over-steep but positive wave is a domain error.
    pub fn wave_params(&self) -> Result<WaveParams, AppError> {
        WaveParams::new(self.epsilon, self.k, self.g).map_err(|e| match e {
            deepwater::Error::NonPositiveParameter { .. } => AppError::Usage(e.to_string()),
            other => AppError::Lib(other),
        })
    }
}

/// Raw values read from a config file.
#[derive(Debug, Default)]
struct FileValues {
    epsilon: Option<f64>,
    k: Option<f64>,
    g: Option<f64>,
    tol: Option<f64>,
    out: Option<String>,
    format: Option<String>,
    seed: Option<u64>,
}

impl FileValues {
    /// Parses a flat `key = value` file. Blank lines and `#` comments are
    /// skipped; unknown keys and unparseable values are usage errors.
    fn load(path: &Path) -> Result<Self, AppError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            AppError::Usage(format!("cannot read config file {}: {e}", path.display()))
        })?;
        let mut values = FileValues::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(AppError::Usage(format!(
                    "config line {} is not 'key = value': '{raw}'",
                    idx + 1
                )));
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "epsilon" => values.epsilon = Some(parse_config_f64(key, value)?),
                "k" => values.k = Some(parse_config_f64(key, value)?),
                "g" => values.g = Some(parse_config_f64(key, value)?),
                "tol" => values.tol = Some(parse_config_f64(key, value)?),
                "out" => values.out = Some(value.to_string()),
                "format" => values.format = Some(value.to_string()),
                "seed" => {
                    values.seed = Some(value.parse().map_err(|_| {
                        AppError::Usage(format!(
                            "config key 'seed' needs an integer, got '{value}'"
                        ))
                    })?)
                }
                other => {
                    return Err(AppError::Usage(format!(
                        "unknown config key '{other}' on line {}",
                        idx + 1
                    )))
                }
            }
        }
        Ok(values)
    }
}

fn parse_config_f64(key: &str, value: &str) -> Result<f64, AppError> {
    value
        .parse()
        .map_err(|_| AppError::Usage(format!("config key '{key}' needs a number, got '{value}'")))
}

/// First available value, rejected unless finite.
fn pick_finite(
    name: &str,
    flag: Option<f64>,
    file: Option<f64>,
    default: f64,
) -> Result<f64, AppError> {
    let v = flag.or(file).unwrap_or(default);
    if !v.is_finite() {
        return Err(AppError::Usage(format!("--{name} must be finite, got {v}")));
    }
    Ok(v)
}
