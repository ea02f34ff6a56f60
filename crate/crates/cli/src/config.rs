use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use cone_ab::{ExtensionMap, ExtensionSpec, RegularizationConfig};
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("config file {path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error("field `{field}`: {message}")]
    Field { field: &'static str, message: String },
}

fn field(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// `M=SPEC` override of the extension parameter for one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoOverride {
    pub m: i64,
    pub rho: ExtensionSpec,
}

impl FromStr for RhoOverride {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (m, rho) = s.split_once('=').ok_or_else(|| format!("expected M=RHO, got `{s}`"))?;
        let m = m.trim().parse().map_err(|_| format!("bad channel index `{m}`"))?;
        let rho = rho.trim().parse().map_err(|e| format!("{e}"))?;
        Ok(Self { m, rho })
    }
}

fn parse_rho(s: &str) -> Result<ExtensionSpec, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// Flags shared by every subcommand. Each one overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML file with any of the keys below
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Cone parameter(s), comma separated, each in (0, 1]
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Option<Vec<f64>>,

    /// Magnetic flux value(s) in units of the flux quantum
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub flux: Option<Vec<f64>>,

    /// Wave number(s)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub k: Option<Vec<f64>>,

    /// Particle mass
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<f64>,

    /// Extension parameter for every channel: a number, `zero` or `inf`
    #[arg(long, value_parser = parse_rho, allow_hyphen_values = true)]
    pub rho: Option<ExtensionSpec>,

    /// Per-channel extension parameter, `M=RHO`; may be repeated
    #[arg(long = "rho-m", value_name = "M=RHO", allow_hyphen_values = true)]
    pub rho_m: Vec<RhoOverride>,

    /// Channels run over -M..=M; for amplitudes, the minimum truncation order
    #[arg(long)]
    pub m_max: Option<i64>,

    /// Explicit channel list, replacing the -m_max..=m_max range
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub m: Option<Vec<i64>>,

    /// Scattering angle(s)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Option<Vec<f64>>,

    /// Read and write angles in degrees
    #[arg(long)]
    pub degrees: bool,

    /// Abel damping parameters, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub eta_schedule: Option<Vec<f64>>,

    /// Largest acceptable extrapolation spread
    #[arg(long)]
    pub spread_tolerance: Option<f64>,

    /// Phase tolerance in radians for `verify`
    #[arg(long)]
    pub tolerance: Option<f64>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RhoValue {
    Number(f64),
    Text(String),
}

impl RhoValue {
    fn to_spec(&self, name: &'static str) -> Result<ExtensionSpec, ConfigError> {
        match self {
            RhoValue::Number(v) => ExtensionSpec::finite(*v).map_err(|e| field(name, e.to_string())),
            RhoValue::Text(s) => parse_rho(s).map_err(|e| field(name, e)),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    alpha: Option<OneOrMany<f64>>,
    flux: Option<OneOrMany<f64>>,
    k: Option<OneOrMany<f64>>,
    mass: Option<f64>,
    rho: Option<RhoValue>,
    rho_overrides: Option<BTreeMap<String, RhoValue>>,
    m_max: Option<i64>,
    m: Option<OneOrMany<i64>>,
    theta: Option<OneOrMany<f64>>,
    degrees: Option<bool>,
    eta_schedule: Option<Vec<f64>>,
    tail_tolerance: Option<f64>,
    spread_tolerance: Option<f64>,
    tolerance: Option<f64>,
    format: Option<Format>,
    output: Option<PathBuf>,
}

fn load_file(path: &Path) -> Result<FileConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    toml::from_str(&text).map_err(|source| ConfigError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// Fully resolved run configuration. Angles are stored in radians.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub alpha: Vec<f64>,
    pub flux: Vec<f64>,
    pub k: Vec<f64>,
    pub mass: f64,
    pub rho: ExtensionMap,
    pub m_max: i64,
    pub channels: Vec<i64>,
    pub theta: Vec<f64>,
    pub degrees: bool,
    pub regularization: RegularizationConfig,
    pub tolerance: Option<f64>,
    pub format: Format,
    pub output: Option<PathBuf>,
    /// True when any of alpha, flux, k was given explicitly.
    pub grid_given: bool,
}

impl SweepConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self, ConfigError> {
        let file = match &args.config {
            Some(path) => load_file(path)?,
            None => FileConfig::default(),
        };

        let grid_given = args.alpha.is_some()
            || args.flux.is_some()
            || args.k.is_some()
            || file.alpha.is_some()
            || file.flux.is_some()
            || file.k.is_some();
        let alpha = args
            .alpha
            .clone()
            .or(file.alpha.map(OneOrMany::into_vec))
            .unwrap_or(vec![1.0]);
        let flux = args
            .flux
            .clone()
            .or(file.flux.map(OneOrMany::into_vec))
            .unwrap_or(vec![0.0]);
        let k = args.k.clone().or(file.k.map(OneOrMany::into_vec)).unwrap_or(vec![1.0]);
        let mass = args.mass.or(file.mass).unwrap_or(1.0);
        let degrees = args.degrees || file.degrees.unwrap_or(false);

        let global = match (&args.rho, &file.rho) {
            (Some(r), _) => *r,
            (None, Some(r)) => r.to_spec("rho")?,
            (None, None) => ExtensionSpec::Zero,
        };
        let mut rho = ExtensionMap::uniform(global);
        for (m, value) in file.rho_overrides.iter().flatten() {
            let m: i64 = m
                .trim()
                .parse()
                .map_err(|_| field("rho_overrides", format!("key `{m}` is not a channel index")))?;
            rho = rho.with_override(m, value.to_spec("rho_overrides")?);
        }
        for o in &args.rho_m {
            rho = rho.with_override(o.m, o.rho);
        }

        let m_max = args.m_max.or(file.m_max).unwrap_or(10);
        let channels = match args.m.clone().or(file.m.map(OneOrMany::into_vec)) {
            Some(list) => list,
            None => (-m_max..=m_max).collect(),
        };

        let unit = if degrees { PI / 180.0 } else { 1.0 };
        let theta = args
            .theta
            .clone()
            .or(file.theta.map(OneOrMany::into_vec))
            .map(|list| list.into_iter().map(|t| t * unit).collect())
            .unwrap_or_else(|| vec![PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI]);

        let defaults = RegularizationConfig::default();
        let regularization = RegularizationConfig {
            eta_schedule: args
                .eta_schedule
                .clone()
                .or(file.eta_schedule)
                .unwrap_or(defaults.eta_schedule.clone()),
            tail_tolerance: file.tail_tolerance.unwrap_or(defaults.tail_tolerance),
            spread_tolerance: args
                .spread_tolerance
                .or(file.spread_tolerance)
                .unwrap_or(defaults.spread_tolerance),
            min_order: m_max.max(1) as usize,
            ..defaults
        };

        let cfg = Self {
            alpha,
            flux,
            k,
            mass,
            rho,
            m_max,
            channels,
            theta,
            degrees,
            regularization,
            tolerance: args.tolerance.or(file.tolerance),
            format: args.format.or(file.format).unwrap_or_default(),
            output: args.output.clone().or(file.output),
            grid_given,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let nonempty = |name: &'static str, len: usize| {
            if len == 0 {
                Err(field(name, "list must not be empty"))
            } else {
                Ok(())
            }
        };
        nonempty("alpha", self.alpha.len())?;
        nonempty("flux", self.flux.len())?;
        nonempty("k", self.k.len())?;
        nonempty("m", self.channels.len())?;
        nonempty("theta", self.theta.len())?;
        for &a in &self.alpha {
            if !(a > 0.0 && a <= 1.0) {
                return Err(field("alpha", format!("{a} is outside (0, 1]")));
            }
        }
        for &f in &self.flux {
            if !f.is_finite() {
                return Err(field("flux", format!("{f} is not finite")));
            }
        }
        for &k in &self.k {
            if !(k.is_finite() && k > 0.0) {
                return Err(field("k", format!("{k} must be positive and finite")));
            }
        }
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(field("mass", format!("{} must be positive and finite", self.mass)));
        }
        if self.m_max < 1 {
            return Err(field("m_max", format!("{} must be at least 1", self.m_max)));
        }
        for &t in &self.theta {
            if !(t > -PI && t <= PI) {
                return Err(field("theta", format!("{t} rad is outside (-pi, pi]")));
            }
            if t == 0.0 {
                return Err(field("theta", "the forward direction 0 is excluded"));
            }
        }
        self.regularization
            .validate()
            .map_err(|e| field("eta_schedule", e.to_string()))?;
        if !(self.regularization.tail_tolerance > 0.0 && self.regularization.tail_tolerance < 1.0) {
            return Err(field("tail_tolerance", "must lie in (0, 1)"));
        }
        if !(self.regularization.spread_tolerance > 0.0) {
            return Err(field("spread_tolerance", "must be positive"));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0) {
                return Err(field("tolerance", "must be positive"));
            }
        }
        Ok(())
    }

    /// Angle as written to output.
    pub fn angle_out(&self, radians: f64) -> f64 {
        if self.degrees {
            radians.to_degrees()
        } else {
            radians
        }
    }

    /// Configuration echo for the JSON `meta` block.
    pub fn echo(&self) -> Value {
        let overrides: BTreeMap<String, String> = self
            .rho
            .overrides()
            .iter()
            .map(|(m, r)| (m.to_string(), r.to_string()))
            .collect();
        json!({
            "alpha": self.alpha,
            "flux": self.flux,
            "k": self.k,
            "mass": self.mass,
            "rho": self.rho.global().to_string(),
            "rho_overrides": overrides,
            "m_max": self.m_max,
            "m": self.channels,
            "theta": self.theta.iter().map(|&t| self.angle_out(t)).collect::<Vec<_>>(),
            "degrees": self.degrees,
            "eta_schedule": self.regularization.eta_schedule,
            "tail_tolerance": self.regularization.tail_tolerance,
            "spread_tolerance": self.regularization.spread_tolerance,
            "tolerance": self.tolerance,
            "format": self.format.as_str(),
        })
    }
}
