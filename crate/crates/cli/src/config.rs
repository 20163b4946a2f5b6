//! Scenario configuration: shape descriptors, parameter grids and tolerances.

use crate::error::CliError;
use gagliardo::functionals::{regime_cap, CONSTANTS_TOL, DECISION_FACTOR, IDENTITY_TOL};
use gagliardo::surface_geometry::{Shape, MIN_RESOLUTION};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

pub const DEFAULT_RESOLUTION: usize = 96;
pub const DEFAULT_MC_BUDGET: usize = 200_000;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_A_GRID: [f64; 8] = [0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 4.0];
pub const DEFAULT_R_GRID: [f64; 3] = [0.25, 0.5, 0.75];
/// Smallest Monte Carlo budget; half goes to inside and half to outside samples.
pub const MIN_MC_BUDGET: usize = 2_000;

/// Shape descriptor as written on the command line, e.g. `ellipsoid:a=2,b=1,c=1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeSpec(pub Shape);

impl FromStr for ShapeSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (kind, params) = s.split_once(':').unwrap_or((s, ""));
        let mut values: Vec<(String, f64)> = Vec::new();
        for item in params.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("shape parameter `{item}` is not of the form key=value")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("shape parameter `{item}` has a non-numeric value")))?;
            values.push((k.trim().to_ascii_lowercase(), v));
        }
        let mut take = |key: &str, default: Option<f64>| -> Result<f64, CliError> {
            match values.iter().position(|(k, _)| k == key) {
                Some(i) => Ok(values.remove(i).1),
                None => default.ok_or_else(|| CliError::Usage(format!("shape `{kind}` needs the parameter `{key}`"))),
            }
        };
        let shape = match kind.trim().to_ascii_lowercase().as_str() {
            "sphere" => Shape::Sphere { radius: take("r", Some(1.0))? },
            "ellipsoid" => Shape::Ellipsoid { a: take("a", None)?, b: take("b", None)?, c: take("c", None)? },
            "perturbed" => {
                let epsilon = take("eps", None)?;
                let mode = take("mode", None)?;
                if mode < 0.0 || mode.fract() != 0.0 || mode > u32::MAX as f64 {
                    return Err(CliError::Usage(format!("perturbation mode must be a non-negative integer, got {mode}")));
                }
                Shape::Perturbed { epsilon, mode: mode as u32 }
            }
            other => return Err(CliError::Usage(format!("unknown shape `{other}`; expected sphere, ellipsoid or perturbed"))),
        };
        if let Some((k, _)) = values.first() {
            return Err(CliError::Usage(format!("unknown parameter `{k}` for shape `{kind}`")));
        }
        shape.validate()?;
        Ok(ShapeSpec(shape))
    }
}

impl fmt::Display for ShapeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Shape::Sphere { radius } => write!(f, "sphere:R={radius}"),
            Shape::Ellipsoid { a, b, c } => write!(f, "ellipsoid:a={a},b={b},c={c}"),
            Shape::Perturbed { epsilon, mode } => write!(f, "perturbed:eps={epsilon},mode={mode}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TruncRadius {
    Auto,
    Fixed(f64),
}

impl FromStr for TruncRadius {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(TruncRadius::Auto);
        }
        match s.parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(TruncRadius::Fixed(v)),
            _ => Err(CliError::Usage(format!("truncation radius must be `auto` or a positive number, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Usage(format!("format must be csv or json, got `{s}`"))),
        }
    }
}

/// Tolerances used by the checks, carried in every report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Multiple of the combined error used for `satisfied` and `equality_case`.
    pub decision_factor: f64,
    /// Relative tolerance of every kernel evaluation.
    pub kernel_rel_tol: f64,
    /// Relative tolerance of the sampled kernel identities.
    pub identity_rel: f64,
    /// Absolute tolerance of the constants.
    pub constants_abs: f64,
    /// Relative deviation of `Φ` from its closed-form value allowed on balls.
    pub ball_constancy_rel: f64,
    /// Relative Λ tail bound targeted by the automatic truncation radius.
    pub trunc_tail_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            decision_factor: DECISION_FACTOR,
            kernel_rel_tol: 1e-10,
            identity_rel: IDENTITY_TOL,
            constants_abs: CONSTANTS_TOL,
            ball_constancy_rel: 1e-2,
            trunc_tail_rel: 1e-3,
        }
    }
}

/// Where and how a report is written; not part of the configuration hash.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl Default for Output {
    fn default() -> Self {
        Self { path: None, format: Format::Csv }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub shape: Shape,
    pub resolution: usize,
    pub a_grid: Vec<f64>,
    pub r_grid: Vec<f64>,
    pub seed: u64,
    pub mc_budget: usize,
    pub trunc_radius: TruncRadius,
    pub tolerances: Tolerances,
    #[serde(skip)]
    pub output: Output,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            shape: Shape::Sphere { radius: 1.0 },
            resolution: DEFAULT_RESOLUTION,
            a_grid: DEFAULT_A_GRID.to_vec(),
            r_grid: DEFAULT_R_GRID.to_vec(),
            seed: DEFAULT_SEED,
            mc_budget: DEFAULT_MC_BUDGET,
            trunc_radius: TruncRadius::Auto,
            tolerances: Tolerances::default(),
            output: Output::default(),
        }
    }
}

impl ScenarioConfig {
    /// Checks grids, sizes and the regime cap of the largest `a`.
    pub fn validate(&self) -> Result<(), CliError> {
        self.validate_inputs()?;
        self.validate_regime()
    }

    /// Checks grids and sizes only.
    pub fn validate_inputs(&self) -> Result<(), CliError> {
        self.shape.validate()?;
        if self.resolution < MIN_RESOLUTION {
            return Err(CliError::Config(format!(
                "resolution {} is below the minimum {MIN_RESOLUTION}",
                self.resolution
            )));
        }
        if self.a_grid.is_empty() {
            return Err(CliError::Config("the a grid is empty".into()));
        }
        if self.a_grid.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return Err(CliError::Config("every a must be positive and finite".into()));
        }
        if self.a_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config("the a grid must be strictly ascending".into()));
        }
        if self.r_grid.iter().any(|&r| !(0.0..1.0).contains(&r)) {
            return Err(CliError::Config("every r must lie in [0, 1)".into()));
        }
        if self.r_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config("the r grid must be strictly ascending".into()));
        }
        if self.mc_budget < MIN_MC_BUDGET {
            return Err(CliError::Config(format!("mc budget {} is below the minimum {MIN_MC_BUDGET}", self.mc_budget)));
        }
        Ok(())
    }

    /// Every `a` must lie within the regime cap of the resolution.
    pub fn validate_regime(&self) -> Result<(), CliError> {
        let cap = regime_cap(self.resolution);
        if let Some(&a) = self.a_grid.iter().find(|&&a| a > cap) {
            return Err(CliError::Regime(format!(
                "a = {a} exceeds a_max = {cap} at resolution {}; raise the resolution to at least {}",
                self.resolution,
                (20.0 * a).ceil()
            )));
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, output settings excluded.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("configuration serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    pub fn shape_spec(&self) -> ShapeSpec {
        ShapeSpec(self.shape)
    }

    /// Half of the budget each for inside and outside samples.
    pub fn samples(&self) -> (usize, usize) {
        let inside = self.mc_budget / 2;
        (inside, self.mc_budget - inside)
    }
}

/// Parses a comma-separated list of reals; an empty string gives an empty list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| v.parse::<f64>().map_err(|_| CliError::Usage(format!("`{v}` is not a number"))))
        .collect()
}
