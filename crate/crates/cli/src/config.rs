//! Run configuration: a JSON file plus `--set key=value` overrides.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use beltrami::{
    Beam, BeamSign, ContourSpec, Direction, IntegrandSpec, LundquistSeriesCfg, OscillatoryLineQuadrature, PlaneCoord,
    PvRule, RayCoord, RealVec3, SphericalFunction, TrkalianSpec,
};
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::Value;

use crate::CliError;

/// Check suites runnable with `check <suite>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Eigen,
    John,
    Identities,
    Inversions,
    Twistor,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvertMethod {
    SphericalMean,
    Grangeat,
    Gg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    FieldSample,
    Xray,
    Divbeam,
    Ytrf,
    Radon,
    Funk,
    Invert(InvertMethod),
    TwistorEval,
    Check(Suite),
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let words: Vec<&str> = s.split_whitespace().collect();
        let cmd = match words.as_slice() {
            ["field", "sample"] => Command::FieldSample,
            ["xray"] => Command::Xray,
            ["divbeam"] => Command::Divbeam,
            ["ytrf"] => Command::Ytrf,
            ["radon"] => Command::Radon,
            ["funk"] => Command::Funk,
            ["invert", "spherical-mean"] => Command::Invert(InvertMethod::SphericalMean),
            ["invert", "grangeat"] => Command::Invert(InvertMethod::Grangeat),
            ["invert", "gg"] => Command::Invert(InvertMethod::Gg),
            ["twistor", "eval"] => Command::TwistorEval,
            ["check", suite] => Command::Check(match *suite {
                "eigen" => Suite::Eigen,
                "john" => Suite::John,
                "identities" => Suite::Identities,
                "inversions" => Suite::Inversions,
                "twistor" => Suite::Twistor,
                "all" => Suite::All,
                other => return Err(format!("unknown check suite `{other}`")),
            }),
            _ => return Err(format!("unknown command `{s}`")),
        };
        Ok(cmd)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Command::FieldSample => "field sample",
            Command::Xray => "xray",
            Command::Divbeam => "divbeam",
            Command::Ytrf => "ytrf",
            Command::Radon => "radon",
            Command::Funk => "funk",
            Command::Invert(InvertMethod::SphericalMean) => "invert spherical-mean",
            Command::Invert(InvertMethod::Grangeat) => "invert grangeat",
            Command::Invert(InvertMethod::Gg) => "invert gg",
            Command::TwistorEval => "twistor eval",
            Command::Check(Suite::Eigen) => "check eigen",
            Command::Check(Suite::John) => "check john",
            Command::Check(Suite::Identities) => "check identities",
            Command::Check(Suite::Inversions) => "check inversions",
            Command::Check(Suite::Twistor) => "check twistor",
            Command::Check(Suite::All) => "check all",
        };
        f.write_str(s)
    }
}

impl<'de> Deserialize<'de> for Command {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Regular lattice `origin + Σ i_a axes[a]`, `i_a < counts[a]`, last axis fastest.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub origin: RealVec3,
    pub axes: Vec<RealVec3>,
    pub counts: Vec<usize>,
}

impl Grid {
    fn validate(&self) -> Result<(), CliError> {
        if self.axes.is_empty() || self.axes.len() > 3 || self.axes.len() != self.counts.len() {
            return Err(CliError::config("grid", "needs one to three axes, each with a count"));
        }
        if self.counts.iter().any(|&c| c == 0) {
            return Err(CliError::config("grid.counts", "every count must be at least 1"));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<RealVec3> {
        let mut out = vec![self.origin];
        for (axis, &n) in self.axes.iter().zip(&self.counts) {
            out = out.iter().flat_map(|&p| (0..n).map(move |i| p + *axis * i as f64)).collect();
        }
        out
    }
}

/// How line transforms are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Closed form where the field has one, otherwise Moses quadrature, otherwise numeric.
    #[default]
    Auto,
    Closed,
    Moses,
    Numeric,
}

/// Quadrature knobs; every entry has a default.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureCfg {
    pub method: Method,
    /// Damped-line settings; derived from the field's wavenumber when absent.
    pub line: Option<OscillatoryLineQuadrature>,
    pub circle_n: usize,
    pub pv: PvRule,
    pub polar_grid: [usize; 2],
    pub series: LundquistSeriesCfg,
    pub sign: Sign,
    pub alpha_n: usize,
    pub outer_circle_n: usize,
}

impl Default for QuadratureCfg {
    fn default() -> Self {
        QuadratureCfg {
            method: Method::Auto,
            line: None,
            circle_n: 64,
            pv: PvRule::default(),
            polar_grid: [64, 128],
            series: LundquistSeriesCfg::Auto,
            sign: Sign::Forward,
            alpha_n: 16,
            outer_circle_n: 24,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    #[default]
    Forward,
    Backward,
}

impl From<Sign> for BeamSign {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Forward => BeamSign::Forward,
            Sign::Backward => BeamSign::Backward,
        }
    }
}

fn default_contour() -> ContourSpec {
    ContourSpec::unit(32)
}

/// Parsed and validated run configuration.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub field: Option<TrkalianSpec>,
    pub grid: Option<Grid>,
    pub points: Option<Vec<RealVec3>>,
    pub rays: Option<Vec<RayCoord>>,
    pub beams: Option<Vec<Beam>>,
    pub planes: Option<Vec<PlaneCoord>>,
    pub directions: Option<Vec<Direction>>,
    pub sphere_function: Option<SphericalFunction>,
    pub integrand: Option<IntegrandSpec>,
    #[serde(default = "default_contour")]
    pub contour: ContourSpec,
    #[serde(default)]
    pub quadrature: QuadratureCfg,
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

impl RunConfig {
    /// Parses `text`, applies `key=value` overrides and validates the result.
    pub fn load(text: &str, overrides: &[String]) -> Result<Self, CliError> {
        let mut value: Value = serde_json::from_str(text).map_err(|e| CliError::Config {
            location: format!("line {} column {}", e.line(), e.column()),
            reason: e.to_string(),
        })?;
        for o in overrides {
            apply_override(&mut value, o)?;
        }
        let cfg: RunConfig = if overrides.is_empty() {
            let mut de = serde_json::Deserializer::from_str(text);
            serde_path_to_error::deserialize(&mut de).map_err(|e| path_error(e, true))?
        } else {
            serde_path_to_error::deserialize(value).map_err(|e| path_error(e, false))?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if let Some(g) = &self.grid {
            g.validate()?;
        }
        if let Some(f) = &self.field {
            f.validate().map_err(|e| CliError::config("field", e.to_string()))?;
        }
        if let Some(i) = &self.integrand {
            i.validate().map_err(|e| CliError::config("integrand", e.to_string()))?;
        }
        self.contour.validate().map_err(|e| CliError::config("contour", e.to_string()))?;
        let q = &self.quadrature;
        q.pv.validate().map_err(|e| CliError::config("quadrature.pv", e.to_string()))?;
        q.series.validate().map_err(|e| CliError::config("quadrature.series", e.to_string()))?;
        if let Some(l) = &q.line {
            l.validate().map_err(|e| CliError::config("quadrature.line", e.to_string()))?;
        }
        for (name, v) in [("circle_n", q.circle_n), ("alpha_n", q.alpha_n), ("outer_circle_n", q.outer_circle_n)] {
            if v < 4 {
                return Err(CliError::Config { location: format!("quadrature.{name}"), reason: "must be at least 4".into() });
            }
        }
        if q.polar_grid.iter().any(|&n| n < 2) {
            return Err(CliError::config("quadrature.polar_grid", "both counts must be at least 2"));
        }
        for (name, t) in &self.tolerances {
            if !(t.is_finite() && *t > 0.0) {
                return Err(CliError::Config { location: format!("tolerances.{name}"), reason: "must be positive".into() });
            }
        }
        if let Some(p) = &self.points {
            if p.is_empty() {
                return Err(CliError::config("points", "list is empty"));
            }
        }
        Ok(())
    }

    /// Evaluation points from `points` or `grid`.
    pub fn sample_points(&self) -> Result<Vec<RealVec3>, CliError> {
        match (&self.points, &self.grid) {
            (Some(p), None) => Ok(p.clone()),
            (None, Some(g)) => Ok(g.points()),
            (Some(_), Some(_)) => Err(CliError::config("points", "give either `points` or `grid`, not both")),
            (None, None) => Err(CliError::config("grid", "this command needs `grid` or `points`")),
        }
    }

    pub fn field(&self) -> Result<&TrkalianSpec, CliError> {
        self.field.as_ref().ok_or_else(|| CliError::config("field", "this command needs a field"))
    }
}

fn path_error(e: serde_path_to_error::Error<serde_json::Error>, with_position: bool) -> CliError {
    let path = e.path().to_string();
    let inner = e.into_inner();
    let location = if with_position && inner.line() > 0 {
        format!("{path} (line {} column {})", inner.line(), inner.column())
    } else {
        path
    };
    CliError::Config { location, reason: inner.to_string() }
}

/// Sets the dotted `key` of `root` to `value`, read as JSON or else as a string.
pub fn apply_override(root: &mut Value, spec: &str) -> Result<(), CliError> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Config { location: format!("--set {spec}"), reason: "expected key=value".into() })?;
    if key.is_empty() {
        return Err(CliError::Config { location: format!("--set {spec}"), reason: "empty key".into() });
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut slot = root;
    for part in key.split('.') {
        slot = match slot {
            Value::Array(items) => {
                let i: usize = part.parse().map_err(|_| CliError::Config {
                    location: format!("--set {key}"),
                    reason: format!("`{part}` is not an array index"),
                })?;
                let len = items.len();
                items.get_mut(i).ok_or_else(|| CliError::Config {
                    location: format!("--set {key}"),
                    reason: format!("index {i} out of range for length {len}"),
                })?
            }
            other => {
                if !other.is_object() {
                    *other = Value::Object(Default::default());
                }
                other.as_object_mut().expect("object").entry(part).or_insert(Value::Null)
            }
        };
    }
    *slot = value;
    Ok(())
}
