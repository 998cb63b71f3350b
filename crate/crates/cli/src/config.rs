//! `key = value` run configuration.
//!
//! ```text
//! # two-qubit parameters
//! epsilon = 0.5
//! j_coupling = 2.0
//! j_z = 1.0
//! g_bath = 1.0
//! g_sys_bath = 1.0
//! temperature = 2.0
//! alpha = 0.7071067811865476
//! beta = 0.7071067811865476
//! sweep = d_z: 0, 1, 2, 3
//! ```
//!
//! Physics parameters have no defaults; a swept parameter may be omitted.
//! Time grid defaults to `t_start = 0`, `t_end = 10`, `n_points = 201`,
//! the thermal tail tolerance to `tol = 1e-12`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use spinbath::{InitialState, ModelParams};
use thiserror::Error;

pub const DEFAULT_T_START: f64 = 0.0;
pub const DEFAULT_T_END: f64 = 10.0;
pub const DEFAULT_N_POINTS: usize = 201;
pub const DEFAULT_TOL: f64 = 1e-12;
/// Looser tolerances would let the thermal tail alone break the 1e-10
/// trace check on every row.
pub const MAX_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {message}")]
pub struct ConfigError {
    /// 1-based; 0 for errors not tied to a line.
    pub line: usize,
    pub message: String,
}

impl ConfigError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    DZ,
    JZ,
    JCoupling,
    Temperature,
    GSysBath,
    GBath,
}

impl SweepParam {
    pub const ALL: [SweepParam; 6] = [
        SweepParam::DZ,
        SweepParam::JZ,
        SweepParam::JCoupling,
        SweepParam::Temperature,
        SweepParam::GSysBath,
        SweepParam::GBath,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::DZ => "d_z",
            SweepParam::JZ => "j_z",
            SweepParam::JCoupling => "j_coupling",
            SweepParam::Temperature => "temperature",
            SweepParam::GSysBath => "g_sys_bath",
            SweepParam::GBath => "g_bath",
        }
    }

    pub fn apply(self, params: &ModelParams, value: f64) -> ModelParams {
        let mut p = *params;
        match self {
            SweepParam::DZ => p.d_z = value,
            SweepParam::JZ => p.j_z = value,
            SweepParam::JCoupling => p.j_coupling = value,
            SweepParam::Temperature => p.temperature = value,
            SweepParam::GSysBath => p.g_sys_bath = value,
            SweepParam::GBath => p.g_bath = value,
        }
        p
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        SweepParam::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("cannot sweep `{s}` (expected one of d_z, j_z, j_coupling, temperature, g_sys_bath, g_bath)"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl TimeGrid {
    pub fn times(&self) -> Vec<f64> {
        let step = (self.end - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.end
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Observables {
    pub concurrence: bool,
    pub discord: bool,
    pub mutual_info: bool,
    pub classical: bool,
}

impl Observables {
    pub const ALL: Observables = Observables {
        concurrence: true,
        discord: true,
        mutual_info: true,
        classical: true,
    };

    /// Discord, mutual information and classical correlation share one
    /// minimisation.
    pub fn needs_discord(&self) -> bool {
        self.discord || self.mutual_info || self.classical
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// With a sweep, the swept field holds the first sweep value.
    pub model: ModelParams,
    pub initial: InitialState,
    pub time_grid: TimeGrid,
    pub sweep: Option<Sweep>,
    pub observables: Observables,
    pub tol: f64,
    pub oracle_check: bool,
}

impl RunConfig {
    /// (sweep value, parameters) per sweep point; a single unlabelled point
    /// without a sweep.
    pub fn points(&self) -> Vec<(Option<f64>, ModelParams)> {
        match &self.sweep {
            Some(s) => s
                .values
                .iter()
                .map(|&v| (Some(v), s.param.apply(&self.model, v)))
                .collect(),
            None => vec![(None, self.model)],
        }
    }
}

const MODEL_KEYS: [&str; 7] = [
    "epsilon",
    "j_coupling",
    "j_z",
    "d_z",
    "g_bath",
    "g_sys_bath",
    "temperature",
];
const OTHER_KEYS: [&str; 9] = [
    "alpha",
    "beta",
    "t_start",
    "t_end",
    "n_points",
    "sweep",
    "observables",
    "tol",
    "oracle_check",
];

fn parse_real(line: usize, key: &str, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = v
        .parse()
        .map_err(|_| ConfigError::new(line, format!("`{key}` expects a number, got `{v}`")))?;
    if !x.is_finite() {
        return Err(ConfigError::new(line, format!("`{key}` must be finite")));
    }
    Ok(x)
}

fn parse_complex(line: usize, key: &str, v: &str) -> Result<Complex64, ConfigError> {
    let z = Complex64::from_str(&v.replace(' ', "")).map_err(|_| {
        ConfigError::new(
            line,
            format!("`{key}` expects a complex number like 0.6 or 0.3+0.4i, got `{v}`"),
        )
    })?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(ConfigError::new(line, format!("`{key}` must be finite")));
    }
    Ok(z)
}

fn parse_bool(line: usize, key: &str, v: &str) -> Result<bool, ConfigError> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(ConfigError::new(
            line,
            format!("`{key}` expects true or false, got `{v}`"),
        )),
    }
}

fn parse_sweep(line: usize, v: &str) -> Result<Sweep, ConfigError> {
    let (name, list) = v
        .split_once(':')
        .ok_or_else(|| ConfigError::new(line, "sweep expects `name: v1, v2, ...`"))?;
    let param: SweepParam = name.trim().parse().map_err(|e| ConfigError::new(line, e))?;
    let values = list
        .split(',')
        .map(|s| parse_real(line, "sweep", s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(ConfigError::new(line, "sweep needs at least one value"));
    }
    Ok(Sweep { param, values })
}

fn parse_observables(line: usize, v: &str) -> Result<Observables, ConfigError> {
    let mut o = Observables {
        concurrence: false,
        discord: false,
        mutual_info: false,
        classical: false,
    };
    for item in v.split(',').map(str::trim) {
        match item {
            "concurrence" => o.concurrence = true,
            "discord" => o.discord = true,
            "mutual_info" => o.mutual_info = true,
            "classical" => o.classical = true,
            _ => {
                return Err(ConfigError::new(
                    line,
                    format!("unknown observable `{item}` (expected concurrence, discord, mutual_info, classical)"),
                ))
            }
        }
    }
    Ok(o)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut entries: HashMap<&str, (usize, &str)> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| {
            ConfigError::new(line, format!("expected `key = value`, got `{content}`"))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if !MODEL_KEYS.contains(&key) && !OTHER_KEYS.contains(&key) {
            return Err(ConfigError::new(line, format!("unknown key `{key}`")));
        }
        if value.is_empty() {
            return Err(ConfigError::new(line, format!("`{key}` has no value")));
        }
        if let Some((first, _)) = entries.insert(key, (line, value)) {
            return Err(ConfigError::new(
                line,
                format!("`{key}` already set on line {first}"),
            ));
        }
    }

    let sweep = entries
        .get("sweep")
        .map(|&(l, v)| parse_sweep(l, v))
        .transpose()?;
    let swept = sweep.as_ref().map(|s| s.param.name());
    if let (Some(name), Some(&(line, _))) = (swept, swept.and_then(|n| entries.get(n))) {
        return Err(ConfigError::new(
            line,
            format!("`{name}` is both set and swept"),
        ));
    }

    let mut model_values = [0.0; 7];
    for (slot, key) in model_values.iter_mut().zip(MODEL_KEYS) {
        *slot = match entries.get(key) {
            Some(&(l, v)) => parse_real(l, key, v)?,
            None if swept == Some(key) => sweep.as_ref().map(|s| s.values[0]).unwrap_or_default(),
            None => return Err(ConfigError::new(0, format!("missing required key `{key}`"))),
        };
    }
    let [epsilon, j_coupling, j_z, d_z, g_bath, g_sys_bath, temperature] = model_values;
    let model = ModelParams {
        epsilon,
        j_coupling,
        j_z,
        d_z,
        g_bath,
        g_sys_bath,
        temperature,
    };

    let complex = |key: &str| -> Result<Complex64, ConfigError> {
        let &(l, v) = entries
            .get(key)
            .ok_or_else(|| ConfigError::new(0, format!("missing required key `{key}`")))?;
        parse_complex(l, key, v)
    };
    let (alpha, beta) = (complex("alpha")?, complex("beta")?);
    let initial = InitialState::new(alpha, beta).map_err(|e| {
        let line = entries.get("beta").map(|e| e.0).unwrap_or(0);
        ConfigError::new(line, e.to_string())
    })?;

    let real_or = |key: &str, default: f64| -> Result<(usize, f64), ConfigError> {
        match entries.get(key) {
            Some(&(l, v)) => Ok((l, parse_real(l, key, v)?)),
            None => Ok((0, default)),
        }
    };
    let (start_line, start) = real_or("t_start", DEFAULT_T_START)?;
    let (end_line, end) = real_or("t_end", DEFAULT_T_END)?;
    let points = match entries.get("n_points") {
        Some(&(l, v)) => v.parse::<usize>().map_err(|_| {
            ConfigError::new(
                l,
                format!("`n_points` expects a positive integer, got `{v}`"),
            )
        })?,
        None => DEFAULT_N_POINTS,
    };
    if start < 0.0 {
        return Err(ConfigError::new(start_line, "t_start must be >= 0"));
    }
    if end <= start {
        return Err(ConfigError::new(
            end_line.max(start_line),
            format!("t_end ({end}) must exceed t_start ({start})"),
        ));
    }
    if points < 2 {
        return Err(ConfigError::new(
            entries.get("n_points").map(|e| e.0).unwrap_or(0),
            "n_points must be at least 2",
        ));
    }

    let (tol_line, tol) = real_or("tol", DEFAULT_TOL)?;
    if !(tol > 0.0 && tol <= MAX_TOL) {
        return Err(ConfigError::new(
            tol_line,
            format!("tol must lie in (0, {MAX_TOL:e}], got {tol:e}"),
        ));
    }

    let observables = match entries.get("observables") {
        Some(&(l, v)) => parse_observables(l, v)?,
        None => Observables::ALL,
    };
    let oracle_check = match entries.get("oracle_check") {
        Some(&(l, v)) => parse_bool(l, "oracle_check", v)?,
        None => false,
    };

    let config = RunConfig {
        model,
        initial,
        time_grid: TimeGrid { start, end, points },
        sweep,
        observables,
        tol,
        oracle_check,
    };
    for (_, p) in config.points() {
        p.validate().map_err(|e| {
            let line = swept
                .and_then(|_| entries.get("sweep"))
                .map(|e| e.0)
                .unwrap_or(0);
            ConfigError::new(line, e.to_string())
        })?;
    }
    Ok(config)
}
