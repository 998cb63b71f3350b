use std::io::{self, Write};

use rayon::prelude::*;
use spinbath::oracle::BosonicOracle;
use spinbath::{
    choose_truncation, concurrence_wootters, quantum_discord, DensityMatrix4, ThermalAssembler,
    TruncationConfig,
};
use thiserror::Error;

use crate::config::{ConfigError, RunConfig};

pub const CSV_HEADER: &str =
    "sweep_param,sweep_value,t,concurrence,discord,mutual_info,classical_corr,\
trace_defect,min_eigenvalue,n_max,tail_weight,oracle_dev";

/// Largest tolerated |Tr ρ − 1| and −λ_min on an emitted row.
pub const INVARIANT_TOLERANCE: f64 = 1e-10;
/// Largest tolerated entrywise deviation from the direct-evolution oracle.
pub const ORACLE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 1,
            RunError::Invariant(_) | RunError::Io(_) => 2,
            RunError::OracleMismatch(_) => 3,
        }
    }
}

impl From<spinbath::Error> for RunError {
    fn from(e: spinbath::Error) -> Self {
        RunError::Invariant(e.to_string())
    }
}

/// One CSV row. Observables not requested are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub sweep_param: Option<&'static str>,
    pub sweep_value: Option<f64>,
    pub t: f64,
    pub concurrence: Option<f64>,
    pub discord: Option<f64>,
    pub mutual_info: Option<f64>,
    pub classical_corr: Option<f64>,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub n_max: usize,
    pub tail_weight: f64,
    pub oracle_dev: Option<f64>,
}

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

impl Row {
    pub fn to_csv(&self) -> String {
        [
            self.sweep_param.unwrap_or("").to_string(),
            opt(self.sweep_value),
            real(self.t),
            opt(self.concurrence),
            opt(self.discord),
            opt(self.mutual_info),
            opt(self.classical_corr),
            real(self.trace_defect),
            real(self.min_eigenvalue),
            self.n_max.to_string(),
            real(self.tail_weight),
            opt(self.oracle_dev),
        ]
        .join(",")
    }
}

/// Everything fixed per sweep point.
struct Point {
    label: Option<f64>,
    trunc: TruncationConfig,
    assembler: ThermalAssembler,
    oracle: Option<BosonicOracle>,
}

/// Summary of one sweep point, for logging.
#[derive(Debug, Clone, PartialEq)]
pub struct PointInfo {
    pub sweep_value: Option<f64>,
    pub regime: &'static str,
    pub n_max: usize,
    pub tail_weight: f64,
}

fn prepare(config: &RunConfig, oracle_check: bool) -> Result<Vec<Point>, RunError> {
    config
        .points()
        .into_par_iter()
        .map(|(label, params)| {
            let trunc = choose_truncation(&params, config.tol)?;
            let assembler = ThermalAssembler::new(&params, &trunc)?;
            let oracle = if oracle_check {
                Some(BosonicOracle::new(&params, trunc.n_max + 2)?)
            } else {
                None
            };
            Ok(Point {
                label,
                trunc,
                assembler,
                oracle,
            })
        })
        .collect()
}

fn evaluate(config: &RunConfig, point: &Point, t: f64) -> Result<Row, RunError> {
    let rho: DensityMatrix4 = point.assembler.assemble(&config.initial, t)?;
    let trace_defect = (rho.trace() - 1.0).abs();
    let min_eigenvalue = rho.min_eigenvalue();
    let at = |what: &str| match point.label {
        Some(v) => format!(
            "{what} at {} = {v}, t = {t}",
            config.sweep.as_ref().map(|s| s.param.name()).unwrap_or("")
        ),
        None => format!("{what} at t = {t}"),
    };
    if !(trace_defect < INVARIANT_TOLERANCE) {
        return Err(RunError::Invariant(at(&format!(
            "trace defect {trace_defect:.3e}"
        ))));
    }
    if !(min_eigenvalue > -INVARIANT_TOLERANCE) {
        return Err(RunError::Invariant(at(&format!(
            "eigenvalue {min_eigenvalue:.3e}"
        ))));
    }

    let obs = config.observables;
    let concurrence = if obs.concurrence {
        Some(concurrence_wootters(&rho)?)
    } else {
        None
    };
    let discord = if obs.needs_discord() {
        Some(quantum_discord(&rho)?)
    } else {
        None
    };

    let oracle_dev = match &point.oracle {
        Some(oracle) => {
            let reference = oracle.reduced_density(&config.initial, t, &point.trunc)?;
            let dev = rho.max_abs_diff(&reference);
            if !(dev <= ORACLE_TOLERANCE) {
                return Err(RunError::OracleMismatch(at(&format!(
                    "deviation {dev:.3e}"
                ))));
            }
            Some(dev)
        }
        None => None,
    };

    Ok(Row {
        sweep_param: config.sweep.as_ref().map(|s| s.param.name()),
        sweep_value: point.label,
        t,
        concurrence,
        discord: discord.as_ref().filter(|_| obs.discord).map(|d| d.discord),
        mutual_info: discord
            .as_ref()
            .filter(|_| obs.mutual_info)
            .map(|d| d.mutual_info),
        classical_corr: discord
            .as_ref()
            .filter(|_| obs.classical)
            .map(|d| d.classical_corr),
        trace_defect,
        min_eigenvalue,
        n_max: point.trunc.n_max,
        tail_weight: point.trunc.tail_weight,
        oracle_dev,
    })
}

/// Per sweep point: regime label and truncation.
pub fn describe(config: &RunConfig) -> Result<Vec<PointInfo>, RunError> {
    config
        .points()
        .into_iter()
        .map(|(sweep_value, params)| {
            let trunc = choose_truncation(&params, config.tol)?;
            Ok(PointInfo {
                sweep_value,
                regime: params.regime(),
                n_max: trunc.n_max,
                tail_weight: trunc.tail_weight,
            })
        })
        .collect()
}

/// All rows in (sweep value, t) order. `oracle_check` is or-ed with the
/// config flag.
pub fn run(config: &RunConfig, oracle_check: bool) -> Result<Vec<Row>, RunError> {
    let points = prepare(config, oracle_check || config.oracle_check)?;
    let times = config.time_grid.times();
    let jobs: Vec<(&Point, f64)> = points
        .iter()
        .flat_map(|p| times.iter().map(move |&t| (p, t)))
        .collect();
    let rows: Vec<Result<Row, RunError>> = jobs
        .par_iter()
        .map(|&(p, t)| evaluate(config, p, t))
        .collect();
    // the first failure in output order, independent of scheduling
    rows.into_iter().collect()
}

pub fn write_csv<W: Write>(rows: &[Row], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_csv())?;
    }
    out.flush()
}
