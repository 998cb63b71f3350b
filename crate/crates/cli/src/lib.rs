//! Configuration parsing and CSV sweeps over the reduced two-qubit dynamics.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod run;

pub use config::{parse_config, ConfigError, RunConfig};
pub use run::{describe, run, write_csv, Row, RunError};
