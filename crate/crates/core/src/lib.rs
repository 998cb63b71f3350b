//! Exact reduced dynamics of two coupled qubits (XXZ exchange plus the
//! z-component of a Dzyaloshinsky–Moriya interaction) in contact with a
//! spin-½ bath, together with the entanglement and discord measures used
//! to characterise it.
//!
//! The bath is treated in its bosonic (Holstein–Primakoff) limit. Excitation
//! conservation splits the joint evolution into independent four-dimensional
//! blocks, one per initial bath occupation `n`; [`propagator`] solves those
//! blocks, [`thermal`] assembles the reduced two-qubit state, and
//! [`correlations`] turns it into concurrence and quantum discord.
//! [`oracle`] holds brute-force references that exponentiate the full
//! Hamiltonian directly.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlations;
pub mod density;
pub mod model;
pub mod oracle;
pub mod propagator;
pub mod thermal;

mod error;

pub use error::{Error, Result};

pub use correlations::{
    concurrence_wootters, concurrence_x_state, conditional_ensemble, density_eigenvalues,
    minimize_conditional_entropy, mutual_information, quantum_discord, CorrelationRecord, Discord,
    MeasurementParams,
};
pub use density::DensityMatrix4;
pub use model::{choose_truncation, InitialState, ModelParams, TruncationConfig};
pub use propagator::{
    build_generator_plain, build_generator_tilde, evolve_coefficients, CoefficientSet, Generator4,
    Variant,
};
pub use thermal::{reduced_density, thermal_weights, ThermalAssembler, ThermalWeights};

/// Complex double used for every amplitude and matrix element.
pub type C64 = num_complex::Complex64;
