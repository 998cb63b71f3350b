use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unitarity defect {defect:.3e} for fock index {fock_index} exceeds tolerance")]
    Unitarity { defect: f64, fock_index: usize },

    #[error("density matrix invariant violated: {0}")]
    Invariant(String),

    #[error("matrix is not an X-state (largest off-X entry {0:.3e})")]
    NotXState(f64),

    #[error("spin-flipped product has eigenvalue with imaginary part {0:.3e}")]
    ComplexSpectrum(f64),

    #[error("conditional eigenvalue {0} outside [0, 1]")]
    ConditionalEigenvalue(f64),

    #[error("norm loss {0:.3e} in joint evolution")]
    NormLoss(f64),

    #[error("bath of {requested} spins exceeds the cap of {cap}")]
    DimensionOverflow { requested: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
