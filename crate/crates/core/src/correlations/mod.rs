//! Entanglement and discord of a two-qubit state.
//!
//! All entropies are in bits. Discord is one-sided: the measurement acts on
//! qubit 2 and the classical correlation is read off qubit 1.

mod concurrence;
mod discord;
mod nelder_mead;

pub use concurrence::{concurrence_wootters, concurrence_x_state};
pub use discord::{
    conditional_ensemble, conditional_entropy, minimize_conditional_entropy, ConditionalEnsemble,
    MeasurementParams, Minimum,
};
pub use nelder_mead::{nelder_mead, NelderMeadOptions};

use crate::{DensityMatrix4, Error, Result, C64};

/// Values of the discord in [-DISCORD_CLAMP, 0) are reported as 0.
pub const DISCORD_CLAMP: f64 = 1e-9;

/// −Σ λ log2 λ over non-negative parts, with 0·log 0 = 0.
pub fn shannon_bits<I: IntoIterator<Item = f64>>(probs: I) -> f64 {
    probs
        .into_iter()
        .map(|p| p.max(0.0))
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

fn qubit_entropy(m: [[C64; 2]; 2]) -> f64 {
    let a = m[0][0].re;
    let d = m[1][1].re;
    let off = m[0][1].norm();
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + off * off).sqrt();
    shannon_bits([mean + r, mean - r])
}

/// Eigenvalues of an X-state in closed form,
/// ½(ρ11+ρ44 ± √((ρ11-ρ44)² + 4|ρ14|²)) and ½(ρ22+ρ33 ± √((ρ22-ρ33)² + 4|ρ23|²)).
pub fn density_eigenvalues(rho: &DensityMatrix4) -> Result<[f64; 4]> {
    let off = rho.off_x_magnitude();
    if off > DensityMatrix4::X_TOLERANCE {
        return Err(Error::NotXState(off));
    }
    let (r11, r22, r33, r44) = (
        rho.at(1, 1).re,
        rho.at(2, 2).re,
        rho.at(3, 3).re,
        rho.at(4, 4).re,
    );
    let outer = ((r11 - r44).powi(2) + 4.0 * rho.at(1, 4).norm_sqr()).sqrt();
    let inner = ((r22 - r33).powi(2) + 4.0 * rho.at(2, 3).norm_sqr()).sqrt();
    Ok([
        0.5 * (r11 + r44 + outer),
        0.5 * (r11 + r44 - outer),
        0.5 * (r22 + r33 + inner),
        0.5 * (r22 + r33 - inner),
    ])
}

fn joint_entropy(rho: &DensityMatrix4) -> f64 {
    match density_eigenvalues(rho) {
        Ok(g) => shannon_bits(g),
        Err(_) => shannon_bits(rho.eigenvalues()),
    }
}

/// von Neumann entropy of qubit 1's marginal.
pub fn marginal_entropy_first(rho: &DensityMatrix4) -> f64 {
    qubit_entropy(rho.marginal_first())
}

/// von Neumann entropy of qubit 2's marginal.
pub fn marginal_entropy_second(rho: &DensityMatrix4) -> f64 {
    qubit_entropy(rho.marginal_second())
}

/// I(ρ) = S(ρ_1) + S(ρ_2) − S(ρ).
pub fn mutual_information(rho: &DensityMatrix4) -> f64 {
    marginal_entropy_first(rho) + marginal_entropy_second(rho) - joint_entropy(rho)
}

/// Mutual information split into its classical and quantum parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discord {
    pub discord: f64,
    pub mutual_info: f64,
    pub classical_corr: f64,
    /// Minimal conditional entropy and where it is attained.
    pub minimum: Minimum,
}

/// D(ρ) = I(ρ) − [S(ρ_1) − min_V Σ p_i S(ρ_i)], measuring qubit 2.
pub fn quantum_discord(rho: &DensityMatrix4) -> Result<Discord> {
    let minimum = minimize_conditional_entropy(rho)?;
    let mutual_info = mutual_information(rho);
    let classical_corr = marginal_entropy_first(rho) - minimum.value;
    let raw = mutual_info - classical_corr;
    if raw < -DISCORD_CLAMP {
        return Err(Error::Invariant(format!("negative discord {raw:.3e}")));
    }
    Ok(Discord {
        discord: raw.max(0.0),
        mutual_info,
        classical_corr,
        minimum,
    })
}

/// Correlation measures of ρ_s at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationRecord {
    pub time: f64,
    pub concurrence: f64,
    pub discord: f64,
    pub mutual_info: f64,
    pub classical_corr: f64,
    pub minimizer: MeasurementParams,
}

impl CorrelationRecord {
    pub fn compute(time: f64, rho: &DensityMatrix4) -> Result<Self> {
        let concurrence = concurrence_wootters(rho)?;
        let d = quantum_discord(rho)?;
        Ok(Self {
            time,
            concurrence,
            discord: d.discord,
            mutual_info: d.mutual_info,
            classical_corr: d.classical_corr,
            minimizer: d.minimum.at,
        })
    }
}
