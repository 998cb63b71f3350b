//! Brute-force references.
//!
//! Both oracles build the total Hamiltonian as an explicit matrix on the
//! joint qubits ⊗ bath space and exponentiate it directly, then trace the
//! bath out. Nothing here uses the reduced amplitude equations of
//! [`crate::propagator`].

mod bosonic;
mod spin_bath;

pub use bosonic::{direct_evolution_bosonic, BosonicOracle};
pub use spin_bath::{
    finite_n_spin_bath, finite_n_spin_bath_with, BathEnsemble, SpinBathSystem, MAX_SPINS,
    MAX_THERMAL_SPINS,
};

use nalgebra::{DVector, Matrix4};

use crate::{DensityMatrix4, C64};

/// Largest tolerated drift of ‖ψ‖² during a joint evolution.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Amplitudes over qubits ⊗ bath, index = s·bath_dim + b with s the
/// two-qubit basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub amplitudes: DVector<C64>,
    pub bath_dim: usize,
}

impl JointState {
    /// |ψ_s⟩ ⊗ |bath⟩.
    pub fn product(system: [C64; 4], bath: &[C64]) -> Self {
        let bath_dim = bath.len();
        let amplitudes = DVector::from_fn(4 * bath_dim, |i, _| {
            system[i / bath_dim] * bath[i % bath_dim]
        });
        Self {
            amplitudes,
            bath_dim,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// Adds weight · Tr_bath |ψ⟩⟨ψ| to `rho`.
    pub fn accumulate_reduced(&self, weight: f64, rho: &mut Matrix4<C64>) {
        let d = self.bath_dim;
        let a = &self.amplitudes;
        for s in 0..4 {
            for sp in s..4 {
                let mut acc = C64::from(0.0);
                for b in 0..d {
                    acc += a[s * d + b] * a[sp * d + b].conj();
                }
                rho[(s, sp)] += acc * weight;
                if sp != s {
                    rho[(sp, s)] += acc.conj() * weight;
                }
            }
        }
    }

    pub fn reduced(&self) -> DensityMatrix4 {
        let mut m = Matrix4::zeros();
        self.accumulate_reduced(1.0, &mut m);
        DensityMatrix4(m)
    }
}
