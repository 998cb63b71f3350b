//! Thermal assembly of the reduced two-qubit state.
//!
//! With the bath initially in ρ_b = Σ_n w_n |n⟩⟨n|, w_n = e^{-2 n g0/T}/Z, and
//! the qubits in α|00⟩ + β|11⟩, each occupation n contributes
//!
//! ```text
//! U|00,n⟩ = φ_n  [ A1 |00,n⟩ + √n B1 |01,n-1⟩ + √n C1 |10,n-1⟩ + √(n(n-1)) D1 |11,n-2⟩ ]
//! U|11,n⟩ = φ̃_n [ √((n+1)(n+2)) Ã1 |00,n+2⟩ + √(n+1) B̃1 |01,n+1⟩ + √(n+1) C̃1 |10,n+1⟩ + D̃1 |11,n⟩ ]
//! ```
//!
//! and the partial trace only pairs amplitudes that share a bath state. The
//! plain and tilde branches meet only in ρ14 (bath state |n⟩), with relative
//! phase φ_n φ̃_n* = e^{4 i g0 t}. Entries outside the X pattern never pair
//! equal bath states and are identically zero.

use nalgebra::Matrix4;

use crate::propagator::{build_generator_plain, build_generator_tilde, Propagator};
use crate::{DensityMatrix4, Error, InitialState, ModelParams, Result, TruncationConfig, C64};

/// Boltzmann weights of the bosonic bath, truncated at `n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalWeights {
    /// w_n = e^{-2 n g0/T} / Z for n = 0..=n_max.
    pub weights: Vec<f64>,
    /// Z = (1 - e^{-2 g0/T})^{-1}.
    pub partition: f64,
}

impl ThermalWeights {
    /// Weight dropped by the truncation.
    pub fn tail(&self) -> f64 {
        1.0 - self.weights.iter().sum::<f64>()
    }
}

pub fn thermal_weights(params: &ModelParams, trunc: &TruncationConfig) -> Result<ThermalWeights> {
    params.validate()?;
    let q = params.boltzmann_ratio();
    let partition = 1.0 / (1.0 - q);
    let weights = (0..=trunc.n_max)
        .map(|n| (-2.0 * n as f64 * params.g_bath / params.temperature).exp() / partition)
        .collect();
    Ok(ThermalWeights { weights, partition })
}

/// Precomputed per-occupation propagators for one parameter point; evaluate
/// the reduced state at any number of times.
#[derive(Debug, Clone)]
pub struct ThermalAssembler {
    params: ModelParams,
    trunc: TruncationConfig,
    weights: ThermalWeights,
    plain: Vec<Propagator>,
    tilde: Vec<Propagator>,
}

impl ThermalAssembler {
    /// Allowed gap between the trace and the retained thermal weight.
    pub const TRACE_TOLERANCE: f64 = 1e-10;

    pub fn new(params: &ModelParams, trunc: &TruncationConfig) -> Result<Self> {
        let weights = thermal_weights(params, trunc)?;
        let plain = (0..=trunc.n_max)
            .map(|n| Propagator::new(build_generator_plain(params, n)))
            .collect();
        let tilde = (0..=trunc.n_max)
            .map(|n| Propagator::new(build_generator_tilde(params, n)))
            .collect();
        Ok(Self {
            params: *params,
            trunc: *trunc,
            weights,
            plain,
            tilde,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn truncation(&self) -> &TruncationConfig {
        &self.trunc
    }

    pub fn weights(&self) -> &ThermalWeights {
        &self.weights
    }

    /// Reduced state at time `t`, without invariant checks.
    pub fn assemble(&self, state0: &InitialState, t: f64) -> Result<DensityMatrix4> {
        let (alpha, beta) = (state0.alpha, state0.beta);
        let (pa, pb) = (alpha.norm_sqr(), beta.norm_sqr());
        let coherence = alpha * beta.conj();

        let (mut r11, mut r22, mut r33, mut r44) = (0.0, 0.0, 0.0, 0.0);
        let (mut r14, mut r23) = (C64::from(0.0), C64::from(0.0));

        for (n, &w) in self.weights.weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let p = self.plain[n].evolve(t, &self.plain[n].generator().initial_vector())?;
            let q = self.tilde[n].evolve(t, &self.tilde[n].generator().initial_vector())?;
            let nf = n as f64;

            r11 += w * (pa * p.a1.norm_sqr() + pb * (nf + 1.0) * (nf + 2.0) * q.a1.norm_sqr());
            r22 += w * (pa * nf * p.b1.norm_sqr() + pb * (nf + 1.0) * q.b1.norm_sqr());
            r33 += w * (pa * nf * p.c1.norm_sqr() + pb * (nf + 1.0) * q.c1.norm_sqr());
            r44 += w * (pa * nf * (nf - 1.0) * p.d1.norm_sqr() + pb * q.d1.norm_sqr());
            r23 += (p.b1 * p.c1.conj() * (pa * nf) + q.b1 * q.c1.conj() * (pb * (nf + 1.0))) * w;
            // |00,n⟩ from the |00⟩ branch against |11,n⟩ from the |11⟩ branch
            let relative_phase = p.phase(&self.params, t) * q.phase(&self.params, t).conj();
            r14 += coherence * relative_phase * p.a1 * q.d1.conj() * w;
        }

        let mut m = Matrix4::zeros();
        m[(0, 0)] = C64::from(r11);
        m[(1, 1)] = C64::from(r22);
        m[(2, 2)] = C64::from(r33);
        m[(3, 3)] = C64::from(r44);
        m[(0, 3)] = r14;
        m[(3, 0)] = r14.conj();
        m[(1, 2)] = r23;
        m[(2, 1)] = r23.conj();
        Ok(DensityMatrix4(m))
    }

    /// Reduced state at time `t`, checked for trace and positivity.
    pub fn at(&self, state0: &InitialState, t: f64) -> Result<DensityMatrix4> {
        let rho = self.assemble(state0, t)?;
        let retained: f64 = self.weights.weights.iter().sum();
        let gap = (rho.trace() - retained).abs();
        if !(gap <= Self::TRACE_TOLERANCE) {
            return Err(Error::Invariant(format!(
                "trace {} differs from retained thermal weight {retained} by {gap:.3e}",
                rho.trace()
            )));
        }
        let lo = rho.min_eigenvalue();
        if !(lo >= -DensityMatrix4::POSITIVITY_TOLERANCE) {
            return Err(Error::Invariant(format!("negative eigenvalue {lo:.3e}")));
        }
        Ok(rho)
    }
}

/// ρ_s(t) for one parameter point.
pub fn reduced_density(
    params: &ModelParams,
    state0: &InitialState,
    t: f64,
    trunc: &TruncationConfig,
) -> Result<DensityMatrix4> {
    ThermalAssembler::new(params, trunc)?.at(state0, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choose_truncation;

    fn reference_params(d_z: f64) -> ModelParams {
        ModelParams {
            epsilon: 0.5,
            j_coupling: 2.0,
            j_z: 1.0,
            d_z,
            g_bath: 1.0,
            g_sys_bath: 1.0,
            temperature: 2.0,
        }
    }

    #[test]
    fn partition_and_weights() {
        let p = reference_params(0.0);
        let tr = choose_truncation(&p, 1e-12).unwrap();
        let w = thermal_weights(&p, &tr).unwrap();
        let e1 = (-1.0f64).exp();
        assert!((w.partition - 1.0 / (1.0 - e1)).abs() < 1e-15);
        assert!((w.partition - 1.5820).abs() < 1e-4);
        assert!((w.weights[1] - e1 * (1.0 - e1)).abs() < 1e-15);
        assert!((w.weights[1] - 0.23254).abs() < 1e-5);
        assert!(w.tail() <= 1e-12 + 1e-15);
    }

    #[test]
    fn zero_temperature_limit_keeps_vacuum_only() {
        let mut p = reference_params(0.0);
        p.temperature = 1e-3;
        let tr = choose_truncation(&p, 1e-12).unwrap();
        let w = thermal_weights(&p, &tr).unwrap();
        assert_eq!(w.weights[0], 1.0);
        assert!(w.weights[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn initial_bell_state() {
        let p = reference_params(1.0);
        let tr = choose_truncation(&p, 1e-12).unwrap();
        let rho = reduced_density(&p, &InitialState::bell(), 0.0, &tr).unwrap();
        for (i, j, v) in [
            (1, 1, 0.5),
            (4, 4, 0.5),
            (1, 4, 0.5),
            (2, 2, 0.0),
            (3, 3, 0.0),
        ] {
            assert!((rho.at(i, j) - C64::from(v)).norm() < 1e-12, "rho{i}{j}");
        }
    }

    #[test]
    fn decoupled_bath_preserves_block() {
        let mut p = reference_params(2.0);
        p.g_sys_bath = 0.0;
        let tr = choose_truncation(&p, 1e-12).unwrap();
        let asm = ThermalAssembler::new(&p, &tr).unwrap();
        for k in 0..=20 {
            let rho = asm.at(&InitialState::bell(), 0.5 * k as f64).unwrap();
            assert!((rho.at(1, 1).re - 0.5).abs() < 1e-12);
            assert!((rho.at(4, 4).re - 0.5).abs() < 1e-12);
            assert!((rho.at(1, 4).norm() - 0.5).abs() < 1e-12);
            assert!(rho.at(2, 2).re.abs() < 1e-12);
        }
    }

    #[test]
    fn invariants_along_trajectory() {
        let p = reference_params(2.0);
        let tr = choose_truncation(&p, 1e-12).unwrap();
        let asm = ThermalAssembler::new(&p, &tr).unwrap();
        let s0 = InitialState::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8)).unwrap();
        for k in 0..=50 {
            let rho = asm.at(&s0, 0.2 * k as f64).unwrap();
            rho.validate().unwrap();
            assert!(rho.off_x_magnitude() == 0.0);
        }
    }

    #[test]
    fn middle_block_symmetric_without_dm() {
        let p = reference_params(0.0);
        let tr = choose_truncation(&p, 1e-12).unwrap();
        let asm = ThermalAssembler::new(&p, &tr).unwrap();
        for k in 0..=10 {
            let rho = asm.at(&InitialState::bell(), 0.37 * k as f64).unwrap();
            let r22 = rho.at(2, 2);
            for v in [rho.at(3, 3), rho.at(2, 3), rho.at(3, 2)] {
                assert!((v - r22).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn dm_sign_flip_swaps_qubits() {
        let tr = choose_truncation(&reference_params(1.3), 1e-12).unwrap();
        let plus = reduced_density(&reference_params(1.3), &InitialState::bell(), 1.7, &tr).unwrap();
        let minus = reduced_density(&reference_params(-1.3), &InitialState::bell(), 1.7, &tr).unwrap();
        assert!(plus.swap_qubits().max_abs_diff(&minus) < 1e-10);
        // and the middle block is genuinely asymmetric here
        assert!((plus.at(2, 2) - plus.at(3, 3)).norm() > 1e-3);
    }

    #[test]
    fn truncation_convergence() {
        let p = reference_params(2.0);
        let tol = 1e-9;
        let tr = choose_truncation(&p, tol).unwrap();
        let wider = TruncationConfig {
            n_max: tr.n_max + 10,
            ..tr
        };
        for &t in &[0.5, 3.0, 9.0] {
            let a = reduced_density(&p, &InitialState::bell(), t, &tr).unwrap();
            let b = ThermalAssembler::new(&p, &wider)
                .unwrap()
                .assemble(&InitialState::bell(), t)
                .unwrap();
            assert!(a.max_abs_diff(&b) < tol * 10.0);
        }
    }
}
