use nalgebra::{DMatrix, DVector, Matrix4, SymmetricEigen};

use super::{JointState, NORM_TOLERANCE};
use crate::{DensityMatrix4, Error, InitialState, ModelParams, Result, TruncationConfig, C64};

/// H_tot = H_s ⊗ 1 + 1 ⊗ 2g0 a†a + g[(σ1⁺+σ2⁺) ⊗ a + (σ1⁻+σ2⁻) ⊗ a†] on
/// qubits ⊗ {|0⟩..|n_cut⟩}, diagonalised once and reused for every initial
/// occupation and time.
#[derive(Debug, Clone)]
pub struct BosonicOracle {
    params: ModelParams,
    n_cut: usize,
    vectors: DMatrix<C64>,
    energies: DVector<f64>,
}

/// Matrix element ⟨s'|σ1⁺ + σ2⁺|s⟩ as the list of (s, s') pairs, s = 2 q1 + q2.
const RAISE: [(usize, usize); 4] = [(0, 2), (0, 1), (1, 3), (2, 3)];

impl BosonicOracle {
    pub fn new(params: &ModelParams, n_cut: usize) -> Result<Self> {
        params.validate()?;
        let h = Self::hamiltonian(params, n_cut);
        let eig = SymmetricEigen::new(h);
        Ok(Self {
            params: *params,
            n_cut,
            vectors: eig.eigenvectors,
            energies: eig.eigenvalues,
        })
    }

    /// Explicit H_tot, index = s·(n_cut+1) + m.
    pub fn hamiltonian(params: &ModelParams, n_cut: usize) -> DMatrix<C64> {
        let d = n_cut + 1;
        let hs = params.system_hamiltonian();
        let mut h = DMatrix::<C64>::zeros(4 * d, 4 * d);
        for s in 0..4 {
            for sp in 0..4 {
                if hs[(s, sp)] != C64::from(0.0) {
                    for m in 0..d {
                        h[(s * d + m, sp * d + m)] += hs[(s, sp)];
                    }
                }
            }
            for m in 0..d {
                h[(s * d + m, s * d + m)] += C64::from(2.0 * params.g_bath * m as f64);
            }
        }
        // σ⁺a: (s, m) -> (s', m-1) with √m
        for &(s, sp) in &RAISE {
            for m in 1..d {
                let amp = C64::from(params.g_sys_bath * (m as f64).sqrt());
                h[(sp * d + m - 1, s * d + m)] += amp;
                h[(s * d + m, sp * d + m - 1)] += amp;
            }
        }
        h
    }

    pub fn n_cut(&self) -> usize {
        self.n_cut
    }

    /// e^{-i H_tot t} applied to a joint state.
    pub fn evolve(&self, psi: &JointState, t: f64) -> Result<JointState> {
        let mut coeffs = self.vectors.adjoint() * &psi.amplitudes;
        for (c, e) in coeffs.iter_mut().zip(self.energies.iter()) {
            *c *= C64::from_polar(1.0, -e * t);
        }
        let out = JointState {
            amplitudes: &self.vectors * coeffs,
            bath_dim: psi.bath_dim,
        };
        let loss = (out.norm_sqr() - psi.norm_sqr()).abs();
        if loss > NORM_TOLERANCE {
            return Err(Error::NormLoss(loss));
        }
        Ok(out)
    }

    /// Boltzmann mixture over n ≤ n_max of e^{-iHt}(|ψ_s⟩⊗|n⟩), bath traced out.
    pub fn reduced_density(
        &self,
        state0: &InitialState,
        t: f64,
        trunc: &TruncationConfig,
    ) -> Result<DensityMatrix4> {
        // |11,n> reaches |00,n+2>; a smaller cutoff would clip the dynamics
        if self.n_cut < trunc.n_max + 2 {
            return Err(Error::InvalidParameter(format!(
                "n_cut = {} must be at least n_max + 2 = {}",
                self.n_cut,
                trunc.n_max + 2
            )));
        }
        let d = self.n_cut + 1;
        let q = (-2.0 * self.params.g_bath / self.params.temperature).exp();
        let mut rho = Matrix4::zeros();
        for n in 0..=trunc.n_max {
            let w =
                (1.0 - q) * (-2.0 * n as f64 * self.params.g_bath / self.params.temperature).exp();
            if w == 0.0 {
                continue;
            }
            let mut bath = vec![C64::from(0.0); d];
            bath[n] = C64::from(1.0);
            let psi = JointState::product(state0.vector(), &bath);
            self.evolve(&psi, t)?.accumulate_reduced(w, &mut rho);
        }
        Ok(DensityMatrix4(rho))
    }
}

/// Reduced state by direct exponentiation of the joint Hamiltonian.
pub fn direct_evolution_bosonic(
    params: &ModelParams,
    state0: &InitialState,
    t: f64,
    trunc: &TruncationConfig,
    n_cut: usize,
) -> Result<DensityMatrix4> {
    BosonicOracle::new(params, n_cut)?.reduced_density(state0, t, trunc)
}
