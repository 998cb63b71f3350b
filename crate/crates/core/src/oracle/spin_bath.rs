use nalgebra::{DMatrix, DVector, Matrix4, SymmetricEigen};

use super::{JointState, NORM_TOLERANCE};
use crate::{DensityMatrix4, Error, InitialState, ModelParams, Result, C64};

/// Largest bath handled by [`SpinBathSystem`].
pub const MAX_SPINS: usize = 12;
/// Largest bath for which the full spin Gibbs state is enumerated.
pub const MAX_THERMAL_SPINS: usize = 10;

/// Initial bath state for the finite-N comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BathEnsemble {
    /// Mixture of symmetric Dicke states with n flipped spins, weighted
    /// e^{-2 g0 n / T}. This is the state the bosonic model is the large-N
    /// limit of.
    #[default]
    HolsteinPrimakoff,
    /// Gibbs state of the bath Hamiltonian over all 2^N configurations.
    SpinThermal,
}

#[derive(Debug, Clone)]
struct Sector {
    indices: Vec<usize>,
    rows: Vec<Vec<(usize, C64)>>,
    norm1: f64,
}

impl Sector {
    fn apply(&self, x: &[C64], out: &mut [C64]) {
        for (o, row) in out.iter_mut().zip(&self.rows) {
            *o = row.iter().map(|&(j, h)| h * x[j]).sum();
        }
    }

    /// e^{-iHt}x by scaled Taylor series. Each step keeps ‖H dt‖₁ ≤ 1 and the
    /// series is cut where the remainder bound drops below 1e-17.
    fn expmv(&self, x: &[C64], t: f64) -> Vec<C64> {
        let steps = (self.norm1 * t.abs()).ceil().max(1.0) as usize;
        let dt = t / steps as f64;
        let h_dt = self.norm1 * dt.abs();
        let mut terms = 1;
        let mut bound = h_dt;
        while bound > 1e-17 && terms < 60 {
            terms += 1;
            bound *= h_dt / terms as f64;
        }

        let mut acc = x.to_vec();
        let mut term = vec![C64::from(0.0); x.len()];
        let mut next = vec![C64::from(0.0); x.len()];
        for _ in 0..steps {
            term.copy_from_slice(&acc);
            for k in 1..=terms {
                self.apply(&term, &mut next);
                let f = C64::new(0.0, -dt / k as f64);
                for (tk, nk) in term.iter_mut().zip(&next) {
                    *tk = f * nk;
                }
                for (a, tk) in acc.iter_mut().zip(&term) {
                    *a += tk;
                }
            }
        }
        acc
    }
}

/// Two qubits coupled to N explicit bath spins:
/// H = H_s + (g0/N) Σ_{j≠k}(σ_j⁺σ_k⁻ + σ_j⁻σ_k⁺) + (g/√N) Σ_{q,j}(σ_q⁺σ_j⁻ + σ_q⁻σ_j⁺).
/// The joint index is s·2^N + b, with bit j of b the state of bath spin j.
/// Total excitation number is conserved, so the Hamiltonian is stored as one
/// sparse block per excitation count.
#[derive(Debug, Clone)]
pub struct SpinBathSystem {
    params: ModelParams,
    n_spins: usize,
    sectors: Vec<Sector>,
    /// Joint index -> (sector, position in sector).
    locate: Vec<(usize, usize)>,
}

impl SpinBathSystem {
    pub fn new(params: &ModelParams, n_spins: usize) -> Result<Self> {
        params.validate()?;
        if n_spins == 0 {
            return Err(Error::InvalidParameter(
                "bath needs at least one spin".into(),
            ));
        }
        if n_spins > MAX_SPINS {
            return Err(Error::DimensionOverflow {
                requested: n_spins,
                cap: MAX_SPINS,
            });
        }
        let bath_dim = 1usize << n_spins;
        let dim = 4 * bath_dim;
        let excitations = |i: usize| i.count_ones() as usize;

        let mut sectors: Vec<Sector> = (0..=n_spins + 2)
            .map(|_| Sector {
                indices: Vec::new(),
                rows: Vec::new(),
                norm1: 0.0,
            })
            .collect();
        let mut locate = vec![(0, 0); dim];
        for (i, slot) in locate.iter_mut().enumerate() {
            let k = excitations(i);
            *slot = (k, sectors[k].indices.len());
            sectors[k].indices.push(i);
        }

        let hs = params.system_hamiltonian();
        let hop_bath = C64::from(2.0 * params.g_bath / n_spins as f64);
        let hop_sb = C64::from(params.g_sys_bath / (n_spins as f64).sqrt());

        for sector in &mut sectors {
            for &i in &sector.indices {
                let (s, b) = (i / bath_dim, i % bath_dim);
                let mut row: Vec<(usize, C64)> = Vec::new();
                // row i holds <i|H|j>
                for sp in 0..4 {
                    let h = hs[(s, sp)];
                    if h != C64::from(0.0) {
                        row.push((sp * bath_dim + b, h));
                    }
                }
                for j in 0..n_spins {
                    for k in 0..n_spins {
                        // <b|σ_j⁺σ_k⁻|b'>: b' has k up and j down
                        if j != k && b >> j & 1 == 1 && b >> k & 1 == 0 {
                            let bp = b ^ (1 << j) ^ (1 << k);
                            row.push((s * bath_dim + bp, hop_bath));
                        }
                    }
                }
                for q in [1usize, 0] {
                    let qbit = s >> q & 1;
                    let sp = s ^ (1 << q);
                    for j in 0..n_spins {
                        let bbit = b >> j & 1;
                        if qbit != bbit {
                            let bp = b ^ (1 << j);
                            row.push((sp * bath_dim + bp, hop_sb));
                        }
                    }
                }
                sector.rows.push(row);
            }
            // global -> local column indices
            for row in &mut sector.rows {
                for entry in row.iter_mut() {
                    entry.0 = locate[entry.0].1;
                }
            }
            sector.norm1 = sector
                .rows
                .iter()
                .map(|r| r.iter().map(|e| e.1.norm()).sum::<f64>())
                .fold(0.0, f64::max);
        }

        Ok(Self {
            params: *params,
            n_spins,
            sectors,
            locate,
        })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn bath_dim(&self) -> usize {
        1 << self.n_spins
    }

    /// Dense joint Hamiltonian, for checks on small baths.
    pub fn dense_hamiltonian(&self) -> DMatrix<C64> {
        let dim = self.locate.len();
        let mut h = DMatrix::zeros(dim, dim);
        for sector in &self.sectors {
            for (r, row) in sector.rows.iter().enumerate() {
                for &(c, v) in row {
                    h[(sector.indices[r], sector.indices[c])] += v;
                }
            }
        }
        h
    }

    pub fn evolve(&self, psi: &JointState, t: f64) -> Result<JointState> {
        let dim = self.locate.len();
        if psi.amplitudes.len() != dim {
            return Err(Error::InvalidParameter(format!(
                "joint state has {} amplitudes, expected {dim}",
                psi.amplitudes.len()
            )));
        }
        let mut out = DVector::zeros(dim);
        for sector in &self.sectors {
            let local: Vec<C64> = sector.indices.iter().map(|&i| psi.amplitudes[i]).collect();
            if local.iter().all(|a| *a == C64::from(0.0)) {
                continue;
            }
            for (&i, a) in sector.indices.iter().zip(sector.expmv(&local, t)) {
                out[i] = a;
            }
        }
        let out = JointState {
            amplitudes: out,
            bath_dim: psi.bath_dim,
        };
        let loss = (out.norm_sqr() - psi.norm_sqr()).abs();
        if loss > NORM_TOLERANCE {
            return Err(Error::NormLoss(loss));
        }
        Ok(out)
    }

    /// Pure bath states and their weights for the chosen ensemble.
    fn bath_ensemble(&self, ensemble: BathEnsemble) -> Result<Vec<(f64, Vec<C64>)>> {
        let n = self.n_spins;
        let bath_dim = self.bath_dim();
        let beta = 1.0 / self.params.temperature;
        let mut members: Vec<(f64, Vec<C64>)> = Vec::new();
        match ensemble {
            BathEnsemble::HolsteinPrimakoff => {
                for flips in 0..=n {
                    let configs: Vec<usize> = (0..bath_dim)
                        .filter(|b| b.count_ones() as usize == flips)
                        .collect();
                    let amp = C64::from(1.0 / (configs.len() as f64).sqrt());
                    let mut v = vec![C64::from(0.0); bath_dim];
                    for b in configs {
                        v[b] = amp;
                    }
                    members.push(((-2.0 * self.params.g_bath * flips as f64 * beta).exp(), v));
                }
            }
            BathEnsemble::SpinThermal => {
                if n > MAX_THERMAL_SPINS {
                    return Err(Error::DimensionOverflow {
                        requested: n,
                        cap: MAX_THERMAL_SPINS,
                    });
                }
                let hop = C64::from(2.0 * self.params.g_bath / n as f64);
                let mut levels: Vec<(f64, Vec<C64>)> = Vec::new();
                for flips in 0..=n {
                    let configs: Vec<usize> = (0..bath_dim)
                        .filter(|b| b.count_ones() as usize == flips)
                        .collect();
                    let d = configs.len();
                    let mut h = DMatrix::<C64>::zeros(d, d);
                    for (r, &b) in configs.iter().enumerate() {
                        for (c, &bp) in configs.iter().enumerate() {
                            if (b ^ bp).count_ones() == 2 {
                                h[(r, c)] = hop;
                            }
                        }
                    }
                    let eig = SymmetricEigen::new(h);
                    for (k, &e) in eig.eigenvalues.iter().enumerate() {
                        let mut v = vec![C64::from(0.0); bath_dim];
                        for (r, &b) in configs.iter().enumerate() {
                            v[b] = eig.eigenvectors[(r, k)];
                        }
                        levels.push((e, v));
                    }
                }
                let e_min = levels.iter().map(|l| l.0).fold(f64::INFINITY, f64::min);
                members = levels
                    .into_iter()
                    .map(|(e, v)| (((e_min - e) * beta).exp(), v))
                    .collect();
            }
        }
        let z: f64 = members.iter().map(|m| m.0).sum();
        for m in &mut members {
            m.0 /= z;
        }
        Ok(members)
    }

    /// Σ_k p_k Tr_bath e^{-iHt}(|ψ_s⟩⟨ψ_s| ⊗ |k⟩⟨k|)e^{iHt}.
    pub fn reduced_density(
        &self,
        state0: &InitialState,
        t: f64,
        ensemble: BathEnsemble,
    ) -> Result<DensityMatrix4> {
        let mut rho = Matrix4::zeros();
        for (w, bath) in self.bath_ensemble(ensemble)? {
            let psi = JointState::product(state0.vector(), &bath);
            self.evolve(&psi, t)?.accumulate_reduced(w, &mut rho);
        }
        Ok(DensityMatrix4(rho))
    }
}

/// Reduced state for N explicit bath spins in the Holstein–Primakoff ensemble.
pub fn finite_n_spin_bath(
    params: &ModelParams,
    state0: &InitialState,
    t: f64,
    n_spins: usize,
) -> Result<DensityMatrix4> {
    finite_n_spin_bath_with(params, state0, t, n_spins, BathEnsemble::default())
}

pub fn finite_n_spin_bath_with(
    params: &ModelParams,
    state0: &InitialState,
    t: f64,
    n_spins: usize,
    ensemble: BathEnsemble,
) -> Result<DensityMatrix4> {
    SpinBathSystem::new(params, n_spins)?.reduced_density(state0, t, ensemble)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams {
        ModelParams {
            epsilon: 0.5,
            j_coupling: 2.0,
            j_z: 1.0,
            d_z: 1.0,
            g_bath: 1.0,
            g_sys_bath: 1.0,
            temperature: 2.0,
        }
    }

    #[test]
    fn dense_hamiltonian_hermitian() {
        let sys = SpinBathSystem::new(&params(), 4).unwrap();
        let h = sys.dense_hamiltonian();
        assert!((&h - h.adjoint()).camax() < 1e-15);
    }

    #[test]
    fn expmv_matches_dense_exponential() {
        let sys = SpinBathSystem::new(&params(), 3).unwrap();
        let h = sys.dense_hamiltonian();
        let t = 1.7;
        let u = (h * C64::new(0.0, -t)).exp();
        let dim = 4 * sys.bath_dim();
        let x = DVector::from_fn(dim, |i, _| {
            C64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())
        });
        let x = x.normalize();
        let psi = JointState {
            amplitudes: x.clone(),
            bath_dim: sys.bath_dim(),
        };
        let out = sys.evolve(&psi, t).unwrap();
        assert!((&out.amplitudes - u * x).camax() < 1e-12);
    }

    #[test]
    fn ensembles_normalised() {
        let sys = SpinBathSystem::new(&params(), 4).unwrap();
        for ens in [BathEnsemble::HolsteinPrimakoff, BathEnsemble::SpinThermal] {
            let rho = sys
                .reduced_density(&InitialState::bell(), 0.8, ens)
                .unwrap();
            rho.validate().unwrap();
            assert!(rho.is_x_state());
        }
    }

    #[test]
    fn caps_enforced() {
        assert!(matches!(
            SpinBathSystem::new(&params(), MAX_SPINS + 1),
            Err(Error::DimensionOverflow { .. })
        ));
        let sys = SpinBathSystem::new(&params(), MAX_THERMAL_SPINS + 1).unwrap();
        assert!(sys
            .reduced_density(&InitialState::bell(), 0.1, BathEnsemble::SpinThermal)
            .is_err());
    }
}
