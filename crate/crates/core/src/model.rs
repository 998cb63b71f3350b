//! Physical parameters, the initial two-qubit state and Fock truncation.
//!
//! Units: ħ = k_B = 1. Qubit basis ordering is |00⟩, |01⟩, |10⟩, |11⟩ with
//! |0⟩ the spin-down state, so σ⁺|0⟩ = |1⟩ and the bath coupling
//! g(σ⁺a + σ⁻a†) conserves the total number of excitations.

use nalgebra::Matrix4;

use crate::{Error, Result, C64};

/// Couplings of the total Hamiltonian and the bath temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Magnetic field along z.
    pub epsilon: f64,
    /// XY exchange J; J > 0 antiferromagnetic, J < 0 ferromagnetic.
    pub j_coupling: f64,
    /// Anisotropy J_z.
    pub j_z: f64,
    /// z-component of the DM vector.
    pub d_z: f64,
    /// Inner-bath coupling g0.
    pub g_bath: f64,
    /// System-bath coupling g.
    pub g_sys_bath: f64,
    pub temperature: f64,
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("epsilon", self.epsilon),
            ("j_coupling", self.j_coupling),
            ("j_z", self.j_z),
            ("d_z", self.d_z),
            ("g_bath", self.g_bath),
            ("g_sys_bath", self.g_sys_bath),
            ("temperature", self.temperature),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} is not finite"
                )));
            }
        }
        if self.temperature <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "temperature must be > 0, got {}",
                self.temperature
            )));
        }
        if self.g_bath <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "g_bath must be > 0 for a normalizable thermal state, got {}",
                self.g_bath
            )));
        }
        Ok(())
    }

    /// Boltzmann ratio q = e^{-2 g0 / T} of successive bath occupations.
    pub fn boltzmann_ratio(&self) -> f64 {
        (-2.0 * self.g_bath / self.temperature).exp()
    }

    /// Two-qubit Hamiltonian in the |00⟩, |01⟩, |10⟩, |11⟩ basis.
    ///
    /// The normalisation is the one under which the amplitude equations read
    /// `i dA/dt = (J_z - ε + 2g0 n̂) A + …` and the flip-flop block couples
    /// |10⟩ into |01⟩ with J + 2iD_z.
    pub fn system_hamiltonian(&self) -> Matrix4<C64> {
        let (eps, j, jz, dz) = (self.epsilon, self.j_coupling, self.j_z, self.d_z);
        let mut h = Matrix4::zeros();
        h[(0, 0)] = C64::from(jz - eps);
        h[(1, 1)] = C64::from(-jz);
        h[(2, 2)] = C64::from(-jz);
        h[(3, 3)] = C64::from(jz + eps);
        h[(1, 2)] = C64::new(j, 2.0 * dz);
        h[(2, 1)] = C64::new(j, -2.0 * dz);
        h
    }

    /// Sign-convention label for the XY exchange.
    pub fn regime(&self) -> &'static str {
        if self.j_coupling > 0.0 {
            "antiferromagnetic"
        } else if self.j_coupling < 0.0 {
            "ferromagnetic"
        } else {
            "no XY exchange"
        }
    }
}

/// α|00⟩ + β|11⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    pub alpha: C64,
    pub beta: C64,
}

impl InitialState {
    pub const NORM_TOLERANCE: f64 = 1e-12;

    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        if !(alpha.re.is_finite()
            && alpha.im.is_finite()
            && beta.re.is_finite()
            && beta.im.is_finite())
        {
            return Err(Error::InvalidParameter("alpha/beta must be finite".into()));
        }
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > Self::NORM_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "|alpha|^2 + |beta|^2 = {norm:.15} is not 1"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// (|00⟩ + |11⟩)/√2.
    pub fn bell() -> Self {
        let s = C64::from(std::f64::consts::FRAC_1_SQRT_2);
        Self { alpha: s, beta: s }
    }

    /// State vector in the two-qubit basis.
    pub fn vector(&self) -> [C64; 4] {
        [self.alpha, C64::from(0.0), C64::from(0.0), self.beta]
    }
}

/// Largest bath occupation kept in the thermal sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationConfig {
    pub n_max: usize,
    pub tail_tolerance: f64,
    /// Thermal weight of all occupations above `n_max`, e^{-2(n_max+1) g0/T}.
    pub tail_weight: f64,
}

impl TruncationConfig {
    /// Smallest cutoff ever returned; every thermal sum then has a term
    /// reaching two bath excitations.
    pub const MIN_N_MAX: usize = 2;
    pub const MAX_N_MAX: usize = 100_000;
}

fn tail_weight(ratio: f64, n_max: usize) -> f64 {
    // ratio = 2 g0 / T; tail beyond n_max of the geometric distribution
    (-(n_max as f64 + 1.0) * ratio).exp()
}

/// Smallest `n_max >= 2` whose thermal tail weight is at most `tol`.
pub fn choose_truncation(params: &ModelParams, tol: f64) -> Result<TruncationConfig> {
    params.validate()?;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tail tolerance must lie in (0, 1), got {tol}"
        )));
    }
    let ratio = 2.0 * params.g_bath / params.temperature;
    let mut n = if ratio.is_finite() {
        let needed = (-tol.ln() / ratio).ceil() - 1.0;
        if needed > TruncationConfig::MAX_N_MAX as f64 {
            return Err(Error::InvalidParameter(format!(
                "truncation would exceed n_max = {} (T/g0 too large for tol {tol})",
                TruncationConfig::MAX_N_MAX
            )));
        }
        needed.max(0.0) as usize
    } else {
        0
    };
    // the closed form can be off by one at exact boundaries
    while tail_weight(ratio, n) > tol {
        n += 1;
    }
    while n > 0 && tail_weight(ratio, n - 1) <= tol {
        n -= 1;
    }
    let n_max = n.max(TruncationConfig::MIN_N_MAX);
    Ok(TruncationConfig {
        n_max,
        tail_tolerance: tol,
        tail_weight: tail_weight(ratio, n_max),
    })
}
