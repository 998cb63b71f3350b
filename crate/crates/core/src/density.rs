use nalgebra::Matrix4;

use crate::{Error, Result, C64};

/// Two-qubit density matrix in the |00⟩, |01⟩, |10⟩, |11⟩ basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4(pub Matrix4<C64>);

/// Positions that vanish in an X-state: everything off the diagonal and
/// anti-diagonal.
pub const OFF_X: [(usize, usize); 8] = [
    (0, 1),
    (0, 2),
    (1, 0),
    (2, 0),
    (1, 3),
    (2, 3),
    (3, 1),
    (3, 2),
];

impl DensityMatrix4 {
    pub const HERMITIAN_TOLERANCE: f64 = 1e-10;
    pub const TRACE_TOLERANCE: f64 = 1e-10;
    pub const POSITIVITY_TOLERANCE: f64 = 1e-10;
    pub const X_TOLERANCE: f64 = 1e-12;

    pub fn from_matrix(m: Matrix4<C64>) -> Self {
        Self(m)
    }

    /// Builds an X-state from its independent entries.
    pub fn x_state(r11: f64, r22: f64, r33: f64, r44: f64, r14: C64, r23: C64) -> Self {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = C64::from(r11);
        m[(1, 1)] = C64::from(r22);
        m[(2, 2)] = C64::from(r33);
        m[(3, 3)] = C64::from(r44);
        m[(0, 3)] = r14;
        m[(3, 0)] = r14.conj();
        m[(1, 2)] = r23;
        m[(2, 1)] = r23.conj();
        Self(m)
    }

    /// |ψ⟩⟨ψ|.
    pub fn pure(psi: [C64; 4]) -> Self {
        let mut m = Matrix4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        Self(m)
    }

    pub fn maximally_mixed() -> Self {
        Self(Matrix4::identity() * C64::from(0.25))
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.0
    }

    /// 1-based entry access, `rho.at(1, 4)` is ρ14.
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.0[(i - 1, j - 1)]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Largest deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        max_modulus(&(self.0 - self.0.adjoint()))
    }

    /// Largest magnitude among the entries an X-state must not have.
    pub fn off_x_magnitude(&self) -> f64 {
        OFF_X
            .iter()
            .map(|&(i, j)| self.0[(i, j)].norm())
            .fold(0.0, f64::max)
    }

    pub fn is_x_state(&self) -> bool {
        self.off_x_magnitude() <= Self::X_TOLERANCE
    }

    /// Spectrum from a general Hermitian eigensolver, ascending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let h = (self.0 + self.0.adjoint()) * C64::from(0.5);
        let ev = nalgebra::SymmetricEigen::new(h).eigenvalues;
        let mut out = [ev[0], ev[1], ev[2], ev[3]];
        out.sort_by(f64::total_cmp);
        out
    }

    /// Smallest eigenvalue; the closed X-state form when applicable.
    pub fn min_eigenvalue(&self) -> f64 {
        if self.is_x_state() {
            crate::correlations::density_eigenvalues(self)
                .map(|g| g.into_iter().fold(f64::INFINITY, f64::min))
                .unwrap_or_else(|_| self.eigenvalues()[0])
        } else {
            self.eigenvalues()[0]
        }
    }

    /// Hermiticity, unit trace and positivity within the type tolerances.
    pub fn validate(&self) -> Result<()> {
        let h = self.hermiticity_defect();
        if !(h <= Self::HERMITIAN_TOLERANCE) {
            return Err(Error::Invariant(format!("hermiticity defect {h:.3e}")));
        }
        let tr = (self.trace() - 1.0).abs();
        if !(tr <= Self::TRACE_TOLERANCE) {
            return Err(Error::Invariant(format!("trace defect {tr:.3e}")));
        }
        let lo = self.min_eigenvalue();
        if !(lo >= -Self::POSITIVITY_TOLERANCE) {
            return Err(Error::Invariant(format!("negative eigenvalue {lo:.3e}")));
        }
        Ok(())
    }

    /// Reduced state of qubit 1 (tracing out qubit 2).
    pub fn marginal_first(&self) -> [[C64; 2]; 2] {
        let m = &self.0;
        [
            [m[(0, 0)] + m[(1, 1)], m[(0, 2)] + m[(1, 3)]],
            [m[(2, 0)] + m[(3, 1)], m[(2, 2)] + m[(3, 3)]],
        ]
    }

    /// Reduced state of qubit 2 (tracing out qubit 1).
    pub fn marginal_second(&self) -> [[C64; 2]; 2] {
        let m = &self.0;
        [
            [m[(0, 0)] + m[(2, 2)], m[(0, 1)] + m[(2, 3)]],
            [m[(1, 0)] + m[(3, 2)], m[(1, 1)] + m[(3, 3)]],
        ]
    }

    /// Exchanges the two qubits.
    pub fn swap_qubits(&self) -> Self {
        let perm = [0, 2, 1, 3];
        Self(Matrix4::from_fn(|i, j| self.0[(perm[i], perm[j])]))
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_modulus(&(self.0 - other.0))
    }
}

fn max_modulus(m: &Matrix4<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
