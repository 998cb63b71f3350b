//! Projective measurement on qubit 2 and the conditional entropy it leaves
//! on qubit 1.
//!
//! A rank-one von Neumann measurement is {V|0⟩⟨0|V†, V|1⟩⟨1|V†} with
//! V = t·I + i(y1σx + y2σy + y3σz), t² + |y|² = 1. For an X-state only the
//! combinations
//!
//! ```text
//! k = t² + y3²,  l = 1 − k,  m = (t y1 + y2 y3)²,  n = (t y2 − y1 y3)(t y1 + y2 y3)
//! ```
//!
//! enter the outcome probabilities and conditional spectra.

use super::nelder_mead::{nelder_mead, NelderMeadOptions};
use super::shannon_bits;
use crate::{DensityMatrix4, Error, Result, C64};

/// Branches with probability below this contribute no conditional entropy.
pub const BRANCH_PROBABILITY_FLOOR: f64 = 1e-14;
/// Slack allowed on conditional eigenvalues before they count as unphysical.
pub const EIGENVALUE_SLACK: f64 = 1e-10;

/// Unit quaternion (t, y1, y2, y3) parametrising V ∈ SU(2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementParams {
    pub t_comp: f64,
    pub y1: f64,
    pub y2: f64,
    pub y3: f64,
}

impl MeasurementParams {
    /// Normalises (t, y1, y2, y3) onto the unit 3-sphere.
    pub fn new(t_comp: f64, y1: f64, y2: f64, y3: f64) -> Result<Self> {
        let norm = (t_comp * t_comp + y1 * y1 + y2 * y2 + y3 * y3).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidParameter(
                "measurement quaternion must be non-zero".into(),
            ));
        }
        Ok(Self {
            t_comp: t_comp / norm,
            y1: y1 / norm,
            y2: y2 / norm,
            y3: y3 / norm,
        })
    }

    /// Hyperspherical angles: t = cos ψ, y1 = sin ψ cos θ,
    /// y2 = sin ψ sin θ cos φ, y3 = sin ψ sin θ sin φ.
    pub fn from_angles(psi: f64, theta: f64, phi: f64) -> Self {
        let (sp, cp) = psi.sin_cos();
        let (st, ct) = theta.sin_cos();
        let (sf, cf) = phi.sin_cos();
        Self {
            t_comp: cp,
            y1: sp * ct,
            y2: sp * st * cf,
            y3: sp * st * sf,
        }
    }

    /// The measurement with k = l = 1/2 and m = n = 0 (σx eigenbasis).
    pub fn equatorial_reference() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            t_comp: s,
            y1: 0.0,
            y2: s,
            y3: 0.0,
        }
    }

    /// V = I, measuring in the computational basis (k = 1).
    pub fn computational() -> Self {
        Self {
            t_comp: 1.0,
            y1: 0.0,
            y2: 0.0,
            y3: 0.0,
        }
    }

    pub fn k(&self) -> f64 {
        self.t_comp * self.t_comp + self.y3 * self.y3
    }

    pub fn l(&self) -> f64 {
        1.0 - self.k()
    }

    pub fn m(&self) -> f64 {
        (self.t_comp * self.y1 + self.y2 * self.y3).powi(2)
    }

    pub fn n(&self) -> f64 {
        (self.t_comp * self.y2 - self.y1 * self.y3) * (self.t_comp * self.y1 + self.y2 * self.y3)
    }

    /// V as a 2×2 matrix, rows then columns.
    pub fn unitary(&self) -> [[C64; 2]; 2] {
        let (t, y1, y2, y3) = (self.t_comp, self.y1, self.y2, self.y3);
        [
            [C64::new(t, y3), C64::new(y2, y1)],
            [C64::new(-y2, y1), C64::new(t, -y3)],
        ]
    }
}

/// Outcome probabilities and conditional spectra of a measurement on qubit 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalEnsemble {
    pub p0: f64,
    /// (α+, α−), spectrum of qubit 1 after outcome 0.
    pub alpha: (f64, f64),
    pub p1: f64,
    /// (β+, β−), spectrum of qubit 1 after outcome 1.
    pub beta: (f64, f64),
}

impl ConditionalEnsemble {
    /// p0·S(ρ0) + p1·S(ρ1).
    pub fn entropy(&self) -> f64 {
        let branch = |p: f64, (a, b): (f64, f64)| {
            if p > BRANCH_PROBABILITY_FLOOR {
                p * shannon_bits([a, b])
            } else {
                0.0
            }
        };
        branch(self.p0, self.alpha) + branch(self.p1, self.beta)
    }
}

fn ensemble_raw(rho: &DensityMatrix4, meas: &MeasurementParams) -> ConditionalEnsemble {
    let (r11, r22, r33, r44) = (
        rho.at(1, 1).re,
        rho.at(2, 2).re,
        rho.at(3, 3).re,
        rho.at(4, 4).re,
    );
    let r14 = rho.at(1, 4);
    let r23 = rho.at(2, 3);
    let (k, l, m, n) = (meas.k(), meas.l(), meas.m(), meas.n());

    // the interference term pairs ρ14 with ρ32 = ρ23*
    let cross = r14 * r23.conj();
    let theta = 4.0 * k * l * (r14.norm_sqr() + r23.norm_sqr() + 2.0 * cross.re)
        - 16.0 * m * cross.re
        + 16.0 * n * cross.im;
    let theta = theta.max(0.0);

    let p0 = (r11 + r33) * k + (r22 + r44) * l;
    let p1 = (r11 + r33) * l + (r22 + r44) * k;

    let split = |p: f64, d: f64| {
        if p > BRANCH_PROBABILITY_FLOOR {
            let r = (d * d + theta).sqrt() / p;
            (0.5 * (1.0 + r), 0.5 * (1.0 - r))
        } else {
            (1.0, 0.0)
        }
    };
    let alpha = split(p0, (r11 - r33) * k + (r22 - r44) * l);
    let beta = split(p1, (r11 - r33) * l + (r22 - r44) * k);
    ConditionalEnsemble {
        p0,
        alpha,
        p1,
        beta,
    }
}

/// Outcome probabilities and conditional eigenvalues for an X-state.
pub fn conditional_ensemble(
    rho: &DensityMatrix4,
    meas: &MeasurementParams,
) -> Result<ConditionalEnsemble> {
    let off = rho.off_x_magnitude();
    if off > DensityMatrix4::X_TOLERANCE {
        return Err(Error::NotXState(off));
    }
    let e = ensemble_raw(rho, meas);
    for v in [e.alpha.0, e.alpha.1, e.beta.0, e.beta.1] {
        if !(-EIGENVALUE_SLACK..=1.0 + EIGENVALUE_SLACK).contains(&v) {
            return Err(Error::ConditionalEigenvalue(v));
        }
    }
    Ok(e)
}

/// p0·S(ρ0) + p1·S(ρ1) for one measurement.
pub fn conditional_entropy(rho: &DensityMatrix4, meas: &MeasurementParams) -> f64 {
    ensemble_raw(rho, meas).entropy()
}

/// Minimal conditional entropy and the measurement attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub at: MeasurementParams,
    pub value: f64,
}

/// Points per hyperspherical angle in the coarse search.
pub const GRID_POINTS: usize = 20;
/// Grid points refined by the simplex search.
pub const REFINED_SEEDS: usize = 5;

/// Global minimum of the conditional entropy over von Neumann measurements
/// on qubit 2: a fixed angular grid, then Nelder–Mead from the best grid
/// points and from the computational and σx measurements.
pub fn minimize_conditional_entropy(rho: &DensityMatrix4) -> Result<Minimum> {
    let off = rho.off_x_magnitude();
    if off > DensityMatrix4::X_TOLERANCE {
        return Err(Error::NotXState(off));
    }
    let objective =
        |a: &[f64; 3]| conditional_entropy(rho, &MeasurementParams::from_angles(a[0], a[1], a[2]));

    let pi = std::f64::consts::PI;
    let g = GRID_POINTS;
    let mut grid: Vec<([f64; 3], f64)> = Vec::with_capacity(g * g * g);
    for i in 0..g {
        let psi = pi * i as f64 / (g - 1) as f64;
        for j in 0..g {
            let theta = pi * j as f64 / (g - 1) as f64;
            for k in 0..g {
                let phi = 2.0 * pi * k as f64 / g as f64;
                let a = [psi, theta, phi];
                grid.push((a, objective(&a)));
            }
        }
    }
    // stable sort keeps grid order among ties
    grid.sort_by(|a, b| a.1.total_cmp(&b.1));

    let mut seeds: Vec<[f64; 3]> = grid.iter().take(REFINED_SEEDS).map(|s| s.0).collect();
    seeds.push([0.0, 0.0, 0.0]);
    seeds.push([pi / 4.0, pi / 2.0, 0.0]);

    let opts = NelderMeadOptions {
        initial_step: 0.1,
        ..Default::default()
    };
    let mut best = grid[0];
    for seed in seeds {
        let cand = nelder_mead(objective, seed, opts);
        if cand.1 < best.1 {
            best = cand;
        }
    }
    let [psi, theta, phi] = best.0;
    Ok(Minimum {
        at: MeasurementParams::from_angles(psi, theta, phi),
        value: best.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_parameters() {
        let r = MeasurementParams::equatorial_reference();
        assert!((r.k() - 0.5).abs() < 1e-15 && (r.l() - 0.5).abs() < 1e-15);
        assert!(r.m().abs() < 1e-15 && r.n().abs() < 1e-15);
        let c = MeasurementParams::computational();
        assert_eq!((c.k(), c.l()), (1.0, 0.0));
        let q = MeasurementParams::new(1.0, 2.0, -0.5, 0.3).unwrap();
        let norm = q.t_comp.powi(2) + q.y1.powi(2) + q.y2.powi(2) + q.y3.powi(2);
        assert!((norm - 1.0).abs() < 1e-15);
        assert!((0.0..=1.0).contains(&q.k()));
        assert!(MeasurementParams::new(0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn unitary_is_special_unitary() {
        let q = MeasurementParams::from_angles(0.7, 1.9, 4.2);
        let v = q.unitary();
        let det = v[0][0] * v[1][1] - v[0][1] * v[1][0];
        assert!((det - C64::from(1.0)).norm() < 1e-14);
        let col0 = v[0][0].norm_sqr() + v[1][0].norm_sqr();
        let overlap = v[0][0].conj() * v[0][1] + v[1][0].conj() * v[1][1];
        assert!((col0 - 1.0).abs() < 1e-14 && overlap.norm() < 1e-14);
    }

    #[test]
    fn maximally_mixed_ensemble() {
        let e = conditional_ensemble(
            &DensityMatrix4::maximally_mixed(),
            &MeasurementParams::equatorial_reference(),
        )
        .unwrap();
        assert!((e.p0 - 0.5).abs() < 1e-15 && (e.p1 - 0.5).abs() < 1e-15);
        for v in [e.alpha.0, e.alpha.1, e.beta.0, e.beta.1] {
            assert!((v - 0.5).abs() < 1e-15);
        }
        assert!((e.entropy() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn computational_measurement_of_diagonal_state() {
        let rho = DensityMatrix4::x_state(0.1, 0.2, 0.3, 0.4, C64::from(0.0), C64::from(0.0));
        let e = conditional_ensemble(&rho, &MeasurementParams::computational()).unwrap();
        assert!((e.p0 - 0.4).abs() < 1e-15);
        assert!((e.alpha.0 - 0.75).abs() < 1e-14 && (e.alpha.1 - 0.25).abs() < 1e-14);
        assert!((e.p1 - 0.6).abs() < 1e-15);
        assert!((e.beta.0 - 0.4 / 0.6).abs() < 1e-14);
    }

    #[test]
    fn empty_branch_contributes_nothing() {
        let z = C64::from(0.0);
        let rho = DensityMatrix4::pure([C64::from(1.0), z, z, z]);
        let e = conditional_ensemble(&rho, &MeasurementParams::computational()).unwrap();
        assert_eq!(e.p1, 0.0);
        assert_eq!(e.entropy(), 0.0);
    }

    #[test]
    fn minimiser_examples() {
        let mixed = minimize_conditional_entropy(&DensityMatrix4::maximally_mixed()).unwrap();
        assert!((mixed.value - 1.0).abs() < 1e-12);

        let s = C64::from(std::f64::consts::FRAC_1_SQRT_2);
        let z = C64::from(0.0);
        let bell = DensityMatrix4::pure([s, z, z, s]);
        let m = minimize_conditional_entropy(&bell).unwrap();
        assert!(m.value.abs() < 1e-9);
        assert!(
            conditional_entropy(&bell, &MeasurementParams::equatorial_reference()).abs() < 1e-12
        );
    }

    #[test]
    fn minimiser_not_above_reference_points() {
        let rho = DensityMatrix4::x_state(
            0.35,
            0.15,
            0.2,
            0.3,
            C64::new(0.1, 0.12),
            C64::new(-0.05, 0.1),
        );
        let m = minimize_conditional_entropy(&rho).unwrap();
        for q in [
            MeasurementParams::equatorial_reference(),
            MeasurementParams::computational(),
        ] {
            assert!(m.value <= conditional_entropy(&rho, &q) + 1e-12);
        }
    }
}
