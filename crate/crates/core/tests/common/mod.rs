#![allow(dead_code)]

use rand::Rng;
use spinbath::{DensityMatrix4, InitialState, MeasurementParams, ModelParams, C64};

pub fn reference_params(d_z: f64) -> ModelParams {
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

pub fn bell() -> InitialState {
    InitialState::bell()
}

/// Uniform grid of `points` times on [start, end].
pub fn time_grid(start: f64, end: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| start + (end - start) * i as f64 / (points - 1) as f64)
        .collect()
}

/// A random physical X-state: random populations, coherences inside the
/// positivity bounds |ρ14|² ≤ ρ11ρ44 and |ρ23|² ≤ ρ22ρ33.
pub fn random_x_state<R: Rng>(rng: &mut R) -> DensityMatrix4 {
    let raw: [f64; 4] = std::array::from_fn(|_| -rng.gen_range(1e-6f64..1.0).ln());
    let total: f64 = raw.iter().sum();
    let [r11, r22, r33, r44] = raw.map(|x| x / total);
    let c14 = (r11 * r44).sqrt() * rng.gen_range(0.0..1.0);
    let c23 = (r22 * r33).sqrt() * rng.gen_range(0.0..1.0);
    let tau = std::f64::consts::TAU;
    DensityMatrix4::x_state(
        r11,
        r22,
        r33,
        r44,
        C64::from_polar(c14, rng.gen_range(0.0..tau)),
        C64::from_polar(c23, rng.gen_range(0.0..tau)),
    )
}

pub fn random_measurement<R: Rng>(rng: &mut R) -> MeasurementParams {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        if let Ok(m) = MeasurementParams::new(q[0], q[1], q[2], q[3]) {
            return m;
        }
    }
}

fn hermitian_2x2_spectrum(m: [[C64; 2]; 2]) -> (f64, f64) {
    let (a, d) = (m[0][0].re, m[1][1].re);
    let r = (0.25 * (a - d).powi(2) + m[0][1].norm_sqr()).sqrt();
    (0.5 * (a + d) + r, 0.5 * (a + d) - r)
}

/// Measures qubit 2 with projectors V|k⟩⟨k|V† and returns, per outcome,
/// the probability and the spectrum of the normalised state of qubit 1.
/// Built from explicit 4×4 projectors and a partial trace.
pub fn brute_force_ensemble(
    rho: &DensityMatrix4,
    meas: &MeasurementParams,
) -> [(f64, (f64, f64)); 2] {
    let v = meas.unitary();
    let m = rho.matrix();
    std::array::from_fn(|k| {
        // |e⟩ = V|k⟩, projector on qubit 2
        let e = [v[0][k], v[1][k]];
        let mut proj = nalgebra::Matrix4::<C64>::zeros();
        for a in 0..2 {
            for b in 0..2 {
                for bp in 0..2 {
                    proj[(2 * a + b, 2 * a + bp)] = e[b] * e[bp].conj();
                }
            }
        }
        let post = proj * m * proj;
        let p = post.trace().re;
        let mut red = [[C64::from(0.0); 2]; 2];
        for a in 0..2 {
            for ap in 0..2 {
                for b in 0..2 {
                    red[a][ap] += post[(2 * a + b, 2 * ap + b)];
                }
            }
        }
        if p > 1e-14 {
            for row in red.iter_mut() {
                for x in row.iter_mut() {
                    *x /= p;
                }
            }
            (p, hermitian_2x2_spectrum(red))
        } else {
            (p, (1.0, 0.0))
        }
    })
}

pub fn shannon(ps: &[f64]) -> f64 {
    ps.iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

pub fn brute_force_conditional_entropy(rho: &DensityMatrix4, meas: &MeasurementParams) -> f64 {
    brute_force_ensemble(rho, meas)
        .iter()
        .map(|(p, (a, b))| {
            if *p > 1e-14 {
                p * shannon(&[*a, *b])
            } else {
                0.0
            }
        })
        .sum()
}
