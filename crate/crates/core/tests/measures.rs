mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinbath::correlations::conditional_entropy;
use spinbath::*;

fn x_state_strategy() -> impl Strategy<Value = DensityMatrix4> {
    any::<u64>().prop_map(|seed| random_x_state(&mut ChaCha8Rng::seed_from_u64(seed)))
}

fn measurement_strategy() -> impl Strategy<Value = MeasurementParams> {
    any::<u64>().prop_map(|seed| random_measurement(&mut ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn x_form_concurrence_matches_wootters(rho in x_state_strategy()) {
        let a = concurrence_x_state(&rho).unwrap();
        let b = concurrence_wootters(&rho).unwrap();
        prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn closed_form_spectrum_matches_eigensolver(rho in x_state_strategy()) {
        let mut closed = density_eigenvalues(&rho).unwrap();
        closed.sort_by(f64::total_cmp);
        let general = rho.eigenvalues();
        for (c, g) in closed.iter().zip(general) {
            prop_assert!((c - g).abs() < 1e-10);
        }
    }

    #[test]
    fn ensemble_matches_projectors(rho in x_state_strategy(), meas in measurement_strategy()) {
        let closed = conditional_ensemble(&rho, &meas).unwrap();
        let [(p0, a), (p1, b)] = brute_force_ensemble(&rho, &meas);
        prop_assert!((closed.p0 - p0).abs() < 1e-10);
        prop_assert!((closed.p1 - p1).abs() < 1e-10);
        if p0 > 1e-6 {
            prop_assert!((closed.alpha.0 - a.0).abs() < 1e-9 && (closed.alpha.1 - a.1).abs() < 1e-9);
        }
        if p1 > 1e-6 {
            prop_assert!((closed.beta.0 - b.0).abs() < 1e-9 && (closed.beta.1 - b.1).abs() < 1e-9);
        }
        let h = conditional_entropy(&rho, &meas);
        prop_assert!((h - brute_force_conditional_entropy(&rho, &meas)).abs() < 1e-9);
    }

    #[test]
    fn measures_stay_in_range(rho in x_state_strategy()) {
        let c = concurrence_x_state(&rho).unwrap();
        prop_assert!((0.0..=1.0).contains(&c));
        let d = quantum_discord(&rho).unwrap();
        prop_assert!(d.discord >= 0.0 && d.discord <= 1.0 + 1e-9);
        prop_assert!(d.classical_corr >= -1e-9);
        prop_assert!(d.mutual_info >= d.classical_corr - 1e-9);
    }

    #[test]
    fn local_phase_rotations_preserve_measures(
        rho in x_state_strategy(),
        phi1 in 0.0..std::f64::consts::TAU,
        phi2 in 0.0..std::f64::consts::TAU,
    ) {
        // diag(1, e^{iφ1}) ⊗ diag(1, e^{iφ2}) keeps the X shape
        let u = [
            C64::from(1.0),
            C64::from_polar(1.0, phi2),
            C64::from_polar(1.0, phi1),
            C64::from_polar(1.0, phi1 + phi2),
        ];
        let m = rho.matrix();
        let rotated = DensityMatrix4::from_matrix(nalgebra::Matrix4::from_fn(|i, j| u[i] * m[(i, j)] * u[j].conj()));
        prop_assert!(rotated.is_x_state());
        let c0 = concurrence_x_state(&rho).unwrap();
        let c1 = concurrence_x_state(&rotated).unwrap();
        prop_assert!((c0 - c1).abs() < 1e-12);
        let d0 = quantum_discord(&rho).unwrap().discord;
        let d1 = quantum_discord(&rotated).unwrap().discord;
        prop_assert!((d0 - d1).abs() < 1e-7, "{d0} vs {d1}");
    }
}

#[test]
fn minimizer_beats_dense_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pi = std::f64::consts::PI;
    for _ in 0..15 {
        let rho = random_x_state(&mut rng);
        let found = minimize_conditional_entropy(&rho).unwrap().value;
        let g = 48;
        let mut grid_min = f64::INFINITY;
        for i in 0..g {
            for j in 0..g {
                for k in 0..g {
                    let m = MeasurementParams::from_angles(
                        pi * i as f64 / (g - 1) as f64,
                        pi * j as f64 / (g - 1) as f64,
                        2.0 * pi * k as f64 / g as f64,
                    );
                    grid_min = grid_min.min(brute_force_conditional_entropy(&rho, &m));
                }
            }
        }
        assert!(
            found <= grid_min + 1e-12,
            "minimizer {found} above grid {grid_min}"
        );
    }
}

#[test]
fn werner_discord_known_value() {
    // Werner state p|Φ+⟩⟨Φ+| + (1-p)I/4 has closed-form discord
    let p: f64 = 0.6;
    let a = (1.0 + p) / 4.0;
    let b = (1.0 - p) / 4.0;
    let rho = DensityMatrix4::x_state(a, b, b, a, C64::from(p / 2.0), C64::from(0.0));
    let expected = 0.25 * (1.0 - p) * (1.0 - p).log2() - 0.5 * (1.0 + p) * (1.0 + p).log2()
        + 0.25 * (1.0 + 3.0 * p) * (1.0 + 3.0 * p).log2();
    let d = quantum_discord(&rho).unwrap().discord;
    assert!((d - expected).abs() < 1e-9, "{d} vs {expected}");
}

fn random_density<R: rand::Rng>(rng: &mut R) -> DensityMatrix4 {
    let g = nalgebra::Matrix4::<C64>::from_fn(|_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let m = g * g.adjoint();
    let tr = m.trace();
    DensityMatrix4::from_matrix(m / tr)
}

fn kron(a: [[C64; 2]; 2], b: [[C64; 2]; 2]) -> nalgebra::Matrix4<C64> {
    nalgebra::Matrix4::from_fn(|i, j| a[i / 2][j / 2] * b[i % 2][j % 2])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn wootters_invariant_under_local_unitaries(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(&mut rng);
        let u = kron(random_measurement(&mut rng).unitary(), random_measurement(&mut rng).unitary());
        let rotated = DensityMatrix4::from_matrix(u * rho.matrix() * u.adjoint());
        let a = concurrence_wootters(&rho).unwrap();
        let b = concurrence_wootters(&rotated).unwrap();
        prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn wootters_on_pure_states(seed in any::<u64>()) {
        // |ψ⟩ = Σ c_i|i⟩ has concurrence 2|c00 c11 − c01 c10|
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: [C64; 4] = std::array::from_fn(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let psi = raw.map(|c| c / norm);
        let expected = 2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).norm();
        let c = concurrence_wootters(&DensityMatrix4::pure(psi)).unwrap();
        prop_assert!((c - expected).abs() < 1e-12, "{c} vs {expected}");
    }
}
