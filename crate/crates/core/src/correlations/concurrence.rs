use nalgebra::Matrix4;

use crate::{DensityMatrix4, Error, Result, C64};

/// Largest imaginary part tolerated in the spectrum of ρ(σy⊗σy)ρ*(σy⊗σy).
pub const SPECTRUM_IMAG_TOLERANCE: f64 = 1e-8;

fn sigma_yy() -> Matrix4<C64> {
    let one = C64::from(1.0);
    let mut m = Matrix4::zeros();
    m[(0, 3)] = -one;
    m[(1, 2)] = one;
    m[(2, 1)] = one;
    m[(3, 0)] = -one;
    m
}

/// Wootters concurrence max{0, λ1 − λ2 − λ3 − λ4}, with λ the descending
/// square roots of the eigenvalues of ρ(σy⊗σy)ρ*(σy⊗σy).
///
/// The λ are evaluated as the singular values of τ_jk = v_jᵀ(σy⊗σy)v_k,
/// where ρ = Σ v_k v_k†, which keeps the small ones at rounding level for
/// nearly pure states instead of the square root of rounding level.
pub fn concurrence_wootters(rho: &DensityMatrix4) -> Result<f64> {
    let yy = sigma_yy();
    let m = rho.matrix();
    let product = m * yy * m.conjugate() * yy;
    let scale = product.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let spectrum = nalgebra::Schur::new(product).unpack().1.diagonal();
    if let Some(e) = spectrum
        .iter()
        .find(|e| e.im.abs() > SPECTRUM_IMAG_TOLERANCE * scale)
    {
        return Err(Error::ComplexSpectrum(e.im));
    }

    let eig = nalgebra::SymmetricEigen::new((m + m.adjoint()) * C64::from(0.5));
    let v = Matrix4::from_fn(|a, k| eig.eigenvectors[(a, k)] * eig.eigenvalues[k].max(0.0).sqrt());
    let tau = v.transpose() * yy * v;
    let mut lambdas: Vec<f64> = tau.singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.clamp(0.0, 1.0))
}

/// Closed-form concurrence of an X-state,
/// 2·max{0, |ρ14| − √(ρ22ρ33), |ρ23| − √(ρ11ρ44)}.
pub fn concurrence_x_state(rho: &DensityMatrix4) -> Result<f64> {
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
    let a = rho.at(1, 4).norm() - (r22 * r33).max(0.0).sqrt();
    let b = rho.at(2, 3).norm() - (r11 * r44).max(0.0).sqrt();
    Ok((2.0 * a.max(b).max(0.0)).min(1.0))
}
