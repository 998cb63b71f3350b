//! Per-occupation amplitude equations.
//!
//! Starting from |00⟩⊗|n⟩ the joint state stays in
//! span{|00,n⟩, |01,n-1⟩, |10,n-1⟩, |11,n-2⟩}; from |11⟩⊗|n⟩ it stays in
//! span{|00,n+2⟩, |01,n+1⟩, |10,n+1⟩, |11,n⟩}. After stripping the bosonic
//! ladder factors and a common phase, the four reduced amplitudes obey a
//! constant linear system `dX/dt = -i M X`, solved here by a matrix
//! exponential.
//!
//! The ladder factors (√n, √(n(n-1)), √(n+1), √((n+1)(n+2))) are *not* applied
//! here; [`crate::thermal`] owns them.

use nalgebra::{Matrix4, Vector4};

use crate::{Error, ModelParams, Result, C64};

/// Which initial two-qubit basis state the amplitudes evolve from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// From |00⟩: A1(0) = 1.
    Plain,
    /// From |11⟩: D̃1(0) = 1.
    Tilde,
}

/// Constant generator `M` of `dX/dt = -i M X` for one bath occupation.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator4 {
    pub matrix: Matrix4<C64>,
    pub variant: Variant,
    pub fock_index: usize,
}

/// Reduced amplitudes (A1, B1, C1, D1) or (Ã1, B̃1, C̃1, D̃1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    pub a1: C64,
    pub b1: C64,
    pub c1: C64,
    pub d1: C64,
    pub fock_index: usize,
    pub variant: Variant,
}

/// Largest tolerated drift of the conserved weighted norm.
pub const UNITARITY_TOLERANCE: f64 = 1e-8;

/// Eigenvector matrices worse conditioned than this fall back to Padé
/// scaling-and-squaring.
pub const CONDITION_LIMIT: f64 = 1e8;

pub fn build_generator_plain(params: &ModelParams, n: usize) -> Generator4 {
    let ModelParams {
        epsilon: eps,
        j_coupling: j,
        j_z: jz,
        d_z: dz,
        g_bath: g0,
        g_sys_bath: g,
        ..
    } = *params;
    let nf = n as f64;
    let gn = C64::from(g * nf);
    let g1 = C64::from(g);
    // g(n-1) multiplies D1, which only exists for n >= 2; at n = 1 it vanishes
    let gnm1 = C64::from(g * (nf - 1.0));
    let z = C64::from(0.0);
    #[rustfmt::skip]
    let matrix = Matrix4::new(
        C64::from(jz - eps + 2.0 * g0), gn,                gn,                z,
        g1,                             C64::from(-jz),    C64::new(j, 2.0 * dz), gnm1,
        g1,                             C64::new(j, -2.0 * dz), C64::from(-jz),  gnm1,
        z,                              g1,                g1,                C64::from(jz + eps - 2.0 * g0),
    );
    Generator4 {
        matrix,
        variant: Variant::Plain,
        fock_index: n,
    }
}

pub fn build_generator_tilde(params: &ModelParams, n: usize) -> Generator4 {
    let ModelParams {
        epsilon: eps,
        j_coupling: j,
        j_z: jz,
        d_z: dz,
        g_bath: g0,
        g_sys_bath: g,
        ..
    } = *params;
    let nf = n as f64;
    let g1 = C64::from(g);
    let gnp1 = C64::from(g * (nf + 1.0));
    let gnp2 = C64::from(g * (nf + 2.0));
    let z = C64::from(0.0);
    #[rustfmt::skip]
    let matrix = Matrix4::new(
        C64::from(jz - eps + 2.0 * g0), g1,                g1,                z,
        gnp2,                           C64::from(-jz),    C64::new(j, 2.0 * dz), g1,
        gnp2,                           C64::new(j, -2.0 * dz), C64::from(-jz),  g1,
        z,                              gnp1,              gnp1,              C64::from(jz + eps - 2.0 * g0),
    );
    Generator4 {
        matrix,
        variant: Variant::Tilde,
        fock_index: n,
    }
}

impl Generator4 {
    /// Diagonal metric under which the evolution is norm preserving: the
    /// squared ladder factors of each amplitude.
    pub fn norm_weights(&self) -> [f64; 4] {
        norm_weights(self.variant, self.fock_index)
    }

    /// Initial amplitudes: A1 = 1 (plain) or D̃1 = 1 (tilde).
    pub fn initial_vector(&self) -> Vector4<C64> {
        let one = C64::from(1.0);
        let z = C64::from(0.0);
        match self.variant {
            Variant::Plain => Vector4::new(one, z, z, z),
            Variant::Tilde => Vector4::new(z, z, z, one),
        }
    }
}

fn norm_weights(variant: Variant, n: usize) -> [f64; 4] {
    let n = n as f64;
    match variant {
        Variant::Plain => [1.0, n, n, n * (n - 1.0)],
        Variant::Tilde => [(n + 1.0) * (n + 2.0), n + 1.0, n + 1.0, 1.0],
    }
}

fn weighted_norm(w: &[f64; 4], x: &Vector4<C64>) -> f64 {
    (0..4).map(|i| w[i] * x[i].norm_sqr()).sum()
}

impl CoefficientSet {
    fn from_vector(x: &Vector4<C64>, variant: Variant, fock_index: usize) -> Self {
        Self {
            a1: x[0],
            b1: x[1],
            c1: x[2],
            d1: x[3],
            fock_index,
            variant,
        }
    }

    pub fn as_vector(&self) -> Vector4<C64> {
        Vector4::new(self.a1, self.b1, self.c1, self.d1)
    }

    /// |a1|² + n(|b1|² + |c1|²) + n(n-1)|d1|² for the plain set,
    /// (n+1)(n+2)|a1|² + (n+1)(|b1|² + |c1|²) + |d1|² for the tilde set.
    pub fn weighted_norm(&self) -> f64 {
        weighted_norm(
            &norm_weights(self.variant, self.fock_index),
            &self.as_vector(),
        )
    }

    /// Common phase stripped from the physical amplitudes,
    /// e^{-2i g0 (n-1) t} (plain) or e^{-2i g0 (n+1) t} (tilde).
    pub fn phase(&self, params: &ModelParams, t: f64) -> C64 {
        let n = self.fock_index as f64;
        let shift = match self.variant {
            Variant::Plain => n - 1.0,
            Variant::Tilde => n + 1.0,
        };
        C64::from_polar(1.0, -2.0 * params.g_bath * shift * t)
    }
}

#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
enum Method {
    /// M = S⁻¹ U Λ U† S on the components with positive norm weight,
    /// S = diag(√w), U unitary. Components of zero weight (plain n = 0, 1)
    /// never feed back into the others and are taken from the full
    /// exponential when `unphysical` is set.
    Symmetrized {
        scale: [f64; 4],
        vecs: Matrix4<C64>,
        vals: Vector4<f64>,
        unphysical: bool,
    },
    ScalingSquaring,
}

/// Cached exponential of a [`Generator4`] for repeated evaluation over a
/// time grid.
#[derive(Debug, Clone)]
pub struct Propagator {
    gen: Generator4,
    method: Method,
}

impl Propagator {
    pub fn new(gen: Generator4) -> Self {
        let method = symmetrized(&gen).unwrap_or(Method::ScalingSquaring);
        Self { gen, method }
    }

    pub fn generator(&self) -> &Generator4 {
        &self.gen
    }

    /// True when the eigendecomposition was rejected.
    pub fn uses_fallback(&self) -> bool {
        matches!(self.method, Method::ScalingSquaring)
    }

    /// exp(-i M t) · init, checked against the conserved weighted norm.
    pub fn evolve(&self, t: f64, init: &Vector4<C64>) -> Result<CoefficientSet> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "time must be finite and >= 0, got {t}"
            )));
        }
        let x = match &self.method {
            Method::Symmetrized {
                scale,
                vecs,
                vals,
                unphysical,
            } => {
                let scaled = Vector4::from_fn(|i, _| init[i] * scale[i]);
                let mut y = vecs.adjoint() * scaled;
                for i in 0..4 {
                    y[i] *= C64::from_polar(1.0, -vals[i] * t);
                }
                let y = vecs * y;
                let mut x = Vector4::from_fn(|i, _| y[i] / scale[i]);
                if *unphysical {
                    let full = (self.gen.matrix * C64::new(0.0, -t)).exp() * init;
                    let w = self.gen.norm_weights();
                    for i in (0..4).filter(|&i| w[i] == 0.0) {
                        x[i] = full[i];
                    }
                }
                x
            }
            Method::ScalingSquaring => (self.gen.matrix * C64::new(0.0, -t)).exp() * init,
        };
        let w = self.gen.norm_weights();
        let before = weighted_norm(&w, init);
        let after = weighted_norm(&w, &x);
        let defect = (after - before).abs() / before.max(1.0);
        if !(defect <= UNITARITY_TOLERANCE) {
            return Err(Error::Unitarity {
                defect,
                fock_index: self.gen.fock_index,
            });
        }
        Ok(CoefficientSet::from_vector(
            &x,
            self.gen.variant,
            self.gen.fock_index,
        ))
    }
}

/// Eigendecomposition through the Hermitian matrix S M S⁻¹, S = diag(√w),
/// restricted to the components of positive weight. The eigenvectors of M
/// there are S⁻¹U, with condition number √(w_max/w_min). `None` when those
/// components are not closed under M, S M S⁻¹ is not Hermitian, or the
/// condition number exceeds [`CONDITION_LIMIT`].
fn symmetrized(gen: &Generator4) -> Option<Method> {
    let w = gen.norm_weights();
    let phys = w.map(|x| x > 0.0);
    let m = &gen.matrix;
    for i in 0..4 {
        for j in 0..4 {
            if phys[i] && !phys[j] && m[(i, j)] != C64::from(0.0) {
                return None;
            }
        }
    }
    let (w_min, w_max) = w
        .iter()
        .filter(|&&x| x > 0.0)
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    if (w_max / w_min).sqrt() > CONDITION_LIMIT {
        return None;
    }
    let scale = w.map(|x| if x > 0.0 { x.sqrt() } else { 1.0 });
    let h = Matrix4::from_fn(|i, j| {
        if phys[i] && phys[j] {
            m[(i, j)] * (scale[i] / scale[j])
        } else {
            C64::from(0.0)
        }
    });
    let asym = (h - h.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let size = h.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if asym > 1e-12 * size {
        return None;
    }
    let eig = nalgebra::SymmetricEigen::new((h + h.adjoint()) * C64::from(0.5));
    Some(Method::Symmetrized {
        scale,
        vecs: eig.eigenvectors,
        vals: eig.eigenvalues,
        unphysical: phys.iter().any(|p| !p),
    })
}

/// Amplitudes at time `t` from `init`.
pub fn evolve_coefficients(
    gen: &Generator4,
    t: f64,
    init: &Vector4<C64>,
) -> Result<CoefficientSet> {
    Propagator::new(gen.clone()).evolve(t, init)
}
