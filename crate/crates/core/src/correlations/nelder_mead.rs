/// Stopping rules for [`nelder_mead`].
#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub initial_step: f64,
    pub max_iter: usize,
    /// Stop once the simplex values span less than this.
    pub f_tol: f64,
    /// ... and its vertices lie within this distance of the best one.
    pub x_tol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.1,
            max_iter: 4000,
            f_tol: 1e-15,
            x_tol: 1e-10,
        }
    }
}

/// Derivative-free simplex minimisation of `f` from `x0`. Deterministic.
pub fn nelder_mead<const D: usize, F>(
    f: F,
    x0: [f64; D],
    opts: NelderMeadOptions,
) -> ([f64; D], f64)
where
    F: Fn(&[f64; D]) -> f64,
{
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let mut simplex: Vec<([f64; D], f64)> = Vec::with_capacity(D + 1);
    simplex.push((x0, f(&x0)));
    for i in 0..D {
        let mut x = x0;
        x[i] += opts.initial_step;
        simplex.push((x, f(&x)));
    }

    let lerp = |a: &[f64; D], b: &[f64; D], s: f64| -> [f64; D] {
        let mut out = [0.0; D];
        for k in 0..D {
            out[k] = a[k] + s * (b[k] - a[k]);
        }
        out
    };

    for _ in 0..opts.max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[D].1);
        let spread = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if (worst - best).abs() <= opts.f_tol && spread <= opts.x_tol {
            break;
        }

        let mut centroid = [0.0; D];
        for (x, _) in &simplex[..D] {
            for k in 0..D {
                centroid[k] += x[k] / D as f64;
            }
        }
        let worst_x = simplex[D].0;
        let reflected = lerp(&centroid, &worst_x, -ALPHA);
        let fr = f(&reflected);

        if fr < simplex[0].1 {
            let expanded = lerp(&centroid, &worst_x, -GAMMA);
            let fe = f(&expanded);
            simplex[D] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < simplex[D - 1].1 {
            simplex[D] = (reflected, fr);
        } else {
            let (target, ft) = if fr < worst {
                (reflected, fr)
            } else {
                (worst_x, worst)
            };
            let contracted = lerp(&centroid, &target, RHO);
            let fc = f(&contracted);
            if fc < ft {
                simplex[D] = (contracted, fc);
            } else {
                let x_best = simplex[0].0;
                for v in simplex.iter_mut().skip(1) {
                    v.0 = lerp(&x_best, &v.0, SIGMA);
                    v.1 = f(&v.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex[0]
}
