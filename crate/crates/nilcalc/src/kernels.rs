//! Kernel-side checks: numeric Leibniz rule, quantization of sampled
//! kernels, L¹ seminorm surrogates and multiplier seminorms.

use nilcalc_core::rational::to_f64;
use nilcalc_core::{DualBasis, GradedGroup, MultiIndex, RocklandSpec};

use crate::convolution::{group_convolve, DIRECT_LIMIT};
use crate::error::{NumError, NumResult};
use crate::fd::apply_op_fd;
use crate::grid::GridFunction;
use crate::sobolev::id_plus_r_power;

/// q̃_α · f.
pub fn times_q_tilde(basis: &DualBasis, alpha: &MultiIndex, f: &GridFunction) -> GridFunction {
    let q = basis.q_tilde(alpha);
    f.mul_fn(|x| q.evaluate_f64(x))
}

/// Relative L² distance between q̃_α·(f₂∗f₁) and
/// Σ c_{α₁,α₂} (q̃_{α₂}f₂)∗(q̃_{α₁}f₁).
pub fn leibniz_numeric_check(
    group: &GradedGroup,
    basis: &DualBasis,
    alpha: &MultiIndex,
    f1: &GridFunction,
    f2: &GridFunction,
) -> NumResult<f64> {
    let lhs = times_q_tilde(basis, alpha, &group_convolve(group, f2, f1)?.f);
    let coeffs = basis.decomposition_coeffs(group.law(), alpha)?;
    let mut rhs = GridFunction::zeros(&f1.grid);
    for ((a1, a2), c) in coeffs {
        let term = group_convolve(group, &times_q_tilde(basis, &a2, f2), &times_q_tilde(basis, &a1, f1))?.f;
        rhs = rhs.add(&term.scale(to_f64(&c)));
    }
    Ok(rhs.rel_l2(&lhs))
}

/// Samples of an x-dependent kernel κ_x(z).
pub enum XKernel<'a> {
    /// κ_x = κ for all x.
    Invariant(GridFunction),
    /// κ_x(z) = c(x) κ(z).
    Separable { coefficient: GridFunction, kernel: GridFunction },
    /// Arbitrary κ(x, z), evaluated by direct quadrature.
    General(Box<dyn Fn(&[f64], &[f64]) -> f64 + 'a>),
}

/// Tf(x) = ∫ f(y) κ_x(y⁻¹x) dy.
pub fn quantize_kernel(group: &GradedGroup, kernel: &XKernel, f: &GridFunction) -> NumResult<GridFunction> {
    match kernel {
        XKernel::Invariant(k) => Ok(group_convolve(group, f, k)?.f),
        XKernel::Separable { coefficient, kernel } => {
            let conv = group_convolve(group, f, kernel)?.f;
            Ok(conv.zip_with(coefficient, |a, b| a * b))
        }
        XKernel::General(k) => {
            let grid = &f.grid;
            if grid.len() > DIRECT_LIMIT {
                return Err(NumError::Config("general kernels are limited to small grids".into()));
            }
            let d = grid.dim();
            let law = group.law();
            let mut pts = vec![0.0; grid.len() * d];
            grid.for_each_point(|i, x| pts[i * d..(i + 1) * d].copy_from_slice(x));
            let vol = grid.cell_volume();
            let mut out = GridFunction::zeros(grid);
            let mut yinv = vec![0.0; d];
            for xi in 0..grid.len() {
                let x = &pts[xi * d..(xi + 1) * d];
                let mut acc = 0.0;
                for yi in 0..grid.len() {
                    if f.data[yi] == 0.0 {
                        continue;
                    }
                    for j in 0..d {
                        yinv[j] = -pts[yi * d + j];
                    }
                    acc += f.data[yi] * k(x, &law.product_f64(&yinv, x));
                }
                out.data[xi] = acc * vol;
            }
            Ok(out)
        }
    }
}

/// ‖q̃_α · ((Id+𝓡)^k κ)‖_{L¹}, an upper-bound surrogate for the symbol
/// seminorms of the operator with kernel κ.
pub fn l1_seminorm_bound(
    group: &GradedGroup,
    rockland: &RocklandSpec,
    basis: &DualBasis,
    kappa: &GridFunction,
    alpha: &MultiIndex,
    k: u32,
) -> NumResult<f64> {
    let op = id_plus_r_power(group, rockland, k).to_var_coeff();
    let applied = apply_op_fd(group, &op, kappa)?;
    Ok(times_q_tilde(basis, alpha, &applied).l1())
}

/// Log-spaced λ samples on [λ_min, λ_max].
pub fn log_lambda_grid(lambda_min: f64, lambda_max: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lambda_min.ln(), lambda_max.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// First derivative on a non-uniform grid (three-point, one-sided at the
/// ends).
fn derivative(x: &[f64], f: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut d = vec![0.0; n];
    d[0] = (f[1] - f[0]) / (x[1] - x[0]);
    d[n - 1] = (f[n - 1] - f[n - 2]) / (x[n - 1] - x[n - 2]);
    for i in 1..n - 1 {
        let (h1, h2) = (x[i] - x[i - 1], x[i + 1] - x[i]);
        d[i] = -h2 / (h1 * (h1 + h2)) * f[i - 1] + (h2 - h1) / (h1 * h2) * f[i] + h1 / (h2 * (h1 + h2)) * f[i + 1];
    }
    d
}

/// sup_{k₁ ≤ k} sup_λ (1+λ)^{−m+k₁} |∂^{k₁}φ(λ)| from samples on a λ-grid.
pub fn multiplier_seminorm(lambdas: &[f64], phi: &[f64], m: f64, k: u32) -> NumResult<f64> {
    if lambdas.len() != phi.len() || lambdas.len() < 3 {
        return Err(NumError::Config("need at least three λ samples matching φ".into()));
    }
    if lambdas.windows(2).any(|w| !(w[1] > w[0])) || lambdas[0] < 0.0 {
        return Err(NumError::Config("λ-grid must be increasing and nonnegative".into()));
    }
    let mut cur = phi.to_vec();
    let mut best: f64 = 0.0;
    for k1 in 0..=k {
        if k1 > 0 {
            cur = derivative(lambdas, &cur);
        }
        // the one-sided end values are only first-order; skip k₁ boundary
        // points that depend on them
        let skip = k1 as usize;
        for i in skip..lambdas.len() - skip {
            best = best.max((1.0 + lambdas[i]).powf(-m + k1 as f64) * cur[i].abs());
        }
    }
    Ok(best)
}
