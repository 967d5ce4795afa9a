//! Heat semigroup e^{−t𝓡} for a positive Rockland operator by explicit RK4.

use serde::Serialize;

use nilcalc_core::{GradedGroup, RocklandSpec};

use crate::convolution::gaussian;
use crate::error::{NumError, NumResult};
use crate::fd::{Accuracy, CompiledOperator};
use crate::grid::{GridFunction, GridSpec};

/// RK4 stability interval on the negative real axis.
const RK4_REAL_BOUND: f64 = 2.78;

#[derive(Clone, Debug)]
pub struct HeatRun {
    pub degree: u32,
    pub homogeneous_dimension: u32,
    /// Diffusion time already carried by the initial mollifier.
    pub t0: f64,
    pub dt: f64,
    pub steps: usize,
    /// Effective times τ = t + t0 of the snapshots.
    pub times: Vec<f64>,
    pub snapshots: Vec<GridFunction>,
    /// (τ, ∫u) sampled at every snapshot.
    pub mass_trace: Vec<(f64, f64)>,
}

impl HeatRun {
    pub fn snapshot(&self, tau: f64) -> Option<&GridFunction> {
        self.times.iter().position(|t| (t - tau).abs() < 1e-12).map(|i| &self.snapshots[i])
    }

    pub fn max_mass_drift(&self) -> f64 {
        self.mass_trace.iter().map(|(_, m)| (m - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// Initial datum approximating h_{t0}: a unit-mass Gaussian whose widths
/// follow the dilation scaling t0^{υ_j/ν}. For the sub-Laplacian on step-two
/// groups the widths match the second moments of h_{t0}.
pub fn initial_datum(group: &GradedGroup, degree: u32, grid: &GridSpec, t0: f64) -> GridFunction {
    let sigma: Vec<f64> = group
        .weights()
        .iter()
        .map(|&w| {
            let s = t0.powf(w as f64 / degree as f64);
            if w == 1 {
                s * 2f64.sqrt()
            } else {
                s
            }
        })
        .collect();
    gaussian(grid, &vec![0.0; grid.dim()], &sigma)
}

/// Largest |eigenvalue| of the discrete operator by power iteration.
pub fn spectral_radius(op: &CompiledOperator, iterations: usize) -> f64 {
    let n = op.grid().len();
    // deterministic pseudo-random start
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut v: Vec<f64> = (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect();
    let mut w = vec![0.0; n];
    let mut ws = op.workspace();
    let mut rho = 0.0;
    for _ in 0..iterations {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        op.apply_with(&v, &mut w, &mut ws);
        rho = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        std::mem::swap(&mut v, &mut w);
    }
    rho
}

/// Solves ∂_t u = −𝓡u from the mollifier at time t0 and records
/// snapshots at the effective times `taus` (each > t0). With `dt = None`
/// the step is chosen from a spectral-radius estimate and halved on blow-up.
pub fn heat_solve(
    group: &GradedGroup,
    rockland: &RocklandSpec,
    grid: &GridSpec,
    t0: f64,
    taus: &[f64],
    dt: Option<f64>,
) -> NumResult<HeatRun> {
    if taus.is_empty() || taus.iter().any(|&t| t <= t0) || !(t0 > 0.0) {
        return Err(NumError::Config("snapshot times must exceed the mollifier time".into()));
    }
    let mut taus = taus.to_vec();
    taus.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let op = CompiledOperator::new(group, &rockland.operator.to_var_coeff(), grid)?.with_accuracy(Accuracy::Fourth);
    let mut dt = match dt {
        Some(d) if d > 0.0 => d,
        Some(_) => return Err(NumError::Config("dt must be positive".into())),
        None => 0.8 * RK4_REAL_BOUND / (1.1 * spectral_radius(&op, 40)),
    };
    let u0 = initial_datum(group, rockland.degree, grid, t0);
    for _attempt in 0..6 {
        match integrate(&op, &u0, t0, &taus, dt) {
            Ok((snapshots, steps)) => {
                let mass_trace = taus.iter().zip(&snapshots).map(|(t, s)| (*t, s.integral())).collect();
                return Ok(HeatRun {
                    degree: rockland.degree,
                    homogeneous_dimension: group.algebra().homogeneous_dimension(),
                    t0,
                    dt,
                    steps,
                    times: taus,
                    snapshots,
                    mass_trace,
                });
            }
            Err(()) => dt /= 2.0,
        }
    }
    Err(NumError::Numerical(format!(
        "heat integration unstable down to dt = {dt:.3e}; pass a smaller --dt or a coarser grid"
    )))
}

fn integrate(op: &CompiledOperator, u0: &GridFunction, t0: f64, taus: &[f64], dt: f64) -> Result<(Vec<GridFunction>, usize), ()> {
    let n = u0.data.len();
    let mut u = u0.data.clone();
    let bound = 10.0 * u0.linf();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut ws = op.workspace();
    let mut t = t0;
    let mut snaps = Vec::new();
    let mut steps = 0;
    for &target in taus {
        let span = target - t;
        let m = (span / dt).ceil().max(1.0) as usize;
        let h = span / m as f64;
        for _ in 0..m {
            // f(u) = −𝓡u
            op.apply_with(&u, &mut k1, &mut ws);
            for i in 0..n {
                tmp[i] = u[i] - 0.5 * h * k1[i];
            }
            op.apply_with(&tmp, &mut k2, &mut ws);
            for i in 0..n {
                tmp[i] = u[i] - 0.5 * h * k2[i];
            }
            op.apply_with(&tmp, &mut k3, &mut ws);
            for i in 0..n {
                tmp[i] = u[i] - h * k3[i];
            }
            op.apply_with(&tmp, &mut k4, &mut ws);
            for i in 0..n {
                u[i] -= h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            steps += 1;
            if steps % 16 == 0 && !u.iter().all(|v| v.is_finite() && v.abs() <= bound) {
                return Err(());
            }
        }
        if !u.iter().all(|v| v.is_finite() && v.abs() <= bound) {
            return Err(());
        }
        t = target;
        snaps.push(GridFunction { grid: u0.grid.clone(), data: u.clone() });
    }
    Ok((snaps, steps))
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub tau1: f64,
    pub tau2: f64,
    pub max_rel_deviation: f64,
    pub nodes: usize,
    pub floor: f64,
}

/// Compares h_{τ2} with (τ2/τ1)^{−Q/ν} h_{τ1}(δ_{(τ2/τ1)^{−1/ν}} x) at
/// nodes at least 3 cells inside the box where h_{τ2} ≥ floor·max h_{τ2}.
pub fn heat_scaling_check(group: &GradedGroup, run: &HeatRun, tau1: f64, tau2: f64, floor: f64) -> NumResult<ScalingReport> {
    let (a, b) = match (run.snapshot(tau1), run.snapshot(tau2)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(NumError::Config("requested times are not snapshots of the run".into())),
    };
    let nu = run.degree as f64;
    let q = run.homogeneous_dimension as f64;
    let ratio = tau2 / tau1;
    let amp = ratio.powf(-q / nu);
    let r = ratio.powf(-1.0 / nu);
    let alg = group.algebra();
    let peak = b.max();
    let mut worst: f64 = 0.0;
    let mut nodes = 0;
    let mut x = vec![0.0; b.grid.dim()];
    for i in 0..b.data.len() {
        if b.data[i] < floor * peak || b.grid.boundary_distance(i) < 3 {
            continue;
        }
        b.grid.point(i, &mut x);
        let y = alg.dilate_f64(r, &x)?;
        let pred = amp * a.interpolate_cubic(&y);
        worst = worst.max((pred - b.data[i]).abs() / b.data[i]);
        nodes += 1;
    }
    Ok(ScalingReport { tau1, tau2, max_rel_deviation: worst, nodes, floor })
}

/// ‖u − u∘inv‖_{L¹}/‖u‖_{L¹} for groups in exponential coordinates, where
/// x⁻¹ = −x is the node reflection i ↦ N − i.
pub fn inversion_defect(u: &GridFunction) -> f64 {
    let g = &u.grid;
    let d = g.dim();
    let strides = g.strides();
    let mut ix = vec![0; d];
    let mut diff = 0.0;
    for i in 0..u.data.len() {
        g.unravel(i, &mut ix);
        let mut j = 0;
        let mut inside = true;
        for a in 0..d {
            let r = g.sizes()[a] - ix[a];
            if r >= g.sizes()[a] {
                inside = false;
                break;
            }
            j += r * strides[a];
        }
        let v = if inside { u.data[j] } else { 0.0 };
        diff += (u.data[i] - v).abs();
    }
    diff * g.cell_volume() / u.l1()
}

/// Closed-form heat kernel of the sub-Laplacian on H¹ with
/// X₁ = ∂₁ − (x₂/2)∂₃, X₂ = ∂₂ + (x₁/2)∂₃, as a λ-integral.
pub fn h1_heat_kernel_exact(t: f64, x: &[f64]) -> f64 {
    let r2 = x[0] * x[0] + x[1] * x[1];
    let z = x[2] / t;
    // integrand decays like λ e^{−λ(1 + r²/4t)}
    let m = 4000;
    let lmax = 40.0;
    let h = lmax / m as f64;
    let mut acc = 0.0;
    for k in 0..=m {
        let l = k as f64 * h;
        let (s, c) = if l == 0.0 { (1.0, 1.0) } else { (l / l.sinh(), l / l.tanh()) };
        let w = if k == 0 || k == m { 0.5 } else { 1.0 };
        acc += w * s * (-(r2 / (4.0 * t)) * c).exp() * (l * z).cos();
    }
    2.0 * acc * h / (8.0 * std::f64::consts::PI.powi(2) * t * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_kernel_origin_value() {
        assert!((h1_heat_kernel_exact(1.0, &[0.0, 0.0, 0.0]) - 1.0 / 16.0).abs() < 1e-9);
        assert!((h1_heat_kernel_exact(0.5, &[0.0, 0.0, 0.0]) - 0.25).abs() < 1e-9);
    }
}
