//! Bessel potentials 𝓑_a = Γ(a/ν)⁻¹ ∫₀^∞ t^{a/ν−1} e^{−t} h_t dt built from
//! one heat snapshot through h_t(x) = t^{−Q/ν} h(δ_{t^{−1/ν}} x).

use serde::Serialize;

use nilcalc_core::GradedGroup;

use crate::convolution::group_convolve;
use crate::error::{NumError, NumResult};
use crate::grid::{GridFunction, GridSpec};

/// A heat kernel h = h_{τ} rescaled to time 1, with its cell CDF.
#[derive(Clone, Debug)]
pub struct HeatProfile {
    pub h: GridFunction,
    pub degree: u32,
    pub homogeneous_dimension: u32,
    pub weights: Vec<u32>,
    cdf: Vec<f64>,
}

impl HeatProfile {
    /// `snapshot` is h_τ; it is renormalized to unit mass and read as h_1 on
    /// the dilated grid.
    pub fn new(group: &GradedGroup, degree: u32, snapshot: &GridFunction, tau: f64) -> NumResult<Self> {
        let weights = group.weights().to_vec();
        let q = group.algebra().homogeneous_dimension();
        let mass = snapshot.integral();
        if !(mass > 0.0) {
            return Err(NumError::Numerical("heat snapshot has no mass".into()));
        }
        // h_1(x) = τ^{Q/ν} h_τ(δ_{τ^{1/ν}} x): rescale the box instead of
        // resampling.
        let widths: Vec<f64> = snapshot
            .grid
            .half_widths()
            .iter()
            .zip(&weights)
            .map(|(l, &w)| l * tau.powf(-(w as f64) / degree as f64))
            .collect();
        let grid = GridSpec::new(widths, snapshot.grid.sizes().to_vec())?;
        let scale = tau.powf(q as f64 / degree as f64) / mass;
        let h = GridFunction { grid, data: snapshot.data.iter().map(|v| v * scale).collect() };
        let cdf = cell_cdf(&h);
        Ok(Self { h, degree, homogeneous_dimension: q, weights, cdf })
    }

    /// Value at the origin.
    pub fn at_origin(&self) -> f64 {
        self.h.data[self.h.grid.origin_index()]
    }
}

/// Cumulative masses at the (N_j+1) cell corners of a piecewise-constant
/// density.
fn cell_cdf(h: &GridFunction) -> Vec<f64> {
    let g = &h.grid;
    let d = g.dim();
    let dims: Vec<usize> = g.sizes().iter().map(|n| n + 1).collect();
    let total: usize = dims.iter().product();
    let mut strides = vec![1; d];
    for j in (0..d - 1).rev() {
        strides[j] = strides[j + 1] * dims[j + 1];
    }
    let mut c = vec![0.0; total];
    let vol = g.cell_volume();
    let mut ix = vec![0; d];
    for i in 0..h.data.len() {
        g.unravel(i, &mut ix);
        let k: usize = (0..d).map(|j| (ix[j] + 1) * strides[j]).sum();
        c[k] = h.data[i] * vol;
    }
    for j in 0..d {
        let s = strides[j];
        for k in 0..total {
            let i = (k / s) % dims[j];
            if i > 0 {
                c[k] += c[k - s];
            }
        }
    }
    c
}

/// Sparse 1-D weights (table index, weight) for one output node index.
type AxisWeights = Vec<Vec<(usize, f64)>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sampling {
    /// Point values; the origin node is left at 0.
    Pointwise,
    /// Cell averages, including the origin cell.
    CellAverage,
}

#[derive(Clone, Debug, Serialize)]
pub struct BesselTable {
    pub a: f64,
    #[serde(skip)]
    pub f: GridFunction,
    pub sampling: Sampling,
    pub l1: f64,
    pub l2: f64,
    pub integral: f64,
    /// Relative L¹ change between the t-quadrature and its half-resolution
    /// subrule.
    pub quadrature_drift: f64,
}

#[derive(Clone, Debug)]
pub struct TimeQuadrature {
    pub t_min: f64,
    pub t_max: f64,
    /// Spacing in log t.
    pub ds: f64,
    /// Largest accepted quadrature drift.
    pub tolerance: f64,
}

impl Default for TimeQuadrature {
    fn default() -> Self {
        Self { t_min: 1e-7, t_max: 60.0, ds: 0.04, tolerance: 2e-3 }
    }
}

/// Evaluates 𝓑_a on `grid`. Nodes with homogeneous norm above `radius` are
/// skipped (left at 0) when a radius is given.
pub fn bessel_potential(
    group: &GradedGroup,
    profile: &HeatProfile,
    a: f64,
    grid: &GridSpec,
    sampling: Sampling,
    quad: &TimeQuadrature,
    radius: Option<f64>,
) -> NumResult<BesselTable> {
    if !(a > 0.0) {
        return Err(NumError::Config(format!("Bessel order must be positive, got {a}")));
    }
    if grid.dim() != profile.h.grid.dim() {
        return Err(NumError::Config("grid dimension does not match the heat profile".into()));
    }
    let d = grid.dim();
    let nu = profile.degree as f64;
    let q = profile.homogeneous_dimension as f64;
    let ratio = a / nu;
    let gamma = libm::tgamma(ratio);
    let hg = &profile.h.grid;

    let active: Vec<usize> = match radius {
        None => (0..grid.len()).collect(),
        Some(r) => {
            let alg = group.algebra();
            let mut keep = Vec::new();
            grid.for_each_point(|i, x| {
                if alg.homogeneous_norm(x) <= r {
                    keep.push(i);
                }
            });
            keep
        }
    };
    let mut ixs = vec![0usize; active.len() * d];
    for (k, &i) in active.iter().enumerate() {
        grid.unravel(i, &mut ixs[k * d..(k + 1) * d]);
    }
    let (table, tdims): (&[f64], Vec<usize>) = match sampling {
        Sampling::Pointwise => (&profile.h.data, hg.sizes().to_vec()),
        Sampling::CellAverage => (&profile.cdf, hg.sizes().iter().map(|n| n + 1).collect()),
    };
    let mut tstrides = vec![1; d];
    for j in (0..d - 1).rev() {
        tstrides[j] = tstrides[j + 1] * tdims[j + 1];
    }

    let n_t = ((quad.t_max / quad.t_min).ln() / quad.ds).ceil() as usize;
    let n_t = n_t + n_t % 2;
    let ds = (quad.t_max / quad.t_min).ln() / n_t as f64;
    let mut fine = vec![0.0; active.len()];
    let mut coarse = vec![0.0; active.len()];
    let vol = grid.cell_volume();
    for k in 0..=n_t {
        let t = quad.t_min * (k as f64 * ds).exp();
        let mut w = ds * t.powf(ratio) * (-t).exp() / gamma;
        if k == 0 || k == n_t {
            w *= 0.5;
        }
        let wc = if k % 2 == 0 { 2.0 * w } else { 0.0 };
        let amp = match sampling {
            Sampling::Pointwise => t.powf(-q / nu),
            Sampling::CellAverage => 1.0 / vol,
        };
        let axes: Vec<AxisWeights> = (0..d)
            .map(|j| {
                let r = t.powf(-(profile.weights[j] as f64) / nu);
                axis_weights(grid, hg, j, r, sampling)
            })
            .collect();
        for (n, slot) in fine.iter_mut().enumerate() {
            let ix = &ixs[n * d..(n + 1) * d];
            let v = tensor_sum(table, &tstrides, &axes, ix);
            if v != 0.0 {
                *slot += w * amp * v;
                coarse[n] += wc * amp * v;
            }
        }
        if k == 0 && sampling == Sampling::CellAverage {
            // ∫₀^{t_min} t^{a/ν−1} dt with the cell mass frozen at t_min
            let tail = quad.t_min.powf(ratio) / ratio / gamma;
            for (n, slot) in fine.iter_mut().enumerate() {
                let v = tensor_sum(table, &tstrides, &axes, &ixs[n * d..(n + 1) * d]);
                *slot += tail * amp * v;
                coarse[n] += tail * amp * v;
            }
        }
    }
    let mut f = GridFunction::zeros(grid);
    let mut fc = GridFunction::zeros(grid);
    for (k, &i) in active.iter().enumerate() {
        f.data[i] = fine[k];
        fc.data[i] = coarse[k];
    }
    let quadrature_drift = fc.rel_l1(&f);
    if quadrature_drift > quad.tolerance {
        return Err(NumError::Numerical(format!(
            "t-grid too coarse for a = {a}: half-resolution rule moves the result by {quadrature_drift:.2e}"
        )));
    }
    Ok(BesselTable { a, l1: f.l1(), l2: f.l2(), integral: f.integral(), f, sampling, quadrature_drift })
}

/// Per output index along axis j, the weights that reduce the table to the
/// value at the dilated node (pointwise) or to the dilated cell mass along
/// that axis (cell average).
fn axis_weights(grid: &GridSpec, hg: &GridSpec, j: usize, r: f64, sampling: Sampling) -> AxisWeights {
    let n = hg.sizes()[j];
    let hh = hg.spacing(j);
    let half = (n / 2) as f64;
    let hw = 0.5 * grid.spacing(j);
    (0..grid.sizes()[j])
        .map(|i| {
            let x = grid.coord(j, i);
            match sampling {
                Sampling::Pointwise => {
                    let s = x * r / hh + half;
                    let fl = s.floor();
                    let fr = s - fl;
                    let mut out = Vec::with_capacity(2);
                    for (idx, w) in [(fl as isize, 1.0 - fr), (fl as isize + 1, fr)] {
                        if idx >= 0 && (idx as usize) < n && w != 0.0 {
                            out.push((idx as usize, w));
                        }
                    }
                    out
                }
                Sampling::CellAverage => {
                    // corner k sits at (k − N/2 − 1/2)·h
                    let corner = |y: f64| -> Vec<(usize, f64)> {
                        let s = (y / hh + half + 0.5).clamp(0.0, n as f64);
                        let fl = s.floor().min(n as f64 - 1.0);
                        let fr = s - fl;
                        let k = fl as usize;
                        vec![(k, 1.0 - fr), (k + 1, fr)]
                    };
                    let mut out = corner((x + hw) * r);
                    for (k, w) in corner((x - hw) * r) {
                        out.push((k, -w));
                    }
                    out.sort_by_key(|p| p.0);
                    let mut merged: Vec<(usize, f64)> = Vec::with_capacity(4);
                    for (k, w) in out {
                        match merged.last_mut() {
                            Some(last) if last.0 == k => last.1 += w,
                            _ => merged.push((k, w)),
                        }
                    }
                    merged.retain(|p| p.1.abs() > 1e-15);
                    merged
                }
            }
        })
        .collect()
}

fn tensor_sum(table: &[f64], strides: &[usize], axes: &[AxisWeights], ix: &[usize]) -> f64 {
    fn rec(table: &[f64], strides: &[usize], axes: &[AxisWeights], ix: &[usize], j: usize, base: usize, w: f64) -> f64 {
        if j == ix.len() {
            return w * table[base];
        }
        let mut acc = 0.0;
        for &(k, c) in &axes[j][ix[j]] {
            acc += rec(table, strides, axes, ix, j + 1, base + k * strides[j], w * c);
        }
        acc
    }
    if axes.iter().zip(ix).any(|(a, &i)| a[i].is_empty()) {
        return 0.0;
    }
    rec(table, strides, axes, ix, 0, 0, 1.0)
}

/// ‖𝓑_a‖²_{L²} = Γ((2a−Q)/ν)/Γ(2a/ν)·h(0), valid for a > Q/2.
pub fn l2_norm_from_heat(profile: &HeatProfile, a: f64) -> Option<f64> {
    let nu = profile.degree as f64;
    let q = profile.homogeneous_dimension as f64;
    if 2.0 * a <= q {
        return None;
    }
    Some((libm::tgamma((2.0 * a - q) / nu) / libm::tgamma(2.0 * a / nu) * profile.at_origin()).sqrt())
}

#[derive(Clone, Debug, Serialize)]
pub struct SemigroupReport {
    pub a: f64,
    pub b: f64,
    pub rel_l1_error: f64,
    pub boundary_warning: bool,
}

/// Relative L¹ distance between 𝓑_a ∗ 𝓑_b and 𝓑_{a+b} (cell averages).
/// b = 0 uses the unit mass at the origin.
pub fn semigroup_check(
    group: &GradedGroup,
    profile: &HeatProfile,
    a: f64,
    b: f64,
    grid: &GridSpec,
    quad: &TimeQuadrature,
) -> NumResult<SemigroupReport> {
    let ba = bessel_potential(group, profile, a, grid, Sampling::CellAverage, quad, None)?;
    let bb = if b == 0.0 {
        let mut d = GridFunction::zeros(grid);
        d.data[grid.origin_index()] = 1.0 / grid.cell_volume();
        d
    } else {
        bessel_potential(group, profile, b, grid, Sampling::CellAverage, quad, None)?.f
    };
    let target = if b == 0.0 { ba.f.clone() } else { bessel_potential(group, profile, a + b, grid, Sampling::CellAverage, quad, None)?.f };
    let conv = group_convolve(group, &ba.f, &bb)?;
    Ok(SemigroupReport { a, b, rel_l1_error: conv.f.rel_l1(&target), boundary_warning: conv.boundary_warning })
}
