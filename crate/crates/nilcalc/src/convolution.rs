//! Group convolution (f₁∗f₂)(x) = ∫ f₁(y) f₂(y⁻¹x) dy on a grid.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use nilcalc_core::rational::to_f64;
use nilcalc_core::GradedGroup;

use crate::error::{NumError, NumResult};
use crate::grid::{GridFunction, GridSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvolutionMethod {
    /// Twisted FFT along the last axis; exact on the grid up to linear
    /// interpolation along that axis.
    Shear,
    /// Double sum with multilinear interpolation.
    Direct,
}

#[derive(Clone, Debug)]
pub struct Convolution {
    pub f: GridFunction,
    pub method: ConvolutionMethod,
    /// Set when either factor carries noticeable mass next to the boundary.
    pub boundary_warning: bool,
}

/// Relative boundary mass above which a convolution is flagged.
pub const BOUNDARY_MASS_LIMIT: f64 = 1e-3;

/// Bilinear part of a law of the form (xy)_k = x_k + y_k for k < n−1 and
/// (xy)_{n−1} = x_{n−1} + y_{n−1} + Σ b_ij x_i y_j.
#[derive(Clone, Debug, PartialEq)]
pub struct ShearLaw {
    pub b: Vec<Vec<f64>>,
}

impl ShearLaw {
    pub fn detect(group: &GradedGroup) -> Option<Self> {
        let n = group.dim();
        let law = group.law();
        let mut b = vec![vec![0.0; n.saturating_sub(1)]; n.saturating_sub(1)];
        for k in 0..n {
            for (m, c) in law.coordinate(k).terms() {
                let e = m.exps();
                let nz: Vec<usize> = (0..2 * n).filter(|&i| e[i] > 0).collect();
                let unit = |i: usize| nz == [i] && e[i] == 1 && *c == nilcalc_core::rational::int(1);
                if unit(k) || unit(n + k) {
                    continue;
                }
                if k + 1 == n && nz.len() == 2 && nz[0] < n - 1 && nz[1] >= n && nz[1] < 2 * n - 1 {
                    if e[nz[0]] == 1 && e[nz[1]] == 1 {
                        b[nz[0]][nz[1] - n] += to_f64(c);
                        continue;
                    }
                }
                return None;
            }
        }
        Some(Self { b })
    }
}

pub fn group_convolve(group: &GradedGroup, f1: &GridFunction, f2: &GridFunction) -> NumResult<Convolution> {
    if f1.grid != f2.grid {
        return Err(NumError::Config("convolution factors live on different grids".into()));
    }
    if f1.grid.dim() != group.dim() {
        return Err(NumError::Config("grid dimension does not match the group".into()));
    }
    let boundary_warning =
        f1.boundary_fraction(2) > BOUNDARY_MASS_LIMIT || f2.boundary_fraction(2) > BOUNDARY_MASS_LIMIT;
    let (f, method) = match ShearLaw::detect(group) {
        Some(s) => (shear_convolve(&s, f1, f2), ConvolutionMethod::Shear),
        None => (direct_convolve(group, f1, f2)?, ConvolutionMethod::Direct),
    };
    Ok(Convolution { f, method, boundary_warning })
}

/// Largest node count accepted by the direct double sum.
pub const DIRECT_LIMIT: usize = 16_384;

/// Reference double sum Σ_y f₁(y) f₂(y⁻¹x) Π h_j with multilinear
/// interpolation of f₂.
pub fn direct_convolve(group: &GradedGroup, f1: &GridFunction, f2: &GridFunction) -> NumResult<GridFunction> {
    let grid = &f1.grid;
    if grid.len() > DIRECT_LIMIT {
        return Err(NumError::Config(format!(
            "direct convolution limited to {DIRECT_LIMIT} nodes, grid has {}",
            grid.len()
        )));
    }
    let d = grid.dim();
    let law = group.law();
    let mut pts = vec![0.0; grid.len() * d];
    grid.for_each_point(|i, x| pts[i * d..(i + 1) * d].copy_from_slice(x));
    let support: Vec<usize> = (0..grid.len()).filter(|&i| f1.data[i] != 0.0).collect();
    let vol = grid.cell_volume();
    let mut out = GridFunction::zeros(grid);
    let mut yinv = vec![0.0; d];
    for xi in 0..grid.len() {
        let x = &pts[xi * d..(xi + 1) * d];
        let mut acc = 0.0;
        for &yi in &support {
            for j in 0..d {
                yinv[j] = -pts[yi * d + j];
            }
            let z = law.product_f64(&yinv, x);
            acc += f1.data[yi] * f2.interpolate(&z);
        }
        out.data[xi] = acc * vol;
    }
    Ok(out)
}

fn shear_convolve(law: &ShearLaw, f1: &GridFunction, f2: &GridFunction) -> GridFunction {
    let grid = &f1.grid;
    let d = grid.dim();
    let nl = grid.sizes()[d - 1];
    let hl = grid.spacing(d - 1);
    let p = 4 * nl;
    let half = p / 2 + 1;
    let ncol = grid.len() / nl;
    let base_sizes = &grid.sizes()[..d - 1];

    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(p);
    let inv = planner.plan_fft_inverse(p);

    let spectra = |f: &GridFunction| -> (Vec<Complex64>, Vec<f64>) {
        let mut spec = vec![Complex64::new(0.0, 0.0); ncol * half];
        let mut norms = vec![0.0; ncol];
        let mut buf = vec![Complex64::new(0.0, 0.0); p];
        for c in 0..ncol {
            let col = &f.data[c * nl..(c + 1) * nl];
            norms[c] = col.iter().map(|v| v.abs()).sum();
            if norms[c] == 0.0 {
                continue;
            }
            buf.fill(Complex64::new(0.0, 0.0));
            for (b, v) in buf.iter_mut().zip(col) {
                b.re = *v;
            }
            fwd.process(&mut buf);
            spec[c * half..(c + 1) * half].copy_from_slice(&buf[..half]);
        }
        (spec, norms)
    };
    let (s1, n1) = spectra(f1);
    let (s2, n2) = spectra(f2);
    let max1 = n1.iter().cloned().fold(0.0, f64::max);
    let max2 = n2.iter().cloned().fold(0.0, f64::max);
    let cut = 1e-14 * max1 * max2;

    let roots: Vec<Complex64> =
        (0..p).map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / p as f64)).collect();

    // Coordinates of the first d−1 axes per column.
    let coords: Vec<Vec<f64>> = (0..ncol)
        .map(|c| {
            let mut ix = vec![0usize; d - 1];
            let mut r = c;
            for j in (0..d - 1).rev() {
                ix[j] = r % base_sizes[j];
                r /= base_sizes[j];
            }
            (0..d - 1).map(|j| grid.coord(j, ix[j])).collect()
        })
        .collect();
    let unravel = |c: usize| -> Vec<isize> {
        let mut ix = vec![0isize; d - 1];
        let mut r = c;
        for j in (0..d - 1).rev() {
            ix[j] = (r % base_sizes[j]) as isize;
            r /= base_sizes[j];
        }
        ix
    };
    let active1: Vec<usize> = (0..ncol).filter(|&c| n1[c] > 0.0).collect();

    let vol = grid.cell_volume();
    let mut out = GridFunction::zeros(grid);
    let mut acc = vec![Complex64::new(0.0, 0.0); half];
    let mut buf = vec![Complex64::new(0.0, 0.0); p];
    let limit = 1.5 * nl as f64 + 1.0;
    for xc in 0..ncol {
        let xi = unravel(xc);
        let x = &coords[xc];
        acc.fill(Complex64::new(0.0, 0.0));
        let mut any = false;
        for &yc in &active1 {
            let yi = unravel(yc);
            // u' = x' − y' must be a node
            let mut uc = 0usize;
            let mut ok = true;
            for j in 0..d - 1 {
                let u = xi[j] - yi[j] + (base_sizes[j] / 2) as isize;
                if u < 0 || u >= base_sizes[j] as isize {
                    ok = false;
                    break;
                }
                uc = uc * base_sizes[j] + u as usize;
            }
            if !ok || n1[yc] * n2[uc] <= cut {
                continue;
            }
            let y = &coords[yc];
            let mut s = 0.0;
            for (i, row) in law.b.iter().enumerate() {
                for (j, bij) in row.iter().enumerate() {
                    if *bij != 0.0 {
                        s += bij * y[i] * x[j];
                    }
                }
            }
            let sigma = s / hl;
            if sigma.abs() > limit {
                continue;
            }
            let m = (-sigma).floor();
            let theta = -sigma - m;
            let c = (nl / 2) as i64 + m as i64;
            let step = c.rem_euclid(p as i64) as usize;
            let a = &s1[yc * half..(yc + 1) * half];
            let b = &s2[uc * half..(uc + 1) * half];
            let mut idx = 0usize;
            for k in 0..half {
                let lerp = Complex64::new(1.0 - theta + theta * roots[k].re, theta * roots[k].im);
                acc[k] += a[k] * b[k] * roots[idx] * lerp;
                idx += step;
                if idx >= p {
                    idx -= p;
                }
            }
            any = true;
        }
        if !any {
            continue;
        }
        buf[..half].copy_from_slice(&acc);
        for k in half..p {
            buf[k] = acc[p - k].conj();
        }
        inv.process(&mut buf);
        let scale = vol / p as f64;
        for (o, v) in out.data[xc * nl..(xc + 1) * nl].iter_mut().zip(&buf) {
            *o = v.re * scale;
        }
    }
    out
}

/// A normalized Gaussian sample Π_j exp(−(x_j − c_j)²/(2σ_j²)) scaled to
/// unit discrete mass.
pub fn gaussian(grid: &GridSpec, center: &[f64], sigma: &[f64]) -> GridFunction {
    let mut g = GridFunction::from_fn(grid, |x| {
        let q: f64 = x.iter().zip(center).zip(sigma).map(|((x, c), s)| ((x - c) / s).powi(2)).sum();
        (-0.5 * q).exp()
    });
    let m = g.integral();
    if m > 0.0 {
        g = g.scale(1.0 / m);
    }
    g
}
