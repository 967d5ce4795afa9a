//! Uniform coordinate grids and sampled functions.

use serde::Serialize;

use crate::error::{NumError, NumResult};

/// Box Π [−L_j, L_j) sampled at x_j = (i − N_j/2)·h_j, h_j = 2L_j/N_j.
/// The origin is a node; the last axis is contiguous in memory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    half_widths: Vec<f64>,
    n: Vec<usize>,
}

impl GridSpec {
    pub fn new(half_widths: Vec<f64>, n: Vec<usize>) -> NumResult<Self> {
        if half_widths.len() != n.len() || n.is_empty() {
            return Err(NumError::Config("grid dimensions disagree".into()));
        }
        if n.iter().any(|&k| k < 8 || k % 2 == 1) {
            return Err(NumError::Config(format!("grid sizes must be even and at least 8, got {n:?}")));
        }
        if half_widths.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(NumError::Config(format!("invalid box half-widths {half_widths:?}")));
        }
        Ok(Self { half_widths, n })
    }

    pub fn cube(dim: usize, l: f64, n: usize) -> NumResult<Self> {
        Self::new(vec![l; dim], vec![n; dim])
    }

    pub fn dim(&self) -> usize {
        self.n.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.n
    }

    pub fn half_widths(&self) -> &[f64] {
        &self.half_widths
    }

    pub fn spacing(&self, j: usize) -> f64 {
        2.0 * self.half_widths[j] / self.n[j] as f64
    }

    pub fn spacings(&self) -> Vec<f64> {
        (0..self.dim()).map(|j| self.spacing(j)).collect()
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|j| self.spacing(j)).product()
    }

    pub fn len(&self) -> usize {
        self.n.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn strides(&self) -> Vec<usize> {
        let d = self.dim();
        let mut s = vec![1; d];
        for j in (0..d.saturating_sub(1)).rev() {
            s[j] = s[j + 1] * self.n[j + 1];
        }
        s
    }

    pub fn coord(&self, j: usize, i: usize) -> f64 {
        (i as f64 - (self.n[j] / 2) as f64) * self.spacing(j)
    }

    pub fn axis(&self, j: usize) -> Vec<f64> {
        (0..self.n[j]).map(|i| self.coord(j, i)).collect()
    }

    /// Index of the node at the origin.
    pub fn origin_index(&self) -> usize {
        let s = self.strides();
        (0..self.dim()).map(|j| (self.n[j] / 2) * s[j]).sum()
    }

    pub fn unravel(&self, mut idx: usize, out: &mut [usize]) {
        for j in (0..self.dim()).rev() {
            out[j] = idx % self.n[j];
            idx /= self.n[j];
        }
    }

    pub fn point(&self, idx: usize, out: &mut [f64]) {
        let mut ix = vec![0; self.dim()];
        self.unravel(idx, &mut ix);
        for j in 0..self.dim() {
            out[j] = self.coord(j, ix[j]);
        }
    }

    /// Every node with its coordinates, in memory order.
    pub fn for_each_point(&self, mut f: impl FnMut(usize, &[f64])) {
        let d = self.dim();
        let axes: Vec<Vec<f64>> = (0..d).map(|j| self.axis(j)).collect();
        let mut ix = vec![0usize; d];
        let mut x: Vec<f64> = (0..d).map(|j| axes[j][0]).collect();
        for idx in 0..self.len() {
            f(idx, &x);
            for j in (0..d).rev() {
                ix[j] += 1;
                if ix[j] < self.n[j] {
                    x[j] = axes[j][ix[j]];
                    break;
                }
                ix[j] = 0;
                x[j] = axes[j][0];
            }
        }
    }

    /// Distance of a node from the box boundary in index units, minimized
    /// over axes.
    pub fn boundary_distance(&self, idx: usize) -> usize {
        let mut ix = vec![0; self.dim()];
        self.unravel(idx, &mut ix);
        (0..self.dim()).map(|j| ix[j].min(self.n[j] - 1 - ix[j])).min().unwrap()
    }
}

/// Real samples on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    pub grid: GridSpec,
    pub data: Vec<f64>,
}

impl GridFunction {
    pub fn zeros(grid: &GridSpec) -> Self {
        Self { grid: grid.clone(), data: vec![0.0; grid.len()] }
    }

    pub fn from_fn(grid: &GridSpec, mut f: impl FnMut(&[f64]) -> f64) -> Self {
        let mut data = vec![0.0; grid.len()];
        grid.for_each_point(|i, x| data[i] = f(x));
        Self { grid: grid.clone(), data }
    }

    pub fn from_data(grid: &GridSpec, data: Vec<f64>) -> NumResult<Self> {
        if data.len() != grid.len() {
            return Err(NumError::Config("sample count does not match grid".into()));
        }
        Ok(Self { grid: grid.clone(), data })
    }

    pub fn integral(&self) -> f64 {
        self.data.iter().sum::<f64>() * self.grid.cell_volume()
    }

    pub fn l1(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).sum::<f64>() * self.grid.cell_volume()
    }

    pub fn l2(&self) -> f64 {
        (self.data.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    pub fn linf(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn max(&self) -> f64 {
        self.data.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.data.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { grid: self.grid.clone(), data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn zip_with(&self, o: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.grid, o.grid);
        Self {
            grid: self.grid.clone(),
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip_with(o, |a, b| a - b)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip_with(o, |a, b| a + b)
    }

    /// Pointwise product with a function of the coordinates.
    pub fn mul_fn(&self, mut f: impl FnMut(&[f64]) -> f64) -> Self {
        let mut out = self.clone();
        self.grid.for_each_point(|i, x| out.data[i] *= f(x));
        out
    }

    /// Multilinear interpolation; samples beyond the node range count as 0.
    pub fn interpolate(&self, x: &[f64]) -> f64 {
        let d = self.grid.dim();
        let strides = self.grid.strides();
        let mut base = [0isize; 8];
        let mut frac = [0f64; 8];
        for j in 0..d {
            let h = self.grid.spacing(j);
            let s = x[j] / h + (self.grid.n[j] / 2) as f64;
            let fl = s.floor();
            if !(fl >= -1.0 && fl < self.grid.n[j] as f64) {
                return 0.0;
            }
            base[j] = fl as isize;
            frac[j] = s - fl;
        }
        let mut acc = 0.0;
        for corner in 0..(1usize << d) {
            let mut w = 1.0;
            let mut idx = 0usize;
            let mut inside = true;
            for j in 0..d {
                let bit = (corner >> j) & 1;
                let i = base[j] + bit as isize;
                if i < 0 || i >= self.grid.n[j] as isize {
                    inside = false;
                    break;
                }
                w *= if bit == 1 { frac[j] } else { 1.0 - frac[j] };
                idx += i as usize * strides[j];
            }
            if inside && w != 0.0 {
                acc += w * self.data[idx];
            }
        }
        acc
    }

    /// Tensor four-point Lagrange interpolation (fourth-order accurate);
    /// samples beyond the node range count as 0.
    pub fn interpolate_cubic(&self, x: &[f64]) -> f64 {
        let d = self.grid.dim();
        let strides = self.grid.strides();
        let mut base = [0isize; 8];
        let mut w = [[0f64; 4]; 8];
        for j in 0..d {
            let s = x[j] / self.grid.spacing(j) + (self.grid.n[j] / 2) as f64;
            let fl = s.floor();
            if !(fl >= -2.0 && fl < self.grid.n[j] as f64 + 1.0) {
                return 0.0;
            }
            let t = s - fl;
            base[j] = fl as isize - 1;
            w[j] = [
                -t * (t - 1.0) * (t - 2.0) / 6.0,
                (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
                -(t + 1.0) * t * (t - 2.0) / 2.0,
                (t + 1.0) * t * (t - 1.0) / 6.0,
            ];
        }
        let mut acc = 0.0;
        for corner in 0..(1usize << (2 * d)) {
            let mut wt = 1.0;
            let mut idx = 0usize;
            let mut inside = true;
            for j in 0..d {
                let o = (corner >> (2 * j)) & 3;
                let i = base[j] + o as isize;
                if i < 0 || i >= self.grid.n[j] as isize {
                    inside = false;
                    break;
                }
                wt *= w[j][o];
                idx += i as usize * strides[j];
            }
            if inside {
                acc += wt * self.data[idx];
            }
        }
        acc
    }

    /// Resamples onto another grid by interpolation.
    pub fn resample(&self, grid: &GridSpec) -> Self {
        Self::from_fn(grid, |x| self.interpolate(x))
    }

    /// Relative L² distance ‖self − o‖ / ‖o‖.
    pub fn rel_l2(&self, o: &Self) -> f64 {
        let n = o.l2();
        if n == 0.0 {
            return self.l2();
        }
        self.sub(o).l2() / n
    }

    pub fn rel_l1(&self, o: &Self) -> f64 {
        let n = o.l1();
        if n == 0.0 {
            return self.l1();
        }
        self.sub(o).l1() / n
    }

    /// Fraction of the L¹ mass within `width` nodes of the boundary.
    pub fn boundary_fraction(&self, width: usize) -> f64 {
        let total: f64 = self.data.iter().map(|v| v.abs()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let edge: f64 = self
            .data
            .iter()
            .enumerate()
            .filter(|(i, _)| self.grid.boundary_distance(*i) < width)
            .map(|(_, v)| v.abs())
            .sum();
        edge / total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_is_a_node_and_interpolation_is_exact_on_linear() {
        let g = GridSpec::new(vec![2.0, 3.0], vec![8, 12]).unwrap();
        let mut x = [0.0; 2];
        g.point(g.origin_index(), &mut x);
        assert_eq!(x, [0.0, 0.0]);
        let f = GridFunction::from_fn(&g, |x| 1.0 + 2.0 * x[0] - x[1] + x[0] * x[1]);
        let v = f.interpolate(&[0.3, -0.7]);
        assert!((v - (1.0 + 0.6 + 0.7 - 0.21)).abs() < 1e-12);
        assert_eq!(f.interpolate(&[10.0, 0.0]), 0.0);
        let c = GridFunction::from_fn(&g, |x| x[0].powi(3) - x[0] * x[1] * x[1] + 2.0);
        let v = c.interpolate_cubic(&[0.3, -0.7]);
        assert!((v - (0.027 - 0.3 * 0.49 + 2.0)).abs() < 1e-12);
    }

    #[test]
    fn norms_of_constant() {
        let g = GridSpec::cube(3, 1.0, 8).unwrap();
        let f = GridFunction::from_fn(&g, |_| 2.0);
        assert!((f.integral() - 16.0).abs() < 1e-12);
        assert!((f.l2() - (4.0f64 * 8.0).sqrt()).abs() < 1e-12);
        assert!(GridSpec::cube(3, 1.0, 7).is_err());
        assert!(GridSpec::cube(3, 1.0, 4).is_err());
    }

    #[test]
    fn for_each_point_matches_unravel() {
        let g = GridSpec::new(vec![1.0, 2.0, 3.0], vec![8, 10, 12]).unwrap();
        let mut y = [0.0; 3];
        g.for_each_point(|i, x| {
            g.point(i, &mut y);
            assert_eq!(x, &y[..]);
        });
    }
}
