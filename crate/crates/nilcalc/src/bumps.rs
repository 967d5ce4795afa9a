//! Seeded random test functions.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::grid::{GridFunction, GridSpec};

/// Sampling ranges for a sum of anisotropic Gaussians.
#[derive(Clone, Debug)]
pub struct BumpFamily {
    pub components: usize,
    pub center: Vec<f64>,
    pub sigma_min: Vec<f64>,
    pub sigma_max: Vec<f64>,
}

impl BumpFamily {
    /// Widths grow with the weight of the coordinate.
    pub fn for_weights(weights: &[u32]) -> Self {
        Self {
            components: 2,
            center: weights.iter().map(|&w| 0.5 * w as f64).collect(),
            sigma_min: weights.iter().map(|&w| 0.5 * w as f64).collect(),
            sigma_max: weights.iter().map(|&w| 0.5 * w as f64 + 0.4).collect(),
        }
    }

    pub fn sample(&self, grid: &GridSpec, rng: &mut ChaCha8Rng) -> GridFunction {
        let d = grid.dim();
        let mut parts = Vec::with_capacity(self.components);
        for _ in 0..self.components {
            let amp: f64 = rng.gen_range(0.5..1.5) * if rng.gen_bool(0.25) { -1.0 } else { 1.0 };
            let c: Vec<f64> = (0..d).map(|j| rng.gen_range(-self.center[j]..=self.center[j])).collect();
            let s: Vec<f64> = (0..d).map(|j| rng.gen_range(self.sigma_min[j]..=self.sigma_max[j])).collect();
            parts.push((amp, c, s));
        }
        GridFunction::from_fn(grid, |x| {
            parts
                .iter()
                .map(|(a, c, s)| {
                    let q: f64 = x.iter().zip(c).zip(s).map(|((x, c), s)| ((x - c) / s).powi(2)).sum();
                    a * (-0.5 * q).exp()
                })
                .sum()
        })
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` bumps drawn from one seeded stream.
pub fn bumps(grid: &GridSpec, family: &BumpFamily, seed: u64, count: usize) -> Vec<GridFunction> {
    let mut r = rng(seed);
    (0..count).map(|_| family.sample(grid, &mut r)).collect()
}
