//! Log-log slope of |f| against the homogeneous norm over shells.

use serde::Serialize;

use nilcalc_core::GradedGroup;

use crate::error::{NumError, NumResult};
use crate::grid::GridSpec;
use crate::GridFunction;

pub const MIN_SHELLS: usize = 6;

#[derive(Clone, Debug, Serialize)]
pub struct Shell {
    pub radius: f64,
    pub mean_abs: f64,
    pub nodes: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FitReport {
    pub slope: f64,
    pub r_min: f64,
    pub r_max: f64,
    /// Root-mean-square residual of the log-log fit.
    pub residual: f64,
    pub shells: Vec<Shell>,
}

/// Homogeneous size of one grid step, max_j h_j^{1/υ_j}.
pub fn homogeneous_spacing(group: &GradedGroup, grid: &GridSpec) -> f64 {
    group
        .weights()
        .iter()
        .enumerate()
        .map(|(j, &w)| grid.spacing(j).powf(1.0 / w as f64))
        .fold(0.0, f64::max)
}

/// Largest homogeneous radius whose ball fits in the half box,
/// min_j (L_j/2)^{1/υ_j}.
pub fn homogeneous_half_box(group: &GradedGroup, grid: &GridSpec) -> f64 {
    group
        .weights()
        .iter()
        .enumerate()
        .map(|(j, &w)| (grid.half_widths()[j] / 2.0).powf(1.0 / w as f64))
        .fold(f64::INFINITY, f64::min)
}

/// Fits log mean|f| ≈ slope·log r + c over `n_shells` log-spaced shells in
/// [r_min, r_max]. The window must satisfy r_min ≥ 3h and r_max ≤ L/2 in
/// homogeneous units.
pub fn decay_exponent(group: &GradedGroup, f: &GridFunction, r_min: f64, r_max: f64, n_shells: usize) -> NumResult<FitReport> {
    let h = homogeneous_spacing(group, &f.grid);
    let lmax = homogeneous_half_box(group, &f.grid);
    if !(r_min >= 3.0 * h - 1e-12 && r_max <= lmax + 1e-12 && r_min < r_max) {
        return Err(NumError::Config(format!(
            "fit window [{r_min}, {r_max}] outside resolution bounds [{:.4}, {:.4}]",
            3.0 * h,
            lmax
        )));
    }
    let alg = group.algebra();
    let lr = (r_max / r_min).ln();
    let mut sum_abs = vec![0.0; n_shells];
    let mut sum_log_r = vec![0.0; n_shells];
    let mut count = vec![0usize; n_shells];
    f.grid.for_each_point(|i, x| {
        let r = alg.homogeneous_norm(x);
        if r < r_min || r >= r_max {
            return;
        }
        let k = (((r / r_min).ln() / lr) * n_shells as f64) as usize;
        let k = k.min(n_shells - 1);
        sum_abs[k] += f.data[i].abs();
        sum_log_r[k] += r.ln();
        count[k] += 1;
    });
    let mut shells = Vec::new();
    let mut pts = Vec::new();
    for k in 0..n_shells {
        if count[k] == 0 {
            continue;
        }
        let mean = sum_abs[k] / count[k] as f64;
        let lr = sum_log_r[k] / count[k] as f64;
        shells.push(Shell { radius: lr.exp(), mean_abs: mean, nodes: count[k] });
        if mean > 0.0 {
            pts.push((lr, mean.ln()));
        }
    }
    if pts.len() < MIN_SHELLS {
        return Err(NumError::Numerical(format!(
            "only {} populated shells in [{r_min}, {r_max}], need {MIN_SHELLS}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let c = my - slope * mx;
    let residual = (pts.iter().map(|p| (p.1 - slope * p.0 - c).powi(2)).sum::<f64>() / n).sqrt();
    Ok(FitReport { slope, r_min, r_max, residual, shells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nilcalc_core::catalog;

    #[test]
    fn power_law_and_bump() {
        let g = GradedGroup::new(catalog::heisenberg_spec(1)).unwrap();
        let grid = GridSpec::new(vec![1.0, 1.0, 1.0], vec![32, 32, 128]).unwrap();
        let alg = g.algebra().clone();
        let f = GridFunction::from_fn(&grid, |x| {
            let r = alg.homogeneous_norm(x);
            if r == 0.0 { 0.0 } else { r.powf(-2.5) }
        });
        let h = homogeneous_spacing(&g, &grid);
        let fit = decay_exponent(&g, &f, 3.0 * h, 0.5, 8).unwrap();
        assert!((fit.slope + 2.5).abs() < 1e-3, "{}", fit.slope);
        let bump = GridFunction::from_fn(&grid, |x| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 50.0).exp());
        let fit = decay_exponent(&g, &bump, 3.0 * h, 0.5, 8).unwrap();
        assert!(fit.slope.abs() < 0.05);
        assert!(decay_exponent(&g, &f, 0.01, 0.5, 8).is_err());
        assert!(decay_exponent(&g, &f, 3.0 * h, 0.9, 8).is_err());
    }
}
