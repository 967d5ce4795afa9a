//! Finite-difference application of variable-coefficient operators.

use std::collections::BTreeMap;

use nilcalc_core::{GradedGroup, MultiIndex, Polynomial, VarCoeffOperator};

use crate::error::{NumError, NumResult};
use crate::grid::{GridFunction, GridSpec};

/// Accuracy order of the centered stencils.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Accuracy {
    Second,
    Fourth,
}

/// Centered stencil for ∂^k, offsets −3..=3, for k ≤ 4.
fn stencil(k: u32, acc: Accuracy) -> [f64; 7] {
    match (acc, k) {
        (Accuracy::Second, 1) => [0.0, 0.0, -0.5, 0.0, 0.5, 0.0, 0.0],
        (Accuracy::Second, 2) => [0.0, 0.0, 1.0, -2.0, 1.0, 0.0, 0.0],
        (Accuracy::Second, 3) => [0.0, -0.5, 1.0, 0.0, -1.0, 0.5, 0.0],
        (Accuracy::Second, 4) => [0.0, 1.0, -4.0, 6.0, -4.0, 1.0, 0.0],
        (Accuracy::Fourth, 1) => [0.0, 1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0, 0.0],
        (Accuracy::Fourth, 2) => [0.0, -1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0, 0.0],
        (Accuracy::Fourth, 3) => [0.125, -1.0, 1.625, 0.0, -1.625, 1.0, -0.125],
        (Accuracy::Fourth, 4) => [-1.0 / 6.0, 2.0, -6.5, 28.0 / 3.0, -6.5, 2.0, -1.0 / 6.0],
        _ => unreachable!(),
    }
}

/// dst = ∂_axis^k src with zero values beyond the box.
fn deriv_axis(grid: &GridSpec, src: &[f64], dst: &mut [f64], axis: usize, k: u32, acc: Accuracy) {
    if k == 0 {
        dst.copy_from_slice(src);
        return;
    }
    if k > 4 {
        let mut tmp = vec![0.0; src.len()];
        deriv_axis(grid, src, &mut tmp, axis, 4, acc);
        deriv_axis(grid, &tmp, dst, axis, k - 4, acc);
        return;
    }
    let n = grid.sizes()[axis];
    let stride = grid.strides()[axis];
    let outer = src.len() / (n * stride);
    let h = grid.spacing(axis);
    let w = stencil(k, acc);
    let scale = 1.0 / h.powi(k as i32);
    let w: Vec<(isize, f64)> = w
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(i, c)| (i as isize - 3, c * scale))
        .collect();
    dst.fill(0.0);
    if stride == 1 {
        for o in 0..outer {
            let line = &src[o * n..(o + 1) * n];
            let out = &mut dst[o * n..(o + 1) * n];
            for i in 0..n {
                let mut acc = 0.0;
                for &(off, c) in &w {
                    let j = i as isize + off;
                    if j >= 0 && (j as usize) < n {
                        acc += c * line[j as usize];
                    }
                }
                out[i] = acc;
            }
        }
        return;
    }
    for o in 0..outer {
        let base = o * n * stride;
        for i in 0..n {
            let out = base + i * stride;
            for &(off, c) in &w {
                let j = i as isize + off;
                if j < 0 || j as usize >= n {
                    continue;
                }
                let inp = base + j as usize * stride;
                let (d, s) = (&mut dst[out..out + stride], &src[inp..inp + stride]);
                for (a, b) in d.iter_mut().zip(s) {
                    *a += c * b;
                }
            }
        }
    }
}

/// ∂^γ u for a grid function stored as a flat array.
pub fn partial(grid: &GridSpec, u: &[f64], gamma: &[u32]) -> Vec<f64> {
    partial_with(grid, u, gamma, Accuracy::Second)
}

pub fn partial_with(grid: &GridSpec, u: &[f64], gamma: &[u32], acc: Accuracy) -> Vec<f64> {
    let mut cur = u.to_vec();
    let mut tmp = vec![0.0; u.len()];
    for (axis, &k) in gamma.iter().enumerate() {
        if k > 0 {
            deriv_axis(grid, &cur, &mut tmp, axis, k, acc);
            std::mem::swap(&mut cur, &mut tmp);
        }
    }
    cur
}

enum Coefficient {
    Constant(f64),
    Sampled(Vec<f64>),
}

/// One derivative in the evaluation plan: slot = ∂_axis^k (slot of parent).
struct PlanStep {
    parent: Option<usize>,
    axis: usize,
    order: u32,
}

/// An operator Σ_γ c_γ(x) ∂^γ with coefficients sampled on a fixed grid.
/// Partial derivatives shared between terms are computed once.
pub struct CompiledOperator {
    grid: GridSpec,
    accuracy: Accuracy,
    plan: Vec<PlanStep>,
    /// (plan slot, coefficient); slot `None` is u itself.
    terms: Vec<(Option<usize>, Coefficient)>,
}

/// Scratch buffers for repeated application.
pub struct Workspace {
    slots: Vec<Vec<f64>>,
    tmp: Vec<f64>,
}

impl CompiledOperator {
    pub fn new(group: &GradedGroup, op: &VarCoeffOperator, grid: &GridSpec) -> NumResult<Self> {
        if grid.dim() != group.dim() || op.dim() != group.dim() {
            return Err(NumError::Config(format!(
                "grid has {} axes but the group has dimension {}",
                grid.dim(),
                group.dim()
            )));
        }
        Ok(Self::from_coordinate_form(&op.coordinate_form(group), grid))
    }

    pub fn from_coordinate_form(form: &BTreeMap<MultiIndex, Polynomial>, grid: &GridSpec) -> Self {
        let mut plan = Vec::new();
        let mut slots: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        fn slot_of(g: &[u32], plan: &mut Vec<PlanStep>, slots: &mut BTreeMap<Vec<u32>, usize>) -> Option<usize> {
            let axis = g.iter().rposition(|&k| k > 0)?;
            if let Some(&s) = slots.get(g) {
                return Some(s);
            }
            let mut parent = g.to_vec();
            parent[axis] = 0;
            let p = slot_of(&parent, plan, slots);
            plan.push(PlanStep { parent: p, axis, order: g[axis] });
            slots.insert(g.to_vec(), plan.len() - 1);
            Some(plan.len() - 1)
        }
        let terms = form
            .iter()
            .map(|(g, c)| {
                let coef = if c.total_degree() == Some(0) {
                    Coefficient::Constant(nilcalc_core::rational::to_f64(&c.constant_term()))
                } else {
                    Coefficient::Sampled(GridFunction::from_fn(grid, |x| c.evaluate_f64(x)).data)
                };
                (slot_of(g.entries(), &mut plan, &mut slots), coef)
            })
            .collect();
        Self { grid: grid.clone(), accuracy: Accuracy::Second, plan, terms }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn with_accuracy(mut self, accuracy: Accuracy) -> Self {
        self.accuracy = accuracy;
        self
    }

    pub fn workspace(&self) -> Workspace {
        let n = self.grid.len();
        Workspace { slots: (0..self.plan.len()).map(|_| vec![0.0; n]).collect(), tmp: vec![0.0; n] }
    }

    /// out = Σ_γ c_γ ∂^γ u.
    pub fn apply_with(&self, u: &[f64], out: &mut [f64], ws: &mut Workspace) {
        for (i, step) in self.plan.iter().enumerate() {
            let (done, rest) = ws.slots.split_at_mut(i);
            let src: &[f64] = match step.parent {
                None => u,
                Some(p) => &done[p],
            };
            if step.order > 4 {
                deriv_axis(&self.grid, src, &mut ws.tmp, step.axis, 4, self.accuracy);
                deriv_axis(&self.grid, &ws.tmp, &mut rest[0], step.axis, step.order - 4, self.accuracy);
            } else {
                deriv_axis(&self.grid, src, &mut rest[0], step.axis, step.order, self.accuracy);
            }
        }
        out.fill(0.0);
        for (slot, coef) in &self.terms {
            let d: &[f64] = match slot {
                None => u,
                Some(s) => &ws.slots[*s],
            };
            match coef {
                Coefficient::Constant(c) => {
                    for (o, v) in out.iter_mut().zip(d) {
                        *o += c * v;
                    }
                }
                Coefficient::Sampled(cs) => {
                    for ((o, v), c) in out.iter_mut().zip(d).zip(cs) {
                        *o += c * v;
                    }
                }
            }
        }
    }

    pub fn apply_into(&self, u: &[f64], out: &mut [f64]) {
        let mut ws = self.workspace();
        self.apply_with(u, out, &mut ws);
    }

    pub fn apply(&self, f: &GridFunction) -> GridFunction {
        let mut out = vec![0.0; f.data.len()];
        self.apply_into(&f.data, &mut out);
        GridFunction { grid: f.grid.clone(), data: out }
    }
}

/// Applies `op` to grid samples through its coordinate form with centered
/// second-order differences.
pub fn apply_op_fd(group: &GradedGroup, op: &VarCoeffOperator, f: &GridFunction) -> NumResult<GridFunction> {
    Ok(CompiledOperator::new(group, op, &f.grid)?.apply(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nilcalc_core::catalog;

    fn h1() -> GradedGroup {
        GradedGroup::new(catalog::heisenberg_spec(1)).unwrap()
    }

    #[test]
    fn stencils_exact_on_low_degree() {
        let g = GridSpec::cube(1, 2.0, 16).unwrap();
        let f = GridFunction::from_fn(&g, |x| x[0].powi(4));
        for k in 1..=4 {
            let d4 = partial_with(&g, &f.data, &[k], Accuracy::Fourth);
            let x = g.coord(0, 10);
            let exact = [4.0 * x.powi(3), 12.0 * x * x, 24.0 * x, 24.0][k as usize - 1];
            assert!((d4[10] - exact).abs() < 1e-9, "fourth order k={k}");
        }
        for (k, expect) in [(1, 4.0), (2, 12.0), (3, 24.0), (4, 24.0)] {
            let d = partial(&g, &f.data, &[k]);
            let x = g.coord(0, 10);
            let exact = match k {
                1 => 4.0 * x.powi(3),
                2 => 12.0 * x * x,
                3 => 24.0 * x,
                _ => 24.0,
            };
            // quartic: order-2 stencils carry an h² error term
            let h = g.spacing(0);
            assert!((d[10] - exact).abs() < expect * h * h * 4.0, "k={k}");
        }
    }

    #[test]
    fn identity_and_field() {
        let g = h1();
        let grid = GridSpec::cube(3, 2.0, 16).unwrap();
        let f = GridFunction::from_fn(&grid, |x| x[0] * x[2] + x[1] * x[1]);
        let id = VarCoeffOperator::identity(g.weights());
        assert_eq!(apply_op_fd(&g, &id, &f).unwrap(), f);
        let x1 = VarCoeffOperator::generator(g.weights(), 0);
        let out = apply_op_fd(&g, &x1, &f).unwrap();
        // X1 = ∂1 − (x2/2)∂3 on x1 x3 + x2² gives x3 − x1 x2/2
        let mut x = [0.0; 3];
        for i in 0..grid.len() {
            if grid.boundary_distance(i) < 2 {
                continue;
            }
            grid.point(i, &mut x);
            assert!((out.data[i] - (x[2] - x[0] * x[1] / 2.0)).abs() < 1e-10);
        }
    }
}
