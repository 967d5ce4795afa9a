//! Schrödinger representations of H¹ in the Hermite basis.
//!
//! π_λ(x)φ(u) = exp(iλ(x₃ + x₂u + x₁x₂/2)) φ(u + x₁), so that
//! dπ(X₁) = d/du, dπ(X₂) = iλu, dπ(X₃) = iλ. The basis is
//! φ_n(u) = |λ|^{1/4} ψ_n(|λ|^{1/2}u) with ψ_n the Hermite functions.

use rustfft::num_complex::Complex64;
use serde::Serialize;

use nilcalc_core::{GradedGroup, VarCoeffOperator};

use crate::error::{NumError, NumResult};
use crate::fd::{Accuracy, CompiledOperator};
use crate::grid::GridFunction;

/// Unitarity/homomorphism tolerance on the truncation-safe block.
pub const BLOCK_TOLERANCE: f64 = 1e-6;

/// Hermite functions ψ_0..ψ_{n−1} at the points v, row k = ψ_k.
pub fn hermite_functions(n: usize, v: &[f64]) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; v.len()]; n];
    let c0 = std::f64::consts::PI.powf(-0.25);
    for (p, &x) in v.iter().enumerate() {
        let mut prev = 0.0;
        let mut cur = c0 * (-0.5 * x * x).exp();
        for k in 0..n {
            out[k][p] = cur;
            let next = (2.0 / (k + 1) as f64).sqrt() * x * cur - (k as f64 / (k + 1) as f64).sqrt() * prev;
            prev = cur;
            cur = next;
        }
    }
    out
}

/// A truncated N×N operator matrix for the parameter λ.
#[derive(Clone, Debug, PartialEq)]
pub struct RepMatrix {
    pub lambda: f64,
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl RepMatrix {
    pub fn zeros(lambda: f64, n: usize) -> Self {
        Self { lambda, n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(lambda: f64, n: usize) -> Self {
        let mut m = Self::zeros(lambda, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(self.lambda, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * o.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(self.lambda, n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { lambda: self.lambda, n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    /// max |entry| over the leading b×b block.
    pub fn block_max(&self, b: usize) -> f64 {
        (0..b).flat_map(|i| (0..b).map(move |j| (i, j))).map(|(i, j)| self.get(i, j).norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm over the leading b×b block.
    pub fn block_frobenius(&self, b: usize) -> f64 {
        (0..b).flat_map(|i| (0..b).map(move |j| (i, j))).map(|(i, j)| self.get(i, j).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hilbert_schmidt(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Matrix of π_λ(x) on the first N basis functions by trapezoidal
/// quadrature, with the unitarity self-test on the leading N/2 block.
pub fn schrodinger_rep(lambda: f64, x: &[f64], n: usize) -> NumResult<RepMatrix> {
    let m = schrodinger_rep_unchecked(lambda, x, n)?;
    let defect = m.mul(&m.adjoint()).sub(&RepMatrix::identity(lambda, n)).block_max(n / 2);
    if defect > BLOCK_TOLERANCE {
        return Err(NumError::Numerical(format!(
            "unitarity defect {defect:.2e} on the leading block at λ = {lambda}; increase N"
        )));
    }
    Ok(m)
}

pub fn schrodinger_rep_unchecked(lambda: f64, x: &[f64], n: usize) -> NumResult<RepMatrix> {
    if lambda == 0.0 || !lambda.is_finite() || x.len() != 3 || n < 2 {
        return Err(NumError::Config("need λ ≠ 0, a point of H¹ and N ≥ 2".into()));
    }
    let sq = lambda.abs().sqrt();
    let s = x[0] * sq;
    let kappa = lambda.signum() * sq * x[1];
    let reach = (2.0 * n as f64 + 1.0).sqrt();
    let band = 2.0 * reach + kappa.abs() + 1.0;
    let dv = (std::f64::consts::PI / band).min(0.05);
    let vmax = reach + s.abs() + 8.0;
    let np = (2.0 * vmax / dv).ceil() as usize + 1;
    let v: Vec<f64> = (0..np).map(|i| -vmax + i as f64 * dv).collect();
    let shifted: Vec<f64> = v.iter().map(|t| t + s).collect();
    let a = hermite_functions(n, &v);
    let b = hermite_functions(n, &shifted);
    let phase0 = lambda * (x[2] + 0.5 * x[0] * x[1]);
    let phase: Vec<Complex64> = v.iter().map(|t| Complex64::from_polar(dv, phase0 + kappa * t)).collect();
    let mut out = RepMatrix::zeros(lambda, n);
    let mut row = vec![Complex64::new(0.0, 0.0); np];
    for i in 0..n {
        for p in 0..np {
            row[p] = phase[p] * a[i][p];
        }
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for p in 0..np {
                acc += row[p] * b[j][p];
            }
            out.data[i * n + j] = acc;
        }
    }
    Ok(out)
}

/// dπ_λ(X_j) in the basis, from the ladder relations.
pub fn generator_matrix(lambda: f64, j: usize, n: usize) -> RepMatrix {
    let sq = lambda.abs().sqrt();
    let mut m = RepMatrix::zeros(lambda, n);
    for k in 0..n {
        let up = ((k + 1) as f64 / 2.0).sqrt();
        match j {
            // d/du = |λ|^{1/2} (a − a†)/√2
            0 => {
                if k + 1 < n {
                    m.data[k * n + k + 1] = Complex64::new(sq * up, 0.0);
                    m.data[(k + 1) * n + k] = Complex64::new(-sq * up, 0.0);
                }
            }
            // iλu = iλ|λ|^{−1/2} (a + a†)/√2
            1 => {
                if k + 1 < n {
                    let c = Complex64::new(0.0, lambda / sq * up);
                    m.data[k * n + k + 1] = c;
                    m.data[(k + 1) * n + k] = c;
                }
            }
            _ => m.data[k * n + k] = Complex64::new(0.0, lambda),
        }
    }
    m
}

/// Partial transforms of a grid function on H¹ used by the Fourier
/// transform: G(x₁, x₂) = Σ_{x₃} f e^{−iλx₃} h₃.
fn partial_transform(f: &GridFunction, lambda: f64) -> Vec<Complex64> {
    let g = &f.grid;
    let (n1, n2, n3) = (g.sizes()[0], g.sizes()[1], g.sizes()[2]);
    let h3 = g.spacing(2);
    let w: Vec<Complex64> = (0..n3).map(|k| Complex64::from_polar(h3, -lambda * g.coord(2, k))).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); n1 * n2];
    for c in 0..n1 * n2 {
        let col = &f.data[c * n3..(c + 1) * n3];
        out[c] = col.iter().zip(&w).map(|(v, e)| e * v).sum();
    }
    out
}

fn check_h1_grid(f: &GridFunction) -> NumResult<()> {
    if f.grid.dim() != 3 {
        return Err(NumError::Config("the Schrödinger model is implemented for H¹ only".into()));
    }
    Ok(())
}

/// f̂(π_λ) = ∫ f(x) π_λ(x)* dx as an N×N matrix. The operator has kernel
/// K(u,v) = F(u−v; λ(u+v)/2, λ) with F the Fourier transform in (x₂, x₃);
/// the (u, v) integrals use the x₁ lattice of the grid.
pub fn group_fourier_h1(f: &GridFunction, lambda: f64, n: usize) -> NumResult<RepMatrix> {
    check_h1_grid(f)?;
    if lambda == 0.0 {
        return Err(NumError::Config("λ must be nonzero".into()));
    }
    let g = &f.grid;
    let (n1, n2) = (g.sizes()[0], g.sizes()[1]);
    let (h1, h2) = (g.spacing(0), g.spacing(1));
    let gt = partial_transform(f, lambda);
    let sq = lambda.abs().sqrt();
    let reach = ((2.0 * n as f64 + 1.0).sqrt() + 7.0) / sq;
    let half = (reach / h1).ceil() as isize;
    let nu = (2 * half + 1) as usize;
    let u: Vec<f64> = (0..nu).map(|i| (i as isize - half) as f64 * h1).collect();
    let scaled: Vec<f64> = u.iter().map(|t| t * sq).collect();
    let basis = hermite_functions(n, &scaled);
    let norm = lambda.abs().powf(0.25);
    let x2: Vec<f64> = (0..n2).map(|k| g.coord(1, k)).collect();
    let amax = (n1 / 2) as isize;
    // F(a; ξ₂) for every diagonal a and every s = i + j
    let mut kern: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); 2 * nu - 1]; (2 * amax) as usize];
    let mut e = vec![Complex64::new(0.0, 0.0); n2];
    for s in 0..2 * nu - 1 {
        let b = 0.5 * (u[0] + u[0]) + 0.5 * s as f64 * h1;
        let xi2 = lambda * b;
        for (k, ek) in e.iter_mut().enumerate() {
            *ek = Complex64::from_polar(h2, -xi2 * x2[k]);
        }
        for ai in 0..2 * amax {
            let row = (ai as usize) * n2;
            kern[ai as usize][s] = gt[row..row + n2].iter().zip(&e).map(|(a, b)| a * b).sum();
        }
    }
    // M = Φ K Φᵀ h₁², K(u_i, u_j) = kern[i − j + N₁/2][i + j]
    let mut ak = vec![Complex64::new(0.0, 0.0); n * nu];
    for m in 0..n {
        for j in 0..nu {
            let mut acc = Complex64::new(0.0, 0.0);
            for d in -amax..amax {
                let i = j as isize + d;
                if i < 0 || i >= nu as isize {
                    continue;
                }
                let i = i as usize;
                acc += basis[m][i] * kern[(d + amax) as usize][i + j];
            }
            ak[m * nu + j] = acc;
        }
    }
    let mut out = RepMatrix::zeros(lambda, n);
    let scale = norm * norm * h1 * h1;
    for m in 0..n {
        for k in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..nu {
                acc += ak[m * nu + j] * basis[k][j];
            }
            out.data[m * n + k] = acc * scale;
        }
    }
    Ok(out)
}

/// ‖f̂(π_λ)‖²_HS from the kernel, (1/|λ|)·2π Σ |G(x₁,x₂)|² h₁h₂.
pub fn hilbert_schmidt_kernel(f: &GridFunction, lambda: f64) -> NumResult<f64> {
    check_h1_grid(f)?;
    let g = &f.grid;
    let gt = partial_transform(f, lambda);
    let s: f64 = gt.iter().map(|z| z.norm_sqr()).sum();
    Ok(2.0 * std::f64::consts::PI * s * g.spacing(0) * g.spacing(1) / lambda.abs())
}

/// Gauss–Legendre nodes and weights on [a, b].
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w));
    }
    out
}

/// λ-quadrature for the Plancherel integral: matrices on λ_c ≤ |λ| ≤ Λ,
/// the kernel formula on |λ| < λ_c where N basis functions cannot resolve
/// f̂(π_λ).
#[derive(Clone, Debug, Serialize)]
pub struct PlancherelGrid {
    pub lambda_c: f64,
    pub lambda_max: f64,
    pub nodes_outer: usize,
    pub nodes_inner: usize,
    pub n: usize,
}

impl Default for PlancherelGrid {
    fn default() -> Self {
        Self { lambda_c: 0.5, lambda_max: 3.5, nodes_outer: 16, nodes_inner: 8, n: 64 }
    }
}

/// ∫ ‖f̂(π_λ)‖²_HS |λ| dλ.
pub fn plancherel_integral(f: &GridFunction, grid: &PlancherelGrid) -> NumResult<f64> {
    let mut total = 0.0;
    for (l, w) in gauss_legendre(grid.nodes_outer, grid.lambda_c, grid.lambda_max) {
        for sign in [1.0, -1.0] {
            let hs = group_fourier_h1(f, sign * l, grid.n)?.hilbert_schmidt();
            total += w * hs * hs * l;
        }
    }
    for (l, w) in gauss_legendre(grid.nodes_inner, -grid.lambda_c, grid.lambda_c) {
        total += w * hilbert_schmidt_kernel(f, l)? * l.abs();
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize)]
pub struct PlancherelCalibration {
    pub constant: f64,
    pub drift: f64,
}

/// Calibrates c in ‖f‖² = c ∫‖f̂(π_λ)‖²_HS|λ|dλ on `reference` and checks
/// it on `second`; a drift above 1% signals a convention error.
pub fn calibrate_plancherel(reference: &GridFunction, second: &GridFunction, grid: &PlancherelGrid) -> NumResult<PlancherelCalibration> {
    let c1 = reference.l2().powi(2) / plancherel_integral(reference, grid)?;
    let c2 = second.l2().powi(2) / plancherel_integral(second, grid)?;
    let drift = (c2 / c1 - 1.0).abs();
    if drift > 0.01 {
        return Err(NumError::Consistency(format!("Plancherel constant drifts by {drift:.3} between references")));
    }
    Ok(PlancherelCalibration { constant: c1, drift })
}

/// |c ∫‖f̂‖²|λ|dλ − ‖f‖²| / ‖f‖² with a frozen constant c.
pub fn plancherel_check_h1(f: &GridFunction, constant: f64, grid: &PlancherelGrid) -> NumResult<f64> {
    let norm2 = f.l2().powi(2);
    if norm2 == 0.0 {
        return Ok(plancherel_integral(f, grid)?.abs());
    }
    Ok((constant * plancherel_integral(f, grid)? - norm2).abs() / norm2)
}

/// Relative Frobenius error of (X_j f)^(π_λ) against dπ_λ(X_j) f̂(π_λ) on
/// the leading N/2 block, X_j f by fourth-order differences.
pub fn intertwining_check(group: &GradedGroup, f: &GridFunction, lambda: f64, j: usize, n: usize) -> NumResult<f64> {
    check_h1_grid(f)?;
    let op = VarCoeffOperator::generator(group.weights(), j);
    let xf = CompiledOperator::new(group, &op, &f.grid)?.with_accuracy(Accuracy::Fourth).apply(f);
    let lhs = group_fourier_h1(&xf, lambda, n)?;
    let rhs = generator_matrix(lambda, j, n).mul(&group_fourier_h1(f, lambda, n)?);
    let b = n / 2;
    let scale = rhs.block_frobenius(b);
    if scale == 0.0 {
        return Ok(lhs.block_frobenius(b));
    }
    Ok(lhs.sub(&rhs).block_frobenius(b) / scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_orthonormal() {
        let v: Vec<f64> = (0..4001).map(|i| -20.0 + i as f64 * 0.01).collect();
        let h = hermite_functions(12, &v);
        for a in 0..12 {
            for b in 0..12 {
                let s: f64 = h[a].iter().zip(&h[b]).map(|(x, y)| x * y).sum::<f64>() * 0.01;
                assert!((s - if a == b { 1.0 } else { 0.0 }).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn identity_at_origin() {
        let m = schrodinger_rep(1.3, &[0.0, 0.0, 0.0], 16).unwrap();
        assert!(m.sub(&RepMatrix::identity(1.3, 16)).block_max(16) < 1e-10);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let q = gauss_legendre(8, -1.0, 2.0);
        let s: f64 = q.iter().map(|(x, w)| w * x.powi(5)).sum();
        assert!((s - (64.0 - 1.0) / 6.0).abs() < 1e-12);
    }
}
