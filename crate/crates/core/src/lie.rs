//! Graded nilpotent Lie algebras given by rational structure constants,
//! and the group structure read in exponential coordinates.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::multi_index::MultiIndex;
use crate::polynomial::Polynomial;
use crate::rational::{self, Rational};

/// `[X_i, X_j] += coeff · X_k` (indices are 0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coeff: Rational,
}

impl Bracket {
    pub fn new(i: usize, j: usize, k: usize, coeff: Rational) -> Self {
        Self { i, j, k, coeff }
    }
}

/// Raw, unvalidated description of a graded Lie algebra in an adapted basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLieAlgebraSpec {
    pub name: String,
    pub dim: usize,
    pub weights: Vec<u32>,
    pub brackets: Vec<Bracket>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// c_{ij}^k ≠ −c_{ji}^k (including a nonzero [X_i, X_i]).
    Antisymmetry { i: usize, j: usize, k: usize },
    /// Σ_cyc [[X_i,X_j],X_l] has a nonzero X_k component.
    Jacobi { i: usize, j: usize, l: usize, k: usize },
    /// c_{ij}^k ≠ 0 although υ_k ≠ υ_i + υ_j.
    Weight { i: usize, j: usize, k: usize, weight: u32, expected: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 1-based, as in X₁..Xₙ.
        match *self {
            Violation::Antisymmetry { i, j, k } => {
                write!(f, "({},{})→{}: antisymmetry fails", i + 1, j + 1, k + 1)
            }
            Violation::Jacobi { i, j, l, k } => {
                write!(f, "({},{},{})→{}: Jacobi identity fails", i + 1, j + 1, l + 1, k + 1)
            }
            Violation::Weight { i, j, k, weight, expected } => {
                write!(f, "({},{})→{}: weight {} ≠ {}", i + 1, j + 1, k + 1, weight, expected)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn messages(&self) -> Vec<String> {
        self.violations.iter().map(|v| format!("{v}")).collect()
    }
}

/// Dense structure constants `c[i][j][k]` assembled from a bracket list.
/// Pairs given in one order only are completed by antisymmetry.
fn structure_constants(spec: &GradedLieAlgebraSpec) -> Result<Vec<Vec<Vec<Rational>>>> {
    let n = spec.dim;
    if n == 0 {
        return Err(Error::Spec(String::from("dimension must be positive")));
    }
    if spec.weights.len() != n {
        return Err(Error::Spec(format!(
            "{} weights given for dimension {}",
            spec.weights.len(),
            n
        )));
    }
    if let Some(p) = spec.weights.iter().position(|&w| w == 0) {
        return Err(Error::Spec(format!("weight of X{} is zero", p + 1)));
    }
    if spec.weights.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Spec(String::from("weights must be nondecreasing")));
    }
    let mut given = vec![vec![vec![None::<Rational>; n]; n]; n];
    for b in &spec.brackets {
        if b.i >= n || b.j >= n || b.k >= n {
            return Err(Error::Spec(format!(
                "bracket ({},{})→{} out of range for dimension {}",
                b.i + 1,
                b.j + 1,
                b.k + 1,
                n
            )));
        }
        let slot = &mut given[b.i][b.j][b.k];
        *slot = Some(slot.take().unwrap_or_else(Rational::zero) + &b.coeff);
    }
    let mut c = vec![vec![vec![Rational::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                c[i][j][k] = match (&given[i][j][k], &given[j][i][k]) {
                    (Some(a), _) => a.clone(),
                    (None, Some(b)) => -b.clone(),
                    (None, None) => Rational::zero(),
                };
            }
        }
    }
    Ok(c)
}

/// Checks antisymmetry, the Jacobi identity and compatibility with the
/// gradation. Malformed input is an error; a well-formed but non-graded
/// algebra yields a report listing each failing triple.
pub fn validate_gradation(spec: &GradedLieAlgebraSpec) -> Result<ValidationReport> {
    let c = structure_constants(spec)?;
    let n = spec.dim;
    let w = &spec.weights;
    let mut violations = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                if c[i][j][k] != -c[j][i][k].clone() {
                    violations.push(Violation::Antisymmetry { i, j, k });
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i < j && !c[i][j][k].is_zero() && w[k] != w[i] + w[j] {
                    violations.push(Violation::Weight { i, j, k, weight: w[k], expected: w[i] + w[j] });
                }
            }
        }
    }
    let bracket = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n];
        for (p, ap) in a.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (q, bq) in b.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                for (k, o) in out.iter_mut().enumerate() {
                    if !c[p][q][k].is_zero() {
                        *o += ap * bq * &c[p][q][k];
                    }
                }
            }
        }
        out
    };
    let basis = |i: usize| -> Vec<Rational> {
        (0..n).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect()
    };
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                let t1 = bracket(&bracket(&basis(i), &basis(j)), &basis(l));
                let t2 = bracket(&bracket(&basis(j), &basis(l)), &basis(i));
                let t3 = bracket(&bracket(&basis(l), &basis(i)), &basis(j));
                for k in 0..n {
                    if !(&t1[k] + &t2[k] + &t3[k]).is_zero() {
                        violations.push(Violation::Jacobi { i, j, l, k });
                    }
                }
            }
        }
    }
    Ok(ValidationReport { ok: violations.is_empty(), violations })
}

/// A validated graded nilpotent Lie algebra.
#[derive(Clone, Debug)]
pub struct GradedLieAlgebra {
    spec: GradedLieAlgebraSpec,
    constants: Vec<Vec<Vec<Rational>>>,
    nonzero: Vec<Bracket>,
    step: usize,
    nu_o: u32,
}

impl GradedLieAlgebra {
    pub fn new(spec: GradedLieAlgebraSpec) -> Result<Self> {
        let report = validate_gradation(&spec)?;
        if !report.ok {
            return Err(Error::Gradation(report.messages().join("; ")));
        }
        let constants = structure_constants(&spec)?;
        let n = spec.dim;
        let mut nonzero = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !constants[i][j][k].is_zero() {
                        nonzero.push(Bracket::new(i, j, k, constants[i][j][k].clone()));
                    }
                }
            }
        }
        let nu_o = spec.weights.iter().fold(1u32, |acc, &w| acc.lcm(&w));
        let mut alg = Self { spec, constants, nonzero, step: 0, nu_o };
        alg.step = alg.compute_step();
        Ok(alg)
    }

    /// Length of the lower central series: the largest s such that some
    /// s-fold bracket is nonzero.
    fn compute_step(&self) -> usize {
        let n = self.dim();
        let mut current: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        let mut step = 1;
        loop {
            let mut next = Vec::new();
            for i in 0..n {
                for v in &current {
                    let mut e = vec![Rational::zero(); n];
                    e[i] = Rational::one();
                    next.push(self.bracket_vec(&e, v));
                }
            }
            let basis = linalg::echelon_basis(&next);
            if basis.is_empty() {
                return step;
            }
            step += 1;
            current = basis;
        }
    }

    pub fn spec(&self) -> &GradedLieAlgebraSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    pub fn weights(&self) -> &[u32] {
        &self.spec.weights
    }

    pub fn max_weight(&self) -> u32 {
        *self.spec.weights.last().unwrap()
    }

    /// Nilpotency step s.
    pub fn step(&self) -> usize {
        self.step
    }

    /// ν_o: least common multiple of the weights.
    pub fn nu_o(&self) -> u32 {
        self.nu_o
    }

    /// Q = Σ υ_j.
    pub fn homogeneous_dimension(&self) -> u32 {
        self.spec.weights.iter().sum()
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.constants[i][j][k]
    }

    /// Nonzero structure constants c_{ij}^k (both orders of each pair).
    pub fn nonzero_brackets(&self) -> &[Bracket] {
        &self.nonzero
    }

    /// [X_i, X_j] as coordinates in the adapted basis.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Rational] {
        &self.constants[i][j]
    }

    pub fn bracket_vec(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim()];
        for br in &self.nonzero {
            if a[br.i].is_zero() || b[br.j].is_zero() {
                continue;
            }
            out[br.k] += &a[br.i] * &b[br.j] * &br.coeff;
        }
        out
    }

    /// True when the weight-one layer generates the whole algebra.
    pub fn is_stratified(&self) -> bool {
        let n = self.dim();
        let first: Vec<usize> = (0..n).filter(|&j| self.spec.weights[j] == 1).collect();
        let unit = |i: usize| -> Vec<Rational> {
            (0..n).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect()
        };
        let mut span: Vec<Vec<Rational>> = first.iter().map(|&i| unit(i)).collect();
        let mut layer = span.clone();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for &i in &first {
                for v in &layer {
                    let b = self.bracket_vec(&unit(i), v);
                    if b.iter().any(|x| !x.is_zero()) {
                        next.push(b);
                    }
                }
            }
            let before = linalg::rank(&span);
            span.extend(next.iter().cloned());
            let after = linalg::rank(&span);
            layer = if after > before { linalg::echelon_basis(&next) } else { Vec::new() };
        }
        linalg::rank(&span) == n
    }

    /// [α] = Σ υ_j α_j.
    pub fn homogeneous_degree(&self, alpha: &MultiIndex) -> u32 {
        alpha.homogeneous_degree(self.weights())
    }

    /// δ_r x = (r^{υ₁}x₁, …, r^{υₙ}xₙ) with exact rational r > 0.
    pub fn dilate(&self, r: &Rational, x: &[Rational]) -> Result<Vec<Rational>> {
        if !r.is_positive() {
            return Err(Error::Domain(format!("dilation factor must be positive, got {r}")));
        }
        Ok(x.iter()
            .zip(self.weights())
            .map(|(xi, &w)| xi * rational::pow(r, w))
            .collect())
    }

    pub fn dilate_f64(&self, r: f64, x: &[f64]) -> Result<Vec<f64>> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("dilation factor must be positive, got {r}")));
        }
        Ok(x.iter()
            .zip(self.weights())
            .map(|(xi, &w)| xi * libm::pow(r, w as f64))
            .collect())
    }

    /// |x|_{ν_o} = (Σ x_j^{2ν_o/υ_j})^{1/(2ν_o)} with ν_o the lcm of the
    /// weights.
    pub fn homogeneous_norm(&self, x: &[f64]) -> f64 {
        let two_nu = 2 * self.nu_o;
        let s: f64 = x
            .iter()
            .zip(self.weights())
            .map(|(xi, &w)| powi(*xi, (two_nu / w) as i32))
            .sum();
        if s == 0.0 {
            0.0
        } else {
            libm::pow(s, 1.0 / two_nu as f64)
        }
    }

    /// Exponential coordinates of exp(X)⁻¹ = exp(−X).
    pub fn group_inverse(x: &[Rational]) -> Vec<Rational> {
        x.iter().map(|v| -v.clone()).collect()
    }

    /// Coordinates of the group law xy as polynomials in (x₁..xₙ, y₁..yₙ),
    /// from Dynkin's form of the Baker–Campbell–Hausdorff series truncated
    /// at the nilpotency step (longer brackets vanish identically).
    pub fn bch_polynomials(&self) -> Vec<Polynomial> {
        let n = self.dim();
        let nv = 2 * n;
        let step = self.step;
        let letter = |l: u8| -> Vec<Polynomial> {
            (0..n).map(|j| Polynomial::var(nv, j + l as usize * n)).collect()
        };
        let coeffs = dynkin_word_coefficients(step);
        let mut nested: BTreeMap<Vec<u8>, Vec<Polynomial>> = BTreeMap::new();
        let mut z = vec![Polynomial::zero(nv); n];
        for (word, c) in &coeffs {
            let v = self.nested_bracket(word, &letter, &mut nested);
            for (zk, vk) in z.iter_mut().zip(v) {
                *zk += &vk.scale(c);
            }
        }
        z
    }

    fn nested_bracket(
        &self,
        word: &[u8],
        letter: &dyn Fn(u8) -> Vec<Polynomial>,
        memo: &mut BTreeMap<Vec<u8>, Vec<Polynomial>>,
    ) -> Vec<Polynomial> {
        if let Some(v) = memo.get(word) {
            return v.clone();
        }
        let v = if word.len() == 1 {
            letter(word[0])
        } else {
            let inner = self.nested_bracket(&word[1..], letter, memo);
            self.bracket_poly(&letter(word[0]), &inner)
        };
        memo.insert(word.to_vec(), v.clone());
        v
    }

    /// Bracket of two algebra elements with polynomial coordinates.
    pub fn bracket_poly(&self, a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
        let nv = a[0].nvars();
        let mut out = vec![Polynomial::zero(nv); self.dim()];
        for br in &self.nonzero {
            if a[br.i].is_zero() || b[br.j].is_zero() {
                continue;
            }
            out[br.k] += &(&a[br.i] * &b[br.j]).scale(&br.coeff);
        }
        out
    }
}

fn powi(x: f64, e: i32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Coefficients of the right-nested brackets [w₁,[w₂,…,w_N]] in Dynkin's
/// formula for log(e^X e^Y), words over {X = 0, Y = 1} of length ≤ `max_len`.
fn dynkin_word_coefficients(max_len: usize) -> BTreeMap<Vec<u8>, Rational> {
    let mut out = BTreeMap::new();
    let mut parts: Vec<(usize, usize)> = Vec::new();
    dynkin_rec(max_len, 0, &mut parts, &mut out);
    out.retain(|_, c: &mut Rational| !c.is_zero());
    out
}

fn dynkin_rec(
    max_len: usize,
    total: usize,
    parts: &mut Vec<(usize, usize)>,
    out: &mut BTreeMap<Vec<u8>, Rational>,
) {
    if !parts.is_empty() {
        let k = parts.len() as i64;
        let mut denom = num_bigint::BigInt::from(k * total as i64);
        let mut word = Vec::with_capacity(total);
        for &(r, s) in parts.iter() {
            denom *= rational::factorial(r as u32) * rational::factorial(s as u32);
            word.extend(core::iter::repeat(0u8).take(r));
            word.extend(core::iter::repeat(1u8).take(s));
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let c = Rational::new(num_bigint::BigInt::from(sign), denom);
        *out.entry(word).or_insert_with(Rational::zero) += c;
    }
    for r in 0..=max_len - total {
        for s in 0..=max_len - total - r {
            if r + s == 0 {
                continue;
            }
            parts.push((r, s));
            dynkin_rec(max_len, total + r + s, parts, out);
            parts.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::{int, rat};

    #[test]
    fn heisenberg_validates() {
        let r = validate_gradation(&catalog::heisenberg_spec(1)).unwrap();
        assert!(r.ok, "{:?}", r.violations);
    }

    #[test]
    fn abelian_with_weights_validates() {
        let spec = GradedLieAlgebraSpec {
            name: String::from("abelian-13"),
            dim: 2,
            weights: vec![1, 3],
            brackets: Vec::new(),
        };
        assert!(validate_gradation(&spec).unwrap().ok);
    }

    #[test]
    fn weight_violation_is_named() {
        let spec = GradedLieAlgebraSpec {
            name: String::from("bad"),
            dim: 3,
            weights: vec![1, 1, 2],
            brackets: vec![Bracket::new(0, 1, 0, int(1))],
        };
        let r = validate_gradation(&spec).unwrap();
        assert!(!r.ok);
        assert!(r.messages().iter().any(|m| m == "(1,2)→1: weight 1 ≠ 2"), "{:?}", r.messages());
        assert!(matches!(GradedLieAlgebra::new(spec), Err(Error::Gradation(_))));
    }

    #[test]
    fn malformed_specs_are_errors() {
        let mut spec = catalog::heisenberg_spec(1);
        spec.brackets.push(Bracket::new(0, 5, 2, int(1)));
        assert!(matches!(validate_gradation(&spec), Err(Error::Spec(_))));
        let mut spec = catalog::heisenberg_spec(1);
        spec.weights[0] = 0;
        assert!(matches!(validate_gradation(&spec), Err(Error::Spec(_))));
    }

    #[test]
    fn inconsistent_antisymmetry_and_jacobi() {
        let mut spec = catalog::heisenberg_spec(1);
        spec.brackets.push(Bracket::new(1, 0, 2, int(1)));
        let r = validate_gradation(&spec).unwrap();
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Antisymmetry { .. })));

        // [[X1,X2],X4] = [X3,X4] = X1 while the other two Jacobi terms vanish.
        let bad = GradedLieAlgebraSpec {
            name: String::from("non-jacobi"),
            dim: 4,
            weights: vec![1, 1, 1, 2],
            brackets: vec![Bracket::new(0, 1, 2, int(1)), Bracket::new(2, 3, 0, int(1))],
        };
        let r = validate_gradation(&bad).unwrap();
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Weight { .. })));
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Jacobi { .. })));
    }

    #[test]
    fn derived_quantities() {
        let h = GradedLieAlgebra::new(catalog::heisenberg_spec(1)).unwrap();
        assert_eq!(h.homogeneous_dimension(), 4);
        assert_eq!(h.step(), 2);
        assert_eq!(h.nu_o(), 2);
        let e = GradedLieAlgebra::new(catalog::engel_spec()).unwrap();
        assert_eq!(e.homogeneous_dimension(), 7);
        assert_eq!(e.step(), 3);
        assert_eq!(e.nu_o(), 6);
        let a = GradedLieAlgebra::new(catalog::abelian_spec(4)).unwrap();
        assert_eq!(a.homogeneous_dimension(), 4);
        assert_eq!(a.step(), 1);
        assert!(h.is_stratified() && e.is_stratified() && a.is_stratified());
        let a13 = GradedLieAlgebra::new(GradedLieAlgebraSpec {
            name: String::from("a"),
            dim: 2,
            weights: vec![1, 3],
            brackets: Vec::new(),
        })
        .unwrap();
        assert!(!a13.is_stratified());
    }

    #[test]
    fn dilation_and_norm() {
        let h = GradedLieAlgebra::new(catalog::heisenberg_spec(1)).unwrap();
        let x = [int(1), int(1), int(1)];
        assert_eq!(h.dilate(&int(2), &x).unwrap(), vec![int(2), int(2), int(4)]);
        assert_eq!(h.dilate(&int(1), &x).unwrap(), x.to_vec());
        assert!(h.dilate(&int(0), &x).is_err());
        assert!(h.dilate(&rat(-1, 2), &x).is_err());
        assert_eq!(h.homogeneous_norm(&[0.0, 0.0, 0.0]), 0.0);
        assert_eq!(h.homogeneous_norm(&[1.0, 0.0, 0.0]), 1.0);
        let y = [0.3, -1.2, 0.7];
        let r = 2.7;
        let dy = h.dilate_f64(r, &y).unwrap();
        let lhs = h.homogeneous_norm(&dy);
        let rhs = r * h.homogeneous_norm(&y);
        assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        let inv: Vec<f64> = y.iter().map(|v| -v).collect();
        assert_eq!(h.homogeneous_norm(&inv), h.homogeneous_norm(&y));
    }

    #[test]
    fn group_inverse_negates() {
        let x = [int(1), int(2), int(3)];
        assert_eq!(GradedLieAlgebra::group_inverse(&x), vec![int(-1), int(-2), int(-3)]);
        assert_eq!(GradedLieAlgebra::group_inverse(&[int(0)]), vec![int(0)]);
    }

    #[test]
    fn dynkin_coefficients_of_words() {
        let c = dynkin_word_coefficients(2);
        // [X,Y] collects 1/2 - 1/4 from XY and +1/4 from YX = -[Y,X]/4 ... total 1/2.
        assert_eq!(c[&vec![0u8]], int(1));
        assert_eq!(c[&vec![1u8]], int(1));
        assert_eq!(&c[&vec![0u8, 1]] - &c[&vec![1u8, 0]], rat(1, 2));
    }
}
