//! Polynomials on the group: the group law as polynomials, invariant vector
//! fields, the basis q_α dual to the ordered monomials X^β, the coefficients
//! of q_α(xy) in the tensor basis, and Taylor polynomials.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::GradedGroup;
use crate::lie::GradedLieAlgebra;
use crate::linalg::{self, Matrix};
use crate::multi_index::{self, MultiIndex};
use crate::polynomial::{Monomial, Polynomial};
use crate::rational::Rational;

/// Coordinates of xy as polynomials in (x₁..xₙ, y₁..yₙ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupLawTable {
    n: usize,
    coords: Vec<Polynomial>,
}

impl GroupLawTable {
    pub fn new(algebra: &GradedLieAlgebra) -> Self {
        Self { n: algebra.dim(), coords: algebra.bch_polynomials() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// (xy)_k.
    pub fn coordinate(&self, k: usize) -> &Polynomial {
        &self.coords[k]
    }

    pub fn coordinates(&self) -> &[Polynomial] {
        &self.coords
    }

    pub fn product(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let point: Vec<Rational> = x.iter().chain(y).cloned().collect();
        self.coords.iter().map(|p| p.evaluate(&point)).collect()
    }

    pub fn product_f64(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let point: Vec<f64> = x.iter().chain(y).copied().collect();
        self.coords.iter().map(|p| p.evaluate_f64(&point)).collect()
    }

    /// p(xy) as a polynomial in (x, y).
    pub fn substitute(&self, p: &Polynomial) -> Polynomial {
        assert_eq!(p.nvars(), self.n);
        p.substitute(&self.coords)
    }

    /// Images of x under x ↦ x⁻¹ = −x, as polynomials in x.
    pub fn inverse_images(&self) -> Vec<Polynomial> {
        (0..self.n).map(|k| -&Polynomial::var(self.n, k)).collect()
    }

    /// p(x⁻¹).
    pub fn substitute_inverse(&self, p: &Polynomial) -> Polynomial {
        p.substitute(&self.inverse_images())
    }

    /// X_j f(x) = d/dt f(x·exp(tX_j))|₀, i.e. a_{jk}(x) = ∂(xy)_k/∂y_j at y = 0.
    pub fn left_invariant_field(&self, j: usize) -> VectorField {
        let n = self.n;
        VectorField {
            coeffs: self
                .coords
                .iter()
                .map(|c| c.derivative(n + j).eliminate_block(n, n))
                .collect(),
        }
    }

    /// X̃_j f(x) = d/dt f(exp(tX_j)·x)|₀.
    pub fn right_invariant_field(&self, j: usize) -> VectorField {
        let n = self.n;
        VectorField {
            coeffs: self
                .coords
                .iter()
                .map(|c| c.derivative(j).eliminate_block(0, n))
                .collect(),
        }
    }
}

/// First-order operator Σ_k a_k(x) ∂_k with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    coeffs: Vec<Polynomial>,
}

impl VectorField {
    pub fn new(coeffs: Vec<Polynomial>) -> Self {
        Self { coeffs }
    }

    pub fn coefficients(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn coefficient(&self, k: usize) -> &Polynomial {
        &self.coeffs[k]
    }

    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(f.nvars());
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let d = f.derivative(k);
            if !d.is_zero() {
                out += &(a * &d);
            }
        }
        out
    }

    /// Acts on variables `offset..offset+n` of a polynomial with more
    /// variables.
    pub fn apply_block(&self, f: &Polynomial, offset: usize) -> Polynomial {
        let total = f.nvars();
        let mut out = Polynomial::zero(total);
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let d = f.derivative(offset + k);
            if !d.is_zero() {
                out += &(&a.embed(offset, total) * &d);
            }
        }
        out
    }
}

/// q_α for all [α] = d, with the pairing matrix that defines them.
#[derive(Clone, Debug)]
pub struct DegreeSlice {
    degree: u32,
    indices: Vec<MultiIndex>,
    position: BTreeMap<MultiIndex, usize>,
    /// Row β, column γ: X^β x^γ (0).
    pairing: Matrix,
    q: Vec<Polynomial>,
}

impl DegreeSlice {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn polynomials(&self) -> &[Polynomial] {
        &self.q
    }

    pub fn pairing(&self) -> &Matrix {
        &self.pairing
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// The polynomials q_α with X^β q_α(0) = δ_{αβ}, for all [α] up to a maximal
/// homogeneous degree.
#[derive(Clone, Debug)]
pub struct DualBasis {
    n: usize,
    weights: Vec<u32>,
    slices: Vec<DegreeSlice>,
}

impl DualBasis {
    /// Solves the duality system degree by degree up to `max_degree`.
    pub fn new(group: &GradedGroup, max_degree: u32) -> Result<Self> {
        let n = group.dim();
        let weights = group.weights().to_vec();
        let mut slices: Vec<DegreeSlice> = Vec::new();
        for d in 0..=max_degree {
            let slice = dual_polynomials_with(group, d, &slices)?;
            slices.push(slice);
        }
        Ok(Self { n, weights, slices })
    }

    pub fn max_degree(&self) -> u32 {
        self.slices.len() as u32 - 1
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn slice(&self, d: u32) -> &DegreeSlice {
        &self.slices[d as usize]
    }

    pub fn slices(&self) -> &[DegreeSlice] {
        &self.slices
    }

    fn locate(&self, alpha: &MultiIndex) -> (usize, usize) {
        let d = alpha.homogeneous_degree(&self.weights) as usize;
        assert!(d < self.slices.len(), "degree {d} beyond the precomputed table");
        (d, self.slices[d].position[alpha])
    }

    pub fn q(&self, alpha: &MultiIndex) -> &Polynomial {
        let (d, p) = self.locate(alpha);
        &self.slices[d].q[p]
    }

    /// q̃_α(x) = q_α(x⁻¹) = q_α(−x).
    pub fn q_tilde(&self, alpha: &MultiIndex) -> Polynomial {
        let q = self.q(alpha);
        Polynomial::from_terms(
            q.nvars(),
            q.terms().map(|(m, c)| {
                let c = if m.degree() % 2 == 1 { -c.clone() } else { c.clone() };
                (m.clone(), c)
            }),
        )
    }

    /// The functional f ↦ X^β f(0) on monomials of degree [β].
    pub fn pairing_row(&self, beta: &MultiIndex) -> &[Rational] {
        let (d, p) = self.locate(beta);
        &self.slices[d].pairing[p]
    }

    /// Coordinates of a polynomial in the basis (q_α): the coefficient of
    /// q_α is X^α p(0).
    pub fn q_coordinates(&self, p: &Polynomial) -> Result<BTreeMap<MultiIndex, Rational>> {
        let mut out: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
        for (m, c) in p.terms() {
            let gamma = MultiIndex::new(m.exps().iter().map(|&e| e as u32).collect());
            let d = gamma.homogeneous_degree(&self.weights) as usize;
            if d >= self.slices.len() {
                return Err(Error::Domain(format!(
                    "polynomial degree {d} exceeds dual-basis table ({})",
                    self.max_degree()
                )));
            }
            let slice = &self.slices[d];
            let col = slice.position[&gamma];
            for (row, beta) in slice.indices.iter().enumerate() {
                let v = &slice.pairing[row][col];
                if !v.is_zero() {
                    *out.entry(beta.clone()).or_insert_with(Rational::zero) += v * c;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    /// Expands q_{α₁}q_{α₂} in the basis (q_α)_{[α]=[α₁]+[α₂]} and checks
    /// that the projection leaves no residual.
    pub fn product_expansion(&self, a1: &MultiIndex, a2: &MultiIndex) -> Result<BTreeMap<MultiIndex, Rational>> {
        let prod = self.q(a1) * self.q(a2);
        let coords = self.q_coordinates(&prod)?;
        let d = a1.homogeneous_degree(&self.weights) + a2.homogeneous_degree(&self.weights);
        let mut rebuilt = Polynomial::zero(self.n);
        for (alpha, c) in &coords {
            if alpha.homogeneous_degree(&self.weights) != d {
                return Err(Error::Consistency(format!("q_{a1}·q_{a2} has a component of degree ≠ {d}")));
            }
            rebuilt += &self.q(alpha).scale(c);
        }
        if rebuilt != prod {
            return Err(Error::Consistency(format!("q_{a1}·q_{a2} is not in the span of the q_α")));
        }
        Ok(coords)
    }

    /// c_{α₁,α₂} in q_α(xy) = Σ c_{α₁,α₂} q_{α₁}(x) q_{α₂}(y), verified to
    /// reproduce q_α(xy) exactly.
    pub fn decomposition_coeffs(
        &self,
        law: &GroupLawTable,
        alpha: &MultiIndex,
    ) -> Result<BTreeMap<(MultiIndex, MultiIndex), Rational>> {
        let n = self.n;
        let target = law.substitute(self.q(alpha));
        // Group the (x,y) expansion by x-monomial, then convert both blocks.
        let mut by_x: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in target.terms() {
            let xm = Monomial::new(m.exps()[..n].to_vec());
            let ym = Monomial::new(m.exps()[n..].to_vec());
            by_x.entry(xm)
                .or_insert_with(|| Polynomial::zero(n))
                .add_term(ym, c.clone());
        }
        let mut coeffs: BTreeMap<(MultiIndex, MultiIndex), Rational> = BTreeMap::new();
        for (xm, ypoly) in &by_x {
            let xcoords = self.q_coordinates(&Polynomial::monomial(n, xm.clone(), Rational::one()))?;
            let ycoords = self.q_coordinates(ypoly)?;
            for (a1, c1) in &xcoords {
                for (a2, c2) in &ycoords {
                    *coeffs
                        .entry((a1.clone(), a2.clone()))
                        .or_insert_with(Rational::zero) += c1 * c2;
                }
            }
        }
        coeffs.retain(|_, v| !v.is_zero());
        let mut rebuilt = Polynomial::zero(2 * n);
        for ((a1, a2), c) in &coeffs {
            let qx = self.q(a1).embed(0, 2 * n);
            let qy = self.q(a2).embed(n, 2 * n);
            rebuilt += &(&qx * &qy).scale(c);
        }
        if rebuilt != target {
            return Err(Error::Consistency(format!("q_{alpha}(xy) is not reproduced by its decomposition")));
        }
        Ok(coeffs)
    }
}

/// Solves X^β q_α(0) = δ_{αβ} over homogeneous polynomials of degree `d`.
pub fn dual_polynomials(group: &GradedGroup, d: u32) -> Result<DegreeSlice> {
    let basis = DualBasis::new(group, d)?;
    Ok(basis.slices.into_iter().last().unwrap())
}

fn dual_polynomials_with(group: &GradedGroup, d: u32, lower: &[DegreeSlice]) -> Result<DegreeSlice> {
    let n = group.dim();
    let weights = group.weights();
    let indices = multi_index::of_degree(weights, d);
    let position: BTreeMap<MultiIndex, usize> =
        indices.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
    let size = indices.len();

    // Row β of the pairing is (ev₀ ∘ X^{β−e_l}) ∘ X_l with l the last
    // generator of β, and the first factor is a row of a lower slice.
    let mut images: BTreeMap<usize, Vec<Polynomial>> = BTreeMap::new();
    let mut pairing: Matrix = Vec::with_capacity(size);
    for beta in &indices {
        let row = match beta.last_nonzero() {
            None => alloc::vec![Rational::one()],
            Some(l) => {
                let prefix = beta.with_decremented(l).unwrap();
                let lower_slice = &lower[(d - weights[l]) as usize];
                let prow = &lower_slice.pairing[lower_slice.position[&prefix]];
                let imgs = images.entry(l).or_insert_with(|| {
                    indices
                        .iter()
                        .map(|g| group.left_field(l).apply(&Polynomial::monomial(n, Monomial::from_u32(g.entries()), Rational::one())))
                        .collect()
                });
                imgs.iter()
                    .map(|img| {
                        let mut acc = Rational::zero();
                        for (m, c) in img.terms() {
                            let g = MultiIndex::new(m.exps().iter().map(|&e| e as u32).collect());
                            acc += c * &prow[lower_slice.position[&g]];
                        }
                        acc
                    })
                    .collect()
            }
        };
        pairing.push(row);
    }
    let inv = linalg::inverse(&pairing).ok_or_else(|| {
        Error::Consistency(format!("duality system of degree {d} is singular"))
    })?;
    let q = (0..size)
        .map(|a| {
            Polynomial::from_terms(
                n,
                indices
                    .iter()
                    .enumerate()
                    .map(|(g, gamma)| (Monomial::from_u32(gamma.entries()), inv[g][a].clone())),
            )
        })
        .collect();
    Ok(DegreeSlice { degree: d, indices, position, pairing, q })
}

/// P(x, z) = Σ_{[α]≤M} (X^α f)(x) q_α(z), a polynomial in (x, z).
pub fn taylor_polynomial(group: &GradedGroup, basis: &DualBasis, f: &Polynomial, m: u32) -> Polynomial {
    let n = group.dim();
    let mut out = Polynomial::zero(2 * n);
    for alpha in multi_index::up_to_degree(group.weights(), m) {
        let xf = group.apply_monomial(&alpha, f);
        if xf.is_zero() {
            continue;
        }
        out += &(&xf.embed(0, 2 * n) * &basis.q(&alpha).embed(n, 2 * n));
    }
    out
}

/// R(x, z) = f(xz) − P^{(f)}_{x,M}(z).
pub fn taylor_remainder(group: &GradedGroup, basis: &DualBasis, f: &Polynomial, m: u32) -> Polynomial {
    &group.law().substitute(f) - &taylor_polynomial(group, basis, f, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::{int, rat};
    use std::vec;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn h1() -> GradedGroup {
        GradedGroup::new(catalog::heisenberg_spec(1)).unwrap()
    }

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    #[test]
    fn heisenberg_law_and_fields() {
        let g = h1();
        let law = g.law();
        let c3 = law.coordinate(2);
        let (x1, x2, x3) = (x(6, 0), x(6, 1), x(6, 2));
        let (y1, y2, y3) = (x(6, 3), x(6, 4), x(6, 5));
        let expected = &(&x3 + &y3) + &(&(&x1 * &y2) - &(&x2 * &y1)).scale(&rat(1, 2));
        assert_eq!(c3, &expected);
        assert_eq!(law.substitute(&x(3, 2)), expected);

        let f = x(3, 2);
        // X1 x3 = -x2/2, X2 x3 = x1/2; the right fields flip the sign.
        assert_eq!(g.left_field(0).apply(&f), x(3, 1).scale(&rat(-1, 2)));
        assert_eq!(g.left_field(1).apply(&f), x(3, 0).scale(&rat(1, 2)));
        assert_eq!(g.right_field(0).apply(&f), x(3, 1).scale(&rat(1, 2)));
        assert_eq!(g.right_field(1).apply(&f), x(3, 0).scale(&rat(-1, 2)));
        assert_eq!(g.left_field(0).apply(&x(3, 0)), Polynomial::one(3));
    }

    #[test]
    fn abelian_fields_are_partials() {
        let g = GradedGroup::new(catalog::abelian_spec(3)).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                let expect = if j == k { Polynomial::one(3) } else { Polynomial::zero(3) };
                assert_eq!(g.left_field(j).coefficient(k), &expect);
                assert_eq!(g.right_field(j).coefficient(k), &expect);
            }
        }
    }

    #[test]
    fn heisenberg_low_degree_duals() {
        let g = h1();
        let b = DualBasis::new(&g, 2).unwrap();
        assert_eq!(b.q(&mi(&[1, 0, 0])), &x(3, 0));
        assert_eq!(b.q(&mi(&[0, 1, 0])), &x(3, 1));
        assert_eq!(b.slice(2).len(), 4);
        let zero = vec![Rational::zero(); 3];
        for a in b.slice(2).indices() {
            for beta in b.slice(2).indices() {
                let v = g.apply_monomial(beta, b.q(a)).evaluate(&zero);
                assert_eq!(v, if a == beta { int(1) } else { int(0) });
            }
        }
    }

    #[test]
    fn abelian_duals_are_scaled_monomials() {
        let g = GradedGroup::new(catalog::abelian_spec(2)).unwrap();
        let b = DualBasis::new(&g, 4).unwrap();
        for a in multi_index::up_to_degree(g.weights(), 4) {
            let expected = Polynomial::monomial(
                2,
                Monomial::from_u32(a.entries()),
                Rational::from_integer(a.factorial()).recip(),
            );
            assert_eq!(b.q(&a), &expected);
        }
    }

    #[test]
    fn decomposition_examples() {
        let g = h1();
        let b = DualBasis::new(&g, 4).unwrap();
        let c = b.decomposition_coeffs(g.law(), &mi(&[0, 0, 1])).unwrap();
        let zero = mi(&[0, 0, 0]);
        assert_eq!(c[&(mi(&[0, 0, 1]), zero.clone())], int(1));
        assert_eq!(c[&(zero.clone(), mi(&[0, 0, 1]))], int(1));
        // q_(0,0,1) = x3 - x1x2/2, so q(xy) has the single cross term -x2y1.
        assert_eq!(c[&(mi(&[0, 1, 0]), mi(&[1, 0, 0]))], int(-1));
        assert!(!c.contains_key(&(mi(&[1, 0, 0]), mi(&[0, 1, 0]))));
        assert_eq!(b.q(&mi(&[0, 0, 1])), &(&x(3, 2) - &(&x(3, 0) * &x(3, 1)).scale(&rat(1, 2))));

        let a = GradedGroup::new(catalog::abelian_spec(2)).unwrap();
        let ab = DualBasis::new(&a, 4).unwrap();
        let c = ab.decomposition_coeffs(a.law(), &mi(&[2, 1])).unwrap();
        assert_eq!(c.len(), 6);
        assert!(c.values().all(|v| v.is_one()));
    }

    #[test]
    fn taylor_examples() {
        let g = h1();
        let b = DualBasis::new(&g, 4).unwrap();
        let f = x(3, 2);
        let p = taylor_polynomial(&g, &b, &f, 1);
        let x6 = |i| x(6, i);
        let expected = &(&x6(2) + &(&x6(1) * &x6(3)).scale(&rat(-1, 2))) + &(&x6(0) * &x6(4)).scale(&rat(1, 2));
        assert_eq!(p, expected);
        let r = taylor_remainder(&g, &b, &f, 1);
        // X3 f = 1 and X1X2 f = 1/2 are the degree-2 Taylor coefficients.
        let second = &b.q(&mi(&[0, 0, 1])).embed(3, 6) + &b.q(&mi(&[1, 1, 0])).embed(3, 6).scale(&rat(1, 2));
        assert_eq!(r, second);
        assert_eq!(r, x(6, 5));
        assert!(taylor_remainder(&g, &b, &f, 2).is_zero());
        let lin = x(3, 0);
        assert_eq!(taylor_polynomial(&g, &b, &lin, 0), lin.embed(0, 6));
    }

    #[test]
    fn q_tilde_is_reflection() {
        let g = GradedGroup::new(catalog::engel_spec()).unwrap();
        let b = DualBasis::new(&g, 4).unwrap();
        let minus: Vec<Polynomial> = (0..4).map(|i| -&x(4, i)).collect();
        for a in multi_index::up_to_degree(g.weights(), 4) {
            assert_eq!(b.q_tilde(&a), b.q(&a).substitute(&minus));
        }
    }
}
