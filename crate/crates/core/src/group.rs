//! A graded group with its exact group law and invariant vector fields.

use alloc::vec::Vec;

use crate::error::Result;
use crate::group_poly::{GroupLawTable, VectorField};
use crate::lie::{GradedLieAlgebra, GradedLieAlgebraSpec};
use crate::multi_index::MultiIndex;
use crate::polynomial::Polynomial;
use crate::rational::Rational;

/// Immutable bundle of a validated algebra, the group law in exponential
/// coordinates and the left/right invariant vector fields derived from it.
#[derive(Clone, Debug)]
pub struct GradedGroup {
    algebra: GradedLieAlgebra,
    law: GroupLawTable,
    left: Vec<VectorField>,
    right: Vec<VectorField>,
}

impl GradedGroup {
    pub fn new(spec: GradedLieAlgebraSpec) -> Result<Self> {
        let algebra = GradedLieAlgebra::new(spec)?;
        let law = GroupLawTable::new(&algebra);
        let left = (0..algebra.dim()).map(|j| law.left_invariant_field(j)).collect();
        let right = (0..algebra.dim()).map(|j| law.right_invariant_field(j)).collect();
        Ok(Self { algebra, law, left, right })
    }

    pub fn algebra(&self) -> &GradedLieAlgebra {
        &self.algebra
    }

    pub fn law(&self) -> &GroupLawTable {
        &self.law
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn weights(&self) -> &[u32] {
        self.algebra.weights()
    }

    pub fn name(&self) -> &str {
        self.algebra.name()
    }

    /// X_j as a first-order operator Σ_k a_{jk}(x) ∂_k.
    pub fn left_field(&self, j: usize) -> &VectorField {
        &self.left[j]
    }

    /// X̃_j as a first-order operator.
    pub fn right_field(&self, j: usize) -> &VectorField {
        &self.right[j]
    }

    /// Exponential coordinates of exp(X)exp(Y).
    pub fn bch_product(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        self.law.product(x, y)
    }

    pub fn bch_product_f64(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.law.product_f64(x, y)
    }

    /// X_{w₁}X_{w₂}···X_{w_k} f (the last generator acts first).
    pub fn apply_word(&self, word: &[usize], f: &Polynomial) -> Polynomial {
        word.iter().rev().fold(f.clone(), |acc, &j| self.left[j].apply(&acc))
    }

    /// X^α f for the ordered monomial X^α = X₁^{α₁}···Xₙ^{αₙ}.
    pub fn apply_monomial(&self, alpha: &MultiIndex, f: &Polynomial) -> Polynomial {
        self.apply_word(&alpha.word(), f)
    }

    /// X^α acting on the variable block `offset..offset+n` of `f`.
    pub fn apply_monomial_block(&self, alpha: &MultiIndex, f: &Polynomial, offset: usize) -> Polynomial {
        alpha
            .word()
            .iter()
            .rev()
            .fold(f.clone(), |acc, &j| self.left[j].apply_block(&acc, offset))
    }

    /// X̃^α f.
    pub fn apply_right_monomial(&self, alpha: &MultiIndex, f: &Polynomial) -> Polynomial {
        alpha
            .word()
            .iter()
            .rev()
            .fold(f.clone(), |acc, &j| self.right[j].apply(&acc))
    }
}
