//! Symbols of differential operators σ(x, π) = Σ p_β(x) π(X)^β, with
//! difference operators, x-derivatives, and the composition and adjoint
//! expansions.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::diffops::{pbw_normal_order, InvariantOperator, VarCoeffOperator};
use crate::error::{Error, Result};
use crate::group::GradedGroup;
use crate::group_poly::DualBasis;
use crate::multi_index::{self, MultiIndex};
use crate::polynomial::Polynomial;
use crate::rational::{int, Rational};

/// σ(x, π) = Σ p_β(x) π(X)^β. The quantization Op(σ) is the operator
/// Σ p_β(x) X^β, stored as such.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOpSymbol(VarCoeffOperator);

impl DiffOpSymbol {
    pub fn from_operator(op: VarCoeffOperator) -> Self {
        Self(op)
    }

    /// Op(σ).
    pub fn op(&self) -> &VarCoeffOperator {
        &self.0
    }

    pub fn into_operator(self) -> VarCoeffOperator {
        self.0
    }

    pub fn identity(weights: &[u32]) -> Self {
        Self(VarCoeffOperator::identity(weights))
    }

    pub fn zero(weights: &[u32]) -> Self {
        Self(VarCoeffOperator::zero(weights))
    }

    /// π(X)^β.
    pub fn monomial(weights: &[u32], beta: MultiIndex) -> Self {
        Self(VarCoeffOperator::term(weights, beta, Polynomial::one(weights.len())))
    }

    pub fn term(weights: &[u32], beta: MultiIndex, p: Polynomial) -> Self {
        Self(VarCoeffOperator::term(weights, beta, p))
    }

    pub fn weights(&self) -> &[u32] {
        self.0.weights()
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Polynomial> {
        self.0.terms()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.sub(&other.0))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self(self.0.scale(c))
    }

    /// max [β] over nonzero terms; 0 for the zero symbol. An upper bound for
    /// the order in S^m_{1,0} when the coefficients are bounded with all
    /// derivatives, read formally for polynomial coefficients.
    pub fn order(&self) -> u32 {
        self.terms()
            .keys()
            .map(|b| b.homogeneous_degree(self.weights()))
            .max()
            .unwrap_or(0)
    }

    /// S^{order}_{1,0}.
    pub fn class_tag(&self) -> SymbolClassTag {
        SymbolClassTag::new(self.order() as f64, 1.0, 0.0).unwrap()
    }

    /// Kernel terms κ_x = Σ p_β(x) (−1)^{|β|} X^β δ₀.
    pub fn kernel_description(&self) -> KernelDescription {
        KernelDescription {
            terms: self
                .terms()
                .iter()
                .map(|(b, p)| KernelTerm {
                    coefficient: p.clone(),
                    beta: b.clone(),
                    sign: if b.length() % 2 == 0 { 1 } else { -1 },
                })
                .collect(),
            weights: self.weights().to_vec(),
        }
    }
}

impl fmt::Display for DiffOpSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pi_notation(&self.0.to_string()))
    }
}

/// Rewrites every generator "Xk" as "π(Xk)".
fn pi_notation(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 8);
    let mut open = false;
    for c in s.chars() {
        if open && !c.is_ascii_digit() {
            out.push(')');
            open = false;
        }
        if c == 'X' {
            out.push_str("π(");
            open = true;
        }
        out.push(c);
    }
    if open {
        out.push(')');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelTerm {
    pub coefficient: Polynomial,
    pub beta: MultiIndex,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelDescription {
    pub terms: Vec<KernelTerm>,
    weights: Vec<u32>,
}

impl KernelDescription {
    pub const QUANTIZATION: &'static str = "Tf(x) = (f * kappa_x)(x) = \u{222b} f(y) kappa_x(y^-1 x) dy";

    /// One line per term, "p_β(x)·(−1)^{|β|}X^βδ₀".
    pub fn lines(&self) -> Vec<String> {
        let names = crate::polynomial::default_names("x", self.weights.len());
        self.terms
            .iter()
            .map(|t| {
                let p = t.coefficient.display_with(&names, &self.weights);
                let len = t.beta.length();
                if len == 0 {
                    if p == "1" {
                        String::from("δ₀")
                    } else {
                        format!("({p})·δ₀")
                    }
                } else {
                    let mono = InvariantOperator::monomial(&self.weights, t.beta.clone(), Rational::one());
                    format!("({p})·(-1)^{len}·{mono}δ₀")
                }
            })
            .collect()
    }
}

impl fmt::Display for KernelDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines = self.lines();
        if lines.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", lines.join(" + "))
    }
}

/// S^m_{ρ,δ}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymbolClassTag {
    pub order: f64,
    pub rho: f64,
    pub delta: f64,
}

impl SymbolClassTag {
    pub fn new(order: f64, rho: f64, delta: f64) -> Result<Self> {
        if !(order.is_finite() && (0.0..=1.0).contains(&delta) && delta <= rho && rho <= 1.0 && delta != 1.0) {
            return Err(Error::Domain(format!("invalid symbol class m={order}, rho={rho}, delta={delta}")));
        }
        Ok(Self { order, rho, delta })
    }

    /// S^{m₁}_{ρ₁,δ₁} ⊆ S^{m₂}_{ρ₂,δ₂} when m₁ ≤ m₂, δ₁ ≤ δ₂, ρ₁ ≥ ρ₂.
    pub fn is_included_in(&self, other: &Self) -> bool {
        self.order <= other.order && self.delta <= other.delta && self.rho >= other.rho
    }
}

/// Index triple (a, b, c) of a symbol seminorm. Only the γ = 0 slice is
/// computed, through L¹ kernel bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeminormRequest {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl SeminormRequest {
    pub const GAMMA: i32 = 0;

    pub fn new(a: u32, b: u32, c: u32) -> Self {
        Self { a, b, c }
    }
}

/// Symbol calculus on one group, backed by a dual-basis table.
#[derive(Clone, Debug)]
pub struct SymbolCalculus<'g> {
    group: &'g GradedGroup,
    basis: DualBasis,
}

impl<'g> SymbolCalculus<'g> {
    /// Precomputes q_α for [α] ≤ `max_degree`.
    pub fn new(group: &'g GradedGroup, max_degree: u32) -> Result<Self> {
        Ok(Self { group, basis: DualBasis::new(group, max_degree)? })
    }

    pub fn group(&self) -> &GradedGroup {
        self.group
    }

    pub fn basis(&self) -> &DualBasis {
        &self.basis
    }

    fn weights(&self) -> &[u32] {
        self.group.weights()
    }

    fn check_degree(&self, d: u32) -> Result<()> {
        if d > self.basis.max_degree() {
            return Err(Error::Domain(format!(
                "degree {d} exceeds the precomputed dual-basis degree {}",
                self.basis.max_degree()
            )));
        }
        Ok(())
    }

    /// Δ^α π(X)^β: the symbol of f ↦ X^β_u[q_α(u) f(xu)] at u = 0, i.e. the
    /// composition X^β ∘ q_α evaluated at the identity.
    pub fn difference_monomial(&self, alpha: &MultiIndex, beta: &MultiIndex) -> Result<InvariantOperator> {
        let w = self.weights();
        let (da, db) = (alpha.homogeneous_degree(w), beta.homogeneous_degree(w));
        if da > db {
            return Ok(InvariantOperator::zero(w));
        }
        self.check_degree(da)?;
        let xb = VarCoeffOperator::term(w, beta.clone(), Polynomial::one(w.len()));
        let q = VarCoeffOperator::multiplication(w, self.basis.q(alpha).clone());
        let zero = alloc::vec![Rational::zero(); w.len()];
        Ok(xb.compose(self.group, &q).at_point(&zero))
    }

    /// Δ^α σ, coefficients passing through unchanged.
    pub fn difference_op(&self, alpha: &MultiIndex, sigma: &DiffOpSymbol) -> Result<DiffOpSymbol> {
        let w = self.weights();
        let mut out = VarCoeffOperator::zero(w);
        for (beta, p) in sigma.terms() {
            let d = self.difference_monomial(alpha, beta)?;
            for (b2, c) in d.terms() {
                out.add_term(b2.clone(), p.scale(c));
            }
        }
        Ok(DiffOpSymbol(out))
    }

    /// X^β_x applied to every coefficient.
    pub fn x_derivative(&self, beta: &MultiIndex, sigma: &DiffOpSymbol) -> DiffOpSymbol {
        let w = self.weights();
        DiffOpSymbol(VarCoeffOperator::from_terms(
            w,
            sigma
                .terms()
                .iter()
                .map(|(b, p)| (b.clone(), self.group.apply_monomial(beta, p))),
        ))
    }

    /// Pointwise product σ₁(x,π)σ₂(x,π).
    pub fn symbol_product(&self, s1: &DiffOpSymbol, s2: &DiffOpSymbol) -> DiffOpSymbol {
        let w = self.weights();
        let alg = self.group.algebra();
        let mut out = VarCoeffOperator::zero(w);
        for (b1, p1) in s1.terms() {
            for (b2, p2) in s2.terms() {
                let pq = p1 * p2;
                let mono = InvariantOperator::monomial(w, b1.clone(), Rational::one())
                    .multiply(alg, &InvariantOperator::monomial(w, b2.clone(), Rational::one()));
                for (b, c) in mono.terms() {
                    out.add_term(b.clone(), pq.scale(c));
                }
            }
        }
        DiffOpSymbol(out)
    }

    /// Symbol of Op(σ₁)∘Op(σ₂), composed directly as operators.
    pub fn op_compose_direct(&self, s1: &DiffOpSymbol, s2: &DiffOpSymbol) -> DiffOpSymbol {
        DiffOpSymbol(s1.0.compose(self.group, &s2.0))
    }

    /// Σ_{[α] ≤ M} Δ^α σ₁ · X^α_x σ₂.
    pub fn compose_expansion(&self, s1: &DiffOpSymbol, s2: &DiffOpSymbol, m: u32) -> Result<DiffOpSymbol> {
        let w = self.weights();
        let mut out = DiffOpSymbol::zero(w);
        // Terms with [α] > order(σ₁) vanish identically.
        let top = m.min(s1.order());
        for alpha in multi_index::up_to_degree(w, top) {
            let d = self.difference_op(&alpha, s1)?;
            if d.is_zero() {
                continue;
            }
            let x = self.x_derivative(&alpha, s2);
            if x.is_zero() {
                continue;
            }
            out = out.add(&self.symbol_product(&d, &x));
        }
        Ok(out)
    }

    /// The individual terms Δ^α σ₁ · X^α_x σ₂ for [α] in `lo..=hi`.
    pub fn compose_terms(
        &self,
        s1: &DiffOpSymbol,
        s2: &DiffOpSymbol,
        lo: u32,
        hi: u32,
    ) -> Result<Vec<(MultiIndex, DiffOpSymbol)>> {
        let w = self.weights();
        let mut out = Vec::new();
        for d in lo..=hi {
            for alpha in multi_index::of_degree(w, d) {
                let term = self.symbol_product(&self.difference_op(&alpha, s1)?, &self.x_derivative(&alpha, s2));
                out.push((alpha, term));
            }
        }
        Ok(out)
    }

    /// σ^⋆: coefficients conjugated, π(X)^β replaced by
    /// (−1)^{|β|}π(X)^{β reversed} in normal order.
    pub fn pointwise_adjoint(&self, sigma: &DiffOpSymbol) -> DiffOpSymbol {
        let w = self.weights();
        let alg = self.group.algebra();
        let mut out = VarCoeffOperator::zero(w);
        for (b, p) in sigma.terms() {
            let mut word = b.word();
            word.reverse();
            let sign = if b.length() % 2 == 0 { int(1) } else { int(-1) };
            for (b2, c) in pbw_normal_order(alg, &word).terms() {
                out.add_term(b2.clone(), p.scale(&(c * &sign)));
            }
        }
        DiffOpSymbol(out)
    }

    /// Σ_{[α] ≤ M} Δ^α X^α_x σ^⋆.
    pub fn adjoint_expansion(&self, sigma: &DiffOpSymbol, m: u32) -> Result<DiffOpSymbol> {
        let w = self.weights();
        let star = self.pointwise_adjoint(sigma);
        let top = m.min(star.order());
        let mut out = DiffOpSymbol::zero(w);
        for alpha in multi_index::up_to_degree(w, top) {
            let x = self.x_derivative(&alpha, &star);
            if x.is_zero() {
                continue;
            }
            out = out.add(&self.difference_op(&alpha, &x)?);
        }
        Ok(out)
    }

    /// Symbol of the formal adjoint of Op(σ).
    pub fn adjoint_direct(&self, sigma: &DiffOpSymbol) -> DiffOpSymbol {
        DiffOpSymbol(sigma.0.formal_adjoint(self.group))
    }

    /// The coefficients c_{α₁,α₂} of the rule
    /// Δ^α(σ₁σ₂) = Σ c_{α₁,α₂} Δ^{α₁}σ₁ Δ^{α₂}σ₂.
    pub fn leibniz_coeff_table(&self, alpha: &MultiIndex) -> Result<BTreeMap<(MultiIndex, MultiIndex), Rational>> {
        self.check_degree(alpha.homogeneous_degree(self.weights()))?;
        self.basis.decomposition_coeffs(self.group.law(), alpha)
    }

    /// Both sides of the Leibniz rule for a pair of symbols; their
    /// difference is returned (zero when the rule holds).
    pub fn leibniz_defect(&self, alpha: &MultiIndex, s1: &DiffOpSymbol, s2: &DiffOpSymbol) -> Result<DiffOpSymbol> {
        let table = self.leibniz_coeff_table(alpha)?;
        let lhs = self.difference_op(alpha, &self.symbol_product(s1, s2))?;
        let mut rhs = DiffOpSymbol::zero(self.weights());
        for ((a1, a2), c) in &table {
            let t = self.symbol_product(&self.difference_op(a1, s1)?, &self.difference_op(a2, s2)?);
            rhs = rhs.add(&t.scale(c));
        }
        Ok(lhs.sub(&rhs))
    }
}
