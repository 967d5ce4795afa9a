//! Left-invariant differential operators: the enveloping algebra in the
//! ordered basis X^β, operators Σ p_β(x) X^β with polynomial coefficients,
//! formal adjoints and the standard Rockland operators.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::GradedGroup;
use crate::lie::GradedLieAlgebra;
use crate::multi_index::MultiIndex;
use crate::polynomial::Polynomial;
use crate::rational::{fmt_rational, int, Rational};

/// Adds X_j · X^b (normal ordered) into `out`, scaled by `scale`.
fn left_mul_into(
    alg: &GradedLieAlgebra,
    j: usize,
    b: &MultiIndex,
    scale: &Rational,
    out: &mut BTreeMap<MultiIndex, Rational>,
) {
    match b.first_nonzero() {
        Some(i) if j > i => {
            let rest = b.with_decremented(i).unwrap();
            // X_j X_i X^rest = X_i (X_j X^rest) + [X_j, X_i] X^rest
            let mut inner = BTreeMap::new();
            left_mul_into(alg, j, &rest, &Rational::one(), &mut inner);
            for (m, c) in &inner {
                if !c.is_zero() {
                    left_mul_into(alg, i, m, &(scale * c), out);
                }
            }
            for (k, c) in alg.bracket_basis(j, i).iter().enumerate() {
                if !c.is_zero() {
                    left_mul_into(alg, k, &rest, &(scale * c), out);
                }
            }
        }
        _ => {
            *out.entry(b.with_incremented(j)).or_insert_with(Rational::zero) += scale;
        }
    }
}

/// X_j · X^b in the ordered basis.
pub fn left_multiply(alg: &GradedLieAlgebra, j: usize, b: &MultiIndex) -> BTreeMap<MultiIndex, Rational> {
    let mut out = BTreeMap::new();
    left_mul_into(alg, j, b, &Rational::one(), &mut out);
    out.retain(|_, c| !c.is_zero());
    out
}

/// Rewrites X_{w₁}···X_{w_k} in the ordered basis.
pub fn pbw_normal_order(alg: &GradedLieAlgebra, word: &[usize]) -> InvariantOperator {
    let mut acc = InvariantOperator::identity(alg.weights());
    for &j in word.iter().rev() {
        acc = acc.left_mul_generator(alg, j);
    }
    acc
}

fn mono_name(beta: &MultiIndex) -> String {
    let mut parts = Vec::new();
    for (j, &e) in beta.entries().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("X{}", j + 1)),
            _ => parts.push(format!("X{}^{}", j + 1, e)),
        }
    }
    parts.join("*")
}

/// Order used for printing: higher homogeneous degree first, then
/// lexicographically descending.
fn display_order<'a, C>(terms: &'a BTreeMap<MultiIndex, C>, weights: &[u32]) -> Vec<(&'a MultiIndex, &'a C)> {
    let mut v: Vec<_> = terms.iter().collect();
    v.sort_by(|a, b| {
        b.0.homogeneous_degree(weights)
            .cmp(&a.0.homogeneous_degree(weights))
            .then_with(|| b.0.cmp(a.0))
    });
    v
}

/// Homogeneity of an operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorDegree {
    Zero,
    Homogeneous(u32),
    /// Terms of several degrees; `max` is the largest.
    Inhomogeneous { max: u32 },
}

fn degree_of(degrees: impl Iterator<Item = u32>) -> OperatorDegree {
    let mut lo = None;
    let mut hi = None;
    for d in degrees {
        lo = Some(lo.map_or(d, |l: u32| l.min(d)));
        hi = Some(hi.map_or(d, |h: u32| h.max(d)));
    }
    match (lo, hi) {
        (None, _) | (_, None) => OperatorDegree::Zero,
        (Some(l), Some(h)) if l == h => OperatorDegree::Homogeneous(h),
        (_, Some(h)) => OperatorDegree::Inhomogeneous { max: h },
    }
}

/// Σ c_β X^β with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantOperator {
    weights: Vec<u32>,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl InvariantOperator {
    pub fn zero(weights: &[u32]) -> Self {
        Self { weights: weights.to_vec(), terms: BTreeMap::new() }
    }

    pub fn identity(weights: &[u32]) -> Self {
        Self::monomial(weights, MultiIndex::zero(weights.len()), Rational::one())
    }

    pub fn generator(weights: &[u32], j: usize) -> Self {
        Self::monomial(weights, MultiIndex::unit(weights.len(), j), Rational::one())
    }

    pub fn monomial(weights: &[u32], beta: MultiIndex, c: Rational) -> Self {
        let mut out = Self::zero(weights);
        out.add_term(beta, c);
        out
    }

    pub fn from_terms(weights: &[u32], terms: impl IntoIterator<Item = (MultiIndex, Rational)>) -> Self {
        let mut out = Self::zero(weights);
        for (b, c) in terms {
            out.add_term(b, c);
        }
        out
    }

    pub fn add_term(&mut self, beta: MultiIndex, c: Rational) {
        assert_eq!(beta.dim(), self.weights.len());
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(beta).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, beta: &MultiIndex) -> Rational {
        self.terms.get(beta).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(&self.weights, self.terms.iter().map(|(b, v)| (b.clone(), v * c)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    /// X_j ∘ self.
    pub fn left_mul_generator(&self, alg: &GradedLieAlgebra, j: usize) -> Self {
        let mut out = BTreeMap::new();
        for (b, c) in &self.terms {
            left_mul_into(alg, j, b, c, &mut out);
        }
        Self::from_terms(&self.weights, out)
    }

    /// self ∘ other, normal ordered.
    pub fn multiply(&self, alg: &GradedLieAlgebra, other: &Self) -> Self {
        let mut out = Self::zero(&self.weights);
        for (a, ca) in &self.terms {
            let mut acc = other.clone();
            for &j in a.word().iter().rev() {
                acc = acc.left_mul_generator(alg, j);
            }
            out = out.add(&acc.scale(ca));
        }
        out
    }

    pub fn homogeneous_degree(&self) -> OperatorDegree {
        degree_of(self.terms.keys().map(|b| b.homogeneous_degree(&self.weights)))
    }

    pub fn to_var_coeff(&self) -> VarCoeffOperator {
        let n = self.dim();
        VarCoeffOperator::from_terms(
            &self.weights,
            self.terms.iter().map(|(b, c)| (b.clone(), Polynomial::constant(n, c.clone()))),
        )
    }

    pub fn apply(&self, group: &GradedGroup, f: &Polynomial) -> Polynomial {
        self.to_var_coeff().apply(group, f)
    }
}

impl fmt::Display for InvariantOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (b, c)) in display_order(&self.terms, &self.weights).into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let name = mono_name(b);
            if name.is_empty() {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{}*{name}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

/// Σ p_β(x) X^β with polynomial coefficients written to the left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarCoeffOperator {
    weights: Vec<u32>,
    terms: BTreeMap<MultiIndex, Polynomial>,
}

impl VarCoeffOperator {
    pub fn zero(weights: &[u32]) -> Self {
        Self { weights: weights.to_vec(), terms: BTreeMap::new() }
    }

    pub fn identity(weights: &[u32]) -> Self {
        Self::multiplication(weights, Polynomial::one(weights.len()))
    }

    /// The multiplication operator f ↦ p·f.
    pub fn multiplication(weights: &[u32], p: Polynomial) -> Self {
        Self::term(weights, MultiIndex::zero(weights.len()), p)
    }

    pub fn generator(weights: &[u32], j: usize) -> Self {
        Self::term(weights, MultiIndex::unit(weights.len(), j), Polynomial::one(weights.len()))
    }

    pub fn term(weights: &[u32], beta: MultiIndex, p: Polynomial) -> Self {
        let mut out = Self::zero(weights);
        out.add_term(beta, p);
        out
    }

    pub fn from_terms(weights: &[u32], terms: impl IntoIterator<Item = (MultiIndex, Polynomial)>) -> Self {
        let mut out = Self::zero(weights);
        for (b, p) in terms {
            out.add_term(b, p);
        }
        out
    }

    pub fn add_term(&mut self, beta: MultiIndex, p: Polynomial) {
        assert_eq!(beta.dim(), self.weights.len());
        assert_eq!(p.nvars(), self.weights.len());
        if p.is_zero() {
            return;
        }
        let e = self
            .terms
            .entry(beta.clone())
            .or_insert_with(|| Polynomial::zero(p.nvars()));
        *e += &p;
        if e.is_zero() {
            self.terms.remove(&beta);
        }
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Polynomial> {
        &self.terms
    }

    pub fn coeff(&self, beta: &MultiIndex) -> Polynomial {
        self.terms.get(beta).cloned().unwrap_or_else(|| Polynomial::zero(self.dim()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, p) in &other.terms {
            out.add_term(b.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, p) in &other.terms {
            out.add_term(b.clone(), -p);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(&self.weights, self.terms.iter().map(|(b, p)| (b.clone(), p.scale(c))))
    }

    /// p ∘ self, i.e. every coefficient multiplied by p.
    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        Self::from_terms(&self.weights, self.terms.iter().map(|(b, c)| (b.clone(), p * c)))
    }

    /// Evaluates every coefficient at x, leaving a constant-coefficient operator.
    pub fn at_point(&self, x: &[Rational]) -> InvariantOperator {
        InvariantOperator::from_terms(&self.weights, self.terms.iter().map(|(b, p)| (b.clone(), p.evaluate(x))))
    }

    /// X_j ∘ self: X_j(p f) = (X_j p) f + p X_j f.
    pub fn left_mul_generator(&self, group: &GradedGroup, j: usize) -> Self {
        let alg = group.algebra();
        let mut out = Self::zero(&self.weights);
        for (d, p) in &self.terms {
            let dp = group.left_field(j).apply(p);
            out.add_term(d.clone(), dp);
            for (m, c) in left_multiply(alg, j, d) {
                out.add_term(m, p.scale(&c));
            }
        }
        out
    }

    /// self ∘ other in canonical form.
    pub fn compose(&self, group: &GradedGroup, other: &Self) -> Self {
        let mut out = Self::zero(&self.weights);
        for (b, p) in &self.terms {
            let mut acc = other.clone();
            for &j in b.word().iter().rev() {
                acc = acc.left_mul_generator(group, j);
            }
            out = out.add(&acc.mul_poly(p));
        }
        out
    }

    pub fn apply(&self, group: &GradedGroup, f: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(f.nvars());
        for (b, p) in &self.terms {
            let g = group.apply_monomial(b, f);
            if !g.is_zero() {
                out += &(p * &g);
            }
        }
        out
    }

    /// Adjoint for ∫ f₁ f̄₂ dx: (p X^β)* = (−1)^{|β|} X^{β reversed} ∘ p.
    /// Coefficients are real, so conjugation is the identity.
    pub fn formal_adjoint(&self, group: &GradedGroup) -> Self {
        let alg = group.algebra();
        let mut out = Self::zero(&self.weights);
        for (b, p) in &self.terms {
            let mut word = b.word();
            word.reverse();
            let sign = if b.length() % 2 == 0 { int(1) } else { int(-1) };
            let op = pbw_normal_order(alg, &word).scale(&sign).to_var_coeff();
            let mult = Self::multiplication(&self.weights, p.clone());
            out = out.add(&op.compose(group, &mult));
        }
        out
    }

    /// max [β] over nonzero terms, flagging mixed degrees.
    pub fn homogeneous_degree(&self) -> OperatorDegree {
        degree_of(self.terms.keys().map(|b| b.homogeneous_degree(&self.weights)))
    }

    /// Constant-coefficient part if every coefficient is constant.
    pub fn as_invariant(&self) -> Option<InvariantOperator> {
        let mut out = InvariantOperator::zero(&self.weights);
        for (b, p) in &self.terms {
            if p.total_degree() != Some(0) {
                return None;
            }
            out.add_term(b.clone(), p.constant_term());
        }
        Some(out)
    }

    /// Coordinate form Σ_γ c_γ(x) ∂^γ of the operator, built by composing
    /// the vector fields X_j = Σ_k a_{jk}(x) ∂_k.
    pub fn coordinate_form(&self, group: &GradedGroup) -> BTreeMap<MultiIndex, Polynomial> {
        let n = self.dim();
        let mut out: BTreeMap<MultiIndex, Polynomial> = BTreeMap::new();
        for (b, p) in &self.terms {
            let mut acc: BTreeMap<MultiIndex, Polynomial> = BTreeMap::new();
            acc.insert(MultiIndex::zero(n), Polynomial::one(n));
            for &j in b.word().iter().rev() {
                let field = group.left_field(j);
                let mut next: BTreeMap<MultiIndex, Polynomial> = BTreeMap::new();
                for (g, c) in &acc {
                    for (k, a) in field.coefficients().iter().enumerate() {
                        if a.is_zero() {
                            continue;
                        }
                        let dc = c.derivative(k);
                        if !dc.is_zero() {
                            *next.entry(g.clone()).or_insert_with(|| Polynomial::zero(n)) += &(a * &dc);
                        }
                        *next
                            .entry(g.with_incremented(k))
                            .or_insert_with(|| Polynomial::zero(n)) += &(a * c);
                    }
                }
                next.retain(|_, c| !c.is_zero());
                acc = next;
            }
            for (g, c) in acc {
                *out.entry(g).or_insert_with(|| Polynomial::zero(n)) += &(p * &c);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

impl fmt::Display for VarCoeffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = crate::polynomial::default_names("x", self.dim());
        for (idx, (b, p)) in display_order(&self.terms, &self.weights).into_iter().enumerate() {
            let mut coeff = p.display_with(&names, &self.weights);
            if idx > 0 {
                match coeff.strip_prefix('-') {
                    Some(rest) if p.len() == 1 => {
                        write!(f, " - ")?;
                        coeff = String::from(rest);
                    }
                    _ => write!(f, " + ")?,
                }
            }
            let name = mono_name(b);
            match (name.is_empty(), p.len() == 1) {
                (true, true) => write!(f, "{coeff}")?,
                (true, false) => write!(f, "({coeff})")?,
                (false, _) if coeff == "1" => write!(f, "{name}")?,
                (false, true) => write!(f, "{coeff}*{name}")?,
                (false, false) => write!(f, "({coeff})*{name}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RocklandVariant {
    /// −Σ X_j² over the first layer of a stratified algebra.
    SubLaplacian,
    /// Σ (−1)^{ν_o/υ_j} c_j X_j^{2ν_o/υ_j}.
    Variant1,
    /// Σ c_j X_j^{4ν_o/υ_j}.
    Variant2,
}

impl RocklandVariant {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "1" | "variant1" | "variant-1" => Some(Self::Variant1),
            "2" | "variant2" | "variant-2" => Some(Self::Variant2),
            "sub" | "sublaplacian" | "sub-laplacian" => Some(Self::SubLaplacian),
            _ => None,
        }
    }
}

impl fmt::Display for RocklandVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::SubLaplacian => "sub-laplacian",
            Self::Variant1 => "variant-1",
            Self::Variant2 => "variant-2",
        })
    }
}

/// A positive Rockland operator with its homogeneous degree ν.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RocklandSpec {
    pub operator: InvariantOperator,
    pub degree: u32,
    pub variant: RocklandVariant,
    pub coeffs: Vec<Rational>,
}

/// Builds the standard Rockland operator of the given variant. `coeffs`
/// holds one positive c_j per basis vector (or is empty for all ones).
pub fn rockland_example(
    alg: &GradedLieAlgebra,
    nu_o: u32,
    coeffs: &[Rational],
    variant: RocklandVariant,
) -> Result<RocklandSpec> {
    let n = alg.dim();
    let weights = alg.weights();
    let coeffs: Vec<Rational> = if coeffs.is_empty() {
        alloc::vec![Rational::one(); n]
    } else {
        coeffs.to_vec()
    };
    if coeffs.len() != n {
        return Err(Error::Domain(format!("expected {n} coefficients, got {}", coeffs.len())));
    }
    if coeffs.iter().any(|c| !c.is_positive()) {
        return Err(Error::Domain("Rockland coefficients must be positive".into()));
    }
    if variant == RocklandVariant::SubLaplacian {
        return sub_laplacian(alg);
    }
    if nu_o == 0 {
        return Err(Error::Domain("nu_o must be positive".into()));
    }
    if let Some(w) = weights.iter().find(|&&w| nu_o % w != 0) {
        return Err(Error::Domain(format!("nu_o = {nu_o} is not a multiple of weight {w}")));
    }
    let mut op = InvariantOperator::zero(weights);
    for (j, c) in coeffs.iter().enumerate() {
        let ratio = nu_o / weights[j];
        let (power, sign) = match variant {
            RocklandVariant::Variant1 => (2 * ratio, if ratio % 2 == 0 { 1 } else { -1 }),
            _ => (4 * ratio, 1),
        };
        let mut e = alloc::vec![0u32; n];
        e[j] = power;
        op.add_term(MultiIndex::new(e), c * int(sign));
    }
    let degree = match variant {
        RocklandVariant::Variant1 => 2 * nu_o,
        _ => 4 * nu_o,
    };
    Ok(RocklandSpec { operator: op, degree, variant, coeffs })
}

/// −Σ_{υ_j = 1} X_j², degree 2.
pub fn sub_laplacian(alg: &GradedLieAlgebra) -> Result<RocklandSpec> {
    if !alg.is_stratified() {
        return Err(Error::Domain(format!("{} is not stratified; no sub-Laplacian", alg.name())));
    }
    let n = alg.dim();
    let weights = alg.weights();
    let mut op = InvariantOperator::zero(weights);
    let mut coeffs = Vec::new();
    for j in 0..n {
        if weights[j] == 1 {
            let mut e = alloc::vec![0u32; n];
            e[j] = 2;
            op.add_term(MultiIndex::new(e), -Rational::one());
            coeffs.push(Rational::one());
        }
    }
    Ok(RocklandSpec { operator: op, degree: 2, variant: RocklandVariant::SubLaplacian, coeffs })
}
