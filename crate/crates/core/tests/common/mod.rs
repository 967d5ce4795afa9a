#![allow(dead_code)]

use std::collections::BTreeMap;

use nilcalc_core::catalog;
use nilcalc_core::multi_index;
use nilcalc_core::rational::{factorial, rat};
use nilcalc_core::{GradedGroup, GradedLieAlgebra, MultiIndex, Monomial, Polynomial, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

pub fn catalog_groups() -> Vec<GradedGroup> {
    ["abelian:3", "heisenberg:1", "heisenberg:2", "engel"]
        .iter()
        .map(|n| GradedGroup::new(catalog::lookup(n).unwrap().unwrap()).unwrap())
        .collect()
}

pub fn group(name: &str) -> GradedGroup {
    GradedGroup::new(catalog::lookup(name).unwrap().unwrap()).unwrap()
}

pub fn mi(v: &[u32]) -> MultiIndex {
    MultiIndex::new(v.to_vec())
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

pub fn point(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(small_rational(), n)
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

/// Random polynomial in n variables with total degree ≤ `deg` and at most
/// `terms` terms.
pub fn random_poly<R: Rng>(rng: &mut R, n: usize, deg: u16, terms: usize) -> Polynomial {
    let mut p = Polynomial::zero(n);
    for _ in 0..terms {
        let mut e = vec![0u16; n];
        let mut budget = rng.gen_range(0..=deg);
        while budget > 0 {
            let k = rng.gen_range(0..n);
            e[k] += 1;
            budget -= 1;
        }
        p.add_term(Monomial::new(e), random_rational(rng));
    }
    p
}

/// All monomials x^γ with [γ] ≤ d.
pub fn monomials_up_to(weights: &[u32], d: u32) -> Vec<Polynomial> {
    multi_index::up_to_degree(weights, d)
        .into_iter()
        .map(|g| Polynomial::monomial(weights.len(), Monomial::from_u32(g.entries()), Rational::one()))
        .collect()
}

/// Noncommutative polynomials in the letters 0 (X) and 1 (Y), truncated at
/// word length `max`.
#[derive(Clone, Debug, PartialEq)]
pub struct FreePoly {
    pub terms: BTreeMap<Vec<u8>, Rational>,
    pub max: usize,
}

impl FreePoly {
    pub fn scalar(c: Rational, max: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![], c);
        Self { terms, max }
    }

    pub fn letter(l: u8, max: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![l], Rational::one());
        Self { terms, max }
    }

    pub fn add(&self, o: &Self, s: &Rational) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            *out.terms.entry(w.clone()).or_insert_with(Rational::zero) += c * s;
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut terms: BTreeMap<Vec<u8>, Rational> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                if a.len() + b.len() <= self.max {
                    let mut w = a.clone();
                    w.extend_from_slice(b);
                    *terms.entry(w).or_insert_with(Rational::zero) += ca * cb;
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Self { terms, max: self.max }
    }

    pub fn exp(&self) -> Self {
        let mut out = Self::scalar(Rational::one(), self.max);
        let mut power = Self::scalar(Rational::one(), self.max);
        for k in 1..=self.max {
            power = power.mul(self);
            out = out.add(&power, &Rational::from_integer(factorial(k as u32)).recip());
        }
        out
    }

    /// log(1 + Z) for Z without constant term.
    pub fn log1p(&self) -> Self {
        let mut out = Self::scalar(Rational::zero(), self.max);
        let mut power = Self::scalar(Rational::one(), self.max);
        for k in 1..=self.max {
            power = power.mul(self);
            let s = if k % 2 == 1 { rat(1, k as i64) } else { rat(-1, k as i64) };
            out = out.add(&power, &s);
        }
        out
    }
}

/// Independent BCH oracle: log(exp X exp Y) in the truncated free algebra,
/// mapped to the Lie algebra by the Dynkin–Specht–Wever projection
/// w ↦ (1/|w|)[w₁,[w₂,…,w_k]] and evaluated on X = Σ x_i X_i, Y = Σ y_i X_i.
pub fn bch_oracle(alg: &GradedLieAlgebra) -> Vec<Polynomial> {
    let n = alg.dim();
    let s = alg.step();
    let x = FreePoly::letter(0, s);
    let y = FreePoly::letter(1, s);
    let z = x.exp().mul(&y.exp()).add(&FreePoly::scalar(Rational::one(), s), &-Rational::one());
    let log = z.log1p();
    let vars: Vec<Vec<Polynomial>> = (0..2)
        .map(|b| (0..n).map(|i| Polynomial::var(2 * n, b * n + i)).collect())
        .collect();
    let bracket = |a: &[Polynomial], b: &[Polynomial]| -> Vec<Polynomial> {
        let mut out = vec![Polynomial::zero(2 * n); n];
        for i in 0..n {
            for j in 0..n {
                for (k, o) in out.iter_mut().enumerate() {
                    let c = alg.structure_constant(i, j, k);
                    if !c.is_zero() {
                        *o += &(&a[i] * &b[j]).scale(c);
                    }
                }
            }
        }
        out
    };
    let mut out = vec![Polynomial::zero(2 * n); n];
    for (w, c) in &log.terms {
        let mut v = vars[w[w.len() - 1] as usize].clone();
        for &l in w[..w.len() - 1].iter().rev() {
            v = bracket(&vars[l as usize], &v);
        }
        let s = c / Rational::from_integer((w.len() as i64).into());
        for k in 0..n {
            out[k] += &v[k].scale(&s);
        }
    }
    out
}
