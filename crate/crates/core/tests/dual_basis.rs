mod common;

use std::time::Instant;

use common::*;
use nilcalc_core::group_poly::{taylor_polynomial, taylor_remainder};
use nilcalc_core::multi_index;
use nilcalc_core::rational::{int, rat};
use nilcalc_core::{DualBasis, MultiIndex, Polynomial, Rational};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn duality_exact_up_to_six_and_invertible_to_eight() {
    let start = Instant::now();
    for g in catalog_groups() {
        let w = g.weights().to_vec();
        let basis = DualBasis::new(&g, 8).unwrap();
        let zero = vec![Rational::zero(); g.dim()];
        for d in 0..=6 {
            for alpha in basis.slice(d).indices() {
                let q = basis.q(alpha);
                assert!(q.is_homogeneous(&w, d));
                // X^β q_α(0) vanishes automatically when [β] ≠ [α]; check all.
                for beta in multi_index::up_to_degree(&w, 6) {
                    let v = g.apply_monomial(&beta, q).evaluate(&zero);
                    let expect = if &beta == alpha { Rational::one() } else { Rational::zero() };
                    assert_eq!(v, expect, "{} α={alpha} β={beta}", g.name());
                }
            }
        }
    }
    assert!(start.elapsed().as_secs() < 30, "{:?}", start.elapsed());
}

#[test]
fn lemma_identities_up_to_six() {
    for g in catalog_groups() {
        let w = g.weights().to_vec();
        let basis = DualBasis::new(&g, 6).unwrap();
        let zero = MultiIndex::zero(g.dim());
        for alpha in multi_index::up_to_degree(&w, 6) {
            let q = basis.q(&alpha);
            let d = alpha.homogeneous_degree(&w);
            for r in [rat(2, 1), rat(1, 3), rat(-5, 2)] {
                assert_eq!(q.dilate(&r, &w), q.scale(&nilcalc_core::rational::pow(&r, d)));
            }
            let c = basis.decomposition_coeffs(g.law(), &alpha).unwrap();
            assert_eq!(c.get(&(alpha.clone(), zero.clone())), Some(&int(1)));
            assert_eq!(c.get(&(zero.clone(), alpha.clone())), Some(&int(1)));
            for ((a1, a2), v) in &c {
                assert_eq!(a1.homogeneous_degree(&w) + a2.homogeneous_degree(&w), d);
                if (a1.is_zero() && a2 != &alpha) || (a2.is_zero() && a1 != &alpha) {
                    panic!("unexpected boundary coefficient {v} at ({a1},{a2})");
                }
            }
            // Independent rebuild of q_α(xy).
            let n = g.dim();
            let mut rebuilt = Polynomial::zero(2 * n);
            for ((a1, a2), v) in &c {
                rebuilt += &(&basis.q(a1).embed(0, 2 * n) * &basis.q(a2).embed(n, 2 * n)).scale(v);
            }
            assert_eq!(rebuilt, g.law().substitute(q));
        }
        for a1 in multi_index::up_to_degree(&w, 3) {
            for a2 in multi_index::up_to_degree(&w, 3) {
                let e = basis.product_expansion(&a1, &a2).unwrap();
                let mut sum = Polynomial::zero(g.dim());
                for (a, v) in &e {
                    sum += &basis.q(a).scale(v);
                }
                assert_eq!(sum, basis.q(&a1) * basis.q(&a2));
            }
        }
    }
}

#[test]
fn abelian_pascal_coefficients() {
    let g = group("abelian:3");
    let basis = DualBasis::new(&g, 6).unwrap();
    for alpha in multi_index::up_to_degree(g.weights(), 6) {
        let c = basis.decomposition_coeffs(g.law(), &alpha).unwrap();
        let support: usize = alpha.entries().iter().map(|&a| a as usize + 1).product();
        assert_eq!(c.len(), support);
        for ((a1, a2), v) in &c {
            assert_eq!(a1.add(a2), alpha);
            assert!(v.is_one());
        }
    }
}

#[test]
fn taylor_remainder_characterization() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in catalog_groups() {
        let n = g.dim();
        let w = g.weights().to_vec();
        let basis = DualBasis::new(&g, 7).unwrap();
        for _ in 0..6 {
            let f = random_poly(&mut rng, n, 3, 5);
            let m = rng.gen_range(0..=4u32);
            let r = taylor_remainder(&g, &basis, &f, m);
            // Random base point x, then X^α_z R(x, z) at z = 0.
            let x: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng)).collect();
            let mut at = x.clone();
            at.extend(vec![Rational::zero(); n]);
            let mut first_layer_seen = false;
            for d in 0..=7u32 {
                for alpha in multi_index::of_degree(&w, d) {
                    let v = g.apply_monomial_block(&alpha, &r, n).evaluate(&at);
                    if d <= m {
                        assert!(v.is_zero(), "{} α={alpha} M={m}", g.name());
                    } else {
                        let xf = g.apply_monomial(&alpha, &f).evaluate(&x);
                        assert_eq!(v, xf);
                        first_layer_seen |= !xf.is_zero();
                    }
                }
                if first_layer_seen {
                    break;
                }
            }
            let max = f.weighted_degree(&w).unwrap_or(0);
            assert!(taylor_remainder(&g, &basis, &f, max).is_zero());
            let p = taylor_polynomial(&g, &basis, &f, max);
            assert_eq!(p, g.law().substitute(&f));
        }
    }
}

#[test]
fn fields_realize_brackets_and_commute() {
    for g in catalog_groups() {
        let n = g.dim();
        let a = g.algebra();
        for f in monomials_up_to(g.weights(), 5) {
            for i in 0..n {
                for j in 0..n {
                    let xi = g.left_field(i);
                    let xj = g.left_field(j);
                    let comm = &xi.apply(&xj.apply(&f)) - &xj.apply(&xi.apply(&f));
                    let mut expect = Polynomial::zero(n);
                    for k in 0..n {
                        let c = a.structure_constant(i, j, k);
                        if !c.is_zero() {
                            expect += &g.left_field(k).apply(&f).scale(c);
                        }
                    }
                    assert_eq!(comm, expect);
                    let rj = g.right_field(j);
                    assert_eq!(xi.apply(&rj.apply(&f)), rj.apply(&xi.apply(&f)));
                }
            }
        }
    }
}

#[test]
fn left_fields_are_left_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for g in catalog_groups() {
        let n = g.dim();
        for f in monomials_up_to(g.weights(), 4) {
            let gpt: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng)).collect();
            // (f ∘ L_g)(x) = f(gx).
            let images: Vec<Polynomial> = g
                .law()
                .coordinates()
                .iter()
                .map(|c| {
                    let mut args: Vec<Polynomial> = gpt.iter().map(|v| Polynomial::constant(n, v.clone())).collect();
                    args.extend((0..n).map(|i| Polynomial::var(n, i)));
                    c.substitute(&args)
                })
                .collect();
            for j in 0..n {
                let lhs = g.left_field(j).apply(&f.substitute(&images));
                let rhs = g.left_field(j).apply(&f).substitute(&images);
                assert_eq!(lhs, rhs);
            }
        }
    }
}
