mod common;

use std::time::Instant;

use common::*;
use nilcalc_core::diffops::{pbw_normal_order, rockland_example, sub_laplacian, OperatorDegree};
use nilcalc_core::multi_index;
use nilcalc_core::rational::rat;
use nilcalc_core::symbols::SymbolCalculus;
use nilcalc_core::{
    DiffOpSymbol, GradedGroup, InvariantOperator, Polynomial, Rational, RocklandVariant, VarCoeffOperator,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_symbol<R: Rng>(rng: &mut R, g: &GradedGroup, max_order: u32, coeff_deg: u16) -> DiffOpSymbol {
    let w = g.weights();
    let betas = multi_index::up_to_degree(w, max_order);
    let mut s = DiffOpSymbol::zero(w);
    for _ in 0..rng.gen_range(1..=3) {
        let b = betas.choose(rng).unwrap().clone();
        let p = random_poly(rng, g.dim(), coeff_deg, 3);
        s = s.add(&DiffOpSymbol::term(w, b, p));
    }
    s
}

fn random_constant_symbol<R: Rng>(rng: &mut R, g: &GradedGroup, max_order: u32) -> DiffOpSymbol {
    let w = g.weights();
    let betas = multi_index::up_to_degree(w, max_order);
    let mut s = DiffOpSymbol::zero(w);
    for _ in 0..rng.gen_range(1..=3) {
        let b = betas.choose(rng).unwrap().clone();
        s = s.add(&DiffOpSymbol::term(w, b, Polynomial::constant(g.dim(), random_rational(rng))));
    }
    s
}

#[test]
fn pbw_and_composition_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for g in catalog_groups() {
        let n = g.dim();
        let tests = monomials_up_to(&vec![1; n], 4);
        for _ in 0..12 {
            let len = rng.gen_range(0..=5);
            let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
            let op = pbw_normal_order(g.algebra(), &word);
            let a = random_symbol(&mut rng, &g, 3, 2).into_operator();
            let b = random_symbol(&mut rng, &g, 3, 2).into_operator();
            let ab = a.compose(&g, &b);
            for f in tests.iter().filter(|_| rng.gen_bool(0.3)) {
                assert_eq!(op.apply(&g, f), g.apply_word(&word, f));
                assert_eq!(ab.apply(&g, f), a.apply(&g, &b.apply(&g, f)));
            }
        }
    }
}

#[test]
fn adjoint_is_involutive_antihomomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for g in catalog_groups() {
        for _ in 0..8 {
            let a = random_symbol(&mut rng, &g, 3, 2).into_operator();
            let b = random_symbol(&mut rng, &g, 3, 2).into_operator();
            assert_eq!(a.formal_adjoint(&g).formal_adjoint(&g), a);
            assert_eq!(
                a.compose(&g, &b).formal_adjoint(&g),
                b.formal_adjoint(&g).compose(&g, &a.formal_adjoint(&g))
            );
        }
    }
}

#[test]
fn rockland_candidates_homogeneous_and_self_adjoint() {
    for g in catalog_groups() {
        let a = g.algebra();
        let nu = a.nu_o();
        for variant in [RocklandVariant::Variant1, RocklandVariant::Variant2] {
            let r = rockland_example(a, nu, &[], variant).unwrap();
            assert_eq!(r.operator.homogeneous_degree(), OperatorDegree::Homogeneous(r.degree));
            let op = r.operator.to_var_coeff();
            if variant == RocklandVariant::Variant1 {
                assert_eq!(op.formal_adjoint(&g), op);
            }
        }
        let sub = sub_laplacian(a).unwrap().operator.to_var_coeff();
        assert_eq!(sub.formal_adjoint(&g), sub);
    }
}

#[test]
fn homogeneous_operators_commute_with_dilations() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for g in catalog_groups() {
        let w = g.weights().to_vec();
        let n = g.dim();
        for d in 1..=4u32 {
            let betas = multi_index::of_degree(&w, d);
            let op = InvariantOperator::from_terms(
                &w,
                betas.iter().take(4).map(|b| (b.clone(), random_rational(&mut rng))),
            );
            let r = rat(3, 2);
            let dil: Vec<Polynomial> = (0..n)
                .map(|i| Polynomial::var(n, i).scale(&nilcalc_core::rational::pow(&r, w[i])))
                .collect();
            for f in monomials_up_to(&w, 5) {
                let lhs = op.apply(&g, &f.substitute(&dil));
                let rhs = op.apply(&g, &f).substitute(&dil).scale(&nilcalc_core::rational::pow(&r, d));
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn composition_and_adjoint_expansions_are_exact() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for g in catalog_groups() {
        let calc = SymbolCalculus::new(&g, 4).unwrap();
        let w = g.weights().to_vec();
        for _ in 0..50 {
            let s1 = random_symbol(&mut rng, &g, 4, 3);
            let s2 = random_symbol(&mut rng, &g, 4, 3);
            let m = s1.order();
            let direct = calc.op_compose_direct(&s1, &s2);
            assert_eq!(calc.compose_expansion(&s1, &s2, m).unwrap(), direct, "{}", g.name());
            for (alpha, term) in calc.compose_terms(&s1, &s2, m + 1, m + 2).unwrap() {
                assert!(term.is_zero(), "α={alpha}");
            }
            for d in m + 1..=4 {
                for alpha in multi_index::of_degree(&w, d) {
                    assert!(calc.difference_op(&alpha, &s1).unwrap().is_zero());
                }
            }
            let adj = calc.adjoint_expansion(&s1, s1.order()).unwrap();
            assert_eq!(adj, calc.adjoint_direct(&s1));
            assert_eq!(calc.adjoint_expansion(&adj, adj.order()).unwrap(), s1);
        }
    }
    assert!(start.elapsed().as_secs() < 60, "{:?}", start.elapsed());
}

#[test]
fn leibniz_rule_exact_to_degree_six() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for g in catalog_groups() {
        let calc = SymbolCalculus::new(&g, 6).unwrap();
        let w = g.weights().to_vec();
        let mut nontrivial = 0;
        for alpha in multi_index::up_to_degree(&w, 6) {
            let d = alpha.homogeneous_degree(&w);
            // Orders chosen so that Δ^α of the product can be nonzero.
            let o1 = rng.gen_range(0..=d.min(4));
            let s1 = random_constant_symbol(&mut rng, &g, o1.max(1));
            let s2 = random_constant_symbol(&mut rng, &g, (d + 1 - o1.min(d)).min(4));
            let defect = calc.leibniz_defect(&alpha, &s1, &s2).unwrap();
            assert!(defect.is_zero(), "{} α={alpha}", g.name());
            if !calc.difference_op(&alpha, &calc.symbol_product(&s1, &s2)).unwrap().is_zero() {
                nontrivial += 1;
            }
        }
        assert!(nontrivial >= 5, "{}: only {nontrivial} nonzero cases", g.name());
    }
}

#[test]
fn difference_operators_compose_within_span() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for g in catalog_groups() {
        let calc = SymbolCalculus::new(&g, 6).unwrap();
        let w = g.weights().to_vec();
        let alphas = multi_index::up_to_degree(&w, 3);
        for _ in 0..10 {
            let s = random_symbol(&mut rng, &g, 6, 1);
            let a1 = alphas.choose(&mut rng).unwrap();
            let a2 = alphas.choose(&mut rng).unwrap();
            let lhs = calc.difference_op(a1, &calc.difference_op(a2, &s).unwrap()).unwrap();
            let mut rhs = DiffOpSymbol::zero(&w);
            for (a, c) in calc.basis().product_expansion(a1, a2).unwrap() {
                rhs = rhs.add(&calc.difference_op(&a, &s).unwrap().scale(&c));
            }
            assert_eq!(lhs, rhs);
            // Order drops by at least [α].
            let o = s.order();
            let d = calc.difference_op(a1, &s).unwrap();
            if !d.is_zero() {
                assert!(d.order() + a1.homogeneous_degree(&w) <= o);
            }
            assert_eq!(calc.x_derivative(a1, &s).order() <= o, true);
        }
    }
}

/// Kohn–Nirenberg on ℝⁿ: σ₁ ∘ σ₂ = Σ_α (1/α!) ∂_ξ^α σ₁ · D_x^α σ₂ with
/// π(X)^β ↔ (iξ)^β, i.e. ∂_ξ^α (iξ)^β / i^{|α|} = β!/(β−α)! (iξ)^{β−α}.
#[test]
fn abelian_reduces_to_classical_calculus() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in 1..=3usize {
        let g = group(&format!("abelian:{n}"));
        let calc = SymbolCalculus::new(&g, 6).unwrap();
        let w = g.weights().to_vec();
        for alpha in multi_index::up_to_degree(&w, 6) {
            let expected = Polynomial::monomial(
                n,
                nilcalc_core::Monomial::from_u32(alpha.entries()),
                Rational::from_integer(alpha.factorial()).recip(),
            );
            assert_eq!(calc.basis().q(&alpha), &expected);
        }
        for _ in 0..20 {
            let s1 = random_symbol(&mut rng, &g, 4, 3);
            let s2 = random_symbol(&mut rng, &g, 4, 3);
            let mut classical = DiffOpSymbol::zero(&w);
            for (b1, p1) in s1.terms() {
                for (b2, p2) in s2.terms() {
                    for alpha in multi_index::up_to_degree(&w, b1.homogeneous_degree(&w)) {
                        let Some(rest) = b1.checked_sub(&alpha) else { continue };
                        let mut dq = p2.clone();
                        for (k, &e) in alpha.entries().iter().enumerate() {
                            for _ in 0..e {
                                dq = dq.derivative(k);
                            }
                        }
                        let coeff = Rational::from_integer(b1.factorial())
                            / Rational::from_integer(rest.factorial())
                            / Rational::from_integer(alpha.factorial());
                        let mono = rest.add(b2);
                        classical = classical.add(&DiffOpSymbol::term(&w, mono, (p1 * &dq).scale(&coeff)));
                    }
                }
            }
            assert_eq!(calc.compose_expansion(&s1, &s2, s1.order()).unwrap(), classical);
            assert_eq!(calc.op_compose_direct(&s1, &s2), classical);
        }
    }
}

#[test]
fn op_roundtrip_and_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let g = group("heisenberg:1");
    let calc = SymbolCalculus::new(&g, 4).unwrap();
    let w = g.weights().to_vec();
    for _ in 0..10 {
        let s = random_symbol(&mut rng, &g, 4, 3);
        let op: VarCoeffOperator = s.op().clone();
        assert_eq!(DiffOpSymbol::from_operator(op), s);
        assert_eq!(calc.op_compose_direct(&DiffOpSymbol::identity(&w), &s), s);
        let c = DiffOpSymbol::monomial(&w, mi(&[1, 0, 1]));
        assert_eq!(calc.compose_expansion(&s, &c, 0).unwrap(), calc.symbol_product(&s, &c));
        for a in multi_index::up_to_degree(&w, 2).into_iter().filter(|a| !a.is_zero()) {
            assert!(calc.difference_op(&a, &DiffOpSymbol::identity(&w)).unwrap().is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pbw_random_words_engel(word in proptest::collection::vec(0usize..4, 0..7)) {
        let g = group("engel");
        let op = pbw_normal_order(g.algebra(), &word);
        for f in monomials_up_to(g.weights(), 6).iter().step_by(3) {
            prop_assert_eq!(op.apply(&g, f), g.apply_word(&word, f));
        }
    }
}
