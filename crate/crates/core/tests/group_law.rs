mod common;

use common::*;
use nilcalc_core::rational::{int, rat};
use nilcalc_core::{GradedLieAlgebra, Polynomial, Rational};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn bch_matches_free_algebra_oracle() {
    for g in catalog_groups() {
        assert_eq!(g.law().coordinates(), &bch_oracle(g.algebra())[..], "{}", g.name());
    }
}

#[test]
fn engel_fourth_coordinate() {
    let g = group("engel");
    let v = |i| Polynomial::var(8, i);
    let (x1, x2, x3, x4) = (v(0), v(1), v(2), v(3));
    let (y1, y2, y3, y4) = (v(4), v(5), v(6), v(7));
    let half = (&(&x1 * &y3) - &(&x3 * &y1)).scale(&rat(1, 2));
    let twelfth = (&(&x1 - &y1) * &(&(&x1 * &y2) - &(&x2 * &y1))).scale(&rat(1, 12));
    let expected = &(&(&x4 + &y4) + &half) + &twelfth;
    assert_eq!(g.law().coordinate(3), &expected);
    assert_eq!(expected.total_degree(), Some(3));
}

#[test]
fn group_axioms_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for g in catalog_groups() {
        let n = g.dim();
        let zero = vec![Rational::zero(); n];
        for _ in 0..100 {
            let p: Vec<Vec<Rational>> = (0..3).map(|_| (0..n).map(|_| random_rational(&mut rng)).collect()).collect();
            let (x, y, z) = (&p[0], &p[1], &p[2]);
            let lhs = g.bch_product(&g.bch_product(x, y), z);
            let rhs = g.bch_product(x, &g.bch_product(y, z));
            assert_eq!(lhs, rhs);
            assert_eq!(&g.bch_product(x, &zero), x);
            assert_eq!(&g.bch_product(&zero, x), x);
            let inv = GradedLieAlgebra::group_inverse(x);
            assert_eq!(g.bch_product(x, &inv), zero);
            assert_eq!(g.bch_product(&inv, x), zero);
            let r = random_rational(&mut rng).abs() + rat(1, 3);
            let a = g.algebra();
            assert_eq!(
                a.dilate(&r, &g.bch_product(x, y)).unwrap(),
                g.bch_product(&a.dilate(&r, x).unwrap(), &a.dilate(&r, y).unwrap())
            );
        }
    }
}

#[test]
fn law_table_associative_as_polynomials() {
    for g in catalog_groups() {
        let n = g.dim();
        let law = g.law();
        // Variables (x, y, z) in 3n slots.
        let xy: Vec<Polynomial> = law.coordinates().iter().map(|c| c.embed(0, 3 * n)).collect();
        let yz: Vec<Polynomial> = law.coordinates().iter().map(|c| c.embed(n, 3 * n)).collect();
        let zs: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(3 * n, 2 * n + i)).collect();
        let xs: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(3 * n, i)).collect();
        let left_args: Vec<Polynomial> = xy.iter().chain(zs.iter()).cloned().collect();
        let right_args: Vec<Polynomial> = xs.iter().chain(yz.iter()).cloned().collect();
        for c in law.coordinates() {
            assert_eq!(c.substitute(&left_args), c.substitute(&right_args), "{}", g.name());
        }
    }
}

#[test]
fn spec_examples() {
    let h = group("heisenberg:1");
    let a = h.algebra();
    assert_eq!(a.dilate(&int(2), &[int(1), int(1), int(1)]).unwrap(), vec![int(2), int(2), int(4)]);
    assert!(a.dilate(&int(0), &[int(1), int(1), int(1)]).is_err());
    assert!(a.dilate(&int(-1), &[int(1), int(1), int(1)]).is_err());
    assert_eq!(a.homogeneous_degree(&mi(&[0, 0, 1])), 2);
    assert_eq!(a.homogeneous_degree(&mi(&[1, 1, 1])), 4);
    assert_eq!(a.homogeneous_norm(&[1.0, 0.0, 0.0]), 1.0);
    assert_eq!(a.homogeneous_norm(&[0.0, 0.0, 0.0]), 0.0);
    assert_eq!(a.homogeneous_dimension(), 4);
    assert_eq!(group("engel").algebra().homogeneous_dimension(), 7);
    assert_eq!(group("abelian:5").algebra().homogeneous_dimension(), 5);
    let ab = group("abelian:2");
    let x = [int(1), rat(2, 3)];
    let y = [rat(-1, 2), int(5)];
    assert_eq!(ab.bch_product(&x, &y), vec![rat(1, 2), rat(17, 3)]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_homogeneous_and_symmetric(x in proptest::collection::vec(-3.0f64..3.0, 4), r in 0.1f64..5.0) {
        let g = group("engel");
        let a = g.algebra();
        let n0 = a.homogeneous_norm(&x);
        let nr = a.homogeneous_norm(&a.dilate_f64(r, &x).unwrap());
        prop_assert!((nr - r * n0).abs() <= 1e-12 * (r * n0).max(1e-300));
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        prop_assert_eq!(a.homogeneous_norm(&neg), n0);
    }

    #[test]
    fn heisenberg_dilation_is_automorphism(x in point(5), y in point(5), r in small_rational()) {
        prop_assume!(r > Rational::zero());
        let g = group("heisenberg:2");
        let a = g.algebra();
        prop_assert_eq!(
            a.dilate(&r, &g.bch_product(&x, &y)).unwrap(),
            g.bch_product(&a.dilate(&r, &x).unwrap(), &a.dilate(&r, &y).unwrap())
        );
    }

    #[test]
    fn monomials_are_homogeneous(e in proptest::collection::vec(0u32..4, 4), r in small_rational()) {
        prop_assume!(r > Rational::zero());
        let w = [1, 1, 2, 3];
        let alpha = nilcalc_core::MultiIndex::new(e);
        let p = Polynomial::monomial(4, nilcalc_core::Monomial::from_u32(alpha.entries()), int(1));
        let d = alpha.homogeneous_degree(&w);
        prop_assert_eq!(p.dilate(&r, &w), p.scale(&nilcalc_core::rational::pow(&r, d)));
    }
}
