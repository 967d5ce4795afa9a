//! Grid numerics against closed forms and independent computations.

use std::f64::consts::PI;

use nilcalc::bessel::{l2_norm_from_heat, HeatProfile};
use nilcalc::convolution::{direct_convolve, gaussian, group_convolve};
use nilcalc::heat::h1_heat_kernel_exact;
use nilcalc::kernels::leibniz_numeric_check;
use nilcalc::parse::{parse_operator, parse_polynomial};
use nilcalc::schrodinger::{calibrate_plancherel, schrodinger_rep, PlancherelGrid};
use nilcalc::verify::random_poly;
use nilcalc::{GridFunction, GridSpec};
use nilcalc_core::{catalog, multi_index, DualBasis, GradedGroup, MultiIndex, VarCoeffOperator};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn h1() -> GradedGroup {
    GradedGroup::new(catalog::heisenberg_spec(1)).unwrap()
}

#[test]
fn shear_convolution_matches_direct_quadrature() {
    let g = h1();
    let grid = GridSpec::new(vec![4.0, 4.0, 6.0], vec![16, 16, 32]).unwrap();
    let a = gaussian(&grid, &[0.3, 0.0, 0.2], &[0.6, 0.7, 0.9]);
    let b = gaussian(&grid, &[-0.2, 0.4, 0.0], &[0.7, 0.5, 1.0]);
    let fast = group_convolve(&g, &a, &b).unwrap().f;
    let slow = direct_convolve(&g, &a, &b).unwrap();
    assert!(fast.rel_l2(&slow) < 1e-10, "{}", fast.rel_l2(&slow));
}

#[test]
fn abelian_gaussian_variances_add() {
    let g = GradedGroup::new(catalog::abelian_spec(2)).unwrap();
    let grid = GridSpec::new(vec![8.0, 8.0], vec![64, 64]).unwrap();
    let a = gaussian(&grid, &[0.5, 0.0], &[0.6, 0.8]);
    let b = gaussian(&grid, &[-0.5, 0.25], &[0.7, 0.5]);
    let c = group_convolve(&g, &a, &b).unwrap().f;
    let s = |x: f64, y: f64| (x * x + y * y).sqrt();
    let expect = gaussian(&grid, &[0.0, 0.25], &[s(0.6, 0.7), s(0.8, 0.5)]);
    assert!(c.rel_l2(&expect) < 1e-8, "{}", c.rel_l2(&expect));
}

#[test]
fn convolution_is_associative() {
    let g = h1();
    let grid = GridSpec::new(vec![4.0, 4.0, 6.0], vec![32, 32, 48]).unwrap();
    let f1 = gaussian(&grid, &[0.3, 0.0, 0.2], &[0.6, 0.7, 0.9]);
    let f2 = gaussian(&grid, &[-0.2, 0.4, 0.0], &[0.7, 0.5, 1.0]);
    let f3 = gaussian(&grid, &[0.0, -0.3, 0.3], &[0.5, 0.6, 0.8]);
    let conv = |a: &GridFunction, b: &GridFunction| group_convolve(&g, a, b).unwrap().f;
    let l = conv(&conv(&f1, &f2), &f3);
    let r = conv(&f1, &conv(&f2, &f3));
    assert!(l.rel_l2(&r) < 1e-3, "{}", l.rel_l2(&r));
}

#[test]
fn leibniz_is_exact_along_first_layer() {
    // q̃ for first-layer α is linear, so the numeric identity holds to rounding.
    let g = h1();
    let basis = DualBasis::new(&g, 2).unwrap();
    let grid = GridSpec::new(vec![4.0, 4.0, 6.0], vec![16, 16, 32]).unwrap();
    let f1 = gaussian(&grid, &[0.3, 0.0, 0.2], &[0.6, 0.7, 0.9]);
    let f2 = gaussian(&grid, &[-0.2, 0.4, 0.0], &[0.7, 0.5, 1.0]);
    for al in [[1u32, 0, 0], [0, 1, 0], [1, 1, 0]] {
        let e = leibniz_numeric_check(&g, &basis, &MultiIndex::new(al.to_vec()), &f1, &f2).unwrap();
        assert!(e < 1e-10, "{al:?}: {e}");
    }
}

/// X₁ = ∂₁ − (x₂/2)∂₃ and X₂ = ∂₂ + (x₁/2)∂₃ applied by central differences.
fn sub_laplacian_fd(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> f64 {
    let d = |j: usize, g: &dyn Fn(&[f64]) -> f64, y: &[f64]| {
        let mut p = y.to_vec();
        let mut m = y.to_vec();
        p[j] += h;
        m[j] -= h;
        (g(&p) - g(&m)) / (2.0 * h)
    };
    let x1 = |g: &dyn Fn(&[f64]) -> f64, y: &[f64]| d(0, g, y) - 0.5 * y[1] * d(2, g, y);
    let x2 = |g: &dyn Fn(&[f64]) -> f64, y: &[f64]| d(1, g, y) + 0.5 * y[0] * d(2, g, y);
    let x1f = |y: &[f64]| x1(&f, y);
    let x2f = |y: &[f64]| x2(&f, y);
    x1(&x1f, x) + x2(&x2f, x)
}

#[test]
fn closed_form_heat_kernel_solves_heat_equation() {
    for x in [[0.3, -0.2, 0.4], [1.0, 0.5, -0.7], [0.0, 0.0, 1.2]] {
        let t = 0.8;
        let dt = 1e-4;
        let lhs = (h1_heat_kernel_exact(t + dt, &x) - h1_heat_kernel_exact(t - dt, &x)) / (2.0 * dt);
        let rhs = sub_laplacian_fd(|y| h1_heat_kernel_exact(t, y), &x, 1e-3);
        assert!((lhs - rhs).abs() < 1e-4 * lhs.abs().max(1e-2), "{x:?}: {lhs} vs {rhs}");
    }
}

#[test]
fn closed_form_heat_kernel_mass_and_bessel_l2_constant() {
    let g = h1();
    let grid = GridSpec::new(vec![5.0, 5.0, 8.0], vec![32, 32, 48]).unwrap();
    let h = GridFunction::from_fn(&grid, |x| h1_heat_kernel_exact(1.0, x));
    assert!((h.integral() - 1.0).abs() < 2e-3, "mass {}", h.integral());
    // ‖𝓑₄‖₂² = ∫∫ st e^{−s−t} h_{s+t}(0) ds dt = 1/96 with h_t(0) = 1/(16t²).
    let profile = HeatProfile::new(&g, 2, &h, 1.0).unwrap();
    let c4 = l2_norm_from_heat(&profile, 4.0).unwrap();
    assert!((c4 - 96f64.sqrt().recip()).abs() < 1e-3, "C4 {c4}");
    assert!(l2_norm_from_heat(&profile, 2.0).is_none());
}

#[test]
fn plancherel_constant_is_inverse_four_pi_squared() {
    let grid = GridSpec::new(vec![5.0, 5.0, 5.0], vec![64, 64, 64]).unwrap();
    let g1 = gaussian(&grid, &[0.0, 0.0, 0.0], &[0.7, 0.7, 1.2]);
    let g2 = gaussian(&grid, &[0.3, -0.2, 0.1], &[0.6, 0.8, 1.0]);
    let cal = calibrate_plancherel(&g1, &g2, &PlancherelGrid::default()).unwrap();
    let exact = 1.0 / (4.0 * PI * PI);
    assert!((cal.constant - exact).abs() < 1e-3 * exact, "{}", cal.constant);
    assert!(cal.drift < 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn schrodinger_model_is_a_homomorphism(
        x in prop::array::uniform3(-1.0f64..1.0),
        y in prop::array::uniform3(-1.0f64..1.0),
        lam in 0.5f64..2.5,
        neg in any::<bool>(),
    ) {
        // points of the unit ball, as in the verify suite
        prop_assume!(x.iter().map(|v| v * v).sum::<f64>() <= 1.0);
        prop_assume!(y.iter().map(|v| v * v).sum::<f64>() <= 1.0);
        let lam = if neg { -lam } else { lam };
        let xy = [x[0] + y[0], x[1] + y[1], x[2] + y[2] + 0.5 * (x[0] * y[1] - x[1] * y[0])];
        let a = schrodinger_rep(lam, &x, 64).unwrap();
        let b = schrodinger_rep(lam, &y, 64).unwrap();
        let c = schrodinger_rep(lam, &xy, 64).unwrap();
        prop_assert!(a.mul(&b).sub(&c).block_max(32) < 1e-8);
        prop_assert!(a.mul(&a.adjoint()).sub(&nilcalc::schrodinger::RepMatrix::identity(lam, 64)).block_max(32) < 1e-8);
    }

    #[test]
    fn printed_polynomials_parse_back(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poly(&mut rng, n, 3, 4);
        prop_assert_eq!(parse_polynomial(&p.to_string(), n).unwrap(), p);
    }

    #[test]
    fn printed_operators_parse_back(seed in any::<u64>()) {
        let g = h1();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut op = VarCoeffOperator::zero(g.weights());
        for beta in multi_index::up_to_degree(g.weights(), 3).into_iter().take(6) {
            op.add_term(beta, random_poly(&mut rng, 3, 2, 2));
        }
        prop_assert_eq!(parse_operator(&op.to_string(), g.weights()).unwrap(), op);
    }
}
