//! Sobolev norms on the grid and the embedding ratio.

use serde::Serialize;

use nilcalc_core::multi_index::up_to_degree;
use nilcalc_core::{GradedGroup, InvariantOperator, Rational, RocklandSpec};
use num_traits::One;

use crate::error::{NumError, NumResult};
use crate::fd::apply_op_fd;
use crate::grid::GridFunction;

/// Σ_{[α]≤a} ‖X^α f‖_{L²}, for a a multiple of ν_o.
pub fn sobolev_norm(group: &GradedGroup, f: &GridFunction, a: u32) -> NumResult<f64> {
    let nu_o = group.algebra().nu_o();
    if a % nu_o != 0 {
        return Err(NumError::Config(format!("Sobolev order {a} is not a multiple of {nu_o}")));
    }
    let mut total = 0.0;
    for alpha in up_to_degree(group.weights(), a) {
        let op = InvariantOperator::monomial(group.weights(), alpha, Rational::one()).to_var_coeff();
        total += apply_op_fd(group, &op, f)?.l2();
    }
    Ok(total)
}

/// (Id + 𝓡)^k as an invariant operator.
pub fn id_plus_r_power(group: &GradedGroup, rockland: &RocklandSpec, k: u32) -> InvariantOperator {
    let w = group.weights();
    let base = InvariantOperator::identity(w).add(&rockland.operator);
    let mut out = InvariantOperator::identity(w);
    for _ in 0..k {
        out = out.multiply(group.algebra(), &base);
    }
    out
}

/// ‖(Id + 𝓡)^{a/ν} f‖_{L²}, for a a multiple of ν.
pub fn bessel_sobolev_norm(group: &GradedGroup, rockland: &RocklandSpec, f: &GridFunction, a: u32) -> NumResult<f64> {
    if a % rockland.degree != 0 {
        return Err(NumError::Config(format!(
            "Sobolev order {a} is not a multiple of the operator degree {}",
            rockland.degree
        )));
    }
    let op = id_plus_r_power(group, rockland, a / rockland.degree).to_var_coeff();
    Ok(apply_op_fd(group, &op, f)?.l2())
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingRatio {
    pub sup: f64,
    pub sobolev: f64,
    pub constant: f64,
    pub ratio: f64,
}

/// ‖f‖_∞ / (C_a ‖(Id+𝓡)^{a/ν} f‖_{L²}) with C_a = ‖𝓑_a‖_{L²}.
pub fn sobolev_inequality_check(
    group: &GradedGroup,
    rockland: &RocklandSpec,
    f: &GridFunction,
    a: u32,
    c_a: f64,
) -> NumResult<EmbeddingRatio> {
    let q = group.algebra().homogeneous_dimension();
    if 2 * a <= q {
        return Err(NumError::Config(format!("embedding needs a > Q/2 = {}", q as f64 / 2.0)));
    }
    let sup = f.linf();
    let sobolev = bessel_sobolev_norm(group, rockland, f, a)?;
    let ratio = if sup == 0.0 { 0.0 } else { sup / (c_a * sobolev) };
    Ok(EmbeddingRatio { sup, sobolev, constant: c_a, ratio })
}
