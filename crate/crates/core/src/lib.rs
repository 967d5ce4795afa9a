//! Exact symbolic calculus on graded nilpotent Lie groups.
//!
//! The crate is `no_std` (with `alloc`). Every object here is built from
//! rational structure constants and manipulated with exact rational
//! arithmetic: the Baker–Campbell–Hausdorff group law, the polynomial basis
//! dual to the ordered enveloping-algebra monomials, left-invariant
//! differential operators, and the symbolic calculus of differential-operator
//! symbols (difference operators, composition and adjoint expansions).
//!
//! The usual entry point is [`GradedGroup`], built from a validated
//! [`GradedLieAlgebraSpec`] (see [`catalog`] for the built-in groups).

#![no_std]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod catalog;
pub mod diffops;
pub mod error;
pub mod group;
pub mod group_poly;
pub mod lie;
pub mod linalg;
pub mod multi_index;
pub mod polynomial;
pub mod rational;
pub mod symbols;

pub use diffops::{InvariantOperator, RocklandSpec, RocklandVariant, VarCoeffOperator};
pub use error::{Error, Result};
pub use group::GradedGroup;
pub use group_poly::{DualBasis, GroupLawTable, VectorField};
pub use lie::{Bracket, GradedLieAlgebra, GradedLieAlgebraSpec, ValidationReport};
pub use multi_index::MultiIndex;
pub use polynomial::{Monomial, Polynomial};
pub use rational::Rational;
pub use symbols::{DiffOpSymbol, SeminormRequest, SymbolClassTag};
