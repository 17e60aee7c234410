//! Exact-arithmetic engine for curved cyclic unital A∞ algebras over filtered
//! coefficient towers with a non-commutative odd parameter.
//!
//! The crate is `no_std` (with `alloc`): every computation is pure, exact
//! (arbitrary-precision rationals) and deterministic (all sparse containers are
//! ordered maps). IO, file formats and the CLI live in the companion `ainfty`
//! crate.
//!
//! Module map:
//! - [`coeff`] — the truncated coefficient tower: degree monoid, energy/Maslov
//!   functionals, the odd formal parameter, filtrations, parity, involution.
//! - [`linalg`] — dense exact linear algebra (RREF, kernels, solving) with a
//!   deterministic pivot rule.
//! - [`algebra`] — graded bases, elements, A∞ structures, the Koszul sign
//!   engine, axiom checking, opposites, self-duality, extended pairing.
//! - [`deform`] — deformation of the operations by a degree-1 element and the
//!   induced boundary operator.
//! - [`mcsolve`] — the energy-inductive Maurer–Cartan solver.
//! - [`spectral`] — spectral sequences of filtered complexes and twisted
//!   differentials.
//! - [`invariants`] — superpotential, classifying data, coefficient extraction.
//! - [`models`] — verified fixture algebras and mutation fixtures.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod algebra;
pub mod coeff;
pub mod deform;
pub mod invariants;
pub mod linalg;
pub mod mcsolve;
pub mod models;
pub mod spectral;

/// Exact rational scalar used everywhere in the engine.
pub type Rat = num_rational::BigRational;

/// Convenience constructor for a rational from a numerator/denominator pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

/// Convenience constructor for an integer rational.
pub fn rint(num: i64) -> Rat {
    Rat::from_integer(num.into())
}
