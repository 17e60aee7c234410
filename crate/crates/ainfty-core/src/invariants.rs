//! Superpotential, coefficient extraction, and the classifying map.

use alloc::string::String;
use core::fmt;

use num_traits::{One, Zero};

use crate::algebra::{AlgebraError, Element};
use crate::coeff::{CoeffElem, TowerConfig};
use crate::models::ModelDescriptor;
use crate::{rint, Rat};

/// Errors raised by the invariant layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvariantError {
    /// The candidate is not a bounding pair.
    NotBounding { detail: String },
    /// The candidate is not a unit pair (its integral's odd part is not an
    /// invertible multiple of the parameter).
    NotUnitPair,
    /// An algebra-level error surfaced.
    Algebra(AlgebraError),
}

impl fmt::Display for InvariantError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantError::NotBounding { detail } => {
                write!(f, "candidate is not a bounding pair: {detail}")
            }
            InvariantError::NotUnitPair => write!(f, "candidate is not a unit pair"),
            InvariantError::Algebra(e) => write!(f, "{e}"),
        }
    }
}

impl From<AlgebraError> for InvariantError {
    fn from(e: AlgebraError) -> Self {
        InvariantError::Algebra(e)
    }
}

/// The superpotential value; always of odd parameter parity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Superpotential {
    /// The scalar value.
    pub value: CoeffElem,
}

/// Computes the superpotential
/// `Ω = (−1)^n Σ_{k≥0} 1/(k+1) ⟨m̂_k(b, …, b), b⟩` with the odd-projected
/// pairing; finite under truncation.
pub fn superpotential(
    model: &ModelDescriptor,
    b: &Element,
) -> Result<Superpotential, InvariantError> {
    let alg = &model.alg;
    let cfg = &alg.tower;
    let verify = crate::mcsolve::verify_bounding_pair(model, b, false)?;
    if !verify.ok() {
        return Err(InvariantError::NotBounding {
            detail: verify.curvature.render(&alg.basis),
        });
    }
    let mut value = CoeffElem::zero();
    for k in 0..=alg.k_max {
        let args = alloc::vec![b.clone(); k];
        let inner = alg.eval_mk(&args)?;
        if inner.is_zero() {
            continue;
        }
        let paired = alg.pairing_f(&inner, b)?;
        value = value.add(cfg, &paired.scale(&(rint(1) / rint(k as i64 + 1))));
    }
    if cfg.n.rem_euclid(2) == 1 {
        value = value.neg();
    }
    Ok(Superpotential { value })
}

/// Extracts the coefficient count attached to `(β, k, t-multidegree)`: the
/// formal partial derivatives `∂_t … ∂_s^k` at `s = t = 0`, i.e. the stored
/// coefficient times `k!` and the factorials of the `t`-multiplicities.
pub fn ogw_extract(
    omega: &Superpotential,
    cfg: &TowerConfig,
    beta: &[i64],
    k: u32,
    t_indices: &[usize],
) -> Rat {
    let mut t_exp = alloc::vec![0u32; cfg.vars.t_degrees.len()];
    for &i in t_indices {
        if i >= t_exp.len() {
            return Rat::zero();
        }
        t_exp[i] += 1;
    }
    let mut coeff = Rat::zero();
    for (key, q) in &omega.value.terms {
        if key.s_pow == k && key.beta == beta && key.t_exp == t_exp {
            coeff = q.clone();
        }
    }
    if coeff.is_zero() {
        return coeff;
    }
    let mut factor = Rat::one();
    for j in 1..=i64::from(k) {
        factor = factor * rint(j);
    }
    for &l in &t_exp {
        for j in 1..=i64::from(l) {
            factor = factor * rint(j);
        }
    }
    coeff * factor
}

/// Classifying data of a unit bounding pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoData {
    /// The model's declared interior-class tag.
    pub gamma_tag: String,
    /// The odd part of the integral with one parameter factored out.
    pub unit_coeff: CoeffElem,
    /// Representative of the even part of the integral, modulo the square of
    /// the odd ideal.
    pub even_part: CoeffElem,
}

/// Computes the classifying data `(tag, (∫b)¹/s, (∫b)⁰)` of a candidate.
pub fn rho(model: &ModelDescriptor, b: &Element) -> Result<RhoData, InvariantError> {
    let cfg = &model.alg.tower;
    let integral = model.integral(b);
    let (even, odd) = integral.parity_split();
    if !crate::mcsolve::odd_part_unit(cfg, &integral) {
        return Err(InvariantError::NotUnitPair);
    }
    let mut unit_coeff = CoeffElem::zero();
    for (key, q) in &odd.terms {
        debug_assert!(key.s_pow >= 1);
        let mut shifted = key.clone();
        shifted.s_pow -= 1;
        unit_coeff = unit_coeff.add(cfg, &CoeffElem::monomial_unchecked(cfg, shifted, q.clone()));
    }
    Ok(RhoData {
        gamma_tag: model.gamma_tag.clone(),
        unit_coeff,
        even_part: even,
    })
}
