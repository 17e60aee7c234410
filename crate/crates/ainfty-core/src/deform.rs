//! Deformation of the operations by a degree-1 element.
//!
//! Given `b` of degree one with positive combined filtration value, the
//! deformed operation of arity `k` is the sum over all ways of inserting
//! copies of `b` between the arguments. Insertions strictly increase the
//! combined filtration, so the sum is finite under the truncation; the arity
//! cutoff bounds it as well.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::algebra::{AInftyAlgebra, AlgebraError, Element};
use crate::coeff::TowerConfig;
use crate::{rint, Rat};

/// Errors raised while deforming.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeformError {
    /// The deforming element does not have degree one.
    BadDegree { got: Option<i64> },
    /// The deforming element has zero combined filtration value.
    ZeroFiltration,
    /// The deformed curvature is not a central unit multiple at the inspected
    /// energy range; carries the offending non-unit component.
    NotBounding { component: Element },
    /// An algebra-level error surfaced during evaluation.
    Algebra(AlgebraError),
}

impl fmt::Display for DeformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeformError::BadDegree { got } => {
                write!(f, "deforming element must have degree 1, got {got:?}")
            }
            DeformError::ZeroFiltration => {
                write!(
                    f,
                    "deforming element must have positive combined filtration"
                )
            }
            DeformError::NotBounding { .. } => {
                write!(f, "deformed curvature is not a central unit multiple")
            }
            DeformError::Algebra(e) => write!(f, "{e}"),
        }
    }
}

impl From<AlgebraError> for DeformError {
    fn from(e: AlgebraError) -> Self {
        DeformError::Algebra(e)
    }
}

/// An algebra together with a deforming element and the fully materialized
/// deformed operation tables.
///
/// The table cache is filled eagerly at construction, so the value is
/// immutable afterwards and safe to share between threads.
#[derive(Debug, Clone)]
pub struct DeformedAlgebra {
    /// The deformed structure (same basis/tower/pairing, new tables).
    pub alg: AInftyAlgebra,
    /// The undeformed structure.
    pub base: AInftyAlgebra,
    /// The deforming element.
    pub b: Element,
}

/// Builds the deformed algebra; see the module docs for the insertion sum.
pub fn deform(base: &AInftyAlgebra, b: &Element) -> Result<DeformedAlgebra, DeformError> {
    let cfg = &base.tower;
    match b.degree(cfg, &base.basis) {
        // The zero element (degree undefined) deforms trivially below.
        Ok(Some(1)) | Ok(None) => {}
        Ok(d) => return Err(DeformError::BadDegree { got: d }),
        Err(_) => return Err(DeformError::BadDegree { got: None }),
    }
    let Some(incr) = b.nu_combined(cfg) else {
        // b = 0: the deformation is trivially the base structure.
        return Ok(DeformedAlgebra {
            alg: base.clone(),
            base: base.clone(),
            b: b.clone(),
        });
    };
    if !incr.is_positive() {
        return Err(DeformError::ZeroFiltration);
    }
    // Each insertion raises the combined filtration by at least `incr`; past
    // this budget every term is truncated away.
    let budget = cfg.e_max.clone() + rint(cfg.s_max as i64) * rint(cfg.n - 1);
    let max_by_filtration = (budget / incr).floor().to_integer();
    let mut ops: BTreeMap<(usize, Vec<usize>), Element> = BTreeMap::new();
    for k in 0..=base.k_max {
        let max_insert = (base.k_max - k).min(if max_by_filtration.is_negative() {
            0
        } else {
            u64::try_from(&max_by_filtration).unwrap_or(u64::MAX) as usize
        });
        for tuple in base.tuples(k) {
            let mut value = Element::zero();
            for pattern in insertion_patterns(k, max_insert) {
                let mut args: Vec<Element> = Vec::new();
                for (slot, &count) in pattern.iter().enumerate() {
                    for _ in 0..count {
                        args.push(b.clone());
                    }
                    if slot < k {
                        args.push(Element::basis(cfg, tuple[slot]));
                    }
                }
                value = value.add(cfg, &base.eval_mk(&args)?);
            }
            if !value.is_zero() {
                ops.insert((k, tuple), value);
            }
        }
    }
    let mut alg = base.clone();
    alg.ops = ops;
    Ok(DeformedAlgebra {
        alg,
        base: base.clone(),
        b: b.clone(),
    })
}

/// All insertion-count vectors `(ℓ_0, …, ℓ_k)` with `Σ ℓ_i ≤ max_total`.
fn insertion_patterns(k: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..=k {
        let mut next = Vec::new();
        for p in &out {
            let used: usize = p.iter().sum();
            for l in 0..=(max_total - used) {
                let mut p2 = p.clone();
                p2.push(l);
                next.push(p2);
            }
        }
        out = next;
    }
    out
}

impl DeformedAlgebra {
    /// The deformed curvature `m_0^b`.
    pub fn curvature(&self) -> Element {
        self.alg.structure_constant(0, &[])
    }

    /// Applies the deformed arity-1 operation.
    pub fn m1b(&self, x: &Element) -> Result<Element, AlgebraError> {
        self.alg.eval_mk(&[x.clone()])
    }

    /// Checks that the curvature is a central unit multiple at all energies
    /// up to `energy` (inclusive); returns the offending component otherwise.
    pub fn check_bounding_up_to(&self, energy: &Rat) -> Result<(), DeformError> {
        let cfg = &self.alg.tower;
        let unit = self.alg.basis.unit_index;
        let m0 = self.curvature();
        let mut bad = Element::zero();
        for (i, c) in &m0.coeffs {
            let low: crate::coeff::CoeffElem = crate::coeff::CoeffElem {
                terms: c
                    .terms
                    .iter()
                    .filter(|(k, _)| &k.energy(cfg) <= energy)
                    .map(|(k, q)| (k.clone(), q.clone()))
                    .collect(),
            };
            if low.is_zero() {
                continue;
            }
            if *i != unit || !low.is_central(cfg) {
                bad = bad.add(cfg, &Element::term(*i, low));
            }
        }
        if bad.is_zero() {
            Ok(())
        } else {
            Err(DeformError::NotBounding { component: bad })
        }
    }
}

/// The induced boundary operator of a deformed algebra (arity-1 deformed
/// operation), available once the curvature is a central unit multiple below
/// the inspected energy.
pub struct BoundaryOp<'a> {
    dalg: &'a DeformedAlgebra,
}

impl BoundaryOp<'_> {
    /// Applies the boundary operator.
    pub fn apply(&self, x: &Element) -> Result<Element, AlgebraError> {
        self.dalg.m1b(x)
    }
}

/// Returns the deformed boundary operator after checking the centrality
/// precondition up to the given energy.
pub fn deformed_boundary<'a>(
    dalg: &'a DeformedAlgebra,
    up_to_energy: &Rat,
) -> Result<BoundaryOp<'a>, DeformError> {
    dalg.check_bounding_up_to(up_to_energy)?;
    Ok(BoundaryOp { dalg })
}

/// The boundary operator induced on the zero-energy residue:
/// `x ↦ (d x − [b̄, x])` with `b̄` the zero-energy part of `b`, everything
/// projected back to zero energy.
pub fn residue_boundary(
    alg: &AInftyAlgebra,
    b: &Element,
    x: &Element,
) -> Result<Element, AlgebraError> {
    let cfg = &alg.tower;
    let zero = Rat::zero();
    let bb = b.energy_component(cfg, &zero);
    let d_part = alg.eval_mk(&[x.clone()])?;
    let br = alg.bracket(&bb, x)?;
    Ok(d_part.add(cfg, &br.neg()).energy_component(cfg, &zero))
}

/// Report of the generation condition: residue degrees bounded by the ambient
/// dimension, and every zero-energy coefficient monomial constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SababaReport {
    /// Maximum basis degree found (the generation constant).
    pub h: i64,
    /// Whether all basis degrees are at most `n`.
    pub degrees_ok: bool,
    /// Zero-energy nonconstant monomials found in the tables.
    pub zero_energy_violations: Vec<String>,
}

impl SababaReport {
    /// True when the generation condition holds.
    pub fn ok(&self) -> bool {
        self.degrees_ok && self.zero_energy_violations.is_empty()
    }
}

/// Validates the generation condition on a model's tables.
pub fn sababa_validate(alg: &AInftyAlgebra) -> SababaReport {
    let cfg = &alg.tower;
    let h = (0..alg.basis.len())
        .map(|i| alg.basis.degree(i))
        .max()
        .unwrap_or(0);
    let degrees_ok = (0..alg.basis.len()).all(|i| alg.basis.degree(i) <= cfg.n);
    let mut zero_energy_violations = Vec::new();
    let mut scan = |context: String, c: &crate::coeff::CoeffElem| {
        for key in c.terms.keys() {
            let nonconstant = key.beta.iter().any(|&x| x != 0) || key.t_exp.iter().any(|&x| x != 0);
            if nonconstant && key.energy(cfg).is_zero() {
                zero_energy_violations.push(format!(
                    "{context}: zero-energy nonconstant monomial with class {:?}",
                    key.beta
                ));
            }
        }
    };
    for ((k, tuple), value) in &alg.ops {
        for (i, c) in &value.coeffs {
            scan(format!("m_{k}{tuple:?} → {}", alg.basis.name(*i)), c);
        }
    }
    for ((i, j), c) in &alg.pairing {
        scan(
            format!("⟨{}, {}⟩", alg.basis.name(*i), alg.basis.name(*j)),
            c,
        );
    }
    SababaReport {
        h,
        degrees_ok,
        zero_energy_violations,
    }
}

/// Certificate that deformation sums converge under the truncation: the
/// parameter filtration descends (`n > 1`) and the effective bound on the
/// number of contributing insertions is finite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoCompleteReport {
    /// Whether the parameter filtration is strictly descending.
    pub descending: bool,
    /// Smallest positive filtration increment available in the tower.
    pub min_increment: Rat,
    /// Effective bound: insertions beyond this count are truncated away for
    /// targets below the energy cutoff.
    pub bound_for_cutoff: u64,
}

/// Computes the convergence certificate for a tower configuration.
pub fn pseudo_complete_certificate(cfg: &TowerConfig) -> PseudoCompleteReport {
    let descending = cfg.n > 1;
    let mut min_increment = rint(cfg.n - 1).max(rint(1).min(rint(cfg.n - 1)));
    if cfg.n > 1 {
        min_increment = rint(cfg.n - 1);
    }
    for g in &cfg.monoid.allowed_cone {
        let e = cfg.monoid.omega_of(g);
        if e.is_positive() && e < min_increment {
            min_increment = e;
        }
    }
    if !cfg.vars.t_degrees.is_empty() && rint(1) < min_increment {
        min_increment = rint(1);
    }
    let budget = cfg.e_max.clone() + rint(cfg.s_max as i64) * rint(cfg.n - 1);
    let bound_for_cutoff = if min_increment.is_positive() {
        u64::try_from(&(budget / &min_increment).floor().to_integer()).unwrap_or(u64::MAX) + 1
    } else {
        u64::MAX
    };
    PseudoCompleteReport {
        descending,
        min_increment,
        bound_for_cutoff,
    }
}
