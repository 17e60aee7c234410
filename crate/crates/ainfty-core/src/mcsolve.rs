//! Energy-inductive Maurer–Cartan solver.
//!
//! The solver seeds a candidate with a top-degree multiple of the point class
//! and walks the energy ladder: at each positive level it reads off the
//! obstruction (the curvature component outside the central unit line),
//! solves for a primitive with exact linear algebra over the finite graded
//! piece, removes the top-degree part so the integral stays fixed, and adds
//! the correction. The real variant averages each primitive into the
//! anti-invariant subspace of the degree involution.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::algebra::{AInftyAlgebra, AlgebraError, Element};
use crate::coeff::{CoeffElem, TermKey, TowerConfig};
use crate::deform::{deform, DeformError, DeformedAlgebra};
use crate::linalg::{rank, solve_with_col_order, Mat};
use crate::models::ModelDescriptor;
use crate::{rint, Rat};

/// Errors raised by the solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// The seed scalar is inadmissible (wrong degree or zero filtration).
    BadSeed { detail: String },
    /// Real mode requested on a non-real model or a non-anti-invariant seed.
    NotReal,
    /// Obstruction requested at a level whose predecessors are unsolved.
    NotYetSolved { level: usize },
    /// An obstruction or primitive failed a closedness identity that valid
    /// input data cannot violate.
    NotClosed { detail: String },
    /// The level's linear system has no solution; carries the cokernel class.
    NoSolution { cokernel: Element, dimension: usize },
    /// The induction stopped at a surviving obstruction class.
    Obstructed {
        level: usize,
        class: Element,
        dimension: usize,
    },
    /// A deformation-level error surfaced.
    Deform(DeformError),
    /// An algebra-level error surfaced.
    Algebra(AlgebraError),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::BadSeed { detail } => write!(f, "inadmissible seed: {detail}"),
            SolveError::NotReal => {
                write!(f, "real mode needs a real model and an anti-invariant seed")
            }
            SolveError::NotYetSolved { level } => {
                write!(f, "levels below {level} are not solved yet")
            }
            SolveError::NotClosed { detail } => write!(f, "closedness identity failed: {detail}"),
            SolveError::NoSolution { dimension, .. } => {
                write!(f, "no primitive exists (cokernel dimension {dimension})")
            }
            SolveError::Obstructed {
                level, dimension, ..
            } => {
                write!(f, "obstructed at level {level} (dimension {dimension})")
            }
            SolveError::Deform(e) => write!(f, "{e}"),
            SolveError::Algebra(e) => write!(f, "{e}"),
        }
    }
}

impl From<DeformError> for SolveError {
    fn from(e: DeformError) -> Self {
        SolveError::Deform(e)
    }
}

impl From<AlgebraError> for SolveError {
    fn from(e: AlgebraError) -> Self {
        SolveError::Algebra(e)
    }
}

/// Deterministic pivot rule of the per-level linear solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Ascending (basis index, parameter power, monomial) order.
    Lex,
    /// The same order reversed.
    RevLex,
}

/// The finite ladder of energies below the cutoff, closed under sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyLadder {
    /// Strictly increasing energies, starting at zero.
    pub levels: Vec<Rat>,
}

/// Harvests the energy ladder from the structure constants and a candidate.
pub fn energy_ladder(alg: &AInftyAlgebra, b: &Element) -> EnergyLadder {
    let cfg = &alg.tower;
    let mut set: BTreeSet<Rat> = BTreeSet::new();
    let mut harvest = |c: &CoeffElem| {
        for k in c.terms.keys() {
            let e = k.energy(cfg);
            if e.is_positive() && e <= cfg.e_max {
                set.insert(e);
            }
        }
    };
    for value in alg.ops.values() {
        for c in value.coeffs.values() {
            harvest(c);
        }
    }
    for c in b.coeffs.values() {
        harvest(c);
    }
    // Close under sums below the cutoff.
    loop {
        let snapshot: Vec<Rat> = set.iter().cloned().collect();
        let before = set.len();
        for a in &snapshot {
            for b in &snapshot {
                let s = a.clone() + b.clone();
                if s <= cfg.e_max {
                    set.insert(s);
                }
            }
        }
        if set.len() == before {
            break;
        }
    }
    let mut levels = vec![Rat::zero()];
    levels.extend(set);
    EnergyLadder { levels }
}

/// Projection to the not-unit quotient: unit-line terms with central
/// coefficients are dropped.
pub fn quotient_project(alg: &AInftyAlgebra, x: &Element) -> Element {
    let cfg = &alg.tower;
    let unit = alg.basis.unit_index;
    let mut out = Element::zero();
    for (i, c) in &x.coeffs {
        if *i != unit {
            out = out.add(cfg, &Element::term(*i, c.clone()));
            continue;
        }
        let kept = CoeffElem {
            terms: c
                .terms
                .iter()
                .filter(|(k, _)| k.s_factor_parity(cfg) != 0)
                .map(|(k, q)| (k.clone(), q.clone()))
                .collect(),
        };
        if !kept.is_zero() {
            out = out.add(cfg, &Element::term(*i, kept));
        }
    }
    out
}

/// All exponent vectors of the given length with the given total.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// Coordinates of the not-unit quotient at fixed coefficient energy and total
/// degree: all monomial pairs `(key, basis index)`, in ascending
/// (basis, parameter power, monomial) order.
pub fn level_coords(alg: &AInftyAlgebra, energy: &Rat, degree: i64) -> Vec<(TermKey, usize)> {
    let cfg = &alg.tower;
    let unit = alg.basis.unit_index;
    let mut out: Vec<(TermKey, usize)> = Vec::new();
    let betas = cfg.monoid.enumerate_cone(&cfg.e_max);
    for v in 0..alg.basis.len() {
        for beta in &betas {
            let rem = energy.clone() - cfg.monoid.omega_of(beta);
            if rem.is_negative() || !rem.is_integer() {
                continue;
            }
            let t_total = u32::try_from(&rem.to_integer()).unwrap_or(u32::MAX);
            for t_exp in compositions(t_total, cfg.vars.t_degrees.len()) {
                for s_pow in 0..=cfg.s_max {
                    let key = TermKey {
                        s_pow,
                        beta: beta.clone(),
                        t_exp: t_exp.clone(),
                    };
                    if key.degree(cfg) + alg.basis.degree(v) != degree {
                        continue;
                    }
                    if v == unit && key.s_factor_parity(cfg) == 0 {
                        continue;
                    }
                    out.push((key, v));
                }
            }
        }
    }
    out.sort_by(|a, b| {
        (a.1, a.0.s_pow, &a.0.beta, &a.0.t_exp).cmp(&(b.1, b.0.s_pow, &b.0.beta, &b.0.t_exp))
    });
    out
}

fn expand_in_coords(coords: &[(TermKey, usize)], x: &Element) -> Result<Vec<Rat>, SolveError> {
    let mut out = vec![Rat::zero(); coords.len()];
    for (v, c) in &x.coeffs {
        for (key, q) in &c.terms {
            match coords.iter().position(|(k, w)| k == key && w == v) {
                Some(i) => out[i] = out[i].clone() + q,
                None => {
                    return Err(SolveError::NotClosed {
                        detail: format!("term outside the level coordinate span (basis {v})"),
                    })
                }
            }
        }
    }
    Ok(out)
}

fn element_from_coords(cfg: &TowerConfig, coords: &[(TermKey, usize)], x: &[Rat]) -> Element {
    let mut out = Element::zero();
    for ((key, v), q) in coords.iter().zip(x) {
        if !q.is_zero() {
            out = out.add(
                cfg,
                &Element::term(
                    *v,
                    CoeffElem::monomial_unchecked(cfg, key.clone(), q.clone()),
                ),
            );
        }
    }
    out
}

/// The level-`ℓ` obstruction: the energy-`E_ℓ` curvature component in the
/// not-unit quotient. Requires every lower positive level to vanish there and
/// asserts the result is closed under the level operator.
pub fn obstruction_cocycle(
    dalg: &DeformedAlgebra,
    ladder: &EnergyLadder,
    ell: usize,
) -> Result<Element, SolveError> {
    let alg = &dalg.alg;
    let cfg = &alg.tower;
    let m0 = dalg.curvature();
    for j in 0..ell {
        let part = quotient_project(&dalg.base, &m0.energy_component(cfg, &ladder.levels[j]));
        if !part.is_zero() {
            return Err(SolveError::NotYetSolved { level: ell });
        }
    }
    let energy = &ladder.levels[ell];
    let o = quotient_project(&dalg.base, &m0.energy_component(cfg, energy));
    if !o.is_zero() {
        let closed = quotient_project(&dalg.base, &dalg.m1b(&o)?.energy_component(cfg, energy));
        if !closed.is_zero() {
            return Err(SolveError::NotClosed {
                detail: closed.render(&alg.basis),
            });
        }
    }
    Ok(o)
}

/// Solves `m_1^b(ξ) = −target` in the level's graded piece of the not-unit
/// quotient. Free variables are zero under the chosen pivot rule, so the
/// output is deterministic.
pub fn primitive_solve(
    dalg: &DeformedAlgebra,
    target: &Element,
    energy: &Rat,
    pivot: PivotRule,
) -> Result<Element, SolveError> {
    let base = &dalg.base;
    let cfg = &base.tower;
    if target.is_zero() {
        return Ok(Element::zero());
    }
    let domain = level_coords(base, energy, 1);
    let codomain = level_coords(base, energy, 2);
    let mut m = Mat::zero(codomain.len(), domain.len());
    for (j, (key, v)) in domain.iter().enumerate() {
        let xi = Element::term(
            *v,
            CoeffElem::monomial_unchecked(cfg, key.clone(), num_traits::One::one()),
        );
        let image = quotient_project(base, &dalg.m1b(&xi)?.energy_component(cfg, energy));
        let col = expand_in_coords(&codomain, &image)?;
        for (i, c) in col.into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    let rhs = expand_in_coords(&codomain, &target.neg())?;
    let order: Vec<usize> = match pivot {
        PivotRule::Lex => (0..domain.len()).collect(),
        PivotRule::RevLex => (0..domain.len()).rev().collect(),
    };
    match solve_with_col_order(&m, &rhs, &order) {
        Some(x) => Ok(element_from_coords(cfg, &domain, &x)),
        None => {
            // Cokernel dimension of the class: how far the target sticks out
            // of the image.
            let image_rows: Vec<Vec<Rat>> = (0..domain.len())
                .map(|j| (0..codomain.len()).map(|i| m.get(i, j).clone()).collect())
                .collect();
            let mut with_target = image_rows.clone();
            with_target.push(expand_in_coords(&codomain, target)?);
            let dimension = rank(&with_target) - rank(&image_rows);
            Err(SolveError::NoSolution {
                cokernel: target.clone(),
                dimension,
            })
        }
    }
}

/// Removes the top-degree component so the integral of the running candidate
/// stays fixed.
pub fn normalize_integral(model: &ModelDescriptor, xi: &Element) -> Element {
    xi.without_basis(model.top_index)
}

/// One level of the solver trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelRecord {
    /// Ladder index.
    pub level: usize,
    /// Energy of the level.
    pub energy: Rat,
    /// The obstruction class found at the level.
    pub obstruction: Element,
    /// Dimension of the obstruction (0 when it vanishes).
    pub obstruction_dim: usize,
    /// The normalized primitive added to the candidate.
    pub primitive: Element,
}

/// Structured outcome of the bounding-pair verifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    /// The full curvature sum of the candidate.
    pub curvature: Element,
    /// The central unit coefficient of the curvature.
    pub c: CoeffElem,
    /// The curvature has no component outside the unit line.
    pub unit_multiple: bool,
    /// `c` is central.
    pub central: bool,
    /// `c` is homogeneous of degree two (or zero).
    pub degree_ok: bool,
    /// `c` has positive filtration value (or is zero).
    pub filtration_positive: bool,
    /// Whether the unit-pair condition was requested.
    pub unit_pair_requested: bool,
    /// The odd part of the integral is an invertible multiple of the
    /// parameter (only meaningful when requested).
    pub unit_pair_ok: bool,
    /// `c` has support touching the truncation boundary, so exactness there
    /// is not certified.
    pub boundary_touch: bool,
}

impl VerifyReport {
    /// Overall verdict.
    pub fn ok(&self) -> bool {
        self.unit_multiple
            && self.central
            && self.degree_ok
            && self.filtration_positive
            && (!self.unit_pair_requested || self.unit_pair_ok)
    }
}

/// Solver output: the candidate, its central constant, the level trace, the
/// verifier outcome, and the classifying data when defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundingPairReport {
    /// The bounding candidate.
    pub b: Element,
    /// The central unit constant of its curvature.
    pub c: CoeffElem,
    /// Per-level solving trace.
    pub trace: Vec<LevelRecord>,
    /// Verifier outcome on the final candidate.
    pub verify: VerifyReport,
    /// Classifying data `(class tag, unit coefficient, even part)`, when the
    /// candidate is a unit pair.
    pub rho: Option<crate::invariants::RhoData>,
}

/// Evaluates the full curvature sum `Σ_k m̂_k(b, …, b)` under truncation.
pub fn curvature_sum(alg: &AInftyAlgebra, b: &Element) -> Result<Element, AlgebraError> {
    let cfg = &alg.tower;
    let mut out = Element::zero();
    for k in 0..=alg.k_max {
        let args = vec![b.clone(); k];
        out = out.add(cfg, &alg.eval_mk(&args)?);
    }
    Ok(out)
}

/// Checks whether the odd part of a scalar is an invertible multiple of the
/// parameter: nonzero, and carrying a parameter-linear term of zero energy.
pub fn odd_part_unit(cfg: &TowerConfig, scalar: &CoeffElem) -> bool {
    let odd = scalar.parity_split().1;
    if odd.is_zero() {
        return false;
    }
    odd.terms
        .keys()
        .any(|k| k.s_pow == 1 && k.energy(cfg).is_zero())
}

/// Verifies the bounding-pair conditions for a candidate.
pub fn verify_bounding_pair(
    model: &ModelDescriptor,
    b: &Element,
    check_unit_pair: bool,
) -> Result<VerifyReport, AlgebraError> {
    let alg = &model.alg;
    let cfg = &alg.tower;
    let unit = alg.basis.unit_index;
    let curvature = curvature_sum(alg, b)?;
    let c = curvature.coeff_of(unit);
    let unit_multiple = curvature.without_basis(unit).is_zero();
    let central = c.is_central(cfg);
    let degree_ok = matches!(c.degree(cfg), Ok(None) | Ok(Some(2)));
    let filtration_positive = match c.nu(cfg) {
        None => true,
        Some(nu) => nu.is_positive(),
    };
    let unit_pair_ok = odd_part_unit(cfg, &model.integral(b));
    let boundary_touch = c
        .terms
        .keys()
        .any(|k| k.energy(cfg) == cfg.e_max || k.s_pow == cfg.s_max);
    Ok(VerifyReport {
        curvature,
        c,
        unit_multiple,
        central,
        degree_ok,
        filtration_positive,
        unit_pair_requested: check_unit_pair,
        unit_pair_ok,
        boundary_touch,
    })
}

/// Runs the energy induction from the point-like seed `a ⊗ vol`.
pub fn solve_point_like(
    model: &ModelDescriptor,
    a: &CoeffElem,
    real: bool,
    pivot: PivotRule,
) -> Result<BoundingPairReport, SolveError> {
    let alg = &model.alg;
    let cfg = &alg.tower;
    match a.degree(cfg) {
        Ok(None) => {}
        Ok(Some(d)) if d == 1 - cfg.n => {}
        _ => {
            return Err(SolveError::BadSeed {
                detail: format!("seed must be homogeneous of degree {}", 1 - cfg.n),
            })
        }
    }
    for key in a.terms.keys() {
        if key.s_pow == 0 && !key.energy(cfg).is_positive() {
            return Err(SolveError::BadSeed {
                detail: String::from("seed has a term of zero combined filtration"),
            });
        }
    }
    let invol = model.involution();
    if real {
        if !model.real {
            return Err(SolveError::NotReal);
        }
        let mapped = a.phi_star(cfg).map_err(|_| SolveError::NotReal)?;
        if mapped != a.neg() {
            return Err(SolveError::NotReal);
        }
    }
    let mut b = Element::term(model.top_index, a.clone());
    let ladder = energy_ladder(alg, &b);
    let mut trace = Vec::new();
    for ell in 0..ladder.levels.len() {
        let dalg = deform(alg, &b)?;
        let o = obstruction_cocycle(&dalg, &ladder, ell)?;
        if o.is_zero() {
            trace.push(LevelRecord {
                level: ell,
                energy: ladder.levels[ell].clone(),
                obstruction: o,
                obstruction_dim: 0,
                primitive: Element::zero(),
            });
            continue;
        }
        if ell == 0 {
            // A zero-energy obstruction cannot be corrected inductively.
            return Err(SolveError::Obstructed {
                level: 0,
                dimension: 1,
                class: o,
            });
        }
        let energy = &ladder.levels[ell];
        let xi = match primitive_solve(&dalg, &o, energy, pivot) {
            Ok(xi) => xi,
            Err(SolveError::NoSolution {
                cokernel,
                dimension,
            }) => {
                return Err(SolveError::Obstructed {
                    level: ell,
                    class: cokernel,
                    dimension,
                })
            }
            Err(e) => return Err(e),
        };
        let mut xi = normalize_integral(model, &xi);
        if real {
            let mapped = xi.phi_star_with(cfg, &invol)?;
            xi = xi.add(cfg, &mapped.neg()).scale(&(rint(1) / rint(2)));
        }
        // The primitive property must survive normalization and averaging.
        let residual = quotient_project(
            alg,
            &dalg.m1b(&xi)?.add(cfg, &o).energy_component(cfg, energy),
        );
        if !residual.is_zero() {
            return Err(SolveError::NotClosed {
                detail: residual.render(&alg.basis),
            });
        }
        trace.push(LevelRecord {
            level: ell,
            energy: energy.clone(),
            obstruction: o,
            obstruction_dim: 1,
            primitive: xi.clone(),
        });
        b = b.add(cfg, &xi);
    }
    let check_unit_pair = odd_part_unit(cfg, a);
    let verify = verify_bounding_pair(model, &b, check_unit_pair)?;
    let c = verify.c.clone();
    let rho = crate::invariants::rho(model, &b).ok();
    Ok(BoundingPairReport {
        b,
        c,
        trace,
        verify,
        rho,
    })
}
