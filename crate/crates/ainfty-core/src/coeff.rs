//! The truncated coefficient tower.
//!
//! Scalars are finite sums of monomials `q · s^i · T^β · t_0^{l_0} ⋯ t_N^{l_N}`
//! with `q` an exact rational, `s` the odd formal parameter of degree `1 − n`,
//! `β` a class in a finitely generated degree monoid carrying an energy
//! functional `ω` and a grading functional `μ`, and `t_j` formal deformation
//! variables with assigned degrees. A truncation pair `(e_max, s_max)` bounds
//! the stored energy (`ω(β)` plus total `t`-order) and the `s`-power, so every
//! product is finite.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::{rint, Rat};

/// Errors raised by coefficient-tower operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoeffError {
    /// A generator of the degree monoid has negative energy, or zero energy
    /// while being a nonzero vector.
    BadGenerator { index: usize },
    /// A monomial exponent vector is not a non-negative combination of the
    /// allowed generators (within the energy budget).
    OutsideCone { beta: Vec<i64> },
    /// A vector's length does not match the monoid rank or variable count.
    RankMismatch { expected: usize, got: usize },
    /// The involution is undefined: some stored class has odd grading.
    OddMaslov { beta: Vec<i64> },
    /// The involution is undefined: some formal variable has odd degree.
    OddFormalDegree { index: usize },
    /// An operand is not homogeneous where homogeneity is required.
    NonHomogeneous,
}

impl fmt::Display for CoeffError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffError::BadGenerator { index } => {
                write!(f, "monoid generator {index} violates energy positivity")
            }
            CoeffError::OutsideCone { beta } => {
                write!(f, "class {beta:?} is not in the allowed cone")
            }
            CoeffError::RankMismatch { expected, got } => {
                write!(f, "expected vector of length {expected}, got {got}")
            }
            CoeffError::OddMaslov { beta } => {
                write!(f, "class {beta:?} has odd grading; involution undefined")
            }
            CoeffError::OddFormalDegree { index } => {
                write!(
                    f,
                    "formal variable t_{index} has odd degree; involution undefined"
                )
            }
            CoeffError::NonHomogeneous => write!(f, "operand is not homogeneous"),
        }
    }
}

/// Finitely generated degree monoid with energy and grading functionals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidSpec {
    /// Dimension of the ambient lattice ℤ^rank.
    pub rank: usize,
    /// Rational energy functional, one value per lattice coordinate.
    pub omega: Vec<Rat>,
    /// Integer grading functional, one value per lattice coordinate.
    pub mu: Vec<i64>,
    /// Generators of the allowed cone; stored classes must be ℕ-combinations.
    pub allowed_cone: Vec<Vec<i64>>,
}

impl MonoidSpec {
    /// Validates energy positivity: every generator has `ω ≥ 0`, and `ω = 0`
    /// only for the zero vector.
    pub fn validate(&self) -> Result<(), CoeffError> {
        if self.omega.len() != self.rank {
            return Err(CoeffError::RankMismatch {
                expected: self.rank,
                got: self.omega.len(),
            });
        }
        if self.mu.len() != self.rank {
            return Err(CoeffError::RankMismatch {
                expected: self.rank,
                got: self.mu.len(),
            });
        }
        for (i, g) in self.allowed_cone.iter().enumerate() {
            if g.len() != self.rank {
                return Err(CoeffError::RankMismatch {
                    expected: self.rank,
                    got: g.len(),
                });
            }
            let e = self.omega_of(g);
            if e.is_negative() || (e.is_zero() && g.iter().any(|&x| x != 0)) {
                return Err(CoeffError::BadGenerator { index: i });
            }
        }
        Ok(())
    }

    /// Energy `ω(β)` of a lattice vector.
    pub fn omega_of(&self, beta: &[i64]) -> Rat {
        beta.iter()
            .zip(&self.omega)
            .map(|(&b, w)| w * rint(b))
            .fold(Rat::zero(), |a, x| a + x)
    }

    /// Grading `μ(β)` of a lattice vector.
    pub fn mu_of(&self, beta: &[i64]) -> i64 {
        beta.iter().zip(&self.mu).map(|(&b, &m)| m * b).sum()
    }

    /// Whether `beta` is an ℕ-combination of the allowed generators, decided
    /// by bounded search (every nonzero generator has positive energy, so the
    /// search tree below the energy of `beta` is finite).
    pub fn in_cone(&self, beta: &[i64]) -> bool {
        if beta.iter().all(|&x| x == 0) {
            return true;
        }
        let gens: Vec<&Vec<i64>> = self
            .allowed_cone
            .iter()
            .filter(|g| g.iter().any(|&x| x != 0))
            .collect();
        self.in_cone_from(beta, &gens, 0)
    }

    fn in_cone_from(&self, beta: &[i64], gens: &[&Vec<i64>], start: usize) -> bool {
        if beta.iter().all(|&x| x == 0) {
            return true;
        }
        if self.omega_of(beta).is_negative() {
            return false;
        }
        for (i, g) in gens.iter().enumerate().skip(start) {
            let rest: Vec<i64> = beta.iter().zip(g.iter()).map(|(&b, &x)| b - x).collect();
            // Only descend while the residual energy stays non-negative; each
            // subtraction strictly decreases energy, so the recursion is finite.
            if !self.omega_of(&rest).is_negative() && self.in_cone_from(&rest, gens, i) {
                return true;
            }
        }
        false
    }

    /// Enumerates every cone class with energy at most `e_max`, in ascending
    /// lexicographic order.
    pub fn enumerate_cone(&self, e_max: &Rat) -> Vec<Vec<i64>> {
        let mut seen: BTreeMap<Vec<i64>, ()> = BTreeMap::new();
        let zero = vec![0i64; self.rank];
        let mut frontier = vec![zero.clone()];
        seen.insert(zero, ());
        while let Some(beta) = frontier.pop() {
            for g in &self.allowed_cone {
                if g.iter().all(|&x| x == 0) {
                    continue;
                }
                let next: Vec<i64> = beta.iter().zip(g.iter()).map(|(&b, &x)| b + x).collect();
                if &self.omega_of(&next) <= e_max && !seen.contains_key(&next) {
                    seen.insert(next.clone(), ());
                    frontier.push(next);
                }
            }
        }
        seen.into_keys().collect()
    }
}

/// Formal deformation variables and their degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalVarSpec {
    /// Degree of each variable `t_0 .. t_N`.
    pub t_degrees: Vec<i64>,
}

/// Full configuration of the coefficient tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerConfig {
    /// Sets the degree of the odd parameter: `|s| = 1 − n`.
    pub n: i64,
    /// Energy cutoff: terms with `ω(β) + Σ t`-order beyond it are dropped.
    pub e_max: Rat,
    /// `s`-power cutoff.
    pub s_max: u32,
    /// Degree monoid.
    pub monoid: MonoidSpec,
    /// Formal variables.
    pub vars: FormalVarSpec,
}

impl TowerConfig {
    /// Degree of the odd parameter `s`.
    pub fn s_degree(&self) -> i64 {
        1 - self.n
    }

    /// Validates the monoid and basic shape.
    pub fn validate(&self) -> Result<(), CoeffError> {
        self.monoid.validate()
    }
}

/// Key of one stored monomial: `s`-power, monoid class, variable exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TermKey {
    /// Exponent of the odd parameter.
    pub s_pow: u32,
    /// Monoid class (exponent vector of `T^β`).
    pub beta: Vec<i64>,
    /// Exponents of the formal variables.
    pub t_exp: Vec<u32>,
}

impl TermKey {
    /// The `s`-free, energy-free unit key.
    pub fn unit(cfg: &TowerConfig) -> Self {
        TermKey {
            s_pow: 0,
            beta: vec![0; cfg.monoid.rank],
            t_exp: vec![0; cfg.vars.t_degrees.len()],
        }
    }

    /// Total degree of the monomial under `cfg`.
    pub fn degree(&self, cfg: &TowerConfig) -> i64 {
        self.s_pow as i64 * cfg.s_degree()
            + cfg.monoid.mu_of(&self.beta)
            + self
                .t_exp
                .iter()
                .zip(&cfg.vars.t_degrees)
                .map(|(&l, &d)| l as i64 * d)
                .sum::<i64>()
    }

    /// Degree of the `s`-part alone: `s_pow · (1 − n)`.
    pub fn s_degree(&self, cfg: &TowerConfig) -> i64 {
        self.s_pow as i64 * cfg.s_degree()
    }

    /// Degree of the `s`-free part: `μ(β) + Σ l_j · |t_j|`.
    pub fn r_degree(&self, cfg: &TowerConfig) -> i64 {
        self.degree(cfg) - self.s_degree(cfg)
    }

    /// Filtration value of the monomial: `ω(β) + Σ t`-order.
    pub fn energy(&self, cfg: &TowerConfig) -> Rat {
        cfg.monoid.omega_of(&self.beta) + rint(self.t_exp.iter().map(|&l| l as i64).sum())
    }

    /// ℤ₂ parity induced from the `s`-factor: `s_pow · (1 − n) mod 2`.
    pub fn s_factor_parity(&self, cfg: &TowerConfig) -> u8 {
        ((self.s_pow as i64 * cfg.s_degree()).rem_euclid(2)) as u8
    }
}

/// Sparse scalar of the truncated tower: monomial key → nonzero rational.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoeffElem {
    /// Stored terms; values are never zero.
    pub terms: BTreeMap<TermKey, Rat>,
}

impl CoeffElem {
    /// The zero scalar.
    pub fn zero() -> Self {
        CoeffElem::default()
    }

    /// The unit scalar `1`.
    pub fn one(cfg: &TowerConfig) -> Self {
        CoeffElem::monomial(cfg, TermKey::unit(cfg), Rat::one())
    }

    /// A single monomial, subject to truncation and cone validation.
    ///
    /// Panics on classes outside the allowed cone; use
    /// [`CoeffElem::monomial_unchecked`] for deliberately malformed fixtures.
    pub fn monomial(cfg: &TowerConfig, key: TermKey, q: Rat) -> Self {
        assert!(
            cfg.monoid.in_cone(&key.beta),
            "class outside the allowed cone"
        );
        Self::monomial_unchecked(cfg, key, q)
    }

    /// A single monomial, subject to truncation but not cone validation.
    pub fn monomial_unchecked(cfg: &TowerConfig, key: TermKey, q: Rat) -> Self {
        let mut out = CoeffElem::zero();
        out.add_term(cfg, key, q);
        out
    }

    /// The pure power `s^k`.
    pub fn s_power(cfg: &TowerConfig, k: u32) -> Self {
        let mut key = TermKey::unit(cfg);
        key.s_pow = k;
        CoeffElem::monomial(cfg, key, Rat::one())
    }

    fn add_term(&mut self, cfg: &TowerConfig, key: TermKey, q: Rat) {
        if q.is_zero() || key.s_pow > cfg.s_max || key.energy(cfg) > cfg.e_max {
            return;
        }
        let entry = self.terms.entry(key);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(q);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + q;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// True iff no terms are stored.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of two scalars.
    pub fn add(&self, cfg: &TowerConfig, other: &CoeffElem) -> CoeffElem {
        let mut out = self.clone();
        for (k, q) in &other.terms {
            out.add_term(cfg, k.clone(), q.clone());
        }
        out
    }

    /// Additive inverse.
    pub fn neg(&self) -> CoeffElem {
        CoeffElem {
            terms: self
                .terms
                .iter()
                .map(|(k, q)| (k.clone(), -q.clone()))
                .collect(),
        }
    }

    /// Rational rescaling.
    pub fn scale(&self, q: &Rat) -> CoeffElem {
        if q.is_zero() {
            return CoeffElem::zero();
        }
        CoeffElem {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * q)).collect(),
        }
    }

    /// Sign-free convolution product, truncated to `(e_max, s_max)`.
    ///
    /// Crossing signs between odd factors are attached at the element level by
    /// the sign engine, never here.
    pub fn mul(&self, cfg: &TowerConfig, other: &CoeffElem) -> CoeffElem {
        let mut out = CoeffElem::zero();
        for (ka, qa) in &self.terms {
            for (kb, qb) in &other.terms {
                let key = TermKey {
                    s_pow: ka.s_pow + kb.s_pow,
                    beta: ka.beta.iter().zip(&kb.beta).map(|(&x, &y)| x + y).collect(),
                    t_exp: ka
                        .t_exp
                        .iter()
                        .zip(&kb.t_exp)
                        .map(|(&x, &y)| x + y)
                        .collect(),
                };
                out.add_term(cfg, key, qa * qb);
            }
        }
        out
    }

    /// Filtration value: minimum of `ω(β) + Σ t`-order over stored terms;
    /// `None` encodes `+∞` (the zero scalar).
    pub fn nu(&self, cfg: &TowerConfig) -> Option<Rat> {
        self.terms.keys().map(|k| k.energy(cfg)).min()
    }

    /// Parameter filtration: minimum of `s_pow · (n − 1)`; `None` is `+∞`.
    pub fn nu_s(&self, cfg: &TowerConfig) -> Option<Rat> {
        self.terms
            .keys()
            .map(|k| rint(k.s_pow as i64 * (cfg.n - 1)))
            .min()
    }

    /// Combined filtration: minimum of `nu_s + nu` over stored terms.
    pub fn nu_combined(&self, cfg: &TowerConfig) -> Option<Rat> {
        self.terms
            .keys()
            .map(|k| rint(k.s_pow as i64 * (cfg.n - 1)) + k.energy(cfg))
            .min()
    }

    /// Common degree of all stored terms: `Ok(None)` for zero, error if mixed.
    pub fn degree(&self, cfg: &TowerConfig) -> Result<Option<i64>, CoeffError> {
        let mut deg = None;
        for k in self.terms.keys() {
            let d = k.degree(cfg);
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => return Err(CoeffError::NonHomogeneous),
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Splits into terms of even and odd `s`-power: `x = x⁰ + x¹`.
    pub fn parity_split(&self) -> (CoeffElem, CoeffElem) {
        let mut even = CoeffElem::zero();
        let mut odd = CoeffElem::zero();
        for (k, q) in &self.terms {
            if k.s_pow % 2 == 0 {
                even.terms.insert(k.clone(), q.clone());
            } else {
                odd.terms.insert(k.clone(), q.clone());
            }
        }
        (even, odd)
    }

    /// Projection onto odd `s`-powers (the graded cyclic trace on the
    /// parameter ring).
    pub fn f_project(&self) -> CoeffElem {
        self.parity_split().1
    }

    /// The degree involution: each monomial `x` is multiplied by
    /// `(−1)^{μ(β)/2} · (−1)^{d(d−1)/2} · Π_j (−1)^{l_j·|t_j|/2}` where
    /// `d = s_pow·(1−n)`.
    ///
    /// Requires every stored `μ(β)` and every variable degree to be even.
    pub fn phi_star(&self, cfg: &TowerConfig) -> Result<CoeffElem, CoeffError> {
        let mut out = CoeffElem::zero();
        for (k, q) in &self.terms {
            let mu = cfg.monoid.mu_of(&k.beta);
            if mu.rem_euclid(2) != 0 {
                return Err(CoeffError::OddMaslov {
                    beta: k.beta.clone(),
                });
            }
            let mut exp = mu.div_euclid(2);
            for (j, (&l, &td)) in k.t_exp.iter().zip(&cfg.vars.t_degrees).enumerate() {
                if l > 0 {
                    if td.rem_euclid(2) != 0 {
                        return Err(CoeffError::OddFormalDegree { index: j });
                    }
                    exp += l as i64 * td.div_euclid(2);
                }
            }
            let d = k.s_degree(cfg);
            exp += d * (d - 1) / 2;
            let signed = if exp.rem_euclid(2) == 0 {
                q.clone()
            } else {
                -q.clone()
            };
            out.add_term(cfg, k.clone(), signed);
        }
        Ok(out)
    }

    /// ℤ₂ parity in the grading induced from the `s`-factor; errors unless all
    /// terms share one parity.
    pub fn s_factor_parity(&self, cfg: &TowerConfig) -> Result<Option<u8>, CoeffError> {
        let mut parity = None;
        for k in self.terms.keys() {
            let p = k.s_factor_parity(cfg);
            match parity {
                None => parity = Some(p),
                Some(prev) if prev != p => return Err(CoeffError::NonHomogeneous),
                _ => {}
            }
        }
        Ok(parity)
    }

    /// Scalar bracket: zero unless both operands are odd, in which case it is
    /// twice the product. Operands must be ℤ₂-homogeneous.
    pub fn bracket_scalar(
        &self,
        cfg: &TowerConfig,
        other: &CoeffElem,
    ) -> Result<CoeffElem, CoeffError> {
        let pa = self.s_factor_parity(cfg)?;
        let pb = other.s_factor_parity(cfg)?;
        match (pa, pb) {
            (Some(1), Some(1)) => Ok(self.mul(cfg, other).scale(&rint(2))),
            _ => Ok(CoeffElem::zero()),
        }
    }

    /// Whether the scalar is central: every term has even induced parity.
    pub fn is_central(&self, cfg: &TowerConfig) -> bool {
        self.terms.keys().all(|k| k.s_factor_parity(cfg) == 0)
    }

    /// Keeps only terms whose filtration value equals `energy`.
    pub fn energy_component(&self, cfg: &TowerConfig, energy: &Rat) -> CoeffElem {
        CoeffElem {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| &k.energy(cfg) == energy)
                .map(|(k, q)| (k.clone(), q.clone()))
                .collect(),
        }
    }

    /// Keeps only terms whose filtration value is strictly above `energy`.
    pub fn energy_above(&self, cfg: &TowerConfig, energy: &Rat) -> CoeffElem {
        CoeffElem {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| &k.energy(cfg) > energy)
                .map(|(k, q)| (k.clone(), q.clone()))
                .collect(),
        }
    }

    /// Renders the scalar for reports, e.g. `-1/2*s^2*T^[1,0]*t0^2`.
    pub fn render(&self) -> String {
        use core::fmt::Write;
        if self.is_zero() {
            return String::from("0");
        }
        let mut out = String::new();
        for (i, (k, q)) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            let _ = write!(out, "{q}");
            if k.s_pow == 1 {
                out.push_str("*s");
            } else if k.s_pow > 1 {
                let _ = write!(out, "*s^{}", k.s_pow);
            }
            if k.beta.iter().any(|&b| b != 0) {
                out.push_str("*T^[");
                for (j, b) in k.beta.iter().enumerate() {
                    if j > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{b}");
                }
                out.push(']');
            }
            for (j, &l) in k.t_exp.iter().enumerate() {
                if l == 1 {
                    let _ = write!(out, "*t{j}");
                } else if l > 1 {
                    let _ = write!(out, "*t{j}^{l}");
                }
            }
        }
        out
    }
}
