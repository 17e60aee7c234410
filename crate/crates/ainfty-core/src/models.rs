//! Verified fixture algebras and deliberate mutation fixtures.
//!
//! Constructors build every shipped model in code; the axiom checker is the
//! oracle and every constructor's output is expected to pass it exactly (the
//! test-suite freezes that expectation). Mutation fixtures flip exactly one
//! table entry each and are expected to fail at a declared property.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::algebra::{AInftyAlgebra, Element, GradedBasis, Involution};
use crate::coeff::{CoeffElem, FormalVarSpec, MonoidSpec, TermKey, TowerConfig};
use crate::{rint, Rat};

/// Declared solver outcome of a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpectedOutcome {
    /// The inductive solver succeeds for admissible seeds.
    Unobstructed,
    /// The solver hits a nonzero obstruction class.
    Obstructed {
        /// Energy-ladder level at which the obstruction appears.
        level: usize,
        /// Dimension of the obstruction class's cokernel.
        dimension: usize,
    },
}

/// A shipped model: algebra plus declared properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelDescriptor {
    /// Model name (also the fixture file stem).
    pub name: String,
    /// The algebra.
    pub alg: AInftyAlgebra,
    /// Whether the model carries the degree involution as a self-duality.
    pub real: bool,
    /// `Some(n)` when the residue has sphere-type cohomology in dimension `n`.
    pub sphere_dim: Option<i64>,
    /// Basis index of the normalized top-degree element (`∫ = 1`).
    pub top_index: usize,
    /// Declared interior-class tag reported by the classifying map.
    pub gamma_tag: String,
    /// Declared solver outcome.
    pub expected: ExpectedOutcome,
    /// Set when the model sits outside the existence theorem's hypotheses, so
    /// cross-run consistency checks do not apply.
    pub exempt_consistency: bool,
}

impl ModelDescriptor {
    /// Integral functional: the coefficient of the normalized top-degree
    /// basis element.
    pub fn integral(&self, x: &Element) -> CoeffElem {
        x.coeff_of(self.top_index)
    }

    /// The identity basis involution (used for real models).
    pub fn involution(&self) -> Involution {
        Involution::identity(self.alg.basis.len())
    }
}

/// One mutation fixture together with the structure property (canonical
/// numbering) its first reported violation must carry.
#[derive(Debug, Clone)]
pub struct MutationFixture {
    /// The mutated model.
    pub model: ModelDescriptor,
    /// Canonical index of the property the checker must report first.
    pub declared_property: u32,
}

/// Default parameter-power cutoff: wide enough that degree-bounded
/// computations in the window `[−(n+2), n+4]` are unaffected by truncation.
pub fn default_s_max(n: i64) -> u32 {
    (((n + 6) + (n - 2)) / (n - 1)) as u32
}

fn sphere_tower(n: i64, mu_gen: i64, rank: usize) -> TowerConfig {
    TowerConfig {
        n,
        e_max: rint(3),
        s_max: default_s_max(n),
        monoid: MonoidSpec {
            rank,
            omega: vec![Rat::one(); rank],
            mu: vec![mu_gen; rank],
            allowed_cone: (0..rank)
                .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
                .collect(),
        },
        vars: FormalVarSpec { t_degrees: vec![] },
    }
}

fn sphere_basis(n: i64) -> GradedBasis {
    GradedBasis {
        entries: vec![(String::from("e"), 0), (String::from("vol"), n)],
        unit_index: 0,
    }
}

/// Inserts the strict-unit products for every basis vector:
/// `m_2(e, v) = v` and `m_2(v, e) = (−1)^{|v|} v`.
fn insert_unit_products(
    ops: &mut BTreeMap<(usize, Vec<usize>), Element>,
    basis: &GradedBasis,
    cfg: &TowerConfig,
) {
    let e = basis.unit_index;
    for v in 0..basis.len() {
        ops.insert((2, vec![e, v]), Element::basis(cfg, v));
        let right = if basis.degree(v).rem_euclid(2) == 0 {
            Element::basis(cfg, v)
        } else {
            Element::basis(cfg, v).neg()
        };
        ops.insert((2, vec![v, e]), right);
    }
}

fn sphere_pairing(cfg: &TowerConfig, n: i64) -> BTreeMap<(usize, usize), CoeffElem> {
    // ⟨ξ, η⟩ = (−1)^{|η|} ∫ ξ∧η with ∫ vol = 1.
    let mut pairing = BTreeMap::new();
    let sign = if n.rem_euclid(2) == 0 {
        rint(1)
    } else {
        rint(-1)
    };
    pairing.insert((0, 1), CoeffElem::one(cfg).scale(&sign));
    pairing.insert((1, 0), CoeffElem::one(cfg));
    pairing
}

/// Minimal sphere-cohomology model: basis `{e, vol}`, cup product only.
pub fn formal_sphere(n: i64) -> ModelDescriptor {
    assert!(n >= 2, "needs n ≥ 2");
    let cfg = sphere_tower(n, 2 * n, 1);
    let basis = sphere_basis(n);
    let mut ops = BTreeMap::new();
    insert_unit_products(&mut ops, &basis, &cfg);
    let pairing = sphere_pairing(&cfg, n);
    ModelDescriptor {
        name: alloc::format!("formal_sphere_{n}"),
        alg: AInftyAlgebra {
            basis,
            tower: cfg,
            ops,
            pairing,
            k_max: 4,
            strict_arity: false,
        },
        real: false,
        sphere_dim: Some(n),
        top_index: 1,
        gamma_tag: String::from("zero"),
        expected: ExpectedOutcome::Unobstructed,
        exempt_consistency: false,
    }
}

/// Sphere model with the deformed product `vol ∗ vol = T^β·e`, where the
/// generator `β` has grading `2n` and energy one.
pub fn quantum_sphere(n: i64) -> ModelDescriptor {
    assert!(n >= 2 && n % 2 == 0, "needs even n ≥ 2");
    let mut model = formal_sphere(n);
    model.name = alloc::format!("quantum_sphere_{n}");
    let cfg = &model.alg.tower;
    let t_beta = CoeffElem::monomial(
        cfg,
        TermKey {
            s_pow: 0,
            beta: vec![1],
            t_exp: vec![],
        },
        Rat::one(),
    );
    model
        .alg
        .ops
        .insert((2, vec![1, 1]), Element::term(0, t_beta));
    model.sphere_dim = Some(n);
    model.gamma_tag = String::from("zero");
    model
}

/// The real variant: the even-dimensional quantum sphere carries the identity
/// basis involution as a self-duality (all stored classes have grading
/// divisible by four).
pub fn real_model() -> ModelDescriptor {
    let mut model = quantum_sphere(2);
    model.name = String::from("real_model_2");
    model.real = true;
    model
}

/// Four-basis fixture whose curvature hits a nonzero class of the twisted
/// complex at the first positive energy level: `m_0 = T^{β}·w` with `w` a
/// degree-2 vector that no operation and no pairing entry ever produces.
pub fn obstructed_fixture() -> ModelDescriptor {
    let n = 2;
    let cfg = TowerConfig {
        n,
        e_max: rint(2),
        s_max: default_s_max(n),
        monoid: MonoidSpec {
            rank: 1,
            omega: vec![Rat::one()],
            mu: vec![0],
            allowed_cone: vec![vec![1]],
        },
        vars: FormalVarSpec { t_degrees: vec![] },
    };
    let basis = GradedBasis {
        entries: vec![
            (String::from("e"), 0),
            (String::from("z"), 1),
            (String::from("w"), 2),
            (String::from("vol"), 2),
        ],
        unit_index: 0,
    };
    let mut ops = BTreeMap::new();
    insert_unit_products(&mut ops, &basis, &cfg);
    let t_beta = CoeffElem::monomial(
        &cfg,
        TermKey {
            s_pow: 0,
            beta: vec![1],
            t_exp: vec![],
        },
        Rat::one(),
    );
    ops.insert((0, vec![]), Element::term(2, t_beta));
    let mut pairing = BTreeMap::new();
    pairing.insert((0, 3), CoeffElem::one(&cfg));
    pairing.insert((3, 0), CoeffElem::one(&cfg));
    ModelDescriptor {
        name: String::from("obstructed"),
        alg: AInftyAlgebra {
            basis,
            tower: cfg,
            ops,
            pairing,
            k_max: 4,
            strict_arity: false,
        },
        real: false,
        sphere_dim: None,
        top_index: 3,
        gamma_tag: String::from("obstructed-curvature"),
        expected: ExpectedOutcome::Obstructed {
            level: 1,
            dimension: 1,
        },
        exempt_consistency: true,
    }
}

/// Fixture mimicking a broken energy monoid: a second generator of negative
/// energy lets a nonconstant zero-energy monomial appear in a structure
/// constant. Built through the unchecked constructors on purpose; it is only
/// meant for the generation/convergence validators, not the axiom checker.
pub fn disaster_fixture() -> ModelDescriptor {
    let n = 2;
    let cfg = TowerConfig {
        n,
        e_max: rint(3),
        s_max: default_s_max(n),
        monoid: MonoidSpec {
            rank: 2,
            omega: vec![Rat::one(), rint(-1)],
            mu: vec![4, 0],
            allowed_cone: vec![vec![1, 0], vec![0, 1]],
        },
        vars: FormalVarSpec { t_degrees: vec![] },
    };
    let basis = sphere_basis(n);
    let mut ops = BTreeMap::new();
    insert_unit_products(&mut ops, &basis, &cfg);
    // Zero-energy, nonconstant monomial: ω([1,1]) = 0 but [1,1] ≠ 0.
    let bad = CoeffElem::monomial_unchecked(
        &cfg,
        TermKey {
            s_pow: 0,
            beta: vec![1, 1],
            t_exp: vec![],
        },
        Rat::one(),
    );
    ops.insert((2, vec![1, 1]), Element::term(0, bad));
    let pairing = sphere_pairing(&cfg, n);
    ModelDescriptor {
        name: String::from("disaster"),
        alg: AInftyAlgebra {
            basis,
            tower: cfg,
            ops,
            pairing,
            k_max: 4,
            strict_arity: false,
        },
        real: false,
        sphere_dim: None,
        top_index: 1,
        gamma_tag: String::from("invalid"),
        expected: ExpectedOutcome::Unobstructed,
        exempt_consistency: true,
    }
}

/// The six single-mutation fixtures for the axiom checker, each declared with
/// the property index its first violation must carry.
pub fn mutation_fixtures() -> Vec<MutationFixture> {
    let mut out = Vec::new();

    // (a) One pairing entry sign flipped → graded antisymmetry (8).
    let mut m = formal_sphere(2);
    m.name = String::from("mut_pairing_sign");
    let flipped = m.alg.pairing.get(&(0, 1)).unwrap().neg();
    m.alg.pairing.insert((0, 1), flipped);
    out.push(MutationFixture {
        model: m,
        declared_property: 8,
    });

    // (b) Right-unit product sign flipped on an odd generator → strict unit (5).
    let mut m = formal_sphere(3);
    m.name = String::from("mut_unit_sign");
    let flipped = m.alg.ops.get(&(2, vec![1, 0])).unwrap().neg();
    m.alg.ops.insert((2, vec![1, 0]), flipped);
    out.push(MutationFixture {
        model: m,
        declared_property: 5,
    });

    // (c) A unit-hitting arity-4 operation → unit annihilation (4). The
    // quadratic relations up to arity 4 never compose an arity-4 operation
    // with another one, so only the unit property sees it.
    let mut m = formal_sphere(2);
    m.name = String::from("mut_unit_arity4");
    let cfg = m.alg.tower.clone();
    m.alg
        .ops
        .insert((4, vec![0, 0, 1, 1]), Element::basis(&cfg, 1));
    out.push(MutationFixture {
        model: m,
        declared_property: 4,
    });

    // (d) A differential with no compensating pairing → cyclic symmetry (9).
    let n = 2;
    let cfg = sphere_tower(n, 2 * n, 1);
    let basis = GradedBasis {
        entries: vec![
            (String::from("e"), 0),
            (String::from("z"), 1),
            (String::from("vol"), 2),
        ],
        unit_index: 0,
    };
    let mut ops = BTreeMap::new();
    insert_unit_products(&mut ops, &basis, &cfg);
    ops.insert((1, vec![1]), Element::basis(&cfg, 2));
    let pairing = {
        let mut p = BTreeMap::new();
        p.insert((0, 2), CoeffElem::one(&cfg));
        p.insert((2, 0), CoeffElem::one(&cfg));
        p
    };
    out.push(MutationFixture {
        model: ModelDescriptor {
            name: String::from("mut_uncyclic_differential"),
            alg: AInftyAlgebra {
                basis,
                tower: cfg,
                ops,
                pairing,
                k_max: 4,
                strict_arity: false,
            },
            real: false,
            sphere_dim: None,
            top_index: 2,
            gamma_tag: String::from("invalid"),
            expected: ExpectedOutcome::Unobstructed,
            exempt_consistency: true,
        },
        declared_property: 9,
    });

    // (e) A non-associative product → quadratic relations (2).
    let n = 2;
    let cfg = sphere_tower(n, 2 * n, 1);
    let basis = GradedBasis {
        entries: vec![
            (String::from("e"), 0),
            (String::from("u"), 0),
            (String::from("vol"), 2),
        ],
        unit_index: 0,
    };
    let mut ops = BTreeMap::new();
    insert_unit_products(&mut ops, &basis, &cfg);
    ops.insert((2, vec![1, 1]), Element::basis(&cfg, 0));
    let pairing = {
        let mut p = BTreeMap::new();
        p.insert((0, 2), CoeffElem::one(&cfg));
        p.insert((2, 0), CoeffElem::one(&cfg));
        p
    };
    out.push(MutationFixture {
        model: ModelDescriptor {
            name: String::from("mut_nonassociative"),
            alg: AInftyAlgebra {
                basis,
                tower: cfg,
                ops,
                pairing,
                k_max: 4,
                strict_arity: false,
            },
            real: false,
            sphere_dim: None,
            top_index: 2,
            gamma_tag: String::from("invalid"),
            expected: ExpectedOutcome::Unobstructed,
            exempt_consistency: true,
        },
        declared_property: 2,
    });

    // (f) Zero-energy curvature → filtration positivity (3).
    let mut m = formal_sphere(2);
    m.name = String::from("mut_flat_curvature");
    let cfg = m.alg.tower.clone();
    m.alg.ops.insert((0, vec![]), Element::basis(&cfg, 1));
    out.push(MutationFixture {
        model: m,
        declared_property: 3,
    });

    out
}

/// Real-mutation fixture: one structure-constant term whose class flips sign
/// under the degree involution, so the self-duality defect is nonzero at
/// `(vol, vol)`. Exercised through the defect, not the axiom checker.
pub fn real_mutation_fixture() -> ModelDescriptor {
    let n = 2;
    let mut cfg = sphere_tower(n, 2 * n, 2);
    // Second generator with grading 2 ≡ 2 (mod 4): picks up −1 under the
    // involution.
    cfg.monoid.mu = vec![4, 2];
    let basis = sphere_basis(n);
    let mut ops = BTreeMap::new();
    insert_unit_products(&mut ops, &basis, &cfg);
    let t_a = CoeffElem::monomial(
        &cfg,
        TermKey {
            s_pow: 0,
            beta: vec![1, 0],
            t_exp: vec![],
        },
        Rat::one(),
    );
    let t_b = CoeffElem::monomial(
        &cfg,
        TermKey {
            s_pow: 0,
            beta: vec![0, 1],
            t_exp: vec![],
        },
        Rat::one(),
    );
    let value = Element::term(0, t_a).add(&cfg, &Element::term(1, t_b));
    ops.insert((2, vec![1, 1]), value);
    let pairing = sphere_pairing(&cfg, n);
    ModelDescriptor {
        name: String::from("mut_unreal_class"),
        alg: AInftyAlgebra {
            basis,
            tower: cfg,
            ops,
            pairing,
            k_max: 4,
            strict_arity: false,
        },
        real: true,
        sphere_dim: None,
        top_index: 1,
        gamma_tag: String::from("invalid"),
        expected: ExpectedOutcome::Unobstructed,
        exempt_consistency: true,
    }
}

/// Every shipped (valid) model, for suite-wide iteration.
pub fn shipped_models() -> Vec<ModelDescriptor> {
    vec![
        formal_sphere(2),
        formal_sphere(3),
        quantum_sphere(2),
        real_model(),
        obstructed_fixture(),
    ]
}
