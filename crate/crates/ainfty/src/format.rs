//! JSON model files.
//!
//! A model file stores the full algebra — tower configuration, graded basis,
//! operation tables (one row per stored monomial term), pairing — together
//! with the descriptor metadata (name, declared outcome, reality flag, …).
//! Exact rationals are serialized as `"p/q"` strings; writing is deterministic
//! (ordered maps throughout), so `parse(render(x))` reproduces `x` and
//! `render(parse(s))` reproduces a file `s` this module wrote, byte for byte.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use ainfty_core::algebra::{AInftyAlgebra, Element, GradedBasis};
use ainfty_core::coeff::{CoeffElem, FormalVarSpec, MonoidSpec, TermKey, TowerConfig};
use ainfty_core::models::{ExpectedOutcome, ModelDescriptor};
use ainfty_core::Rat;

/// Errors raised while reading or writing model files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormatError {
    /// Filesystem failure.
    Io(String),
    /// The file is not valid JSON of the expected shape.
    Json(String),
    /// A rational string did not parse.
    BadRational(String),
    /// A referenced basis name does not exist.
    UnknownBasis(String),
    /// Two basis entries share a name.
    DuplicateName(String),
    /// The declared unit is missing or has nonzero degree.
    BadUnit(String),
    /// A stored class is outside the allowed cone.
    OutsideCone(Vec<i64>),
    /// A vector length does not match the monoid rank or variable count.
    RankMismatch { expected: usize, got: usize },
    /// A pairing entry carries a non-constant scalar, which the file format
    /// does not represent.
    UnrepresentablePairing(usize, usize),
    /// Any other structural defect.
    Invalid(String),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Io(e) => write!(f, "io error: {e}"),
            FormatError::Json(e) => write!(f, "malformed model file: {e}"),
            FormatError::BadRational(s) => write!(f, "bad rational {s:?}"),
            FormatError::UnknownBasis(s) => write!(f, "unknown basis element {s:?}"),
            FormatError::DuplicateName(s) => write!(f, "duplicate basis name {s:?}"),
            FormatError::BadUnit(s) => write!(f, "bad unit {s:?}"),
            FormatError::OutsideCone(beta) => {
                write!(f, "class {beta:?} is not in the allowed cone")
            }
            FormatError::RankMismatch { expected, got } => {
                write!(f, "expected vector of length {expected}, got {got}")
            }
            FormatError::UnrepresentablePairing(i, j) => {
                write!(f, "pairing entry ({i}, {j}) has a non-constant scalar")
            }
            FormatError::Invalid(s) => write!(f, "invalid model: {s}"),
        }
    }
}

impl std::error::Error for FormatError {}

/// Degree monoid section.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidFile {
    /// Lattice dimension.
    pub rank: usize,
    /// Energy functional, one rational per coordinate.
    pub omega: Vec<String>,
    /// Grading functional, one integer per coordinate.
    pub mu: Vec<i64>,
    /// Generators of the allowed cone.
    pub allowed_cone: Vec<Vec<i64>>,
}

/// One basis entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntryFile {
    /// Unique name.
    pub name: String,
    /// Degree.
    pub degree: i64,
}

/// One stored monomial term of one structure constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpTermFile {
    /// Arity.
    pub k: usize,
    /// Input basis names, `k` of them.
    pub inputs: Vec<String>,
    /// Monoid class of the coefficient monomial.
    pub beta: Vec<i64>,
    /// Formal-variable exponents.
    pub t_exp: Vec<u32>,
    /// Power of the odd parameter.
    pub s_pow: u32,
    /// Output basis name.
    pub output: String,
    /// Rational coefficient as `"p/q"`.
    pub coeff: String,
}

/// One pairing entry; the scalar must be a constant rational.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingEntryFile {
    /// Left basis index.
    pub i: usize,
    /// Right basis index.
    pub j: usize,
    /// Rational value as `"p/q"`.
    pub coeff: String,
}

/// Declared solver outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ExpectedFile {
    /// The inductive solver succeeds for admissible seeds.
    Unobstructed,
    /// The solver hits a nonzero obstruction class.
    Obstructed {
        /// Energy-ladder level of the obstruction.
        level: usize,
        /// Cokernel dimension.
        dimension: usize,
    },
}

/// Descriptor metadata carried alongside the algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorFile {
    /// Model name.
    pub name: String,
    /// Whether the model carries the degree involution as a self-duality.
    pub real: bool,
    /// Sphere-type residue dimension, when applicable.
    pub sphere_dim: Option<i64>,
    /// Name of the normalized top-degree basis element.
    pub top: String,
    /// Interior-class tag reported by the classifying map.
    pub gamma_tag: String,
    /// Declared solver outcome.
    pub expected: ExpectedFile,
    /// Whether cross-run consistency checks are waived for this model.
    pub exempt_consistency: bool,
}

/// Complete on-disk model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    /// Ambient dimension parameter; the odd parameter has degree `1 − n`.
    pub n: i64,
    /// Degree monoid.
    pub monoid: MonoidFile,
    /// Degrees of the formal deformation variables.
    pub t_vars: Vec<i64>,
    /// Energy cutoff as `"p/q"`.
    pub e_max: String,
    /// Parameter-power cutoff.
    pub s_max: u32,
    /// Maximum stored arity.
    pub k_max: usize,
    /// Graded basis.
    pub basis: Vec<BasisEntryFile>,
    /// Name of the unit basis element.
    pub unit: String,
    /// Operation tables, one row per stored monomial term, in canonical order
    /// (arity, input tuple, output index, monomial key).
    pub ops: Vec<OpTermFile>,
    /// Pairing table in canonical (i, j) order.
    pub pairing: Vec<PairingEntryFile>,
    /// Descriptor metadata.
    pub descriptor: DescriptorFile,
}

fn rat_to_string(q: &Rat) -> String {
    q.to_string()
}

fn rat_from_string(s: &str) -> Result<Rat, FormatError> {
    let q = Rat::from_str(s).map_err(|_| FormatError::BadRational(s.into()))?;
    // Only canonical spellings are accepted, so rendering is the inverse of
    // parsing on the nose.
    if q.to_string() != s {
        return Err(FormatError::BadRational(s.into()));
    }
    Ok(q)
}

/// Serializes a model descriptor into its file form.
pub fn from_model(md: &ModelDescriptor) -> Result<AlgebraFile, FormatError> {
    let alg = &md.alg;
    let cfg = &alg.tower;
    let mut ops = Vec::new();
    for ((k, tuple), value) in &alg.ops {
        let inputs: Vec<String> = tuple.iter().map(|&i| alg.basis.name(i).into()).collect();
        for (out, c) in &value.coeffs {
            for (key, q) in &c.terms {
                ops.push(OpTermFile {
                    k: *k,
                    inputs: inputs.clone(),
                    beta: key.beta.clone(),
                    t_exp: key.t_exp.clone(),
                    s_pow: key.s_pow,
                    output: alg.basis.name(*out).into(),
                    coeff: rat_to_string(q),
                });
            }
        }
    }
    let mut pairing = Vec::new();
    for ((i, j), c) in &alg.pairing {
        if c.is_zero() {
            continue;
        }
        let unit_key = TermKey::unit(cfg);
        if c.terms.len() != 1 || !c.terms.contains_key(&unit_key) {
            return Err(FormatError::UnrepresentablePairing(*i, *j));
        }
        pairing.push(PairingEntryFile {
            i: *i,
            j: *j,
            coeff: rat_to_string(&c.terms[&unit_key]),
        });
    }
    Ok(AlgebraFile {
        n: cfg.n,
        monoid: MonoidFile {
            rank: cfg.monoid.rank,
            omega: cfg.monoid.omega.iter().map(rat_to_string).collect(),
            mu: cfg.monoid.mu.clone(),
            allowed_cone: cfg.monoid.allowed_cone.clone(),
        },
        t_vars: cfg.vars.t_degrees.clone(),
        e_max: rat_to_string(&cfg.e_max),
        s_max: cfg.s_max,
        k_max: alg.k_max,
        basis: alg
            .basis
            .entries
            .iter()
            .map(|(name, degree)| BasisEntryFile {
                name: name.clone(),
                degree: *degree,
            })
            .collect(),
        unit: alg.basis.name(alg.basis.unit_index).into(),
        ops,
        pairing,
        descriptor: DescriptorFile {
            name: md.name.clone(),
            real: md.real,
            sphere_dim: md.sphere_dim,
            top: alg.basis.name(md.top_index).into(),
            gamma_tag: md.gamma_tag.clone(),
            expected: match md.expected {
                ExpectedOutcome::Unobstructed => ExpectedFile::Unobstructed,
                ExpectedOutcome::Obstructed { level, dimension } => {
                    ExpectedFile::Obstructed { level, dimension }
                }
            },
            exempt_consistency: md.exempt_consistency,
        },
    })
}

/// Rebuilds a model descriptor from its file form, with structural
/// validation: the monoid must satisfy energy positivity, names must resolve,
/// every stored class must lie in the allowed cone.
pub fn to_model(file: &AlgebraFile) -> Result<ModelDescriptor, FormatError> {
    let omega: Vec<Rat> = file
        .monoid
        .omega
        .iter()
        .map(|s| rat_from_string(s))
        .collect::<Result<_, _>>()?;
    let cfg = TowerConfig {
        n: file.n,
        e_max: rat_from_string(&file.e_max)?,
        s_max: file.s_max,
        monoid: MonoidSpec {
            rank: file.monoid.rank,
            omega,
            mu: file.monoid.mu.clone(),
            allowed_cone: file.monoid.allowed_cone.clone(),
        },
        vars: FormalVarSpec {
            t_degrees: file.t_vars.clone(),
        },
    };
    cfg.validate()
        .map_err(|e| FormatError::Invalid(e.to_string()))?;
    if !cfg.e_max.is_positive() || cfg.s_max == 0 {
        return Err(FormatError::Invalid(String::from(
            "truncation requires a positive energy cutoff and s_max ≥ 1",
        )));
    }
    let mut entries = Vec::new();
    for b in &file.basis {
        if entries.iter().any(|(name, _)| name == &b.name) {
            return Err(FormatError::DuplicateName(b.name.clone()));
        }
        entries.push((b.name.clone(), b.degree));
    }
    let unit_index = entries
        .iter()
        .position(|(name, _)| name == &file.unit)
        .ok_or_else(|| FormatError::BadUnit(file.unit.clone()))?;
    if entries[unit_index].1 != 0 {
        return Err(FormatError::BadUnit(file.unit.clone()));
    }
    let basis = GradedBasis {
        entries,
        unit_index,
    };
    let index_of = |name: &str| -> Result<usize, FormatError> {
        basis
            .index_of(name)
            .ok_or_else(|| FormatError::UnknownBasis(name.into()))
    };
    let mut ops: BTreeMap<(usize, Vec<usize>), Element> = BTreeMap::new();
    for row in &file.ops {
        if row.inputs.len() != row.k {
            return Err(FormatError::Invalid(format!(
                "arity {} row with {} inputs",
                row.k,
                row.inputs.len()
            )));
        }
        if row.beta.len() != cfg.monoid.rank {
            return Err(FormatError::RankMismatch {
                expected: cfg.monoid.rank,
                got: row.beta.len(),
            });
        }
        if row.t_exp.len() != cfg.vars.t_degrees.len() {
            return Err(FormatError::RankMismatch {
                expected: cfg.vars.t_degrees.len(),
                got: row.t_exp.len(),
            });
        }
        if !cfg.monoid.in_cone(&row.beta) {
            return Err(FormatError::OutsideCone(row.beta.clone()));
        }
        let tuple: Vec<usize> = row
            .inputs
            .iter()
            .map(|name| index_of(name))
            .collect::<Result<_, _>>()?;
        let out = index_of(&row.output)?;
        let key = TermKey {
            s_pow: row.s_pow,
            beta: row.beta.clone(),
            t_exp: row.t_exp.clone(),
        };
        let q = rat_from_string(&row.coeff)?;
        let term = Element::term(out, CoeffElem::monomial_unchecked(&cfg, key, q));
        let entry = ops.entry((row.k, tuple)).or_insert_with(Element::zero);
        *entry = entry.add(&cfg, &term);
    }
    ops.retain(|_, v| !v.is_zero());
    let mut pairing: BTreeMap<(usize, usize), CoeffElem> = BTreeMap::new();
    for row in &file.pairing {
        if row.i >= basis.len() || row.j >= basis.len() {
            return Err(FormatError::Invalid(format!(
                "pairing index ({}, {}) out of range",
                row.i, row.j
            )));
        }
        let q = rat_from_string(&row.coeff)?;
        pairing.insert((row.i, row.j), CoeffElem::one(&cfg).scale(&q));
    }
    let top_index = index_of(&file.descriptor.top)?;
    Ok(ModelDescriptor {
        name: file.descriptor.name.clone(),
        alg: AInftyAlgebra {
            basis,
            tower: cfg,
            ops,
            pairing,
            k_max: file.k_max,
            strict_arity: false,
        },
        real: file.descriptor.real,
        sphere_dim: file.descriptor.sphere_dim,
        top_index,
        gamma_tag: file.descriptor.gamma_tag.clone(),
        expected: match file.descriptor.expected {
            ExpectedFile::Unobstructed => ExpectedOutcome::Unobstructed,
            ExpectedFile::Obstructed { level, dimension } => {
                ExpectedOutcome::Obstructed { level, dimension }
            }
        },
        exempt_consistency: file.descriptor.exempt_consistency,
    })
}

/// Renders a model file as pretty JSON with a trailing newline.
pub fn render(file: &AlgebraFile) -> String {
    let mut out = serde_json::to_string_pretty(file).expect("model files always serialize");
    out.push('\n');
    out
}

/// Parses a model file from JSON text.
pub fn parse(text: &str) -> Result<AlgebraFile, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))
}

/// Writes a model descriptor to disk.
pub fn save_model(md: &ModelDescriptor, path: &Path) -> Result<(), FormatError> {
    let file = from_model(md)?;
    std::fs::write(path, render(&file)).map_err(|e| FormatError::Io(e.to_string()))
}

/// Reads a model descriptor from disk with structural validation.
pub fn load_model(path: &Path) -> Result<ModelDescriptor, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|e| FormatError::Io(e.to_string()))?;
    to_model(&parse(&text)?)
}

/// Reads a model and additionally requires the axiom suite to pass, as every
/// computation downstream of loading assumes; returns the first violation's
/// description otherwise.
pub fn load_validated(path: &Path) -> Result<ModelDescriptor, FormatError> {
    let md = load_model(path)?;
    let report = md.alg.check_axioms();
    if let Some(v) = report.first() {
        return Err(FormatError::Invalid(format!(
            "axiom check failed at property {}: {} ({})",
            v.property, v.context, v.detail
        )));
    }
    Ok(md)
}
