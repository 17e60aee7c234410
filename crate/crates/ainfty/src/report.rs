//! JSON report types written by the command-line binary.
//!
//! All rationals appear as `"p/q"` strings; scalars and elements appear in
//! the expression mini-language of [`crate::expr`], so every value in a
//! report can be fed back into the tools. Serialization is deterministic:
//! identical inputs produce byte-identical reports.

use serde::{Deserialize, Serialize};

use ainfty_core::algebra::{AxiomReport, GradedBasis};
use ainfty_core::invariants::RhoData;
use ainfty_core::mcsolve::{BoundingPairReport, PivotRule};
use ainfty_core::spectral::{SSPage, TheoremReport};

/// One axiom violation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationFile {
    /// Structure-property index (1–10; 0 is table well-formedness).
    pub property: u32,
    /// Location of the violation.
    pub context: String,
    /// Rendered defect.
    pub detail: String,
}

/// Report of `check-axioms` and `extend`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckFile {
    /// Model name.
    pub model: String,
    /// `"check-axioms"` or `"extend"`.
    pub command: String,
    /// Maximum tuple arity checked.
    pub arity: usize,
    /// Number of argument elements in the pool.
    pub pool_size: usize,
    /// Whether the suite passed.
    pub ok: bool,
    /// All violations in canonical order.
    pub violations: Vec<ViolationFile>,
}

/// Builds the checker report file.
pub fn check_file(
    model: &str,
    command: &str,
    arity: usize,
    pool_size: usize,
    report: &AxiomReport,
) -> CheckFile {
    CheckFile {
        model: model.into(),
        command: command.into(),
        arity,
        pool_size,
        ok: report.ok(),
        violations: report
            .violations
            .iter()
            .map(|v| ViolationFile {
                property: v.property,
                context: v.context.clone(),
                detail: v.detail.clone(),
            })
            .collect(),
    }
}

/// One solver level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFile {
    /// Ladder level index.
    pub level: usize,
    /// Energy of the level as `"p/q"`.
    pub energy: String,
    /// Obstruction cocycle at the level.
    pub obstruction: String,
    /// Its reported dimension.
    pub obstruction_dim: usize,
    /// Correction added at the level.
    pub primitive: String,
}

/// Verification block of a solver report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyFile {
    /// Full curvature sum.
    pub curvature: String,
    /// Central unit multiple extracted from it.
    pub c: String,
    /// Whether the curvature is a unit multiple.
    pub unit_multiple: bool,
    /// Whether `c` is central.
    pub central: bool,
    /// Whether `c` has degree 2 (or vanishes).
    pub degree_ok: bool,
    /// Whether `c` has positive filtration.
    pub filtration_positive: bool,
    /// Whether the unit-pair condition was requested.
    pub unit_pair_requested: bool,
    /// Whether the unit-pair condition holds.
    pub unit_pair_ok: bool,
    /// Whether `c`'s support touches the truncation boundary, in which case
    /// exactness past the cutoff is not asserted.
    pub boundary_touch: bool,
}

/// Classifying data block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoFile {
    /// Declared interior-class tag.
    pub gamma_tag: String,
    /// Odd part of the integral with one parameter factored out.
    pub unit_coeff: String,
    /// Even part of the integral.
    pub even_part: String,
}

/// Obstruction block of a failed solve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionFile {
    /// Ladder level at which the induction stopped.
    pub level: usize,
    /// Cokernel dimension.
    pub dimension: usize,
    /// The surviving class.
    pub class: String,
}

/// Report of `solve-mc`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveFile {
    /// Model name.
    pub model: String,
    /// Echo of the seed integral expression, in canonical form.
    pub integral: String,
    /// Whether real mode was requested.
    pub real: bool,
    /// Pivot rule used.
    pub pivot: String,
    /// `"ok"` or `"obstructed"`.
    pub status: String,
    /// The bounding element, when found.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    /// The central curvature value, when found.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    /// Per-level trace.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceFile>,
    /// Verification block.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyFile>,
    /// Classifying data, when the seed is a unit pair.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<RhoFile>,
    /// Obstruction data, when the induction stopped.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionFile>,
}

fn pivot_name(pivot: PivotRule) -> String {
    match pivot {
        PivotRule::Lex => String::from("lex"),
        PivotRule::RevLex => String::from("revlex"),
    }
}

fn rho_file(rho: &RhoData) -> RhoFile {
    RhoFile {
        gamma_tag: rho.gamma_tag.clone(),
        unit_coeff: rho.unit_coeff.render(),
        even_part: rho.even_part.render(),
    }
}

/// Builds the report of a successful solve.
pub fn solve_file_ok(
    model: &str,
    basis: &GradedBasis,
    integral: &str,
    real: bool,
    pivot: PivotRule,
    rep: &BoundingPairReport,
) -> SolveFile {
    SolveFile {
        model: model.into(),
        integral: integral.into(),
        real,
        pivot: pivot_name(pivot),
        status: String::from("ok"),
        b: Some(rep.b.render(basis)),
        c: Some(rep.c.render()),
        trace: rep
            .trace
            .iter()
            .map(|l| TraceFile {
                level: l.level,
                energy: l.energy.to_string(),
                obstruction: l.obstruction.render(basis),
                obstruction_dim: l.obstruction_dim,
                primitive: l.primitive.render(basis),
            })
            .collect(),
        verify: Some(VerifyFile {
            curvature: rep.verify.curvature.render(basis),
            c: rep.verify.c.render(),
            unit_multiple: rep.verify.unit_multiple,
            central: rep.verify.central,
            degree_ok: rep.verify.degree_ok,
            filtration_positive: rep.verify.filtration_positive,
            unit_pair_requested: rep.verify.unit_pair_requested,
            unit_pair_ok: rep.verify.unit_pair_ok,
            boundary_touch: rep.verify.boundary_touch,
        }),
        rho: rep.rho.as_ref().map(rho_file),
        obstruction: None,
    }
}

/// Builds the report of an obstructed solve.
pub fn solve_file_obstructed(
    model: &str,
    basis: &GradedBasis,
    integral: &str,
    real: bool,
    pivot: PivotRule,
    level: usize,
    dimension: usize,
    class: &ainfty_core::algebra::Element,
) -> SolveFile {
    SolveFile {
        model: model.into(),
        integral: integral.into(),
        real,
        pivot: pivot_name(pivot),
        status: String::from("obstructed"),
        b: None,
        c: None,
        trace: Vec::new(),
        verify: None,
        rho: None,
        obstruction: Some(ObstructionFile {
            level,
            dimension,
            class: class.render(basis),
        }),
    }
}

/// One bidegree cell of one page.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellFile {
    /// Filtration bidegree component.
    pub p: i64,
    /// Complementary bidegree component.
    pub q: i64,
    /// Dimension of the cell.
    pub dim: usize,
    /// Representative supports: one coordinate vector (over the complex's
    /// ordered basis, as `"p/q"` strings) per dimension.
    pub reps: Vec<Vec<String>>,
}

/// One page dump.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageFile {
    /// Page index.
    pub r: usize,
    /// Cells in ascending (p, q) order.
    pub cells: Vec<CellFile>,
}

/// Report of `spectral`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PagesFile {
    /// Model name.
    pub model: String,
    /// Echo of the twist expression, in canonical form.
    pub b: String,
    /// Ordered labels of the underlying complex's coordinates.
    pub labels: Vec<String>,
    /// Page dumps for `r = 0 ..= pages`.
    pub pages: Vec<PageFile>,
    /// Cells compared against the structural prediction on the first page.
    pub e1_checked: usize,
    /// Cells compared on the limit page.
    pub einf_checked: usize,
    /// Whether the sequence degenerates at the first page.
    pub degenerate: bool,
}

/// Builds a page dump from computed pages and the structural comparison.
pub fn pages_file(
    model: &str,
    b: &str,
    labels: &[String],
    pages: &[SSPage],
    theorem: &TheoremReport,
) -> PagesFile {
    PagesFile {
        model: model.into(),
        b: b.into(),
        labels: labels.to_vec(),
        pages: pages
            .iter()
            .map(|page| PageFile {
                r: page.r,
                cells: page
                    .cells
                    .iter()
                    .filter(|(_, cell)| cell.dim > 0)
                    .map(|(&(p, q), cell)| CellFile {
                        p,
                        q,
                        dim: cell.dim,
                        reps: cell
                            .reps
                            .iter()
                            .map(|v| v.iter().map(|x| x.to_string()).collect())
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
        e1_checked: theorem.e1_checked,
        einf_checked: theorem.einf_checked,
        degenerate: theorem.degenerate,
    }
}

/// Extraction block of a `superpotential` run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractFile {
    /// Monoid class.
    pub beta: Vec<i64>,
    /// Parameter power.
    pub k: u32,
    /// Formal-variable insertions.
    pub t: Vec<usize>,
    /// The extracted count as `"p/q"`.
    pub count: String,
}

/// Report of `superpotential`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperpotentialFile {
    /// Model name.
    pub model: String,
    /// The bounding element used, in canonical form.
    pub b: String,
    /// The superpotential scalar.
    pub omega: String,
    /// Optional coefficient extraction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extract: Option<ExtractFile>,
}

/// Renders any report as pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("reports always serialize");
    out.push('\n');
    out
}
