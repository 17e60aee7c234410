//! Std-side companion of `ainfty-core`: file formats, the expression
//! mini-language, JSON reports, the parallel axiom driver, and the `ainfty`
//! command-line binary.
//!
//! Everything here is IO and plumbing; all mathematics lives in the core
//! crate. Reports are deterministic: the same inputs produce byte-identical
//! JSON regardless of thread count.

#![forbid(unsafe_code)]

pub mod expr;
pub mod format;
pub mod parallel;
pub mod report;
