//! The `ainfty` command-line binary.
//!
//! Subcommands: `check-axioms`, `extend`, `solve-mc`, `spectral`,
//! `superpotential`. Exit status 0 on success, 1 on a verification failure
//! (axiom violation, obstructed solve, unmet precondition), 2 on a usage
//! error. All reports are JSON with exact rationals; identical inputs produce
//! byte-identical reports. The `AINFTY_THREADS` environment variable caps the
//! checker's parallelism.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};

use ainfty::expr;
use ainfty::format;
use ainfty::parallel;
use ainfty::report;
use ainfty_core::invariants::{ogw_extract, superpotential, InvariantError};
use ainfty_core::mcsolve::{solve_point_like, PivotRule, SolveError};
use ainfty_core::models::ModelDescriptor;
use ainfty_core::spectral::{page, theorem_oracle, twisted_complex};
use ainfty_core::Rat;
use num_traits::Signed;

#[derive(Parser)]
#[command(
    name = "ainfty",
    version,
    about = "Exact computations with curved cyclic unital A-infinity algebras"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the ten-property axiom suite on a model's basis tuples.
    CheckAxioms {
        /// Model file.
        #[arg(long)]
        model: PathBuf,
        /// Maximum tuple arity.
        #[arg(long, default_value_t = 4)]
        arity: usize,
        /// Report destination (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the axiom suite on the extended argument pool (basis vectors plus
    /// parameter- and energy-dressed copies).
    Extend {
        /// Model file.
        #[arg(long)]
        model: PathBuf,
        /// Maximum tuple arity.
        #[arg(long, default_value_t = 4)]
        arity: usize,
        /// Report destination (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the point-like Maurer-Cartan problem by energy induction.
    SolveMc {
        /// Model file.
        #[arg(long)]
        model: PathBuf,
        /// Seed scalar expression, e.g. "s" or "2*s".
        #[arg(long)]
        integral: String,
        /// Average every correction to the real subspace.
        #[arg(long)]
        real: bool,
        /// Override the energy cutoff.
        #[arg(long)]
        emax: Option<String>,
        /// Override the parameter-power cutoff.
        #[arg(long)]
        smax: Option<u32>,
        /// Pivot rule: lex or revlex.
        #[arg(long, default_value = "lex")]
        pivot: String,
        /// Report destination (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump spectral-sequence pages of the twisted complex.
    Spectral {
        /// Model file.
        #[arg(long)]
        model: PathBuf,
        /// Twist expression, e.g. "s*vol".
        #[arg(long)]
        b: String,
        /// Highest page to dump.
        #[arg(long)]
        pages: usize,
        /// Report destination (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the superpotential of a bounding element.
    Superpotential {
        /// Model file.
        #[arg(long)]
        model: PathBuf,
        /// Bounding element expression, e.g. "s*vol".
        #[arg(long)]
        b: Option<String>,
        /// Read the bounding element from a solve-mc report instead.
        #[arg(long = "b-from")]
        b_from: Option<PathBuf>,
        /// Coefficient extraction, e.g. "beta=[1],k=3,t=[]".
        #[arg(long)]
        extract: Option<String>,
        /// Report destination (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure modes mapped to exit codes.
enum Failure {
    /// Exit 2: bad flags, unreadable files, malformed expressions.
    Usage(String),
    /// Exit 1: mathematically meaningful verification failure.
    Verify(String),
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli.cmd) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("{msg}");
            1
        }
    };
    std::process::exit(code);
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<ModelDescriptor, Failure> {
    format::load_model(path)
        .map_err(|e| Failure::Usage(format!("cannot load {}: {e}", path.display())))
}

/// Loads a model and requires the axiom suite to pass, as every solver-side
/// command assumes.
fn load_checked(path: &Path) -> Result<ModelDescriptor, Failure> {
    let md = load(path)?;
    let rep = md.alg.check_axioms();
    if let Some(v) = rep.first() {
        return Err(Failure::Verify(format!(
            "model {} fails the axiom suite at property {}: {} ({})",
            md.name, v.property, v.context, v.detail
        )));
    }
    Ok(md)
}

fn pivot_rule(name: &str) -> Result<PivotRule, Failure> {
    match name {
        "lex" => Ok(PivotRule::Lex),
        "revlex" => Ok(PivotRule::RevLex),
        other => Err(Failure::Usage(format!(
            "unknown pivot rule {other:?}; use lex or revlex"
        ))),
    }
}

fn run(cmd: Cmd) -> Result<i32, Failure> {
    match cmd {
        Cmd::CheckAxioms { model, arity, out } => {
            let md = load(&model)?;
            let pool = md.alg.basis_args();
            let rep =
                parallel::check_axioms_parallel(&md.alg, &pool, arity, parallel::thread_count());
            let file = report::check_file(&md.name, "check-axioms", arity, pool.len(), &rep);
            emit(&out, &report::to_json(&file))?;
            Ok(if rep.ok() { 0 } else { 1 })
        }
        Cmd::Extend { model, arity, out } => {
            let md = load(&model)?;
            let pool = parallel::dressed_pool(&md.alg);
            let rep =
                parallel::check_axioms_parallel(&md.alg, &pool, arity, parallel::thread_count());
            let file = report::check_file(&md.name, "extend", arity, pool.len(), &rep);
            emit(&out, &report::to_json(&file))?;
            Ok(if rep.ok() { 0 } else { 1 })
        }
        Cmd::SolveMc {
            model,
            integral,
            real,
            emax,
            smax,
            pivot,
            out,
        } => {
            let mut md = load_checked(&model)?;
            if let Some(e) = emax {
                let q = Rat::from_str(&e)
                    .map_err(|_| Failure::Usage(format!("bad --emax value {e:?}")))?;
                if !q.is_positive() {
                    return Err(Failure::Usage(String::from("--emax must be positive")));
                }
                md.alg.tower.e_max = q;
            }
            if let Some(k) = smax {
                if k == 0 {
                    return Err(Failure::Usage(String::from("--smax must be at least 1")));
                }
                md.alg.tower.s_max = k;
            }
            let pivot = pivot_rule(&pivot)?;
            let a = expr::parse_scalar(&md.alg.tower, &integral)
                .map_err(|e| Failure::Usage(format!("bad --integral expression: {e}")))?;
            let echo = a.render();
            match solve_point_like(&md, &a, real, pivot) {
                Ok(rep) => {
                    let file =
                        report::solve_file_ok(&md.name, &md.alg.basis, &echo, real, pivot, &rep);
                    emit(&out, &report::to_json(&file))?;
                    Ok(0)
                }
                Err(SolveError::Obstructed {
                    level,
                    class,
                    dimension,
                }) => {
                    let file = report::solve_file_obstructed(
                        &md.name,
                        &md.alg.basis,
                        &echo,
                        real,
                        pivot,
                        level,
                        dimension,
                        &class,
                    );
                    emit(&out, &report::to_json(&file))?;
                    Ok(1)
                }
                Err(e @ (SolveError::BadSeed { .. } | SolveError::NotReal)) => {
                    Err(Failure::Usage(e.to_string()))
                }
                Err(e) => Err(Failure::Verify(e.to_string())),
            }
        }
        Cmd::Spectral {
            model,
            b,
            pages,
            out,
        } => {
            let md = load_checked(&model)?;
            let twist = expr::parse_element(&md.alg.tower, &md.alg.basis, &b)
                .map_err(|e| Failure::Usage(format!("bad --b expression: {e}")))?;
            let echo = twist.render(&md.alg.basis);
            let tc = twisted_complex(&md.alg, &twist, true)
                .map_err(|e| Failure::Verify(e.to_string()))?;
            let theorem =
                theorem_oracle(&md, &twist).map_err(|e| Failure::Verify(e.to_string()))?;
            let dumped: Vec<_> = (0..=pages).map(|r| page(&tc.fc, r)).collect();
            let file = report::pages_file(&md.name, &echo, &tc.fc.labels, &dumped, &theorem);
            emit(&out, &report::to_json(&file))?;
            Ok(0)
        }
        Cmd::Superpotential {
            model,
            b,
            b_from,
            extract,
            out,
        } => {
            let md = load_checked(&model)?;
            let b_text = match (b, b_from) {
                (Some(text), None) => text,
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| {
                        Failure::Usage(format!("cannot read {}: {e}", path.display()))
                    })?;
                    let solved: report::SolveFile = serde_json::from_str(&text).map_err(|e| {
                        Failure::Usage(format!("malformed report {}: {e}", path.display()))
                    })?;
                    solved.b.ok_or_else(|| {
                        Failure::Usage(format!(
                            "report {} carries no bounding element (status {})",
                            path.display(),
                            solved.status
                        ))
                    })?
                }
                _ => {
                    return Err(Failure::Usage(String::from(
                        "give exactly one of --b and --b-from",
                    )))
                }
            };
            let twist = expr::parse_element(&md.alg.tower, &md.alg.basis, &b_text)
                .map_err(|e| Failure::Usage(format!("bad bounding element: {e}")))?;
            let echo = twist.render(&md.alg.basis);
            let omega = match superpotential(&md, &twist) {
                Ok(omega) => omega,
                Err(e @ InvariantError::NotBounding { .. }) => {
                    return Err(Failure::Verify(e.to_string()))
                }
                Err(e) => return Err(Failure::Verify(e.to_string())),
            };
            let extract = match extract {
                None => None,
                Some(spec) => {
                    let (beta, k, t) = parse_extract(&spec)?;
                    let count = ogw_extract(&omega, &md.alg.tower, &beta, k, &t);
                    Some(report::ExtractFile {
                        beta,
                        k,
                        t,
                        count: count.to_string(),
                    })
                }
            };
            let file = report::SuperpotentialFile {
                model: md.name.clone(),
                b: echo,
                omega: omega.value.render(),
                extract,
            };
            emit(&out, &report::to_json(&file))?;
            Ok(0)
        }
    }
}

/// Parses the `--extract` spec `beta=[...],k=K,t=[...]` (the `t` block may be
/// omitted).
fn parse_extract(spec: &str) -> Result<(Vec<i64>, u32, Vec<usize>), Failure> {
    let bad = || Failure::Usage(format!("bad --extract spec {spec:?}"));
    let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    let rest = s.strip_prefix("beta=[").ok_or_else(bad)?;
    let (beta_text, rest) = rest.split_once(']').ok_or_else(bad)?;
    let beta = parse_int_list(beta_text).ok_or_else(bad)?;
    let rest = rest.strip_prefix(",k=").ok_or_else(bad)?;
    let (k_text, t_text) = match rest.split_once(",t=[") {
        Some((k_text, t_rest)) => {
            let t_text = t_rest.strip_suffix(']').ok_or_else(bad)?;
            (k_text, Some(t_text))
        }
        None => (rest, None),
    };
    let k: u32 = k_text.parse().map_err(|_| bad())?;
    let t = match t_text {
        None => Vec::new(),
        Some(text) => parse_int_list(text)
            .ok_or_else(bad)?
            .into_iter()
            .map(|x| usize::try_from(x).map_err(|_| bad()))
            .collect::<Result<_, _>>()?,
    };
    Ok((beta, k, t))
}

fn parse_int_list(text: &str) -> Option<Vec<i64>> {
    if text.is_empty() {
        return Some(Vec::new());
    }
    text.split(',').map(|x| x.parse().ok()).collect()
}
