//! Parallel driver for the axiom checker.
//!
//! The core checker deals argument tuples to shards round-robin; this module
//! fans the shards over scoped threads and merges the shard reports into the
//! canonical order (attribution rank, then context, then detail), so the
//! merged report is byte-identical for every thread count.

use std::thread;

use ainfty_core::algebra::{attribution_rank, AInftyAlgebra, AxiomReport, Element};
use ainfty_core::coeff::{CoeffElem, TermKey};
use num_traits::One;

/// Number of worker threads: the `AINFTY_THREADS` environment variable when
/// set to a positive integer, the machine's available parallelism otherwise.
pub fn thread_count() -> usize {
    if let Ok(v) = std::env::var("AINFTY_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                return n;
            }
        }
    }
    thread::available_parallelism().map_or(1, |n| n.get())
}

fn canonicalize(mut report: AxiomReport) -> AxiomReport {
    report.violations.sort_by(|a, b| {
        (attribution_rank(a.property), &a.context, &a.detail).cmp(&(
            attribution_rank(b.property),
            &b.context,
            &b.detail,
        ))
    });
    report
}

/// Runs the axiom suite over `threads` shards and merges the results into the
/// canonical order. One thread short-circuits to the sequential checker.
pub fn check_axioms_parallel(
    alg: &AInftyAlgebra,
    pool: &[Element],
    max_arity: usize,
    threads: usize,
) -> AxiomReport {
    let threads = threads.max(1);
    if threads == 1 {
        return canonicalize(alg.check_axioms_with(pool, max_arity));
    }
    let mut merged = AxiomReport::default();
    thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|idx| scope.spawn(move || alg.check_axioms_sharded(pool, max_arity, idx, threads)))
            .collect();
        for h in handles {
            merged
                .violations
                .extend(h.join().expect("checker shards never panic").violations);
        }
    });
    canonicalize(merged)
}

/// Basis vectors plus parameter- and energy-dressed copies: the argument pool
/// of the extended-evaluator suite.
pub fn dressed_pool(alg: &AInftyAlgebra) -> Vec<Element> {
    let cfg = &alg.tower;
    let mut pool = alg.basis_args();
    for i in 0..alg.basis.len() {
        pool.push(Element::basis(cfg, i).scale_left(cfg, &CoeffElem::s_power(cfg, 1)));
        if let Some(g) = cfg
            .monoid
            .allowed_cone
            .iter()
            .find(|g| g.iter().any(|&x| x != 0))
        {
            let t = CoeffElem::monomial(
                cfg,
                TermKey {
                    s_pow: 0,
                    beta: g.clone(),
                    t_exp: vec![0; cfg.vars.t_degrees.len()],
                },
                One::one(),
            );
            pool.push(Element::basis(cfg, i).scale_left(cfg, &t));
        }
    }
    pool
}
