//! Structure layer: sign primitives, evaluator oracles, the ten-property
//! checker on the shipped models and on dressed argument pools, mutation
//! fixtures, and the duality operations.

use ainfty_core::algebra::{sign_of_permutation, AInftyAlgebra, Element};
use ainfty_core::coeff::{CoeffElem, TermKey};
use ainfty_core::models::{
    mutation_fixtures, quantum_sphere, real_model, real_mutation_fixture, shipped_models,
    ModelDescriptor,
};
use num_traits::One;

fn b_vol(md: &ModelDescriptor) -> Element {
    Element::term(md.top_index, CoeffElem::s_power(&md.alg.tower, 1))
}

/// Basis vectors plus parameter- and energy-dressed copies.
fn dressed_pool(alg: &AInftyAlgebra) -> Vec<Element> {
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

#[test]
fn koszul_permutation_signs() {
    // Even factors commute freely; swapping two odd factors costs a sign.
    assert_eq!(sign_of_permutation(&[2, 4, 6], &[2, 0, 1]).rem_euclid(2), 0);
    assert_eq!(sign_of_permutation(&[1, 1], &[1, 0]).rem_euclid(2), 1);
    assert_eq!(sign_of_permutation(&[1, 2, 1], &[0, 1, 2]).rem_euclid(2), 0);
    // Undoing a permutation (computed against the permuted degree list)
    // cancels its sign.
    let degs = [1, 3, 2, 1];
    let perm = [2, 0, 3, 1];
    let mut inv = [0usize; 4];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    let permuted: Vec<i64> = perm.iter().map(|&p| degs[p]).collect();
    let total = sign_of_permutation(&degs, &perm) + sign_of_permutation(&permuted, &inv);
    assert_eq!(total.rem_euclid(2), 0);
}

#[test]
fn unit_laws_on_evaluator() {
    for md in shipped_models() {
        let cfg = &md.alg.tower;
        let e = Element::basis(cfg, md.alg.basis.unit_index);
        for i in 0..md.alg.basis.len() {
            let x = Element::basis(cfg, i);
            let left = md.alg.eval_mk(&[e.clone(), x.clone()]).unwrap();
            assert_eq!(left, x, "left unit law fails in {}", md.name);
            let right = md.alg.eval_mk(&[x.clone(), e.clone()]).unwrap();
            let want = if md.alg.basis.degree(i).rem_euclid(2) == 0 {
                x.clone()
            } else {
                x.neg()
            };
            assert_eq!(right, want, "right unit law fails in {}", md.name);
        }
    }
}

#[test]
fn quantum_sphere_evaluator_oracles() {
    let md = quantum_sphere(2);
    let alg = &md.alg;
    let cfg = &alg.tower;
    let b = b_vol(&md);
    // The square of the top-degree candidate lands on the unit line with one
    // unit of energy and two parameter factors.
    let sq = alg.eval_mk(&[b.clone(), b.clone()]).unwrap();
    assert_eq!(sq.render(&alg.basis), "(-1*s^2*T^[1])*e");
    // Pairing oracles: the base entry and its projected extension.
    let e = Element::basis(cfg, alg.basis.unit_index);
    let vol = Element::basis(cfg, md.top_index);
    assert_eq!(alg.pairing_ext(&e, &vol).unwrap(), CoeffElem::one(cfg));
    assert_eq!(alg.pairing_f(&e, &b).unwrap().render(), "-1*s");
    // The projected pairing kills parameter-free values.
    assert!(alg.pairing_f(&e, &vol).unwrap().is_zero());
}

#[test]
fn evaluator_respects_scalar_pullout() {
    // Left scalars pull out with the sign of crossing the preceding slots;
    // spot-checked against direct table evaluation.
    let md = quantum_sphere(2);
    let alg = &md.alg;
    let cfg = &alg.tower;
    let s = CoeffElem::s_power(cfg, 1);
    let e = Element::basis(cfg, alg.basis.unit_index);
    let vol = Element::basis(cfg, md.top_index);
    // m_2(e, s·vol) = s·m_2(e, vol) since the unit has even shifted weight.
    let got = alg.eval_mk(&[e.clone(), vol.scale_left(cfg, &s)]).unwrap();
    assert_eq!(got, vol.scale_left(cfg, &s));
    // m_2(s·e, vol): pulling the odd scalar out of the first shifted slot
    // costs a sign.
    let got = alg.eval_mk(&[e.scale_left(cfg, &s), vol.clone()]).unwrap();
    assert_eq!(got, vol.scale_left(cfg, &s).neg());
}

#[test]
fn axiom_suite_passes_on_shipped_models() {
    for md in shipped_models() {
        let report = md.alg.check_axioms();
        assert!(
            report.ok(),
            "{} violates: {:?}",
            md.name,
            report.first().map(|v| (v.property, v.context.clone()))
        );
    }
}

#[test]
fn axiom_suite_passes_on_dressed_pools() {
    for md in shipped_models() {
        let pool = dressed_pool(&md.alg);
        let report = md.alg.check_axioms_with(&pool, 4);
        assert!(
            report.ok(),
            "{} (dressed) violates: {:?}",
            md.name,
            report.first().map(|v| (v.property, v.context.clone()))
        );
    }
}

#[test]
fn mutation_fixtures_fire_at_declared_property() {
    let fixtures = mutation_fixtures();
    assert!(fixtures.len() >= 6);
    for f in fixtures {
        let report = f.model.alg.check_axioms();
        let first = report.first().expect("mutation must be detected");
        assert_eq!(
            first.property, f.declared_property,
            "{} fired at {} ({})",
            f.model.name, first.property, first.context
        );
    }
}

#[test]
fn relation_defects_vanish_on_dressed_tuples() {
    // The quadratic relations hold for arbitrary (not only basis) arguments.
    let md = quantum_sphere(2);
    let pool = dressed_pool(&md.alg);
    for x in &pool {
        for y in &pool {
            let d = md.alg.a_infty_defect(&[x.clone(), y.clone()]).unwrap();
            assert!(
                d.is_zero(),
                "defect at dressed pair: {}",
                d.render(&md.alg.basis)
            );
        }
    }
}

#[test]
fn opposite_is_an_involution() {
    for md in shipped_models() {
        let opp2 = md.alg.opposite().opposite();
        assert_eq!(opp2.ops, md.alg.ops, "{}: double opposite tables", md.name);
        assert_eq!(
            opp2.pairing, md.alg.pairing,
            "{}: double opposite pairing",
            md.name
        );
        // The opposite satisfies the same axioms.
        assert!(
            md.alg.opposite().check_axioms().ok(),
            "{}: opposite axioms",
            md.name
        );
    }
}

#[test]
fn self_duality_holds_on_real_model() {
    let md = real_model();
    let invol = md.involution();
    let args = md.alg.basis_args();
    for arity in 0..=3usize {
        let mut tuples: Vec<Vec<Element>> = vec![vec![]];
        for _ in 0..arity {
            let mut next = Vec::new();
            for t in &tuples {
                for x in &args {
                    let mut t2 = t.clone();
                    t2.push(x.clone());
                    next.push(t2);
                }
            }
            tuples = next;
        }
        for t in &tuples {
            let d = md.alg.self_dual_defect(&invol, t).unwrap();
            assert!(d.is_zero(), "self-duality defect at arity {arity}");
        }
    }
}

#[test]
fn reality_mutation_is_detected() {
    let md = real_mutation_fixture();
    let invol = md.involution();
    let cfg = &md.alg.tower;
    let vol = Element::basis(cfg, md.top_index);
    let d = md
        .alg
        .self_dual_defect(&invol, &[vol.clone(), vol])
        .unwrap();
    assert_eq!(d.render(&md.alg.basis), "(-2*T^[0,1])*vol");
}

#[test]
fn bracket_and_product_consistency() {
    let md = quantum_sphere(2);
    let cfg = &md.alg.tower;
    let e = Element::basis(cfg, md.alg.basis.unit_index);
    let vol = Element::basis(cfg, md.top_index);
    // The induced product has the unit as two-sided identity.
    assert_eq!(md.alg.dga_product(&e, &vol).unwrap(), vol);
    assert_eq!(md.alg.dga_product(&vol, &e).unwrap(), vol);
    // Brackets with the unit vanish.
    assert!(md.alg.bracket(&e, &vol).unwrap().is_zero());
    // Self-bracket of an even element: [x, x] = x·x − x·x = 0.
    assert!(md.alg.bracket(&vol, &vol).unwrap().is_zero());
    // Central scalars pull out of the bracket.
    let s2 = CoeffElem::s_power(cfg, 2);
    assert!(md
        .alg
        .bracket(&vol.scale_left(cfg, &s2), &vol)
        .unwrap()
        .is_zero());
}

#[test]
fn sharded_check_covers_the_full_suite() {
    // The union of shard violations equals the sequential report, and a clean
    // model stays clean shard by shard.
    let md = quantum_sphere(2);
    let pool = dressed_pool(&md.alg);
    for shards in [2usize, 3] {
        for idx in 0..shards {
            assert!(md.alg.check_axioms_sharded(&pool, 4, idx, shards).ok());
        }
    }
    // On a mutated model the shards jointly find the same violation multiset.
    for f in mutation_fixtures() {
        let full = f.model.alg.check_axioms();
        let mut merged: Vec<_> = (0..3)
            .flat_map(|idx| {
                f.model
                    .alg
                    .check_axioms_sharded(&f.model.alg.basis_args(), 4, idx, 3)
                    .violations
            })
            .map(|v| (v.property, v.context, v.detail))
            .collect();
        merged.sort();
        let mut want: Vec<_> = full
            .violations
            .into_iter()
            .map(|v| (v.property, v.context, v.detail))
            .collect();
        want.sort();
        assert_eq!(merged, want, "{}", f.model.name);
    }
}
