//! Property-based checks of the scalar tower: ring laws under truncation,
//! the degree involution, parity machinery, and filtration bounds.

use ainfty_core::coeff::{CoeffElem, TermKey, TowerConfig};
use ainfty_core::models::quantum_sphere;
use ainfty_core::{rat, Rat};
use num_traits::Zero;
use proptest::prelude::*;

fn cfg2() -> TowerConfig {
    quantum_sphere(2).alg.tower
}

fn build(cfg: &TowerConfig, raw: &[(u32, i64, i64, i64)]) -> CoeffElem {
    let mut out = CoeffElem::zero();
    for &(s_pow, beta0, num, den) in raw {
        if num == 0 {
            continue;
        }
        let key = TermKey {
            s_pow,
            beta: vec![beta0],
            t_exp: vec![],
        };
        out = out.add(cfg, &CoeffElem::monomial(cfg, key, rat(num, den)));
    }
    out
}

prop_compose! {
    fn raw_elem()(v in proptest::collection::vec((0u32..=6, 0i64..=3, -4i64..=4, 1i64..=4), 0..4)) -> Vec<(u32, i64, i64, i64)> {
        v
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn additive_group_laws(a in raw_elem(), b in raw_elem(), c in raw_elem()) {
        let cfg = cfg2();
        let (a, b, c) = (build(&cfg, &a), build(&cfg, &b), build(&cfg, &c));
        prop_assert_eq!(a.add(&cfg, &b), b.add(&cfg, &a));
        prop_assert_eq!(a.add(&cfg, &b).add(&cfg, &c), a.add(&cfg, &b.add(&cfg, &c)));
        prop_assert!(a.add(&cfg, &a.neg()).is_zero());
    }

    #[test]
    fn multiplicative_laws(a in raw_elem(), b in raw_elem(), c in raw_elem()) {
        let cfg = cfg2();
        let (a, b, c) = (build(&cfg, &a), build(&cfg, &b), build(&cfg, &c));
        prop_assert_eq!(a.mul(&cfg, &b), b.mul(&cfg, &a));
        prop_assert_eq!(a.mul(&cfg, &b).mul(&cfg, &c), a.mul(&cfg, &b.mul(&cfg, &c)));
        prop_assert_eq!(
            a.mul(&cfg, &b.add(&cfg, &c)),
            a.mul(&cfg, &b).add(&cfg, &a.mul(&cfg, &c))
        );
        prop_assert_eq!(a.mul(&cfg, &CoeffElem::one(&cfg)), a.clone());
    }

    #[test]
    fn involution_laws(a in raw_elem(), s1 in 0u32..=6, b1 in 0i64..=3, s2 in 0u32..=6, b2 in 0i64..=3) {
        let cfg = cfg2();
        let a = build(&cfg, &a);
        prop_assert_eq!(a.phi_star(&cfg).unwrap().phi_star(&cfg).unwrap(), a.clone());
        prop_assert_eq!(
            a.add(&cfg, &a).phi_star(&cfg).unwrap(),
            a.phi_star(&cfg).unwrap().add(&cfg, &a.phi_star(&cfg).unwrap())
        );
        // Twisted multiplicativity on monomials: the parameter degrees cross.
        let x = build(&cfg, &[(s1, b1, 1, 1)]);
        let y = build(&cfg, &[(s2, b2, 1, 1)]);
        let dx = s1 as i64 * (1 - cfg.n);
        let dy = s2 as i64 * (1 - cfg.n);
        let lhs = x.mul(&cfg, &y).phi_star(&cfg).unwrap();
        let mut rhs = x.phi_star(&cfg).unwrap().mul(&cfg, &y.phi_star(&cfg).unwrap());
        if (dx * dy).rem_euclid(2) == 1 {
            rhs = rhs.neg();
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn parity_machinery(a in raw_elem()) {
        let cfg = cfg2();
        let a = build(&cfg, &a);
        let (even, odd) = a.parity_split();
        prop_assert_eq!(even.add(&cfg, &odd), a.clone());
        prop_assert_eq!(a.f_project(), odd.clone());
        prop_assert!(even.is_central(&cfg));
        // Central elements have vanishing brackets against either parity.
        prop_assert!(even.bracket_scalar(&cfg, &odd).unwrap().is_zero());
        prop_assert!(even.bracket_scalar(&cfg, &even).unwrap().is_zero());
        // Odd–odd brackets are symmetric (twice the product).
        let br = odd.bracket_scalar(&cfg, &odd).unwrap();
        prop_assert_eq!(br, odd.mul(&cfg, &odd).scale(&rat(2, 1)));
    }

    #[test]
    fn filtration_bounds(a in raw_elem(), b in raw_elem()) {
        let cfg = cfg2();
        let (a, b) = (build(&cfg, &a), build(&cfg, &b));
        let p = a.mul(&cfg, &b);
        if let (Some(na), Some(nb), Some(np)) = (
            a.nu_combined(&cfg),
            b.nu_combined(&cfg),
            p.nu_combined(&cfg),
        ) {
            prop_assert!(np >= na + nb);
        }
        // Energy components partition the element.
        let zero = Rat::zero();
        prop_assert_eq!(
            a.energy_component(&cfg, &zero).add(&cfg, &a.energy_above(&cfg, &zero)),
            a.clone()
        );
    }
}
