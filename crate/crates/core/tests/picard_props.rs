mod common;

use common::{any_group, pick};
use helixforge_core::picard::{
    class_add, class_scale, h0, n_class, pullback, same_tau_orbit, DivisorClass, Translation,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn pullback_is_a_homomorphism(g in any_group(), t: u64, s1: u64, s2: u64, d1 in -9i64..9, d2 in -9i64..9) {
        let tr = Translation(pick(&g, t));
        let c1 = DivisorClass::new(d1, pick(&g, s1));
        let c2 = DivisorClass::new(d2, pick(&g, s2));
        let lhs = pullback(&g, &tr, &class_add(&g, &c1, &c2).unwrap()).unwrap();
        let rhs = class_add(&g, &pullback(&g, &tr, &c1).unwrap(), &pullback(&g, &tr, &c2).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_adds_degree_times_n(g in any_group(), t: u64, s: u64, d in -9i64..9) {
        let tr = Translation(pick(&g, t));
        let c = DivisorClass::new(d, pick(&g, s));
        let n = n_class(&g, &tr).unwrap();
        let expected = class_add(&g, &c, &class_scale(&g, d, &n).unwrap()).unwrap();
        prop_assert_eq!(pullback(&g, &tr, &c).unwrap(), expected);
    }

    #[test]
    fn h0_is_additive_in_positive_degree(g in any_group(), s1: u64, s2: u64, d1 in 1i64..20, d2 in 1i64..20) {
        let c1 = DivisorClass::new(d1, pick(&g, s1));
        let c2 = DivisorClass::new(d2, pick(&g, s2));
        prop_assert_eq!(h0(&g, &class_add(&g, &c1, &c2).unwrap()), h0(&g, &c1) + h0(&g, &c2));
    }

    #[test]
    fn orbit_relation_is_an_equivalence(g in any_group(), t: u64, a: u64, b: u64, c: u64) {
        let tau = Translation(pick(&g, t));
        let (x, y, z) = (pick(&g, a), pick(&g, b), pick(&g, c));
        let rel = |u, v| same_tau_orbit(&g, u, v, &tau).unwrap();
        prop_assert!(rel(&x, &x));
        prop_assert_eq!(rel(&x, &y), rel(&y, &x));
        if rel(&x, &y) && rel(&y, &z) {
            prop_assert!(rel(&x, &z));
        }
    }
}
