mod common;

use common::{any_group, r};
use helixforge_core::group::{Group, GroupElement};
use helixforge_core::helix::{validate_cubic_helix, validate_quadratic_helix, AxiomStatus, Helix};
use helixforge_core::instances::{
    random_blow_down, random_blow_up, random_cremona, random_generic_blow_up,
    random_sigma_compatible, DEFAULT_TRIES,
};
use helixforge_core::picard::DivisorClass;
use helixforge_core::transforms::{
    blow_down, blow_down_data, blow_up, blow_up_data, cremona_factor, invert_blow_down,
    invert_blow_up, is_one_periodic, section_triviality_check, solve_inverse_blow_down,
    solve_inverse_blow_up, verify_roundtrip, verify_roundtrip_with, RoundTripStart,
    TransformError,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn residue(e: &GroupElement) -> i64 {
    match e {
        GroupElement::Residue(v) => *v as i64,
        _ => panic!("cyclic element expected"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn blow_up_classes_match_modular_oracle(n in 13u64..1000, seed: u64) {
        let g = Group::cyclic(n).unwrap();
        let spec = random_blow_up(&g, &mut rng(seed), DEFAULT_TRIES).unwrap();
        prop_assume!(spec.is_some());
        let spec = spec.unwrap();
        let m = n as i64;
        let (s, t) = (residue(&spec.host.l.sum), residue(&spec.host.psi.0));
        let (p, q) = (residue(&spec.p), residue(&spec.q));
        let data = blow_up_data(&g, &spec.host, &spec.p, &spec.q).unwrap();
        for i in -10i64..=10 {
            let j = i.div_euclid(2);
            let d = if i.rem_euclid(2) == 0 { p - 3 * t * j } else { q - 3 * t * j };
            let expected = DivisorClass::new(2, r((s - 3 * t * i - d).rem_euclid(m) as u64));
            prop_assert_eq!(data.class(&g, i).unwrap(), expected);
        }
    }

    #[test]
    fn blow_up_output_is_a_cubic_helix(g in any_group(), seed: u64) {
        let spec = random_blow_up(&g, &mut rng(seed), DEFAULT_TRIES).unwrap();
        prop_assume!(spec.is_some());
        let spec = spec.unwrap();
        let data = blow_up_data(&g, &spec.host, &spec.p, &spec.q).unwrap();
        let w = data.window(&g, -20..=20).unwrap();
        let v = validate_cubic_helix(&g, &w, None).unwrap();
        prop_assert!(v.consistent(), "{:?}", v);
        match blow_up(&g, &spec, -20..=20) {
            Ok(out) => {
                prop_assert_eq!(&out.window, &w);
                prop_assert!(validate_cubic_helix(&g, &w, Some(&out.target.alpha)).unwrap().all_pass());
            }
            Err(TransformError::NoSquareRoot { .. }) => {
                prop_assert_eq!(v.check("shift").unwrap().status, AxiomStatus::Unrealizable);
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn blow_down_output_is_a_quadratic_helix(g in any_group(), seed: u64) {
        let spec = random_blow_down(&g, &mut rng(seed), DEFAULT_TRIES).unwrap().unwrap();
        let data = blow_down_data(&g, &spec.host, &spec.p).unwrap();
        let w = data.window(&g, -20..=20).unwrap();
        prop_assert!(validate_quadratic_helix(&g, &w, None).unwrap().consistent());
        match blow_down(&g, &spec, -20..=20) {
            Ok(out) => prop_assert!(validate_quadratic_helix(&g, &w, Some(&out.target.psi)).unwrap().all_pass()),
            Err(TransformError::NoCubeRoot { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn inverse_points_match_brute_force(g in any_group(), seed: u64) {
        let mut rng = rng(seed);
        if let Some(spec) = random_blow_up(&g, &mut rng, DEFAULT_TRIES).unwrap() {
            let inv = invert_blow_up(&g, &spec).unwrap();
            let tau = spec.host.tau(&g).unwrap();
            prop_assert_eq!(solve_inverse_blow_up(&g, &spec.host.l.sum, &tau, &spec.p, &spec.q).unwrap(), vec![inv.p_prime]);
        }
        let spec = random_blow_down(&g, &mut rng, DEFAULT_TRIES).unwrap().unwrap();
        let inv = invert_blow_down(&g, &spec).unwrap();
        let tau = spec.host.tau(&g).unwrap();
        let (ps, qs) = solve_inverse_blow_down(&g, &spec.host.l0.sum, &spec.host.l1.sum, &tau, &spec.p).unwrap();
        prop_assert_eq!((ps, qs), (vec![inv.p_prime], vec![inv.q_prime]));
    }

    #[test]
    fn round_trips_close(g in any_group(), seed: u64) {
        let mut rng = rng(seed);
        let mut starts = Vec::new();
        if let Some(s) = random_blow_up(&g, &mut rng, DEFAULT_TRIES).unwrap() {
            starts.push(RoundTripStart::BlowUp(s));
        }
        starts.push(RoundTripStart::BlowDown(random_blow_down(&g, &mut rng, DEFAULT_TRIES).unwrap().unwrap()));
        for start in starts {
            let rep = verify_roundtrip(&g, &start, -10..=10).unwrap();
            prop_assert!(rep.matches, "{:?}", rep.mismatches);
            let cells = section_triviality_check(&g, &start, &rep.inverse_points, -10..=10).unwrap();
            prop_assert!(cells.passed());
        }
    }

    #[test]
    fn perturbed_inverse_points_are_caught(g in any_group(), seed: u64, step: u64) {
        let spec = random_blow_down(&g, &mut rng(seed), DEFAULT_TRIES).unwrap().unwrap();
        let start = RoundTripStart::BlowDown(spec);
        let mut inverse = start.inverse_points(&g).unwrap();
        let shift = common::pick(&g, step);
        prop_assume!(!g.is_identity(&shift));
        inverse[0] = g.add(&inverse[0], &shift).unwrap();
        let rep = verify_roundtrip_with(&g, &start, -10..=10, &inverse).unwrap();
        prop_assert!(!rep.matches);
        prop_assert!(!section_triviality_check(&g, &start, &inverse, -3..=3).unwrap().passed());
    }

    #[test]
    fn cremona_composition_equals_direct(g in any_group(), seed: u64) {
        let spec = random_cremona(&g, &mut rng(seed), DEFAULT_TRIES).unwrap();
        prop_assume!(spec.is_some());
        let f = cremona_factor(&g, &spec.unwrap(), -10..=10).unwrap();
        prop_assert!(f.matches);
        prop_assert_eq!(f.gamma1.is_some(), !f.alpha_roots.is_empty());
    }

    #[test]
    fn one_periodicity_criterion(n in 13u64..1000, seed: u64) {
        let g = Group::cyclic(n).unwrap();
        let mut rng = rng(seed);
        if let Some(spec) = random_sigma_compatible(&g, &mut rng, DEFAULT_TRIES).unwrap() {
            let data = blow_up_data(&g, &spec.host, &spec.p, &spec.q).unwrap();
            prop_assert!(is_one_periodic(&g, &data, -10..=10).unwrap());
        }
        if let Some(spec) = random_generic_blow_up(&g, &mut rng, DEFAULT_TRIES).unwrap() {
            let data = blow_up_data(&g, &spec.host, &spec.p, &spec.q).unwrap();
            prop_assert!(!is_one_periodic(&g, &data, -10..=10).unwrap());
        }
    }
}
