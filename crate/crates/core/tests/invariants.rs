use proptest::prelude::*;

use qxot_core::cheat::classical::{classical_tradeoff_exact, Exact};
use qxot_core::cheat::{
    alice_notest_closed_form, alice_notest_oracle, alice_test_bound_closed_form,
    alice_test_oracle, bob_cheat_closed_form, bob_cheat_oracle,
};
use qxot_core::linalg::{hermitian_eig, CMat, C64};
use qxot_core::measurements::{square_root_measurement, StateEnsemble};
use qxot_core::protocol::reversed::reversed_final_bit;
use qxot_core::protocol::wrapper::{choice_from_r, wrapper_output, wrapper_r, wrapper_s};
use qxot_core::protocol::{
    run_reversed, run_semirandom, Cheat, Injection, PartyStrategy, Role, RoundSeed,
};
use qxot_core::state_family::{build_symmetric_family, OverlapParams, XorBits};

/// Realizable overlaps from positive Fourier weights.
fn realizable() -> impl Strategy<Value = OverlapParams> {
    prop::array::uniform4(1e-3f64..1.0).prop_map(|e| {
        let t: f64 = e.iter().sum();
        let w = e.map(|x| x / t);
        OverlapParams::new(w[0] - w[2], w[3] - w[1], (w[0] + w[2]) - (w[1] + w[3]))
    })
}

/// `|F| <= 1/3`, `|G| <= 1/3`.
fn feasible() -> impl Strategy<Value = OverlapParams> {
    (0.0..=1.0 / 3.0, 0.0..std::f64::consts::TAU, -1.0 / 3.0..=1.0 / 3.0)
        .prop_map(|(r, t, g): (f64, f64, f64)| OverlapParams::new(r * t.cos(), r * t.sin(), g))
}

fn bits() -> impl Strategy<Value = XorBits> {
    (0u8..2, 0u8..2).prop_map(|(a, b)| XorBits::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn family_reproduces_overlaps(p in realizable()) {
        let fam = build_symmetric_family(&p).unwrap();
        let g = fam.gram();
        for m in 0..4 {
            let adj = g.entries()[((m + 1) % 4) * 4 + m];
            prop_assert!((adj - p.f()).norm() < 1e-10, "adjacent overlap {adj}");
            let diag = g.entries()[m * 4 + (m + 2) % 4];
            prop_assert!((diag.re - p.g).abs() < 1e-10);
            prop_assert!(diag.im.abs() < 1e-12);
        }
        let u4 = &(&fam.u * &fam.u) * &(&fam.u * &fam.u);
        prop_assert!(u4.max_abs_diff(&CMat::identity(fam.dim())) < 1e-10);
    }

    #[test]
    fn closed_forms_match_oracles(p in realizable()) {
        let b = bob_cheat_closed_form(&p).unwrap();
        prop_assert!((b - bob_cheat_oracle(&p).unwrap()).abs() <= 1e-8);
        let cf = alice_notest_closed_form(&p).unwrap();
        let or = alice_notest_oracle(&p).unwrap();
        prop_assert!((cf.overall - or.overall()).abs() <= 1e-8);
        prop_assert!((cf.p2 - or.p2).abs() <= 1e-8);
    }

    #[test]
    fn testing_bound_matches_four_outcome_oracle(p in feasible()) {
        let bound = alice_test_bound_closed_form(&p);
        prop_assert!((bound - alice_test_oracle(&p).unwrap().value).abs() <= 1e-8);
    }

    #[test]
    fn values_lie_in_their_ranges(p in feasible()) {
        let b = bob_cheat_closed_form(&p).unwrap();
        let a = alice_test_bound_closed_form(&p);
        let n = alice_notest_closed_form(&p).unwrap().overall;
        prop_assert!((0.5 - 1e-9..=1.0 + 1e-9).contains(&b));
        prop_assert!(b >= 0.75 - 1e-9);
        for v in [a, n] {
            prop_assert!((1.0 / 3.0 - 1e-9..=1.0 + 1e-9).contains(&v));
        }
    }

    #[test]
    fn sign_of_f_does_not_matter(p in feasible()) {
        let q = p.negate_f();
        prop_assert!((bob_cheat_closed_form(&p).unwrap() - bob_cheat_closed_form(&q).unwrap()).abs() < 1e-12);
        prop_assert!((alice_test_bound_closed_form(&p) - alice_test_bound_closed_form(&q)).abs() < 1e-12);
        prop_assert!((bob_cheat_oracle(&p).unwrap() - bob_cheat_oracle(&q).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn exchange_symmetry_without_testing(p in realizable()) {
        let a = alice_notest_closed_form(&p).unwrap().overall;
        let b = alice_notest_closed_form(&p.exchange()).unwrap().overall;
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn square_root_measurement_is_a_povm(p in realizable()) {
        let fam = build_symmetric_family(&p).unwrap();
        let srm = square_root_measurement(&StateEnsemble::uniform_pure(fam.states).unwrap()).unwrap();
        prop_assert!(srm.validate().is_ok());
    }

    #[test]
    fn hermitian_eig_reconstructs(entries in prop::collection::vec(-1.0f64..1.0, 32)) {
        let m = CMat::from_fn(4, 4, |i, j| C64::new(entries[i * 4 + j], entries[16 + i * 4 + j]));
        let h = m.hermitian_part();
        let e = hermitian_eig(&h).unwrap();
        prop_assert!(e.reconstruct_with(|x| x).max_abs_diff(&h) < 1e-10);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }
}

proptest! {
    #[test]
    fn wrapper_delivers_the_chosen_bit(x in bits(), inputs in bits(), b in 0usize..3, choice in 0usize..3) {
        let r = wrapper_r(b, choice);
        let s = wrapper_s(x, r, inputs);
        prop_assert_eq!(wrapper_output(x.get(b), s, choice), inputs.get(choice));
        prop_assert_eq!(choice_from_r(r, b), choice);
    }

    #[test]
    fn reversed_final_bit_is_the_input(x in bits(), inputs in bits(), b in 0usize..3) {
        prop_assert_eq!(reversed_final_bit(x, inputs, b), inputs.get(b));
    }

    #[test]
    fn classical_line_is_exactly_five(num in 0i64..=1000, den in 1i64..=1000) {
        prop_assume!(num <= den);
        let p = classical_tradeoff_exact(Exact::new(num, den)).unwrap();
        prop_assert_eq!(p.metric, Exact::from_integer(5));
    }

    #[test]
    fn rounds_are_deterministic_and_honest_rounds_correct(master in any::<u64>(), round in any::<u64>(), which in 0usize..4) {
        let seed = RoundSeed::new(master, round);
        let ha = PartyStrategy::honest(Role::Alice);
        let hb = PartyStrategy::honest(Role::Bob);
        let (alice, bob) = match which {
            0 => (ha, hb),
            1 => (PartyStrategy::cheat(Role::Alice, Cheat::Injection(Injection::Uniform)), hb),
            2 => (ha, PartyStrategy::cheat(Role::Bob, Cheat::SquareRoot)),
            _ => (PartyStrategy::cheat(Role::Alice, Cheat::Entangled), hb),
        };
        let a = run_semirandom(alice, bob, seed).unwrap();
        prop_assert_eq!(&a, &run_semirandom(alice, bob, seed).unwrap());
        if which == 0 {
            prop_assert_eq!(a.honest_output_correct(), Some(true));
            prop_assert!(!a.abort);
            let r = run_reversed(ha, hb, seed).unwrap();
            prop_assert_eq!(r.honest_output_correct(), Some(true));
        }
    }
}
