use proptest::prelude::*;
use unitary_testers::qkd::{
    analytic_eve_accuracy, run_extended, run_lm05, simulate, ConfigDoc, EveStrategy, ProbePolicy,
    Protocol, ProtocolConfig,
};
use unitary_testers::RngHandle;

const QMM_FIXED: EveStrategy = EveStrategy::Qmm { probe: ProbePolicy::Fixed { set: 0, tester: 0 } };
const QMM_RANDOM: EveStrategy = EveStrategy::Qmm { probe: ProbePolicy::Random };

/// Control-round mismatch probability under a QMM adversary, enumerated from
/// real qubit amplitudes: Bob's state, Alice's basis (compared only when it
/// matches Bob's), and the adversary's probe.
fn cm_mismatch_oracle(eve_states: &[[f64; 2]]) -> f64 {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let bases = [[[1.0, 0.0], [0.0, 1.0]], [[r, r], [r, -r]]];
    let mut total = 0.0;
    let mut weight = 0.0;
    for basis in bases {
        for bob in &basis {
            for eve in eve_states {
                // Alice measures the probe in Bob's basis; mismatch unless she finds Bob's state.
                let overlap = bob[0] * eve[0] + bob[1] * eve[1];
                total += 1.0 - overlap * overlap;
                weight += 1.0;
            }
        }
    }
    total / weight
}

#[test]
fn cm_mismatch_matches_enumeration() {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let all = [[1.0, 0.0], [0.0, 1.0], [r, r], [r, -r]];
    for (eve, states) in [(QMM_FIXED, &all[..1]), (QMM_RANDOM, &all[..])] {
        let oracle = cm_mismatch_oracle(states);
        let s = run_lm05(&ProtocolConfig::lm05(40_000, 0.5, eve, RngHandle::new(21))).unwrap();
        assert!(s.cm_mismatch.within_sigma(oracle, 3.0), "{eve:?}: {:?} vs {oracle}", s.cm_mismatch);
        assert_eq!(s.bob_error.count, 0);
        assert_eq!(s.eve_accuracy.unwrap().rate, 1.0);
    }
}

#[test]
fn sift_indicator_is_fair() {
    let n = 2_000u64;
    let band = 3.0 * (0.25 / n as f64).sqrt();
    let runs = 100;
    let inside = (0..runs)
        .filter(|&seed| {
            let cfg = ProtocolConfig::extended(2, n, EveStrategy::None, RngHandle::new(seed)).unwrap();
            (run_extended(&cfg).unwrap().sift_fraction.rate - 0.5).abs() <= band
        })
        .count();
    assert!(inside * 100 >= 99 * runs as usize, "{inside}/{runs}");
}

#[test]
fn eve_accuracy_converges_for_both_policies() {
    for size in [2, 4] {
        for (k, eve) in [QMM_FIXED, QMM_RANDOM].into_iter().enumerate() {
            let cfg = ProtocolConfig::extended(size, 24_000, eve, RngHandle::with_stream(8, k as u64)).unwrap();
            let s = run_extended(&cfg).unwrap();
            assert!(s.sifted >= 10_000);
            let acc = s.eve_accuracy.unwrap();
            assert!(acc.within_sigma(analytic_eve_accuracy(size), 3.0), "D={size} {eve:?}: {acc:?}");
        }
    }
}

#[test]
fn stats_reproducible_from_seed_and_stream() {
    let cfg = ProtocolConfig::extended(4, 5_000, QMM_RANDOM, RngHandle::with_stream(3, 4)).unwrap();
    let a = serde_json::to_string(&run_extended(&cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&run_extended(&cfg).unwrap()).unwrap();
    assert_eq!(a, b);
    let mut other = cfg.clone();
    other.rng = RngHandle::with_stream(3, 5);
    assert_ne!(a, serde_json::to_string(&run_extended(&other).unwrap()).unwrap());
}

#[test]
fn config_document_matches_preset() {
    let doc = ConfigDoc::from_json(
        r#"{"protocol":"extended","d":2,"D":2,"rounds":3000,"eve":{"kind":"qmm"},
            "tester_sets":[["0Z","1Z"],["0X","1X"]],"encodings":["rotation","hadamard-pair"],"seed":4}"#,
    )
    .unwrap();
    let (protocol, from_doc) = doc.into_config().unwrap();
    let preset = ProtocolConfig::extended(2, 3000, QMM_FIXED, RngHandle::new(4)).unwrap();
    assert_eq!(simulate(&from_doc, protocol).unwrap(), simulate(&preset, Protocol::Extended).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn no_adversary_no_errors(seed in any::<u64>(), rounds in 1u64..3_000, cf in 0.0f64..=1.0, size in prop::sample::select(vec![2usize, 4])) {
        let lm05 = run_lm05(&ProtocolConfig::lm05(rounds, cf, EveStrategy::None, RngHandle::new(seed))).unwrap();
        prop_assert_eq!(lm05.bob_error.count, 0);
        prop_assert_eq!(lm05.cm_mismatch.count, 0);
        let mut cfg = ProtocolConfig::extended(size, rounds, EveStrategy::None, RngHandle::new(seed)).unwrap();
        cfg.control_fraction = cf;
        let ext = run_extended(&cfg).unwrap();
        prop_assert_eq!(ext.bob_error.count, 0);
        prop_assert_eq!(ext.cm_mismatch.count, 0);
        prop_assert!(ext.sifted <= ext.rounds);
        for r in [ext.sift_fraction, ext.bob_error, ext.cm_mismatch] {
            prop_assert!((0.0..=1.0).contains(&r.rate));
        }
    }
}
