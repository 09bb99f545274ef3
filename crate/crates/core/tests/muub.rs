use proptest::prelude::*;
use unitary_testers::bounds::SearchConfig;
use unitary_testers::muub::{
    are_muub, build_named_basis, completeness_sum, embedded_overlap_range, fixtures, hs_overlap,
    rotation_family, search_unbiased_partner, verify_prop_trivial, KAPPA_TOL,
};
use unitary_testers::qmath::{gates, haar_random_unitary, RngHandle};
use unitary_testers::tester::TesterSet;
use unitary_testers::verify::maximal_fixtures;
use unitary_testers::Unitary;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hs_overlap_range(d in 1usize..5, seed in any::<u64>(), phi in 0.0f64..6.3) {
        let u = haar_random_unitary(d, RngHandle::new(seed));
        let v = haar_random_unitary(d, RngHandle::with_stream(seed, 1));
        let full = (d * d) as f64;
        let o = hs_overlap(&u, &v);
        prop_assert!((-1e-12..=full + 1e-9).contains(&o));
        if d > 1 {
            prop_assert!(o < full - 1e-9);
        }
        prop_assert!((hs_overlap(&u, &u.with_phase(phi)) - full).abs() <= 1e-9);
    }

    #[test]
    fn cross_overlaps_within_range_after_rotation(seed in any::<u64>(), which in 0usize..2) {
        let fx = maximal_fixtures().unwrap();
        let (s1, _, a, b) = &fx[which];
        let w = haar_random_unitary(2, RngHandle::new(seed));
        let v = haar_random_unitary(2, RngHandle::with_stream(seed, 1));
        let (lo, hi) = embedded_overlap_range(&a.transformed(&w, &v), &b.transformed(&w, &v), s1.testers()[0].ancilla_dim());
        prop_assert!(lo >= -1e-9 && hi <= a.size() as f64 + 1e-9);
    }

    #[test]
    fn completeness_sum_is_one(d in 1usize..5, seed in any::<u64>()) {
        let basis = build_named_basis("weyl", d).unwrap();
        let u = haar_random_unitary(d, RngHandle::new(seed));
        prop_assert!((completeness_sum(&u, &basis) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn unbiasedness_survives_common_transformations(seed in any::<u64>()) {
        let w = haar_random_unitary(2, RngHandle::new(seed));
        let v = haar_random_unitary(2, RngHandle::with_stream(seed, 1));
        for (a, b) in [("rotation", "hadamard-pair"), ("pauli", "pauli-unbiased")] {
            let a = build_named_basis(a, 2).unwrap().transformed(&w, &v);
            let b = build_named_basis(b, 2).unwrap().transformed(&w, &v);
            prop_assert!(are_muub(&a, &b, KAPPA_TOL).unwrap().verdict);
        }
    }

    /// Orthogonality of the tested unitaries whenever the hypothesis holds.
    #[test]
    fn trivial_bound_hypothesis_implies_orthogonality(seed in any::<u64>(), variant in 0usize..4) {
        let w = haar_random_unitary(2, RngHandle::new(seed));
        let phase = |k: u64| (seed.wrapping_mul(k + 1) % 628) as f64 / 100.0;
        let (s1, s2, mut us): (TesterSet, TesterSet, Vec<Unitary>) = if variant % 2 == 0 {
            (
                fixtures::z_set(),
                fixtures::x_set(),
                vec![Unitary::identity(2), Unitary::new(gates::i_sigma_y()).unwrap()],
            )
        } else {
            let paulis = gates::paulis().into_iter().map(|p| Unitary::new(p).unwrap()).collect();
            (fixtures::bell_set(), fixtures::bell_set(), paulis)
        };
        us = us.iter().enumerate().map(|(k, u)| u.with_phase(phase(k as u64))).collect();
        if variant >= 2 {
            // perturb one element away from the fixture
            us[1] = haar_random_unitary(2, RngHandle::with_stream(seed, 2));
        }
        let rotated: Vec<Unitary> = us.iter().map(|u| u.conjugated_by(&w)).collect();
        let r = verify_prop_trivial(&s1.rotated(&w).unwrap(), &s2.rotated(&w).unwrap(), &rotated, &[]);
        if r.hypothesis.pass {
            prop_assert!(r.s1_orthogonal);
        }
        prop_assert_eq!(r.hypothesis.pass, variant < 2);
    }
}

#[test]
fn rotation_family_elements_are_in_span() {
    let r = build_named_basis("rotation", 2).unwrap();
    for u in rotation_family(16) {
        assert!((completeness_sum(&u, &r) - 1.0).abs() < 1e-12);
    }
    let outside = Unitary::new(gates::sigma_z()).unwrap();
    assert!(completeness_sum(&outside, &r) < 1e-12);
}

#[test]
fn partner_search_beyond_qubits() {
    let weyl = build_named_basis("weyl", 3).unwrap();
    let cfg = SearchConfig { starts: 4, rng: RngHandle::new(1), ..SearchConfig::default() };
    let (partner, residual) = search_unbiased_partner(&weyl, &cfg).unwrap();
    assert!(residual < 1e-10, "{residual}");
    let report = are_muub(&weyl, &partner, KAPPA_TOL).unwrap();
    assert!(report.verdict);
    assert!((report.kappa.unwrap() - 1.0).abs() < 1e-6);
}
