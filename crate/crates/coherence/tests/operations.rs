//! Per-operation examples: fixed inputs with independently computed outputs.

mod common;

use std::f64::consts::SQRT_2;

use coherence::channels::{io_nonsio_from_parts, sample_cptp, KrausChannel, CLASSIFY_TOL};
use coherence::measures::{
    c_l1, c_max, c_max_rayleigh_check, c_rel_entropy, c_robustness, von_neumann_entropy,
};
use coherence::numerics::{hermitian_eigendecomposition, min_eigenvalue, Complex64, ComplexMatrix};
use coherence::states::{random_density_matrix, validate_state};
use coherence::witness::{
    monotone_ordering_report, separation_report, stochastic_bound_report, WitnessFixtures,
};
use coherence::{MeasureName, Verdict};

use common::{char_poly_eigs_3x3, entropy_bits, max_entry_diff};

#[test]
fn witness_input_spectrum_matches_char_poly_oracle() {
    let fixtures = WitnessFixtures::construct();
    let spectrum = hermitian_eigendecomposition(fixtures.rho_in.matrix()).unwrap();
    let oracle = char_poly_eigs_3x3(fixtures.rho_in.matrix());
    for (got, want) in spectrum.eigenvalues.iter().zip(oracle) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
    assert!((spectrum.eigenvalues.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(spectrum.eigenvalues.iter().all(|&e| e >= -1e-12));
}

#[test]
fn witness_output_is_psd_by_oracle_and_solver() {
    let fixtures = WitnessFixtures::construct();
    let lib = min_eigenvalue(fixtures.rho_out.matrix()).unwrap();
    let oracle = char_poly_eigs_3x3(fixtures.rho_out.matrix())[2];
    assert!(lib >= -1e-10);
    assert!((lib - oracle).abs() < 1e-12);
}

#[test]
fn witness_input_validates_as_a_state() {
    let fixtures = WitnessFixtures::construct();
    assert!(validate_state(fixtures.rho_in.matrix()).is_ok());
}

#[test]
fn dephased_witness_input_has_exact_populations() {
    let fixtures = WitnessFixtures::construct();
    let dephased = fixtures.rho_in.dephase();
    let expected = [
        0.5 + SQRT_2 / 20.0,
        0.25 - SQRT_2 / 40.0,
        0.25 - SQRT_2 / 40.0,
    ];
    for (i, want) in expected.into_iter().enumerate() {
        assert!((dephased.entry(i, i).re - want).abs() < 1e-15);
        for j in 0..3 {
            if i != j {
                assert_eq!(dephased.entry(i, j), Complex64::new(0.0, 0.0));
            }
        }
    }
    assert!(!fixtures.rho_in.is_incoherent(1e-10));
    assert!(dephased.is_incoherent(0.0));
}

#[test]
fn off_diagonal_part_of_witness_input() {
    let fixtures = WitnessFixtures::construct();
    let chi = fixtures.rho_in.off_diagonal_part();
    let want = Complex64::new(1.0 / (4.0 * SQRT_2), -1.0 / 20.0);
    assert!((chi.get(0, 1) - want).norm() < 1e-16);
    for i in 0..3 {
        assert_eq!(chi.get(i, i), Complex64::new(0.0, 0.0));
    }
}

#[test]
fn channel_action_reproduces_witness_output() {
    let fixtures = WitnessFixtures::construct();
    let out = fixtures.channel.apply(&fixtures.rho_in).unwrap();
    assert!(max_entry_diff(out.matrix(), fixtures.rho_out.matrix()) <= 1e-12);
}

#[test]
fn stochastic_branch_reproduces_fixture() {
    let fixtures = WitnessFixtures::construct();
    let (p, state) = fixtures
        .channel
        .apply_stochastic(1, &fixtures.rho_in)
        .unwrap();
    assert!((p - (60.0 - 3.0 * SQRT_2) / 80.0).abs() < 1e-15);
    assert!(max_entry_diff(state.matrix(), fixtures.rho_stochastic.matrix()) <= 1e-12);
}

#[test]
fn choi_of_witness_channel_is_cptp() {
    let fixtures = WitnessFixtures::construct();
    let choi = fixtures.channel.choi();
    assert!(choi.is_positive(1e-10));
    let marginal = choi.partial_trace_output();
    assert!(max_entry_diff(&marginal, &ComplexMatrix::identity(3)) < 1e-12);
}

#[test]
fn witness_channel_classification() {
    let fixtures = WitnessFixtures::construct();
    let report = fixtures.channel.classify(CLASSIFY_TOL);
    assert!(report.io_certified);
    assert!(!report.sio_certified);
    assert!(!report.dio);
    assert!(report.mio);
    assert!(report.residuals.completeness <= 1e-12);
    // The channel fails dephasing covariance by a macroscopic margin.
    assert!(report.residuals.dio > 0.1);
}

#[test]
fn incoherence_certificate_cross_check_on_basis_states() {
    // Certified column structure implies each branch keeps basis projectors
    // diagonal; verify by direct action.
    let fixtures = WitnessFixtures::construct();
    for k in fixtures.channel.kraus_operators() {
        for i in 0..3 {
            let unit = ComplexMatrix::matrix_unit(3, i, i);
            let image = k.matmul(&unit).matmul(&k.adjoint());
            for a in 0..3 {
                for b in 0..3 {
                    if a != b {
                        assert!(image.get(a, b).norm() < 1e-15);
                    }
                }
            }
        }
    }
}

#[test]
fn dephasing_covariance_fails_on_the_coherent_plus_state() {
    // The pure state (|1⟩ + |2⟩)/√2 separates the channel from the
    // dephasing-covariant class by direct action.
    let fixtures = WitnessFixtures::construct();
    let h = Complex64::new(1.0 / SQRT_2, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let plus = coherence::PureStateVector::new(vec![zero, h, h]).unwrap();
    let rho = plus.density_matrix();
    let a = fixtures.channel.apply(&rho.dephase()).unwrap();
    let b = fixtures.channel.apply(&rho).unwrap().dephase();
    assert!(max_entry_diff(a.matrix(), b.matrix()) > 0.1);
}

#[test]
fn merge_construction_reproduces_witness_channel_exactly() {
    let fixtures = WitnessFixtures::construct();
    let h = Complex64::new(1.0 / SQRT_2, 0.0);
    let v = [[h, h], [h, -h]];
    let ch = io_nonsio_from_parts(3, (1, 2), v, 0, 1, &[(0, 1, 0)]).unwrap();
    for (built, fixture) in ch
        .kraus_operators()
        .iter()
        .zip(fixtures.channel.kraus_operators())
    {
        assert_eq!(built.entries(), fixture.entries());
    }
}

#[test]
fn twirl_of_identity_and_dephasing_act_unchanged() {
    for (channel, label) in [
        (KrausChannel::identity(3), "identity"),
        (KrausChannel::dephasing(3), "dephasing"),
    ] {
        let twirled = channel.dephasing_twirl().unwrap();
        for seed in 0..5 {
            let rho = random_density_matrix(3, seed);
            let direct = channel.apply(&rho).unwrap();
            let via_twirl = twirled.apply(&rho).unwrap();
            assert!(
                max_entry_diff(direct.matrix(), via_twirl.matrix()) < 1e-12,
                "{label} twirl deviates"
            );
        }
    }
}

#[test]
fn twirled_random_channel_is_dephasing_covariant() {
    let twirled = sample_cptp(3, 2, 11).dephasing_twirl().unwrap();
    let report = twirled.classify(CLASSIFY_TOL);
    assert!(report.dio && report.mio);
    assert!(report.residuals.dio <= 1e-12);
}

#[test]
fn l1_values_on_witness_pair() {
    let fixtures = WitnessFixtures::construct();
    // Independent summation of the six off-diagonal moduli.
    let mut expected_in = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                expected_in += fixtures.rho_in.entry(i, j).norm();
            }
        }
    }
    let got_in = c_l1(&fixtures.rho_in).value;
    assert!((got_in - expected_in).abs() < 1e-14);
    assert!((got_in - 0.89976).abs() < 1e-5);

    let expected_out = 2.0 * Complex64::new(0.25, -SQRT_2 / 32.0).norm();
    let got_out = c_l1(&fixtures.rho_out).value;
    assert!((got_out - expected_out).abs() < 1e-14);
    assert!((got_out - 0.50775).abs() < 1e-5);
}

#[test]
fn relative_entropy_matches_char_poly_oracle() {
    let fixtures = WitnessFixtures::construct();
    let dephased_eigs = char_poly_eigs_3x3(fixtures.rho_in.dephase().matrix());
    let full_eigs = char_poly_eigs_3x3(fixtures.rho_in.matrix());
    let expected = entropy_bits(&dephased_eigs) - entropy_bits(&full_eigs);
    let got = c_rel_entropy(&fixtures.rho_in).value;
    assert!((got - expected).abs() < 1e-10, "{got} vs {expected}");
    assert!((von_neumann_entropy(&fixtures.rho_in) - entropy_bits(&full_eigs)).abs() < 1e-10);
}

#[test]
fn cmax_reproduces_reported_values() {
    let fixtures = WitnessFixtures::construct();
    assert!((c_max(&fixtures.rho_in).value - 0.1853).abs() <= 5e-4);
    assert!((c_max(&fixtures.rho_out).value - 0.2548).abs() <= 5e-4);
    assert!((c_max(&fixtures.rho_stochastic).value - 0.3153).abs() <= 5e-4);
}

#[test]
fn seeded_rayleigh_hits_cmax_on_witness_input() {
    let fixtures = WitnessFixtures::construct();
    let sampled = c_max_rayleigh_check(&fixtures.rho_in, 0, 1);
    assert!((sampled - 0.1853).abs() <= 5e-4);
    assert!((sampled - c_max(&fixtures.rho_in).value).abs() < 1e-9);
}

#[test]
fn robustness_of_pure_states_equals_l1() {
    use coherence::rng::SplitMix64;
    let mut rng = SplitMix64::new(14);
    for _ in 0..10 {
        let amps: Vec<Complex64> = (0..3).map(|_| rng.next_complex_gaussian()).collect();
        let rho = coherence::PureStateVector::normalized(amps).density_matrix();
        let rob = c_robustness(&rho).unwrap().value;
        let l1 = c_l1(&rho).value;
        assert!((rob - l1).abs() < 1e-5, "{rob} vs {l1}");
    }
}

#[test]
fn separation_report_values() {
    let report = separation_report().unwrap();
    assert_eq!(report.verdict, Verdict::Violation);
    assert!((report.value_in - 0.1853).abs() <= 5e-4);
    assert!((report.value_out - 0.2548).abs() <= 5e-4);
    assert!((report.delta - 0.0695).abs() <= 1e-3);
    let summary = report.channel_summary.unwrap();
    assert!(summary.classification.io_certified && !summary.classification.sio_certified);
    assert!(!summary.classification.dio && summary.classification.mio);
}

#[test]
fn ordering_report_rows() {
    let rows = monotone_ordering_report().unwrap();
    for row in &rows {
        match row.measure {
            MeasureName::CMax => {
                assert!(!row.ordered);
                assert!((row.value_in - 0.1853).abs() <= 5e-4);
                assert!((row.value_out - 0.2548).abs() <= 5e-4);
            }
            MeasureName::L1 => {
                assert!(row.ordered);
                assert!((row.value_in - 0.89976).abs() < 1e-5);
                assert!((row.value_out - 0.50775).abs() < 1e-5);
            }
            _ => assert!(row.ordered, "{} must be ordered", row.measure),
        }
    }
}

#[test]
fn stochastic_report_values() {
    let report = stochastic_bound_report().unwrap();
    assert!((report.value_out - 0.3153).abs() <= 5e-4);
    assert!(report.value_out > report.value_in);
    assert_eq!(report.verdict, Verdict::Violation);
}

#[test]
fn falsifier_spot_checks() {
    use coherence::witness::{falsify, ChannelFamily, VIOLATION_TOL};
    let hit = falsify(MeasureName::CMax, ChannelFamily::Io, 3, 5, 7, VIOLATION_TOL);
    assert_eq!(hit.verdict, Verdict::Violation);
    assert_eq!(hit.trials, 1);

    let clean = falsify(MeasureName::L1, ChannelFamily::Io, 3, 50, 7, VIOLATION_TOL);
    assert_eq!(clean.verdict, Verdict::Respected);

    let dio = falsify(
        MeasureName::CMax,
        ChannelFamily::DioTwirl,
        3,
        50,
        7,
        VIOLATION_TOL,
    );
    assert_eq!(dio.verdict, Verdict::Respected);
}
