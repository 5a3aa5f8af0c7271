//! End-to-end monotonicity witnesses.
//!
//! This module bundles a fixed three-level state and a two-operator incoherent
//! channel whose action strictly increases the maximal-ratio measure — the
//! deterministic certificate that the transformation is out of reach for
//! strictly-incoherent and dephasing-covariant operations, which can never
//! increase that measure. Around it sit a monotone-ordering report over all
//! four measures and a seeded randomized falsifier for every
//! measure × channel-family cell.

use std::f64::consts::SQRT_2;

use thiserror::Error;

use crate::channels::{
    sample_cptp_from, sample_io_nonsio_from, sample_sio_from, ChannelError, ChannelMode,
    ClassificationReport, KrausChannel,
};
use crate::measures::{self, MeasureError, MeasureName};
use crate::numerics::{Complex64, ComplexMatrix};
use crate::rng::SplitMix64;
use crate::states::{random_density_matrix_from, DensityMatrix};

/// Entrywise tolerance for fixture identities.
pub const FIXTURE_TOL: f64 = 1e-12;

/// Default threshold above which a measure increase counts as a violation.
pub const VIOLATION_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("fixture assertion failed: {what} (residual {residual:.3e})")]
    FixtureMismatch { what: String, residual: f64 },
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// The bundled witness inputs, constructed from exact arithmetic expressions
/// (square roots and rationals, not decimal literals), so entrywise 1e-12
/// comparisons are meaningful.
#[derive(Debug, Clone)]
pub struct WitnessFixtures {
    /// Three-level input state with coherence concentrated in a 2D subspace.
    pub rho_in: DensityMatrix,
    /// Two-operator incoherent channel that merges the coherent subspace.
    pub channel: KrausChannel,
    /// Deterministic channel output.
    pub rho_out: DensityMatrix,
    /// Renormalized output of the second Kraus branch alone.
    pub rho_stochastic: DensityMatrix,
    /// Probability of that branch on `rho_in`: (60 − 3√2)/80.
    pub branch_probability: f64,
}

impl WitnessFixtures {
    pub fn construct() -> Self {
        let c = |re: f64, im: f64| Complex64::new(re, im);

        let rho_in = ComplexMatrix::from_rows(&[
            vec![
                c(0.5 + SQRT_2 / 20.0, 0.0),
                c(1.0 / (4.0 * SQRT_2), -1.0 / 20.0),
                c(-1.0 / (4.0 * SQRT_2), 1.0 / 80.0),
            ],
            vec![
                c(1.0 / (4.0 * SQRT_2), 1.0 / 20.0),
                c(0.25 - SQRT_2 / 40.0, 0.0),
                c(1.0 / (8.0 * SQRT_2), 1.0 / 100.0),
            ],
            vec![
                c(-1.0 / (4.0 * SQRT_2), -1.0 / 80.0),
                c(1.0 / (8.0 * SQRT_2), -1.0 / 100.0),
                c(0.25 - SQRT_2 / 40.0, 0.0),
            ],
        ]);

        let h = 1.0 / SQRT_2;
        let k1 = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(h, 0.0), c(h, 0.0)],
            vec![c(0.0, 0.0); 3],
            vec![c(0.0, 0.0); 3],
        ]);
        let k2 = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(h, 0.0), c(-h, 0.0)],
            vec![c(0.0, 0.0); 3],
        ]);

        let rho_out = ComplexMatrix::from_rows(&[
            vec![
                c(0.75 + 7.0 * SQRT_2 / 80.0, 0.0),
                c(0.25, -SQRT_2 / 32.0),
                c(0.0, 0.0),
            ],
            vec![
                c(0.25, SQRT_2 / 32.0),
                c(0.25 - 7.0 * SQRT_2 / 80.0, 0.0),
                c(0.0, 0.0),
            ],
            vec![c(0.0, 0.0); 3],
        ]);

        // Second branch renormalized: probability (60 − 3√2)/80.
        let q = 60.0 - 3.0 * SQRT_2;
        let rho_stochastic = ComplexMatrix::from_rows(&[
            vec![
                c((40.0 + 4.0 * SQRT_2) / q, 0.0),
                c(20.0 / q, -2.5 * SQRT_2 / q),
                c(0.0, 0.0),
            ],
            vec![
                c(20.0 / q, 2.5 * SQRT_2 / q),
                c((20.0 - 7.0 * SQRT_2) / q, 0.0),
                c(0.0, 0.0),
            ],
            vec![c(0.0, 0.0); 3],
        ]);

        Self {
            rho_in: crate::states::validate_state(&rho_in).expect("fixture state is valid"),
            channel: KrausChannel::trace_preserving(vec![k1, k2])
                .expect("fixture channel is trace-preserving"),
            rho_out: crate::states::validate_state(&rho_out).expect("fixture output is valid"),
            rho_stochastic: crate::states::validate_state(&rho_stochastic)
                .expect("fixture branch output is valid"),
            branch_probability: q / 80.0,
        }
    }
}

/// Channel families the falsifier can sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelFamily {
    /// Strictly incoherent channels (row and column structure).
    Sio,
    /// Incoherent-but-not-strictly-incoherent merge channels.
    Io,
    /// Dephasing twirls of Haar-sampled channels (dephasing-covariant).
    DioTwirl,
}

impl ChannelFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            ChannelFamily::Sio => "sio",
            ChannelFamily::Io => "io",
            ChannelFamily::DioTwirl => "dio-twirl",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// A (state, channel) pair increased the measure beyond tolerance.
    Violation,
    /// Every trial respected monotonicity, as the measure guarantees.
    Respected,
    /// No violation found, but none is guaranteed absent for this cell.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Violation => "violation",
            Verdict::Respected => "respected",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Classification plus a digest identifying the exact Kraus data.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSummary {
    pub dim: usize,
    pub n_kraus: usize,
    pub mode: ChannelMode,
    pub classification: ClassificationReport,
    pub kraus_digest: String,
}

impl ChannelSummary {
    pub fn of(channel: &KrausChannel, tol: f64) -> Self {
        Self {
            dim: channel.dim(),
            n_kraus: channel.kraus_operators().len(),
            mode: channel.mode(),
            classification: channel.classify(tol),
            kraus_digest: kraus_digest(channel),
        }
    }
}

/// FNV-1a over the exact bit patterns of all Kraus entries.
fn kraus_digest(channel: &KrausChannel) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x0000_0100_0000_01B3);
        }
    };
    eat(&(channel.dim() as u64).to_le_bytes());
    for k in channel.kraus_operators() {
        for z in k.entries() {
            eat(&z.re.to_bits().to_le_bytes());
            eat(&z.im.to_bits().to_le_bytes());
        }
    }
    format!("{hash:016x}")
}

/// Outcome of a witness run: measure values before and after one channel
/// application, plus replay data for violations.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub measure: MeasureName,
    pub channel_summary: Option<ChannelSummary>,
    pub value_in: f64,
    pub value_out: f64,
    pub delta: f64,
    pub verdict: Verdict,
    /// Trials executed (for the deterministic reports, 1).
    pub trials: usize,
    pub seed: u64,
    /// The pair behind `delta` (the violating pair, or the closest call).
    pub witness_state: Option<DensityMatrix>,
    pub witness_channel: Option<KrausChannel>,
}

impl WitnessReport {
    /// Recompute delta from the embedded pair; `None` when nothing is embedded.
    pub fn replay_delta(&self) -> Option<f64> {
        let state = self.witness_state.as_ref()?;
        let channel = self.witness_channel.as_ref()?;
        let value_in = measures::evaluate(self.measure, state).ok()?.value;
        let out = channel.apply(state).ok()?;
        let value_out = measures::evaluate(self.measure, &out).ok()?.value;
        Some(value_out - value_in)
    }
}

fn entrywise_residual(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).max_abs_entry()
}

/// Run the bundled deterministic witness end to end.
///
/// Verifies the channel action reproduces the fixture output entrywise to
/// 1e-12, checks the classification verdicts (incoherent-certified, not
/// strictly-incoherent, not dephasing-covariant, maximally-incoherent), and
/// confirms the maximal-ratio measure increases by ≈ +0.0695. Any failed
/// assertion signals an implementation bug via [`WitnessError::FixtureMismatch`].
pub fn separation_report() -> Result<WitnessReport, WitnessError> {
    let fixtures = WitnessFixtures::construct();
    let applied = fixtures.channel.apply(&fixtures.rho_in)?;
    let residual = entrywise_residual(applied.matrix(), fixtures.rho_out.matrix());
    if residual > FIXTURE_TOL {
        return Err(WitnessError::FixtureMismatch {
            what: "channel action does not reproduce the fixture output".into(),
            residual,
        });
    }

    let classification = fixtures.channel.classify(crate::channels::CLASSIFY_TOL);
    let expected = (true, false, false, true);
    let got = (
        classification.io_certified,
        classification.sio_certified,
        classification.dio,
        classification.mio,
    );
    if got != expected {
        return Err(WitnessError::FixtureMismatch {
            what: format!("classification verdicts {got:?}, expected {expected:?}"),
            residual: classification.residuals.dio,
        });
    }

    let value_in = measures::c_max(&fixtures.rho_in).value;
    let value_out = measures::c_max(&applied).value;
    let delta = value_out - value_in;
    for (what, value, target, tol) in [
        ("input measure value", value_in, 0.1853, 5e-4),
        ("output measure value", value_out, 0.2548, 5e-4),
        ("measure increase", delta, 0.0695, 1e-3),
    ] {
        if (value - target).abs() > tol {
            return Err(WitnessError::FixtureMismatch {
                what: format!("{what} {value:.6} differs from {target}"),
                residual: (value - target).abs(),
            });
        }
    }

    Ok(WitnessReport {
        measure: MeasureName::CMax,
        channel_summary: Some(ChannelSummary::of(
            &fixtures.channel,
            crate::channels::CLASSIFY_TOL,
        )),
        value_in,
        value_out,
        delta,
        verdict: Verdict::Violation,
        trials: 1,
        seed: 0,
        witness_state: Some(fixtures.rho_in),
        witness_channel: Some(fixtures.channel),
    })
}

/// One ordering row of [`monotone_ordering_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingRow {
    pub measure: MeasureName,
    pub value_in: f64,
    pub value_out: f64,
    pub ordered: bool,
}

/// Evaluate all four measures on the witness pair.
///
/// Every monotone of incoherent operations must order the pair
/// (value_in ≥ value_out) because the transformation is realized by an
/// incoherent channel; the maximal-ratio row breaks the ordering, which is
/// exactly what certifies that no strictly-incoherent channel can do it.
pub fn monotone_ordering_report() -> Result<Vec<OrderingRow>, WitnessError> {
    let fixtures = WitnessFixtures::construct();
    MeasureName::ALL
        .iter()
        .map(|&measure| {
            let value_in = measures::evaluate(measure, &fixtures.rho_in)?.value;
            let value_out = measures::evaluate(measure, &fixtures.rho_out)?.value;
            Ok(OrderingRow {
                measure,
                value_in,
                value_out,
                ordered: value_in >= value_out,
            })
        })
        .collect()
}

/// Apply the second Kraus branch alone (renormalized) and report the measure.
///
/// The branch probability is (60 − 3√2)/80 and the resulting state pushes the
/// maximal-ratio measure to ≈ 0.3153, past what the deterministic channel
/// reaches — the post-selected enhancement certificate.
pub fn stochastic_bound_report() -> Result<WitnessReport, WitnessError> {
    let fixtures = WitnessFixtures::construct();
    let (probability, branch_state) = fixtures.channel.apply_stochastic(1, &fixtures.rho_in)?;

    let probability_residual = (probability - fixtures.branch_probability).abs();
    if probability_residual > FIXTURE_TOL {
        return Err(WitnessError::FixtureMismatch {
            what: format!("branch probability {probability:.17}"),
            residual: probability_residual,
        });
    }
    let residual = entrywise_residual(branch_state.matrix(), fixtures.rho_stochastic.matrix());
    if residual > FIXTURE_TOL {
        return Err(WitnessError::FixtureMismatch {
            what: "branch output does not match the fixture".into(),
            residual,
        });
    }

    let value_in = measures::c_max(&fixtures.rho_in).value;
    let value_out = measures::c_max(&branch_state).value;
    if (value_out - 0.3153).abs() > 5e-4 {
        return Err(WitnessError::FixtureMismatch {
            what: format!("branch measure value {value_out:.6} differs from 0.3153"),
            residual: (value_out - 0.3153).abs(),
        });
    }

    Ok(WitnessReport {
        measure: MeasureName::CMax,
        channel_summary: Some(ChannelSummary::of(
            &fixtures.channel,
            crate::channels::CLASSIFY_TOL,
        )),
        value_in,
        value_out,
        delta: value_out - value_in,
        verdict: Verdict::Violation,
        trials: 1,
        seed: 0,
        witness_state: Some(fixtures.rho_in),
        witness_channel: Some(fixtures.channel),
    })
}

/// Whether a measure is guaranteed monotone for a family (so a clean run is
/// `Respected` rather than `Inconclusive`).
fn guaranteed_monotone(measure: MeasureName, family: ChannelFamily) -> bool {
    !matches!(
        (measure, family),
        (MeasureName::L1, ChannelFamily::DioTwirl) | (MeasureName::CMax, ChannelFamily::Io)
    )
}

/// Randomized monotonicity falsification over seeded (state, channel) pairs.
///
/// Samples `trials` pairs from the family and returns the first pair whose
/// measure increase exceeds `tol`, with replay data embedded. When the search
/// finds nothing the verdict is `Respected` for guaranteed-monotone cells and
/// `Inconclusive` otherwise (the bundled deterministic witness runs as trial 0
/// for the maximal-ratio × incoherent cell at dimension 3). Each trial draws
/// from its own seed-derived stream, so results are order-independent and
/// reproducible.
pub fn falsify(
    measure: MeasureName,
    family: ChannelFamily,
    d: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> WitnessReport {
    assert!(trials >= 1, "at least one trial is required");
    assert!(
        d >= if family == ChannelFamily::Io { 3 } else { 1 },
        "merge channels need dimension at least 3"
    );

    let mut worst: Option<(f64, f64, f64, DensityMatrix, KrausChannel)> = None;
    for trial in 0..trials {
        let (state, channel) = if trial == 0
            && measure == MeasureName::CMax
            && family == ChannelFamily::Io
            && d == 3
        {
            let fixtures = WitnessFixtures::construct();
            (fixtures.rho_in, fixtures.channel)
        } else {
            let mut rng = SplitMix64::stream(seed, trial as u64);
            let state = random_density_matrix_from(d, &mut rng);
            let channel = match family {
                ChannelFamily::Sio => {
                    let n_kraus = 1 + rng.next_range(3) as usize;
                    sample_sio_from(d, n_kraus, &mut rng)
                }
                ChannelFamily::Io => sample_io_nonsio_from(d, &mut rng),
                ChannelFamily::DioTwirl => {
                    let n_kraus = 1 + rng.next_range(2) as usize;
                    sample_cptp_from(d, n_kraus, &mut rng)
                        .dephasing_twirl()
                        .expect("twirl budget covers the falsifier dimensions")
                }
            };
            (state, channel)
        };

        let value_in = measures::evaluate(measure, &state)
            .expect("measure evaluation on sampled states")
            .value;
        let out = channel
            .apply(&state)
            .expect("sampled channels are trace-preserving");
        let value_out = measures::evaluate(measure, &out)
            .expect("measure evaluation on channel outputs")
            .value;
        let delta = value_out - value_in;

        if delta > tol {
            return WitnessReport {
                measure,
                channel_summary: Some(ChannelSummary::of(&channel, crate::channels::CLASSIFY_TOL)),
                value_in,
                value_out,
                delta,
                verdict: Verdict::Violation,
                trials: trial + 1,
                seed,
                witness_state: Some(state),
                witness_channel: Some(channel),
            };
        }
        if worst.as_ref().is_none_or(|(w, ..)| delta > *w) {
            worst = Some((delta, value_in, value_out, state, channel));
        }
    }

    let (delta, value_in, value_out, state, channel) = worst.expect("at least one trial ran");
    WitnessReport {
        measure,
        channel_summary: Some(ChannelSummary::of(&channel, crate::channels::CLASSIFY_TOL)),
        value_in,
        value_out,
        delta,
        verdict: if guaranteed_monotone(measure, family) {
            Verdict::Respected
        } else {
            Verdict::Inconclusive
        },
        trials,
        seed,
        witness_state: Some(state),
        witness_channel: Some(channel),
    }
}
