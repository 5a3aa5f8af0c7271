//! JSON report assembly.
//!
//! Every report opens with a reproducibility header: library version, the
//! seed in play (when any), and the tolerances the run used.

use serde_json::{json, Value};

use coherence::witness::{OrderingRow, WitnessReport};
use coherence::{ClassificationReport, MeasureValue};

use crate::files::{ChannelFile, MatrixFile};

pub fn header(seed: Option<u64>, extra_tolerances: &[(&str, f64)]) -> Value {
    let mut tolerances = json!({
        "structural": coherence::STRUCTURAL_TOL,
        "arithmetic": coherence::ARITHMETIC_TOL,
    });
    for (name, value) in extra_tolerances {
        tolerances[*name] = json!(value);
    }
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "tolerances": tolerances,
    })
}

pub fn measure_value(m: &MeasureValue) -> Value {
    let mut v = json!({
        "name": m.name.as_str(),
        "value": m.value,
    });
    if let Some(d) = m.diagnostics {
        v["diagnostics"] = json!({
            "iterations": d.iterations,
            "psd_residual": d.psd_residual,
            "certified_gap": d.certified_gap,
        });
    }
    v
}

pub fn classification(c: &ClassificationReport) -> Value {
    json!({
        "io_certified": c.io_certified,
        "sio_certified": c.sio_certified,
        "dio": c.dio,
        "mio": c.mio,
        "residuals": {
            "io": c.residuals.io,
            "sio": c.residuals.sio,
            "dio": c.residuals.dio,
            "mio": c.residuals.mio,
            "completeness": c.residuals.completeness,
        },
    })
}

pub fn witness_report(r: &WitnessReport, embed_witness: bool) -> Value {
    let mut v = json!({
        "measure": r.measure.as_str(),
        "verdict": r.verdict.as_str(),
        "value_in": r.value_in,
        "value_out": r.value_out,
        "delta": r.delta,
        "trials": r.trials,
        "seed": r.seed,
    });
    if let Some(summary) = &r.channel_summary {
        v["channel_summary"] = json!({
            "dim": summary.dim,
            "n_kraus": summary.n_kraus,
            "mode": match summary.mode {
                coherence::ChannelMode::TracePreserving => "tp",
                coherence::ChannelMode::TraceNonincreasing => "stochastic",
            },
            "kraus_digest": summary.kraus_digest,
            "classification": classification(&summary.classification),
        });
    }
    if embed_witness {
        if let (Some(state), Some(channel)) = (&r.witness_state, &r.witness_channel) {
            v["witness"] = json!({
                "state": MatrixFile::from_matrix(state.matrix()),
                "channel": ChannelFile::from_channel(channel),
            });
        }
    }
    v
}

pub fn ordering_rows(rows: &[OrderingRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|row| {
                json!({
                    "measure": row.measure.as_str(),
                    "value_in": row.value_in,
                    "value_out": row.value_out,
                    "ordered": row.ordered,
                })
            })
            .collect(),
    )
}
