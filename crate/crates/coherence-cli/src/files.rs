//! Wire formats: JSON matrix and channel files.
//!
//! Complex scalars are encoded as two-element arrays `[re, im]` of decimal
//! numbers, nothing else. Matrices are row-major nested arrays under a `dim`
//! field; channels add a `mode` string (`"tp"` or `"stochastic"`) and a list
//! of matrices under `kraus`.

use serde::{Deserialize, Serialize};

use coherence::numerics::{Complex64, ComplexMatrix};
use coherence::{ChannelError, ChannelMode, KrausChannel, MeasureError, StateError, WitnessError};

/// A density matrix or other square complex matrix on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

/// A Kraus channel on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelFile {
    pub dim: usize,
    pub mode: String,
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug)]
pub enum CliError {
    Parse { message: String },
    Shape { message: String },
    Value { message: String },
    Io { path: String, message: String },
    State(StateError),
    Channel(ChannelError),
    Measure(MeasureError),
    Witness(WitnessError),
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        CliError::State(e)
    }
}
impl From<ChannelError> for CliError {
    fn from(e: ChannelError) -> Self {
        CliError::Channel(e)
    }
}
impl From<MeasureError> for CliError {
    fn from(e: MeasureError) -> Self {
        CliError::Measure(e)
    }
}
impl From<WitnessError> for CliError {
    fn from(e: WitnessError) -> Self {
        CliError::Witness(e)
    }
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse_error",
            CliError::Shape { .. } => "shape_error",
            CliError::Value { .. } => "value_error",
            CliError::Io { .. } => "io_error",
            CliError::State(e) => match e {
                StateError::NotHermitian { .. } => "not_hermitian",
                StateError::NotPsd { .. } => "not_psd",
                StateError::TraceNotOne { .. } => "trace_not_one",
                StateError::NonFinite => "value_error",
            },
            CliError::Channel(e) => match e {
                ChannelError::EmptyKraus => "empty_kraus",
                ChannelError::DimensionMismatch { .. }
                | ChannelError::StateDimensionMismatch { .. } => "dimension_mismatch",
                ChannelError::NotTracePreserving { .. } => "not_trace_preserving",
                ChannelError::TraceIncreasing { .. } => "trace_increasing",
                ChannelError::ModeMismatch => "mode_mismatch",
                ChannelError::BranchOutOfRange { .. } => "branch_out_of_range",
                ChannelError::ZeroProbability { .. } => "zero_probability",
                ChannelError::DimensionTooLarge { .. } => "dimension_too_large",
                ChannelError::NonFinite => "value_error",
                ChannelError::InvalidConstruction(_) => "invalid_construction",
            },
            CliError::Measure(e) => match e {
                MeasureError::SolverFailure { .. } => "solver_failure",
                MeasureError::DimensionNotTwo { .. } => "dimension_not_two",
            },
            CliError::Witness(e) => match e {
                WitnessError::FixtureMismatch { .. } => "fixture_mismatch",
                WitnessError::Measure(_) => "solver_failure",
                WitnessError::Channel(_) => "channel_error",
            },
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Parse { message }
            | CliError::Shape { message }
            | CliError::Value { message } => message.clone(),
            CliError::Io { path, message } => format!("{path}: {message}"),
            CliError::State(e) => e.to_string(),
            CliError::Channel(e) => e.to_string(),
            CliError::Measure(e) => e.to_string(),
            CliError::Witness(e) => e.to_string(),
        }
    }

    pub fn residual(&self) -> Option<f64> {
        match self {
            CliError::State(StateError::NotHermitian { residual })
            | CliError::State(StateError::TraceNotOne { residual, .. }) => Some(*residual),
            CliError::State(StateError::NotPsd { min_eigenvalue }) => Some(*min_eigenvalue),
            CliError::Channel(ChannelError::NotTracePreserving { residual }) => Some(*residual),
            CliError::Channel(ChannelError::TraceIncreasing { excess }) => Some(*excess),
            CliError::Channel(ChannelError::ZeroProbability { probability }) => Some(*probability),
            CliError::Measure(MeasureError::SolverFailure { gap, .. }) => Some(*gap),
            CliError::Witness(WitnessError::FixtureMismatch { residual, .. }) => Some(*residual),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut error = serde_json::json!({
            "code": self.code(),
            "message": self.message(),
        });
        if let Some(residual) = self.residual() {
            error["residual"] = serde_json::json!(residual);
        }
        serde_json::json!({ "error": error })
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &str) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.into(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        message: format!("{path}: {e}"),
    })
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        entries_to_matrix(&self.entries, self.dim, "entries")
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            dim: m.dim(),
            entries: matrix_to_entries(m),
        }
    }
}

impl ChannelFile {
    pub fn to_channel(&self) -> Result<KrausChannel, CliError> {
        if self.kraus.is_empty() {
            return Err(CliError::Shape {
                message: "kraus list is empty".into(),
            });
        }
        let kraus = self
            .kraus
            .iter()
            .enumerate()
            .map(|(i, entries)| entries_to_matrix(entries, self.dim, &format!("kraus[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        match self.mode.as_str() {
            "tp" => Ok(KrausChannel::trace_preserving(kraus)?),
            "stochastic" => Ok(KrausChannel::trace_nonincreasing(kraus)?),
            other => Err(CliError::Value {
                message: format!(
                    "unknown channel mode {other:?}, expected \"tp\" or \"stochastic\""
                ),
            }),
        }
    }

    pub fn from_channel(channel: &KrausChannel) -> Self {
        Self {
            dim: channel.dim(),
            mode: match channel.mode() {
                ChannelMode::TracePreserving => "tp".into(),
                ChannelMode::TraceNonincreasing => "stochastic".into(),
            },
            kraus: channel
                .kraus_operators()
                .iter()
                .map(matrix_to_entries)
                .collect(),
        }
    }
}

fn entries_to_matrix(
    entries: &[Vec<[f64; 2]>],
    dim: usize,
    what: &str,
) -> Result<ComplexMatrix, CliError> {
    if entries.len() != dim {
        return Err(CliError::Shape {
            message: format!("{what}: {} rows, expected dim = {dim}", entries.len()),
        });
    }
    let mut m = ComplexMatrix::zeros(dim);
    for (i, row) in entries.iter().enumerate() {
        if row.len() != dim {
            return Err(CliError::Shape {
                message: format!("{what}: row {i} has {} columns, expected {dim}", row.len()),
            });
        }
        for (j, &[re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(CliError::Value {
                    message: format!("{what}: entry ({i}, {j}) is not finite"),
                });
            }
            m.set(i, j, Complex64::new(re, im));
        }
    }
    Ok(m)
}

fn matrix_to_entries(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.dim())
        .map(|i| {
            (0..m.dim())
                .map(|j| {
                    let z = m.get(i, j);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}
