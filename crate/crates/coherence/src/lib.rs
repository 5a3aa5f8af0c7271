//! Computational resource theory of coherence.
//!
//! Coherence is measured relative to a fixed reference basis — here always the
//! index order of matrix entries. The crate provides, bottom up:
//!
//! - [`numerics`]: dense complex matrices and a Jacobi Hermitian eigensolver;
//! - [`states`]: validated density matrices, the dephasing map, incoherence
//!   tests, and seeded state sampling;
//! - [`channels`]: Kraus channels with classification against the four
//!   free-operation classes (incoherent, strictly incoherent,
//!   dephasing-covariant, maximally incoherent), Choi conversion, a dephasing
//!   twirl, and structured channel samplers;
//! - [`measures`]: the ℓ₁, relative-entropy, robustness, and maximal-ratio
//!   coherence quantifiers plus the qubit convertibility criterion;
//! - [`witness`]: a deterministic certificate that incoherent channels can
//!   increase the maximal-ratio measure (which strictly-incoherent and
//!   dephasing-covariant channels never do), and a randomized monotonicity
//!   falsifier with reproducible, replayable reports.
//!
//! All operations are pure functions on immutable values; randomness always
//! flows through an explicit seed.

#![allow(clippy::needless_range_loop)]

pub mod channels;
pub mod measures;
pub mod numerics;
pub mod rng;
pub mod states;
pub mod witness;

pub use channels::{ChannelError, ChannelMode, ChoiMatrix, ClassificationReport, KrausChannel};
pub use measures::{MeasureError, MeasureName, MeasureValue};
pub use numerics::{Complex64, ComplexMatrix, ComplexVector, NumericsError, Spectrum};
pub use states::{DensityMatrix, PureStateVector, StateError};
pub use witness::{ChannelFamily, Verdict, WitnessError, WitnessFixtures, WitnessReport};

/// Structural tolerance shared by validation checks (Hermiticity, PSD,
/// completeness).
pub const STRUCTURAL_TOL: f64 = 1e-10;

/// Tolerance for exact arithmetic identities checked in floating point.
pub const ARITHMETIC_TOL: f64 = 1e-12;
