//! Validated density matrices and incoherence structure.
//!
//! The reference basis is the index order of matrix entries: a state is
//! incoherent when it is diagonal. [`DensityMatrix`] can only be built through
//! validation (Hermitian, positive semidefinite, unit trace), so downstream
//! code never re-checks.

use thiserror::Error;

use crate::numerics::{self, Complex64, ComplexMatrix, ComplexVector};
use crate::rng::SplitMix64;

/// Structural tolerance for state validation.
pub const STATE_TOL: f64 = 1e-10;

/// Default threshold below which an off-diagonal entry counts as zero.
pub const INCOHERENCE_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("matrix is not Hermitian (worst entry residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("trace is not one (trace {trace:.17} deviates by {residual:.3e})")]
    TraceNotOne { trace: f64, residual: f64 },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
}

/// A validated quantum state: Hermitian, PSD, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mat.get(i, j)
    }

    /// Real diagonal (populations).
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.mat.get(i, i).re).collect()
    }

    /// Δ(ρ): zero all off-diagonal entries. Idempotent.
    pub fn dephase(&self) -> DensityMatrix {
        let d = self.dim();
        let mut m = ComplexMatrix::zeros(d);
        for i in 0..d {
            m.set(i, i, Complex64::new(self.mat.get(i, i).re, 0.0));
        }
        DensityMatrix { mat: m }
    }

    /// True iff every off-diagonal modulus is at most `tol`.
    pub fn is_incoherent(&self, tol: f64) -> bool {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                if i != j && self.mat.get(i, j).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// χ = ρ − Δ(ρ): the off-diagonal part, with an exactly zero diagonal.
    pub fn off_diagonal_part(&self) -> ComplexMatrix {
        let mut m = self.mat.clone();
        for i in 0..self.dim() {
            m.set(i, i, Complex64::new(0.0, 0.0));
        }
        m
    }

    /// Construct without validation. Callers must guarantee the invariants.
    pub(crate) fn from_validated(mat: ComplexMatrix) -> Self {
        Self { mat }
    }
}

/// Validate a matrix as a quantum state.
///
/// Failures name the violated invariant and carry its residual so callers can
/// distinguish round-off from genuinely invalid input.
pub fn validate_state(m: &ComplexMatrix) -> Result<DensityMatrix, StateError> {
    if !m.is_finite() {
        return Err(StateError::NonFinite);
    }
    let residual = m.hermiticity_residual();
    if residual > STATE_TOL {
        return Err(StateError::NotHermitian { residual });
    }
    let trace = m.trace().re;
    if (trace - 1.0).abs() > STATE_TOL {
        return Err(StateError::TraceNotOne {
            trace,
            residual: (trace - 1.0).abs(),
        });
    }
    let min_eigenvalue =
        numerics::min_eigenvalue(m).map_err(|_| StateError::NotHermitian { residual })?;
    if min_eigenvalue < -STATE_TOL {
        return Err(StateError::NotPsd { min_eigenvalue });
    }
    Ok(DensityMatrix { mat: m.clone() })
}

/// Pure state vector with unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateVector {
    amplitudes: Vec<Complex64>,
}

#[derive(Debug, Error)]
#[error("amplitudes are not normalized (norm {norm:.17})")]
pub struct NotNormalized {
    pub norm: f64,
}

impl PureStateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, NotNormalized> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Normalize and wrap; panics on the zero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Self {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 0.0, "cannot normalize the zero vector");
        Self {
            amplitudes: amplitudes
                .into_iter()
                .map(|a| a / Complex64::new(norm, 0.0))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn as_vector(&self) -> ComplexVector {
        ComplexVector::new(self.amplitudes.clone())
    }

    /// |φ⟩⟨φ| as a validated state.
    pub fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix::from_validated(self.as_vector().outer_with_self())
    }
}

/// |ψ_d⟩: the uniform superposition with all amplitudes 1/√d.
pub fn maximally_coherent_state(d: usize) -> PureStateVector {
    assert!(d >= 1, "dimension must be positive");
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    PureStateVector {
        amplitudes: vec![amp; d],
    }
}

/// Full-rank random state G·G†/trace with complex Gaussian G; deterministic
/// for a fixed seed.
pub fn random_density_matrix(d: usize, seed: u64) -> DensityMatrix {
    assert!(d >= 1, "dimension must be positive");
    let mut rng = SplitMix64::new(seed);
    random_density_matrix_from(d, &mut rng)
}

/// Same construction, drawing from a caller-owned generator.
pub fn random_density_matrix_from(d: usize, rng: &mut SplitMix64) -> DensityMatrix {
    let mut g = ComplexMatrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            g.set(i, j, rng.next_complex_gaussian());
        }
    }
    let gram = g.matmul(&g.adjoint());
    let trace = gram.trace().re;
    let mat = gram.scale(Complex64::new(1.0 / trace, 0.0)).symmetrized();
    DensityMatrix::from_validated(mat)
}

/// Random unit vector supported where `support[i]` is true.
pub(crate) fn random_support_vector(
    support: &[bool],
    rng: &mut SplitMix64,
) -> Option<ComplexVector> {
    let d = support.len();
    let mut v = ComplexVector::zeros(d);
    for i in 0..d {
        if support[i] {
            v.data[i] = rng.next_complex_gaussian();
        }
    }
    let norm = v.norm();
    if norm == 0.0 {
        return None;
    }
    Some(v.scale(Complex64::new(1.0 / norm, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_eigenvalue() {
        let m = ComplexMatrix::diagonal(&[0.6, 0.6, -0.2]);
        assert!(matches!(validate_state(&m), Err(StateError::NotPsd { .. })));
    }

    #[test]
    fn rejects_wrong_trace() {
        let m = ComplexMatrix::identity(2);
        assert!(matches!(
            validate_state(&m),
            Err(StateError::TraceNotOne { .. })
        ));
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::diagonal(&[0.5, 0.5]);
        m.set(0, 1, Complex64::new(0.2, 0.0));
        assert!(matches!(
            validate_state(&m),
            Err(StateError::NotHermitian { .. })
        ));
    }

    #[test]
    fn dephase_is_idempotent_and_diagonal() {
        let rho = random_density_matrix(4, 11);
        let d1 = rho.dephase();
        let d2 = d1.dephase();
        assert_eq!(d1, d2);
        assert!(d1.is_incoherent(0.0));
    }

    #[test]
    fn plus_state_dephases_to_maximally_mixed() {
        let plus = maximally_coherent_state(2).density_matrix();
        let dephased = plus.dephase();
        for i in 0..2 {
            assert!((dephased.entry(i, i).re - 0.5).abs() < 1e-15);
        }
        for a in maximally_coherent_state(2).amplitudes() {
            assert!((a.re - 1.0 / 2.0_f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn diagonal_states_are_incoherent_with_zero_off_part() {
        let rho = validate_state(&ComplexMatrix::diagonal(&[0.3, 0.7])).unwrap();
        assert!(rho.is_incoherent(1e-10));
        assert!(rho
            .off_diagonal_part()
            .entries()
            .iter()
            .all(|z| z.norm() == 0.0));
    }

    #[test]
    fn off_diagonal_reconstructs() {
        let rho = random_density_matrix(3, 5);
        let chi = rho.off_diagonal_part();
        for i in 0..3 {
            assert_eq!(chi.get(i, i), Complex64::new(0.0, 0.0));
        }
        let rebuilt = &chi + rho.dephase().matrix();
        for (a, b) in rebuilt.entries().iter().zip(rho.matrix().entries()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn maximally_coherent_examples() {
        assert_eq!(
            maximally_coherent_state(1).amplitudes(),
            &[Complex64::new(1.0, 0.0)]
        );
        for a in maximally_coherent_state(4).amplitudes() {
            assert!((a - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn random_state_is_deterministic_and_valid() {
        let a = random_density_matrix(3, 7);
        let b = random_density_matrix(3, 7);
        assert_eq!(a, b);
        assert!(validate_state(a.matrix()).is_ok());
        let scalar = random_density_matrix(1, 0);
        assert!((scalar.entry(0, 0).re - 1.0).abs() < 1e-15);
    }
}
