//! Dense complex matrix arithmetic and Hermitian spectral routines.
//!
//! Everything downstream (states, channels, measures) is built on the two
//! types here: [`ComplexMatrix`], a square row-major matrix of `Complex<f64>`,
//! and [`Spectrum`], the result of a Hermitian eigendecomposition. Dimensions
//! are small (d ≤ ~16 in practice), so the eigensolver is a cyclic Jacobi
//! iteration with complex Givens rotations: simple, robust, and it produces an
//! orthonormal eigenbasis directly.

use std::ops::{Add, Mul, Sub};

use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type Complex64 = num_complex::Complex<f64>;

/// Absolute entrywise tolerance for Hermiticity checks.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius mass at which the Jacobi sweep stops, relative to ‖H‖_F.
const JACOBI_CONVERGENCE: f64 = 1e-14;

/// Sweep budget for the Jacobi iteration.
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("matrix is not Hermitian (worst entry residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}

/// Dense square complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Create a matrix from row-major entries. Panics if the length is not `dim²`.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Self {
        assert_eq!(entries.len(), dim * dim, "entry count must be dim²");
        Self { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        m
    }

    /// Build from nested rows; rows must be square and non-ragged.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "rows must be square");
        Self {
            dim,
            entries: rows.iter().flatten().copied().collect(),
        }
    }

    /// Matrix unit |i⟩⟨j|.
    pub fn matrix_unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.set(i, j, Complex64::new(1.0, 0.0));
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(j, i, self.get(i, j).conj());
            }
        }
        m
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim, v.dim(), "dimension mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for i in 0..self.dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.dim {
                acc += self.get(i, j) * v.data[j];
            }
            out[i] = acc;
        }
        ComplexVector::new(out)
    }

    /// (self + self†)/2.
    pub fn symmetrized(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let v = (self.get(i, j) + self.get(j, i).conj()) * 0.5;
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Worst-case |H_ij − conj(H_ji)| over all entries.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in 0..=i {
                let r = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(r);
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, other: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(other)
    }
}

/// Dense complex vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    pub data: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(data: Vec<Complex64>) -> Self {
        Self { data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    /// Computational basis vector |index⟩.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[index] = Complex64::new(1.0, 0.0);
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩ with conjugation on `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// |self⟩⟨self|.
    pub fn outer_with_self(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut m = ComplexMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                m.set(i, j, self.data[i] * self.data[j].conj());
            }
        }
        m
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted non-increasing; `eigenvectors[k]` is a unit-norm
/// eigenvector for `eigenvalues[k]`, and the vectors are pairwise orthonormal.
/// For degenerate eigenvalues any orthonormal basis of the eigenspace may be
/// returned.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<ComplexVector>,
}

impl Spectrum {
    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.first().expect("non-empty spectrum")
    }
}

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// The input must be Hermitian within [`HERMITICITY_TOL`]; callers that have
/// accumulated round-off should pass `h.symmetrized()`. Convergence is declared
/// when the off-diagonal Frobenius mass drops below 1e-14·‖H‖_F.
pub fn hermitian_eigendecomposition(h: &ComplexMatrix) -> Result<Spectrum, NumericsError> {
    if !h.is_finite() {
        return Err(NumericsError::NotHermitian { residual: f64::NAN });
    }
    let residual = h.hermiticity_residual();
    if residual > HERMITICITY_TOL {
        return Err(NumericsError::NotHermitian { residual });
    }
    let d = h.dim();
    // Work on the exactly-Hermitian average; the pre-check bounds the distortion.
    let mut a = h.symmetrized();
    let mut v = ComplexMatrix::identity(d);
    let norm = a.frobenius_norm();

    if d > 1 && norm > 0.0 {
        let mut converged = false;
        for _sweep in 0..JACOBI_MAX_SWEEPS {
            if off_diagonal_frobenius(&a) <= JACOBI_CONVERGENCE * norm {
                converged = true;
                break;
            }
            for p in 0..d - 1 {
                for q in p + 1..d {
                    rotate(&mut a, &mut v, p, q, norm);
                }
            }
        }
        if !converged && off_diagonal_frobenius(&a) > JACOBI_CONVERGENCE * norm {
            return Err(NumericsError::NoConvergence {
                sweeps: JACOBI_MAX_SWEEPS,
            });
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    let diag: Vec<f64> = (0..d).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).expect("finite eigenvalues"));

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| ComplexVector::new((0..d).map(|i| v.get(i, k)).collect()))
        .collect();
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<f64, NumericsError> {
    Ok(hermitian_eigendecomposition(h)?.min_eigenvalue())
}

/// `min_eigenvalue(h) ≥ -tol`.
pub fn is_psd(h: &ComplexMatrix, tol: f64) -> Result<bool, NumericsError> {
    Ok(min_eigenvalue(h)? >= -tol)
}

fn off_diagonal_frobenius(a: &ComplexMatrix) -> f64 {
    let d = a.dim();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                acc += a.get(i, j).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One complex Givens rotation zeroing A[p][q], accumulated into `v`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, norm: f64) {
    let apq = a.get(p, q);
    let b = apq.norm();
    if b <= f64::MIN_POSITIVE || b <= 1e-18 * norm {
        return;
    }
    let phase = apq / b;
    let alpha = a.get(p, p).re;
    let gamma = a.get(q, q).re;
    let tau = (gamma - alpha) / (2.0 * b);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let sigma = phase * (t * c);

    let d = a.dim();
    // A ← G† A G with the rotation acting on the (p, q) plane.
    for k in 0..d {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * c - akq * sigma.conj());
        a.set(k, q, akp * sigma + akq * c);
    }
    for k in 0..d {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, apk * c - aqk * sigma);
        a.set(q, k, apk * sigma.conj() + aqk * c);
    }
    // Exact zero by construction; write it to stop round-off accumulating.
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    let app = a.get(p, p);
    let aqq = a.get(q, q);
    a.set(p, p, Complex64::new(app.re, 0.0));
    a.set(q, q, Complex64::new(aqq.re, 0.0));

    for k in 0..d {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c - vkq * sigma.conj());
        v.set(k, q, vkp * sigma + vkq * c);
    }
}
