//! Coherence quantifiers: the ℓ₁ norm, relative entropy, robustness, and the
//! maximal-ratio measure, plus the two-monotone qubit convertibility test.
//!
//! All four vanish exactly on incoherent states. Values within 1e-10 of zero
//! are clamped to zero so the non-negativity axiom survives round-off.

use thiserror::Error;

use crate::numerics::{self, Complex64, ComplexMatrix, ComplexVector};
use crate::rng::SplitMix64;
use crate::states::{random_support_vector, DensityMatrix};

/// Populations at or below this threshold count as vanishing.
pub const SUPPORT_TOL: f64 = 1e-14;

/// Certified primal–dual gap at which the robustness solver stops.
pub const ROBUSTNESS_GAP_TOL: f64 = 1e-11;

/// Iteration budget for the robustness solver.
pub const ROBUSTNESS_BUDGET: usize = 100_000;

/// Comparison slack absorbing solver noise in convertibility checks.
pub const CONVERTIBILITY_SLACK: f64 = 1e-8;

const VALUE_CLAMP: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("robustness solver exhausted {iterations} iterations (certified gap {gap:.3e})")]
    SolverFailure { iterations: usize, gap: f64 },
    #[error("convertibility criterion is qubit-only (got dimension {dim})")]
    DimensionNotTwo { dim: usize },
}

/// Which quantifier a [`MeasureValue`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureName {
    L1,
    RelEntropy,
    Robustness,
    CMax,
}

impl MeasureName {
    pub const ALL: [MeasureName; 4] = [
        MeasureName::L1,
        MeasureName::RelEntropy,
        MeasureName::Robustness,
        MeasureName::CMax,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MeasureName::L1 => "l1",
            MeasureName::RelEntropy => "rel_entropy",
            MeasureName::Robustness => "robustness",
            MeasureName::CMax => "c_max",
        }
    }
}

impl std::fmt::Display for MeasureName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A computed measure value with optional solver metadata.
#[derive(Debug, Clone)]
pub struct MeasureValue {
    pub name: MeasureName,
    pub value: f64,
    pub diagnostics: Option<SolverDiagnostics>,
}

/// Iteration count and residuals reported by iterative measures.
#[derive(Debug, Clone, Copy)]
pub struct SolverDiagnostics {
    pub iterations: usize,
    /// Smallest eigenvalue of the final slack matrix (PSD feasibility).
    pub psd_residual: f64,
    /// Certified distance to the optimum from the dual bound.
    pub certified_gap: f64,
}

fn clamp(v: f64) -> f64 {
    if v.abs() <= VALUE_CLAMP {
        0.0
    } else {
        v
    }
}

/// ℓ₁ measure: Σ_{i≠j} |ρ_ij|.
pub fn c_l1(rho: &DensityMatrix) -> MeasureValue {
    let d = rho.dim();
    let mut total = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                total += rho.entry(i, j).norm();
            }
        }
    }
    MeasureValue {
        name: MeasureName::L1,
        value: clamp(total),
        diagnostics: None,
    }
}

/// Von Neumann entropy in bits; eigenvalues at or below 1e-14 contribute zero.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let spectrum = numerics::hermitian_eigendecomposition(rho.matrix())
        .expect("validated states are Hermitian");
    spectrum
        .eigenvalues
        .iter()
        .filter(|&&lambda| lambda > SUPPORT_TOL)
        .map(|&lambda| -lambda * lambda.log2())
        .sum()
}

/// Relative entropy of coherence: S(Δρ) − S(ρ).
pub fn c_rel_entropy(rho: &DensityMatrix) -> MeasureValue {
    let value = von_neumann_entropy(&rho.dephase()) - von_neumann_entropy(rho);
    MeasureValue {
        name: MeasureName::RelEntropy,
        value: clamp(value),
        diagnostics: None,
    }
}

/// Support mask of the dephased state.
fn support_mask(rho: &DensityMatrix) -> Vec<bool> {
    rho.populations().iter().map(|&p| p > SUPPORT_TOL).collect()
}

/// Population-conjugated matrix restricted to the support of Δρ:
/// M_ab = ρ_ab / √(ρ_aa ρ_bb), built exactly Hermitian.
fn conjugated_support_matrix(rho: &DensityMatrix) -> (ComplexMatrix, Vec<usize>) {
    let support: Vec<usize> = support_mask(rho)
        .iter()
        .enumerate()
        .filter_map(|(i, &s)| s.then_some(i))
        .collect();
    let pops = rho.populations();
    let n = support.len();
    let mut m = ComplexMatrix::zeros(n);
    for a in 0..n {
        for b in a..n {
            let (i, j) = (support[a], support[b]);
            let v = rho.entry(i, j) / Complex64::new((pops[i] * pops[j]).sqrt(), 0.0);
            m.set(a, b, v);
            m.set(b, a, v.conj());
        }
    }
    (m, support)
}

/// Maximal-ratio measure: (1/d)·λ_max((Δρ)^{-1/2} ρ (Δρ)^{-1/2}) − 1/d, with
/// the inverse square root taken entrywise on the populations and zero on
/// vanishing ones. The conjugated matrix is restricted to the support of Δρ
/// (off-support rows of ρ vanish by positivity, so nothing is lost).
pub fn c_max(rho: &DensityMatrix) -> MeasureValue {
    let (m, support) = conjugated_support_matrix(rho);
    let d = rho.dim() as f64;
    let value = if support.is_empty() {
        0.0
    } else {
        let spectrum = numerics::hermitian_eigendecomposition(&m)
            .expect("conjugated matrix is Hermitian by construction");
        (spectrum.max_eigenvalue() - 1.0) / d
    };
    MeasureValue {
        name: MeasureName::CMax,
        value: clamp(value),
        diagnostics: None,
    }
}

/// Rayleigh form of the maximal-ratio measure at one vector:
/// (1/d)(⟨φ|ρ|φ⟩ / ⟨φ|Δρ|φ⟩ − 1).
///
/// The vector is projected onto the support of Δρ first; `None` when the
/// projected denominator is at or below 1e-14.
pub fn rayleigh_quotient(rho: &DensityMatrix, phi: &ComplexVector) -> Option<f64> {
    assert_eq!(rho.dim(), phi.dim(), "dimension mismatch");
    let mask = support_mask(rho);
    let mut projected = phi.clone();
    for (i, keep) in mask.iter().enumerate() {
        if !keep {
            projected.data[i] = Complex64::new(0.0, 0.0);
        }
    }
    let pops = rho.populations();
    let denominator: f64 = projected
        .data
        .iter()
        .zip(&pops)
        .map(|(a, &p)| p * a.norm_sqr())
        .sum();
    if denominator <= SUPPORT_TOL {
        return None;
    }
    let numerator = projected.inner(&rho.matrix().matvec(&projected)).re;
    Some((numerator / denominator - 1.0) / rho.dim() as f64)
}

/// Sampled maximum of the Rayleigh form over `trials` random support vectors,
/// always including the analytic maximizer (the top eigenvector of the
/// conjugated matrix mapped back through the population scaling), so the
/// result matches [`c_max`] to solver precision.
pub fn c_max_rayleigh_check(rho: &DensityMatrix, trials: usize, seed: u64) -> f64 {
    let d = rho.dim();
    let (m, support) = conjugated_support_matrix(rho);
    if support.is_empty() {
        return 0.0;
    }
    let pops = rho.populations();
    let spectrum = numerics::hermitian_eigendecomposition(&m)
        .expect("conjugated matrix is Hermitian by construction");
    let top = &spectrum.eigenvectors[0];
    let mut maximizer = ComplexVector::zeros(d);
    for (a, &i) in support.iter().enumerate() {
        maximizer.data[i] = top.data[a] / Complex64::new(pops[i].sqrt(), 0.0);
    }

    let mut best = f64::NEG_INFINITY;
    if let Some(q) = rayleigh_quotient(rho, &maximizer) {
        best = best.max(q);
    }
    let mask = support_mask(rho);
    let mut rng = SplitMix64::new(seed);
    for _ in 0..trials {
        if let Some(v) = random_support_vector(&mask, &mut rng) {
            if let Some(q) = rayleigh_quotient(rho, &v) {
                best = best.max(q);
            }
        }
    }
    best
}

/// Robustness of coherence via its diagonal reformulation:
/// minimize Σᵢ dᵢ − 1 subject to diag(d) − ρ ⪰ 0.
///
/// The solver follows the log-det barrier central path with damped Newton
/// steps from the Gershgorin-feasible diagonal. At each stage the rescaled
/// slack inverse gives a dual-feasible witness (unit diagonal by
/// construction), certifying the primal–dual gap; iteration stops once the
/// gap is at most 1e-11. The final point is polished onto the feasible
/// boundary by bisection along the segment to diag(ρ).
pub fn c_robustness(rho: &DensityMatrix) -> Result<MeasureValue, MeasureError> {
    let d = rho.dim();
    let populations = rho.populations();

    // diag(ρ) itself feasible means the state is incoherent: the value is 0.
    if let Some(lm) = slack_min_eig(rho, &populations) {
        if lm >= -1e-15 {
            return Ok(MeasureValue {
                name: MeasureName::Robustness,
                value: 0.0,
                diagnostics: Some(SolverDiagnostics {
                    iterations: 0,
                    psd_residual: lm,
                    certified_gap: 0.0,
                }),
            });
        }
    }

    // Gershgorin point: dᵢ = ρᵢᵢ + Σ_{j≠i} |ρᵢⱼ| is always feasible
    // (diagonally dominant slack); start strictly inside.
    let mut x: Vec<f64> = (0..d)
        .map(|i| {
            let off: f64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| rho.entry(i, j).norm())
                .sum();
            populations[i] + off + 0.05
        })
        .collect();

    let mut mu = (x.iter().sum::<f64>() / d as f64).max(1.0);
    let mut iterations = 0usize;
    let mut lower = f64::NEG_INFINITY;
    let mut gap = f64::INFINITY;

    'stages: loop {
        for _ in 0..50 {
            if iterations >= ROBUSTNESS_BUDGET {
                return Err(MeasureError::SolverFailure { iterations, gap });
            }
            iterations += 1;
            let slack = slack_matrix(rho, &x);
            let spectrum =
                numerics::hermitian_eigendecomposition(&slack).expect("slack matrix is Hermitian");
            let inverse = inverse_from_spectrum(&spectrum);
            let inv_diag: Vec<f64> = (0..d).map(|i| inverse.get(i, i).re).collect();

            // Newton system for Σd − μ log det S: gradient 1 − μ (S⁻¹)ᵢᵢ,
            // Hessian μ |S⁻¹|² entrywise.
            let gradient: Vec<f64> = inv_diag.iter().map(|&g| 1.0 - mu * g).collect();
            let mut hessian = vec![vec![0.0; d]; d];
            for i in 0..d {
                for j in 0..d {
                    hessian[i][j] = mu * inverse.get(i, j).norm_sqr();
                }
            }
            let rhs: Vec<f64> = gradient.iter().map(|&g| -g).collect();
            let step = solve_linear(hessian.clone(), rhs.clone()).unwrap_or(rhs);

            let decrement = {
                let mut acc = 0.0;
                for i in 0..d {
                    for j in 0..d {
                        acc += step[i] * hessian[i][j] * step[j];
                    }
                }
                acc.max(0.0).sqrt()
            };
            let mut t = if decrement <= 0.25 {
                1.0
            } else {
                1.0 / (1.0 + decrement)
            };
            // Backtrack until strictly feasible.
            for _ in 0..60 {
                let candidate: Vec<f64> = x.iter().zip(&step).map(|(&xi, &s)| xi + t * s).collect();
                match slack_min_eig(rho, &candidate) {
                    Some(lm) if lm > 0.0 => break,
                    _ => t *= 0.5,
                }
            }
            for (xi, s) in x.iter_mut().zip(&step) {
                *xi += t * s;
            }
            if decrement < 1e-2 {
                break;
            }
        }

        // Dual witness: W = S⁻¹ rescaled to unit diagonal is PSD and feasible,
        // so Tr(Wρ) − 1 bounds the optimum from below.
        let slack = slack_matrix(rho, &x);
        let spectrum =
            numerics::hermitian_eigendecomposition(&slack).expect("slack matrix is Hermitian");
        let inverse = inverse_from_spectrum(&spectrum);
        let scale: Vec<f64> = (0..d).map(|i| inverse.get(i, i).re.max(1e-300)).collect();
        let mut dual_value = 0.0;
        for i in 0..d {
            for j in 0..d {
                let w = inverse.get(i, j) / Complex64::new((scale[i] * scale[j]).sqrt(), 0.0);
                dual_value += (w * rho.entry(j, i)).re;
            }
        }
        lower = lower.max(dual_value - 1.0);
        let upper = x.iter().sum::<f64>() - 1.0;
        gap = upper - lower;
        if gap <= ROBUSTNESS_GAP_TOL || mu < 1e-16 {
            break 'stages;
        }
        mu /= 8.0;
    }

    let polished = polish_to_boundary(rho, &x);
    let psd_residual = slack_min_eig(rho, &polished).unwrap_or(f64::NEG_INFINITY);
    let value = polished.iter().sum::<f64>() - 1.0;
    Ok(MeasureValue {
        name: MeasureName::Robustness,
        value: clamp(value),
        diagnostics: Some(SolverDiagnostics {
            iterations,
            psd_residual,
            certified_gap: gap.max(0.0),
        }),
    })
}

/// Bisection along the segment from a feasible diagonal to diag(ρ); the sum
/// only decreases along it, so this lands on the feasible boundary.
fn polish_to_boundary(rho: &DensityMatrix, feasible: &[f64]) -> Vec<f64> {
    let target = rho.populations();
    let blend = |t: f64| -> Vec<f64> {
        feasible
            .iter()
            .zip(&target)
            .map(|(&f, &g)| (1.0 - t) * f + t * g)
            .collect()
    };
    let feasible_at = |t: f64| slack_min_eig(rho, &blend(t)).is_some_and(|lm| lm >= 0.0);
    if feasible_at(1.0) {
        return target;
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..70 {
        let mid = 0.5 * (lo + hi);
        if feasible_at(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    blend(lo)
}

fn slack_matrix(rho: &DensityMatrix, diag: &[f64]) -> ComplexMatrix {
    let d = rho.dim();
    let mut m = rho.matrix().scale(Complex64::new(-1.0, 0.0));
    for i in 0..d {
        let v = m.get(i, i) + Complex64::new(diag[i], 0.0);
        m.set(i, i, v);
    }
    m
}

fn slack_min_eig(rho: &DensityMatrix, diag: &[f64]) -> Option<f64> {
    numerics::min_eigenvalue(&slack_matrix(rho, diag)).ok()
}

fn inverse_from_spectrum(spectrum: &numerics::Spectrum) -> ComplexMatrix {
    let d = spectrum.eigenvalues.len();
    let mut inv = ComplexMatrix::zeros(d);
    for (lambda, v) in spectrum.eigenvalues.iter().zip(&spectrum.eigenvectors) {
        let w = 1.0 / lambda;
        for i in 0..d {
            for j in 0..d {
                let add = v.data[i] * v.data[j].conj() * Complex64::new(w, 0.0);
                let cur = inv.get(i, j) + add;
                inv.set(i, j, cur);
            }
        }
    }
    inv
}

/// Gaussian elimination with partial pivoting; `None` on a singular system.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Qubit convertibility: ρ₁ → ρ₂ is achievable under any of the free-operation
/// classes iff both the robustness and the maximal-ratio measure are ordered.
/// Ties count as convertible; comparisons carry a 1e-8 slack for solver noise.
pub fn qubit_convertible(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<bool, MeasureError> {
    for rho in [rho1, rho2] {
        if rho.dim() != 2 {
            return Err(MeasureError::DimensionNotTwo { dim: rho.dim() });
        }
    }
    let robustness_ordered =
        c_robustness(rho1)?.value >= c_robustness(rho2)?.value - CONVERTIBILITY_SLACK;
    let cmax_ordered = c_max(rho1).value >= c_max(rho2).value - CONVERTIBILITY_SLACK;
    Ok(robustness_ordered && cmax_ordered)
}

/// Evaluate a measure by name.
pub fn evaluate(name: MeasureName, rho: &DensityMatrix) -> Result<MeasureValue, MeasureError> {
    match name {
        MeasureName::L1 => Ok(c_l1(rho)),
        MeasureName::RelEntropy => Ok(c_rel_entropy(rho)),
        MeasureName::Robustness => c_robustness(rho),
        MeasureName::CMax => Ok(c_max(rho)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{maximally_coherent_state, random_density_matrix, validate_state};

    #[test]
    fn l1_of_maximally_coherent_state() {
        for d in [1usize, 2, 3, 5] {
            let rho = maximally_coherent_state(d).density_matrix();
            assert!((c_l1(&rho).value - (d as f64 - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn rel_entropy_of_maximally_coherent_state() {
        for d in [2usize, 3, 4] {
            let rho = maximally_coherent_state(d).density_matrix();
            assert!((c_rel_entropy(&rho).value - (d as f64).log2()).abs() < 1e-10);
        }
    }

    #[test]
    fn measures_vanish_on_diagonal_states() {
        let rho = validate_state(&ComplexMatrix::diagonal(&[0.3, 0.7])).unwrap();
        assert_eq!(c_l1(&rho).value, 0.0);
        assert_eq!(c_rel_entropy(&rho).value, 0.0);
        assert_eq!(c_robustness(&rho).unwrap().value, 0.0);
        assert_eq!(c_max(&rho).value, 0.0);
    }

    #[test]
    fn cmax_of_maximally_coherent_state() {
        for d in [2usize, 3, 4] {
            let rho = maximally_coherent_state(d).density_matrix();
            assert!((c_max(&rho).value - (1.0 - 1.0 / d as f64)).abs() < 1e-10);
        }
    }

    #[test]
    fn robustness_qubit_closed_form() {
        let mut m = ComplexMatrix::diagonal(&[0.5, 0.5]);
        m.set(0, 1, Complex64::new(0.3, 0.0));
        m.set(1, 0, Complex64::new(0.3, 0.0));
        let rho = validate_state(&m).unwrap();
        let r = c_robustness(&rho).unwrap();
        assert!((r.value - 0.6).abs() < 1e-9, "got {}", r.value);
    }

    #[test]
    fn rayleigh_is_zero_on_diagonal_states() {
        let rho = validate_state(&ComplexMatrix::diagonal(&[0.2, 0.5, 0.3])).unwrap();
        assert!(c_max_rayleigh_check(&rho, 50, 1).abs() < 1e-14);
    }

    #[test]
    fn rayleigh_seeded_matches_cmax() {
        for seed in 0..5 {
            let rho = random_density_matrix(3, seed);
            let reference = c_max(&rho).value;
            let sampled = c_max_rayleigh_check(&rho, 0, seed);
            assert!((sampled - reference).abs() < 1e-9);
        }
    }

    #[test]
    fn convertibility_examples() {
        let rho = random_density_matrix(2, 42);
        assert!(qubit_convertible(&rho, &rho.dephase()).unwrap());
        assert!(qubit_convertible(&rho, &rho).unwrap());
        let plus = maximally_coherent_state(2).density_matrix();
        assert!(!qubit_convertible(&rho.dephase(), &plus).unwrap());
        let qutrit = random_density_matrix(3, 1);
        assert!(matches!(
            qubit_convertible(&qutrit, &qutrit),
            Err(MeasureError::DimensionNotTwo { dim: 3 })
        ));
    }
}
