//! Skew-information and Fisher-information correlation measures.
//!
//! Two discord-like quantifiers for a 2 x 2 state rho, both of the form
//! 1 - lambda_max of a 3x3 matrix over local observables sigma.r on
//! subsystem a:
//!
//! * LQU: minimum Wigner-Yanase skew information
//!   -1/2 Tr([sqrt(rho), H]^2) over H = sigma.r (x) 1. Closed form via
//!   the matrix w_lk = Tr[sqrt(rho) (sigma_l (x) 1) sqrt(rho)
//!   (sigma_k (x) 1)].
//! * Local QFI: minimum quantum Fisher information (normalization
//!   1/4 Tr[rho L^2], i.e. the pure-state value is the variance) over
//!   the same observable family. Closed form via the matrix
//!   M_lk = sum_ij 2 p_i p_j / (p_i + p_j) <i|sigma_l (x) 1|j>
//!   <j|sigma_k (x) 1|i> over the spectral decomposition of rho.
//!
//! Both closed forms are checked against `brute_force_minimize`, a
//! direct grid minimization over a deterministic hemisphere lattice of
//! observable directions.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::model::ThermalState;
use crate::qmat::{
    hermitian_eig, kron, matrix_sqrt_psd, pauli, BlochVector, ComplexMatrix, PauliAxis, QmatError,
};

/// Pairs (i, j) with p_i + p_j at or below this threshold are dropped
/// from the spectral sums; their limit contribution is zero.
pub const RANK_TOL: f64 = 1e-15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorrError {
    #[error("not a density matrix: {0}")]
    NotDensityMatrix(&'static str),
    #[error("dimension mismatch: state is {0}x{0}, observable is {1}x{1}")]
    DimensionMismatch(usize, usize),
    #[error(transparent)]
    Linalg(#[from] QmatError),
}

/// Which minimized measure a result belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    Lqu,
    Lqfi,
}

/// A correlation measure value with its diagnostic payload.
#[derive(Debug, Clone)]
pub struct CorrelationResult {
    /// 1 - max(matrix_eigenvalues), in [0, 1] up to rounding.
    pub value: f64,
    /// Eigenvalues of W (LQU) or M (lQFI), ascending.
    pub matrix_eigenvalues: [f64; 3],
    /// Observable direction attaining the minimum.
    pub optimal_direction: BlochVector,
    pub measure_kind: MeasureKind,
}

/// sigma.r on subsystem a: (sigma.r) (x) 1.
pub fn local_observable(direction: &BlochVector) -> ComplexMatrix {
    kron(&direction.observable(), &pauli(PauliAxis::Identity))
}

fn check_density(rho: &ComplexMatrix) -> Result<(), CorrError> {
    if !rho.is_hermitian() {
        return Err(CorrError::NotDensityMatrix("not Hermitian"));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(CorrError::NotDensityMatrix("trace is not 1"));
    }
    Ok(())
}

fn sqrt_density(rho: &ComplexMatrix) -> Result<ComplexMatrix, CorrError> {
    matrix_sqrt_psd(rho).map_err(|e| match e {
        QmatError::NotPsd(_) => CorrError::NotDensityMatrix("negative eigenvalue"),
        other => CorrError::Linalg(other),
    })
}

/// Spectral decomposition of a density matrix with populations clamped
/// to [0, inf).
fn density_spectrum(rho: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix), CorrError> {
    let eig = hermitian_eig(rho)?;
    if eig.eigenvalues[0] < -1e-10 {
        return Err(CorrError::NotDensityMatrix("negative eigenvalue"));
    }
    let probs = eig.eigenvalues.iter().map(|&p| p.max(0.0)).collect();
    Ok((probs, eig.eigenvectors))
}

/// Wigner-Yanase skew information
/// I(rho, H) = -1/2 Tr([sqrt(rho), H]^2) = Tr(rho H^2) - Tr(sqrt(rho) H sqrt(rho) H).
pub fn skew_information(rho: &ComplexMatrix, h: &ComplexMatrix) -> Result<f64, CorrError> {
    if h.dim() != rho.dim() {
        return Err(CorrError::DimensionMismatch(rho.dim(), h.dim()));
    }
    check_density(rho)?;
    let sqrt_rho = sqrt_density(rho)?;
    Ok(skew_information_given_sqrt(rho, &sqrt_rho, h))
}

fn skew_information_given_sqrt(
    rho: &ComplexMatrix,
    sqrt_rho: &ComplexMatrix,
    h: &ComplexMatrix,
) -> f64 {
    let rho_h = rho.matmul(h);
    let sqrt_h = sqrt_rho.matmul(h);
    // Both traces are real for Hermitian rho, H.
    (rho_h.trace_prod(h) - sqrt_h.trace_prod(&sqrt_h)).re
}

/// Quantum Fisher information of rho with generator H, normalization
/// 1/4 Tr[rho L^2]:
/// F = 1/2 sum_{i != j} (p_i - p_j)^2 / (p_i + p_j) |<i|H|j>|^2.
pub fn qfi(rho: &ComplexMatrix, h: &ComplexMatrix) -> Result<f64, CorrError> {
    if h.dim() != rho.dim() {
        return Err(CorrError::DimensionMismatch(rho.dim(), h.dim()));
    }
    check_density(rho)?;
    let (probs, vectors) = density_spectrum(rho)?;
    let h_eig = &vectors.adjoint() * &h.matmul(&vectors);
    Ok(qfi_from_spectrum(&probs, &h_eig))
}

fn qfi_from_spectrum(probs: &[f64], h_eig: &ComplexMatrix) -> f64 {
    let n = probs.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let denom = probs[i] + probs[j];
            if denom <= RANK_TOL {
                continue;
            }
            let diff = probs[i] - probs[j];
            total += diff * diff / denom * h_eig.get(i, j).norm_sqr();
        }
    }
    0.5 * total
}

/// Local quantum uncertainty: min over directions of the skew
/// information, computed as 1 - lambda_max(W).
pub fn lqu(rho: &ComplexMatrix) -> Result<CorrelationResult, CorrError> {
    if rho.dim() != 4 {
        return Err(CorrError::DimensionMismatch(rho.dim(), 4));
    }
    check_density(rho)?;
    let sqrt_rho = sqrt_density(rho)?;

    let transformed: Vec<ComplexMatrix> = pauli_axes()
        .iter()
        .map(|axis| sqrt_rho.matmul(&kron(&pauli(*axis), &pauli(PauliAxis::Identity))))
        .collect();
    let mut w = [[Complex64::new(0.0, 0.0); 3]; 3];
    for l in 0..3 {
        for k in 0..3 {
            w[l][k] = transformed[l].trace_prod(&transformed[k]);
        }
    }
    finish_measure(w, MeasureKind::Lqu)
}

/// Local quantum Fisher information: min over directions of the QFI,
/// computed as 1 - lambda_max(M).
///
/// The sum runs over all pairs (i, j) of the spectral decomposition,
/// including i = j; the diagonal terms vanish on states whose
/// eigenvectors carry no local Pauli polarization (the thermal states of
/// this model) but are required for e.g. product states.
pub fn lqfi(rho: &ComplexMatrix) -> Result<CorrelationResult, CorrError> {
    if rho.dim() != 4 {
        return Err(CorrError::DimensionMismatch(rho.dim(), 4));
    }
    check_density(rho)?;
    let (probs, vectors) = density_spectrum(rho)?;
    let in_eigenbasis = pauli_in_basis(&vectors);
    let m = fisher_matrix(&probs, &in_eigenbasis);
    finish_measure(m, MeasureKind::Lqfi)
}

fn pauli_axes() -> [PauliAxis; 3] {
    [PauliAxis::X, PauliAxis::Y, PauliAxis::Z]
}

/// V^dagger (sigma_l (x) 1) V for the three Pauli axes.
fn pauli_in_basis(vectors: &ComplexMatrix) -> [ComplexMatrix; 3] {
    let vd = vectors.adjoint();
    pauli_axes().map(|axis| {
        let sigma = kron(&pauli(axis), &pauli(PauliAxis::Identity));
        vd.matmul(&sigma.matmul(vectors))
    })
}

fn fisher_matrix(probs: &[f64], in_eigenbasis: &[ComplexMatrix; 3]) -> [[Complex64; 3]; 3] {
    let n = probs.len();
    let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
    for i in 0..n {
        for j in 0..n {
            let denom = probs[i] + probs[j];
            if denom <= RANK_TOL {
                continue;
            }
            let weight = 2.0 * probs[i] * probs[j] / denom;
            if weight == 0.0 {
                continue;
            }
            for l in 0..3 {
                for k in 0..3 {
                    m[l][k] += weight * in_eigenbasis[l].get(i, j) * in_eigenbasis[k].get(j, i);
                }
            }
        }
    }
    m
}

/// Symmetrize the 3x3 correlation matrix, diagonalize it and package the
/// measure value 1 - lambda_max.
#[allow(clippy::needless_range_loop)]
fn finish_measure(
    raw: [[Complex64; 3]; 3],
    measure_kind: MeasureKind,
) -> Result<CorrelationResult, CorrError> {
    // The matrix is Hermitian up to rounding, so (raw + raw^T)/2 is real.
    let mut sym = ComplexMatrix::zeros(3);
    for l in 0..3 {
        for k in 0..3 {
            let avg = (raw[l][k] + raw[k][l]) * 0.5;
            assert!(
                avg.im.abs() <= 1e-12,
                "correlation matrix has imaginary residue {:.3e}",
                avg.im
            );
            sym.set(l, k, Complex64::new(avg.re, 0.0));
        }
    }
    let eig = hermitian_eig(&sym)?;
    let mut matrix_eigenvalues = [0.0; 3];
    matrix_eigenvalues.copy_from_slice(&eig.eigenvalues);
    let value = 1.0 - matrix_eigenvalues[2];
    let optimal_direction = canonical_direction(&eig.eigenvectors.column(2));
    Ok(CorrelationResult {
        value,
        matrix_eigenvalues,
        optimal_direction,
        measure_kind,
    })
}

/// Real eigenvector of the 3x3 problem as a Bloch direction with a fixed
/// sign convention (largest-magnitude component positive).
fn canonical_direction(column: &[Complex64]) -> BlochVector {
    let mut r = [column[0].re, column[1].re, column[2].re];
    let lead = (0..3)
        .max_by(|&i, &j| r[i].abs().partial_cmp(&r[j].abs()).expect("finite"))
        .expect("nonempty");
    if r[lead] < 0.0 {
        for v in &mut r {
            *v = -*v;
        }
    }
    BlochVector::new(r[0], r[1], r[2])
}

/// Golden-angle hemisphere sequence. Point k does not depend on the
/// total count, so the first n points of a longer run are exactly the
/// shorter run; grid minima are therefore non-increasing in n.
pub fn hemisphere_directions(n: usize) -> impl Iterator<Item = BlochVector> {
    (0..n).map(hemisphere_direction)
}

fn hemisphere_direction(k: usize) -> BlochVector {
    // Base-2 radical inverse stratifies z (equal-area in z); the golden
    // angle spreads the azimuth.
    let z = radical_inverse_base2(k);
    let azimuth = k as f64 * GOLDEN_ANGLE;
    let r_xy = (1.0 - z * z).sqrt();
    BlochVector::new(r_xy * azimuth.cos(), r_xy * azimuth.sin(), z)
}

const GOLDEN_ANGLE: f64 = 2.399963229728653; // pi (3 - sqrt 5)

fn radical_inverse_base2(mut k: usize) -> f64 {
    let mut f = 0.0;
    let mut b = 0.5;
    while k > 0 {
        if k & 1 == 1 {
            f += b;
        }
        b *= 0.5;
        k >>= 1;
    }
    f
}

/// Direct minimization of the skew information or QFI over the
/// hemisphere lattice (both functionals are even in r, so half the
/// sphere suffices). Independent oracle for the closed forms.
///
/// Returns the smallest sampled value and its direction; ties resolve to
/// the lowest lattice index. Panics if `n_directions < 100`.
pub fn brute_force_minimize(
    rho: &ComplexMatrix,
    kind: MeasureKind,
    n_directions: usize,
) -> Result<(f64, BlochVector), CorrError> {
    assert!(n_directions >= 100, "need at least 100 directions");
    if rho.dim() != 4 {
        return Err(CorrError::DimensionMismatch(rho.dim(), 4));
    }
    check_density(rho)?;

    enum Cache {
        Skew(ComplexMatrix),
        Fisher(Vec<f64>, [ComplexMatrix; 3]),
    }
    let cache = match kind {
        MeasureKind::Lqu => Cache::Skew(sqrt_density(rho)?),
        MeasureKind::Lqfi => {
            let (probs, vectors) = density_spectrum(rho)?;
            let in_eigenbasis = pauli_in_basis(&vectors);
            Cache::Fisher(probs, in_eigenbasis)
        }
    };

    let evaluate = |k: usize| -> f64 {
        let direction = hemisphere_direction(k);
        match &cache {
            Cache::Skew(sqrt_rho) => {
                let h = local_observable(&direction);
                skew_information_given_sqrt(rho, sqrt_rho, &h)
            }
            Cache::Fisher(probs, in_eigenbasis) => {
                let [rx, ry, rz] = direction.components();
                let h_eig = &(&in_eigenbasis[0].scale_re(rx) + &in_eigenbasis[1].scale_re(ry))
                    + &in_eigenbasis[2].scale_re(rz);
                qfi_from_spectrum(probs, &h_eig)
            }
        }
    };

    let (best_value, best_index) = (0..n_directions)
        .into_par_iter()
        .with_min_len(256)
        .map(|k| (evaluate(k), k))
        .reduce_with(|a, b| {
            if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                b
            } else {
                a
            }
        })
        .expect("n_directions >= 100");

    Ok((best_value, hemisphere_direction(best_index)))
}

impl ThermalState {
    /// LQU of the thermal state.
    pub fn lqu(&self) -> Result<CorrelationResult, CorrError> {
        lqu(&self.rho)
    }

    /// Local QFI of the thermal state.
    pub fn lqfi(&self) -> Result<CorrelationResult, CorrError> {
        lqfi(&self.rho)
    }
}
