//! Dense complex linear algebra for small Hermitian problems.
//!
//! Everything here is sized for the 2x2 / 4x4 operators of a two-qubit
//! system: construction, tensor products, Hermitian eigendecomposition
//! (cyclic complex Jacobi) and the PSD matrix square root. Matrices are
//! plain value types; operations return fresh matrices.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use thiserror::Error;

/// Relative tolerance of the `is_hermitian` predicate.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Errors from the dense linear-algebra layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QmatError {
    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("Jacobi eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
}

/// Dense square complex matrix, row-major storage.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    /// Build from row-major real entries.
    pub fn from_real(dim: usize, rows: &[f64]) -> Self {
        assert_eq!(rows.len(), dim * dim, "entry count must be dim*dim");
        Self {
            dim,
            data: rows.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
        }
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * m.dim + i] = d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry magnitude, max |a_ij|.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// max |a_ij - conj(a_ji)|, the deviation from Hermitian symmetry.
    pub fn hermiticity_error(&self) -> f64 {
        let mut err = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                err = err.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        err
    }

    /// Hermitian up to `HERMITICITY_TOL * (1 + max_abs)`.
    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_error() <= HERMITICITY_TOL * (1.0 + self.max_abs())
    }

    /// max |(A - B)_ij|.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Tr(A * B) without forming the product.
    pub fn trace_prod(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut t = Complex64::new(0.0, 0.0);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t += self.get(i, j) * other.get(j, i);
            }
        }
        t
    }

    /// A*B - B*A.
    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    /// Column `col` as a vector of length `dim`.
    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, col)).collect()
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Pauli operator label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
    Identity,
}

/// The standard 2x2 Pauli matrix (or identity) in the sigma_z eigenbasis.
pub fn pauli(axis: PauliAxis) -> ComplexMatrix {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let entries = match axis {
        PauliAxis::X => [o, l, l, o],
        PauliAxis::Y => [o, -i, i, o],
        PauliAxis::Z => [l, o, o, -l],
        PauliAxis::Identity => [l, o, o, l],
    };
    let mut m = ComplexMatrix::zeros(2);
    m.data.copy_from_slice(&entries);
    m
}

/// Kronecker product; row blocks indexed by `a`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim, b.dim);
    ComplexMatrix::from_fn(da * db, |i, j| {
        a.get(i / db, j / db) * b.get(i % db, j % db)
    })
}

/// Unit vector on the Bloch sphere, the direction of a local observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    x: f64,
    y: f64,
    z: f64,
}

impl BlochVector {
    /// Normalizes the given components. Panics on a zero or non-finite vector.
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        let norm = (x * x + y * y + z * z).sqrt();
        assert!(
            norm.is_finite() && norm > 0.0,
            "Bloch vector must be nonzero and finite"
        );
        Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        }
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn negate(&self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// The qubit observable sigma . r (2x2, Hermitian, eigenvalues +-1).
    pub fn observable(&self) -> ComplexMatrix {
        let sx = pauli(PauliAxis::X).scale_re(self.x);
        let sy = pauli(PauliAxis::Y).scale_re(self.y);
        let sz = pauli(PauliAxis::Z).scale_re(self.z);
        &(&sx + &sy) + &sz
    }
}

/// Eigenvalues (ascending) and matching orthonormal eigenvector columns
/// of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_OFF_TOL: f64 = 1e-13;

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Deterministic: fixed pivot order, no randomness.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEigenSystem, QmatError> {
    if !a.is_hermitian() {
        return Err(QmatError::NotHermitian(a.hermiticity_error()));
    }
    let n = a.dim;
    let mut m = a.clone();
    let mut v = ComplexMatrix::identity(n);

    // Convergence target: off-diagonal Frobenius norm relative to ||A||_F,
    // which is invariant under the unitary updates.
    let target = JACOBI_OFF_TOL * a.norm_fro();

    let mut converged = off_diagonal_norm(&m) <= target;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(QmatError::NoConvergence(JACOBI_MAX_SWEEPS));
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&m) <= target;
    }

    // Ascending eigenvalue order; ties keep the pre-sort column order so the
    // output is deterministic.
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| diag[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v.get(i, order[j]));

    Ok(HermitianEigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.dim;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation zeroing m[p][q] (and m[q][p]), accumulating
/// the rotation into `v`.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let b = m.get(p, q);
    let abs_b = b.norm();
    if abs_b == 0.0 {
        return;
    }
    let phase = b / abs_b;

    // Pick the smaller rotation angle: t solves t^2 - 2*tau*t - 1 = 0.
    let tau = (m.get(p, p).re - m.get(q, q).re) / (2.0 * abs_b);
    let t = if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = phase * (t * c);

    let n = m.dim;
    // Column update: B = M * J with J[[c, s], [-conj(s), c]] on (p, q).
    for k in 0..n {
        let mkp = m.get(k, p);
        let mkq = m.get(k, q);
        m.set(k, p, mkp * c - mkq * s.conj());
        m.set(k, q, mkp * s + mkq * c);
    }
    // Row update: M' = J^dagger * B.
    for k in 0..n {
        let mpk = m.get(p, k);
        let mqk = m.get(q, k);
        m.set(p, k, mpk * c - mqk * s);
        m.set(q, k, mpk * s.conj() + mqk * c);
    }
    // The pivot is zero by construction; store it exactly.
    m.set(p, q, Complex64::new(0.0, 0.0));
    m.set(q, p, Complex64::new(0.0, 0.0));
    m.set(p, p, Complex64::new(m.get(p, p).re, 0.0));
    m.set(q, q, Complex64::new(m.get(q, q).re, 0.0));

    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c - vkq * s.conj());
        v.set(k, q, vkp * s + vkq * c);
    }
}

/// Hermitian PSD square root via spectral decomposition. Eigenvalues in
/// [-1e-12, 0) are treated as rounding noise and clamped to zero.
pub fn matrix_sqrt_psd(a: &ComplexMatrix) -> Result<ComplexMatrix, QmatError> {
    let eig = hermitian_eig(a)?;
    let min_eval = eig.eigenvalues[0];
    if min_eval < -1e-10 * a.max_abs() {
        return Err(QmatError::NotPsd(min_eval));
    }
    let roots: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    Ok(reassemble(&eig.eigenvectors, &roots))
}

/// V * diag(values) * V^dagger.
pub fn reassemble(vectors: &ComplexMatrix, values: &[f64]) -> ComplexMatrix {
    let n = vectors.dim;
    assert_eq!(values.len(), n, "dimension mismatch");
    ComplexMatrix::from_fn(n, |i, j| {
        (0..n)
            .map(|k| vectors.get(i, k) * values[k] * vectors.get(j, k).conj())
            .sum()
    })
}
