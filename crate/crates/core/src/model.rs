//! Two-spin dipolar + Dzyaloshinsky-Moriya model and its thermal state.
//!
//! The Hamiltonian couples a pair of spin-1/2 particles (S = sigma/2)
//! through the traceless dipolar tensor diag(delta - 3*epsilon,
//! delta + 3*epsilon, -2*delta) scaled by -1/3, plus a DM vector along z.
//! In the computational basis {|00>, |01>, |10>, |11>} (|0> is the
//! sigma_z = +1 state) it is an X-shaped 4x4 matrix, diagonalized in
//! closed form. The thermal state exp(-H/T)/Z is assembled both from the
//! closed form and from the numeric eigendecomposition; the two routes
//! must agree to 1e-10 or construction panics.
//!
//! Units: k_B = 1, couplings and temperature share one energy unit.
//!
//! Note the sign in the closed-form spectrum: the middle-block
//! eigenvalues are (-delta +- eta)/6 with eta = sqrt(9 D^2 + delta^2),
//! not (+delta +- eta)/6 — only the former is consistent with the Gibbs
//! matrix element rho_22 = exp(+beta*delta/6) cosh(beta*eta/6) and with
//! the numeric diagonalization. Likewise the middle-block eigenvectors
//! carry the phase of the off-diagonal element (-delta + 3iD)/eta and
//! reduce to (|10> +- |01>)/sqrt(2) only at D = 0.

use num_complex::Complex64;
use thiserror::Error;

use crate::qmat::{hermitian_eig, reassemble, ComplexMatrix};

/// Smallest supported temperature. Below this the Gibbs weights are
/// numerically degenerate with the T -> 0 limit, which is ill-defined
/// when the ground level is degenerate.
pub const TEMPERATURE_FLOOR: f64 = 1e-3;

/// Largest magnitude allowed for the Boltzmann exponents beta*delta/6,
/// beta*epsilon/2 and beta*eta/6 before exp() overflows.
pub const EXP_GUARD: f64 = 700.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("temperature {0} below supported floor {TEMPERATURE_FLOOR}")]
    InvalidTemperature(f64),
    #[error("model parameters must be finite")]
    NonFiniteParams,
    #[error("Boltzmann exponent exceeds {EXP_GUARD}; partition function overflows")]
    Overflow,
}

/// Physical knobs of the model: dipolar couplings delta and epsilon, DM
/// strength along z, and temperature (k_B = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub delta: f64,
    pub epsilon: f64,
    pub dm: f64,
    pub temperature: f64,
}

impl ModelParams {
    pub fn new(delta: f64, epsilon: f64, dm: f64, temperature: f64) -> Self {
        Self {
            delta,
            epsilon,
            dm,
            temperature,
        }
    }

    /// eta = sqrt(9 D^2 + delta^2), the middle-block gap scale.
    pub fn eta(&self) -> f64 {
        (9.0 * self.dm * self.dm + self.delta * self.delta).sqrt()
    }

    fn check_finite(&self) -> Result<(), ModelError> {
        let all = [self.delta, self.epsilon, self.dm, self.temperature];
        if all.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(ModelError::NonFiniteParams)
        }
    }
}

/// H in the computational basis:
///
/// ```text
/// [ d/6      0            0          e/2 ]
/// [ 0       -d/6         -d/6+iD/2   0   ]
/// [ 0       -d/6-iD/2    -d/6        0   ]
/// [ e/2      0            0          d/6 ]
/// ```
pub fn build_hamiltonian(p: &ModelParams) -> ComplexMatrix {
    let d6 = p.delta / 6.0;
    let e2 = p.epsilon / 2.0;
    let mut h = ComplexMatrix::zeros(4);
    h.set(0, 0, Complex64::new(d6, 0.0));
    h.set(3, 3, Complex64::new(d6, 0.0));
    h.set(0, 3, Complex64::new(e2, 0.0));
    h.set(3, 0, Complex64::new(e2, 0.0));
    h.set(1, 1, Complex64::new(-d6, 0.0));
    h.set(2, 2, Complex64::new(-d6, 0.0));
    h.set(1, 2, Complex64::new(-d6, p.dm / 2.0));
    h.set(2, 1, Complex64::new(-d6, -p.dm / 2.0));
    h
}

/// Analytic spectrum of the Hamiltonian, indexed 1..4 as:
///
/// * `eigenvalues[0]` = (delta + 3 epsilon)/6, vector (|11> + |00>)/sqrt(2)
/// * `eigenvalues[1]` = (-delta + eta)/6, vector (c|01> + |10>)/sqrt(2)
/// * `eigenvalues[2]` = (-delta - eta)/6, vector (-c|01> + |10>)/sqrt(2)
/// * `eigenvalues[3]` = (delta - 3 epsilon)/6, vector (|11> - |00>)/sqrt(2)
///
/// with c = (-delta + 3iD)/eta (c = 1 when eta = 0, where the middle
/// block is fully degenerate and any basis works).
#[derive(Debug, Clone)]
pub struct ClosedFormSpectrum {
    pub eigenvalues: [f64; 4],
    pub eigenvectors: ComplexMatrix,
}

pub fn closed_form_spectrum(p: &ModelParams) -> ClosedFormSpectrum {
    let eta = p.eta();
    let eigenvalues = [
        (p.delta + 3.0 * p.epsilon) / 6.0,
        (-p.delta + eta) / 6.0,
        (-p.delta - eta) / 6.0,
        (p.delta - 3.0 * p.epsilon) / 6.0,
    ];

    let c_hat = middle_block_phase(p, eta);
    let inv_sqrt2 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut v = ComplexMatrix::zeros(4);
    // Columns follow the eigenvalue order above.
    v.set(3, 0, inv_sqrt2);
    v.set(0, 0, inv_sqrt2);
    v.set(1, 1, c_hat * inv_sqrt2);
    v.set(2, 1, inv_sqrt2);
    v.set(1, 2, -c_hat * inv_sqrt2);
    v.set(2, 2, inv_sqrt2);
    v.set(3, 3, inv_sqrt2);
    v.set(0, 3, -inv_sqrt2);

    ClosedFormSpectrum {
        eigenvalues,
        eigenvectors: v,
    }
}

/// Unit phase of the middle-block off-diagonal, (-delta + 3iD)/eta.
fn middle_block_phase(p: &ModelParams, eta: f64) -> Complex64 {
    if eta > 0.0 {
        Complex64::new(-p.delta / eta, 3.0 * p.dm / eta)
    } else {
        Complex64::new(1.0, 0.0)
    }
}

/// Z = 2 exp(-beta delta/6) cosh(beta epsilon/2)
///   + 2 exp(+beta delta/6) cosh(beta eta/6).
pub fn partition_function(p: &ModelParams) -> Result<f64, ModelError> {
    p.check_finite()?;
    if p.temperature <= 0.0 {
        return Err(ModelError::InvalidTemperature(p.temperature));
    }
    let beta = 1.0 / p.temperature;
    let x = beta * p.delta / 6.0;
    let y = beta * p.epsilon / 2.0;
    let w = beta * p.eta() / 6.0;
    if x.abs() > EXP_GUARD || y.abs() > EXP_GUARD || w.abs() > EXP_GUARD {
        return Err(ModelError::Overflow);
    }
    let z = 2.0 * (-x).exp() * y.cosh() + 2.0 * x.exp() * w.cosh();
    if !z.is_finite() {
        return Err(ModelError::Overflow);
    }
    Ok(z)
}

/// Gibbs state of the model with its spectral data.
///
/// `probs` are the Boltzmann populations sorted descending and `basis`
/// holds the matching eigenvector columns (the numerically diagonalized
/// Hamiltonian eigenbasis, ascending in energy).
#[derive(Debug, Clone)]
pub struct ThermalState {
    pub rho: ComplexMatrix,
    pub probs: [f64; 4],
    pub basis: ComplexMatrix,
    pub params: ModelParams,
    pub partition: f64,
}

/// Builds exp(-beta H)/Z twice: from the closed-form spectrum and from
/// the numeric eigendecomposition of the Hamiltonian.
///
/// # Panics
///
/// Panics if the two constructions disagree beyond 1e-10 in any entry,
/// which would indicate a defect in either route.
pub fn thermal_state(p: &ModelParams) -> Result<ThermalState, ModelError> {
    p.check_finite()?;
    if p.temperature < TEMPERATURE_FLOOR {
        return Err(ModelError::InvalidTemperature(p.temperature));
    }
    let partition = partition_function(p)?;
    let beta = 1.0 / p.temperature;

    // Closed-form route. Populations come from the analytic spectrum,
    // evaluated relative to the ground level so no exponential can
    // overflow; the ratios are identical to the textbook
    // (rho_11 +- rho_14)/Z and (rho_22 +- rho_23)/Z expressions.
    let spectrum = closed_form_spectrum(p);
    let analytic_probs = boltzmann_probs(&spectrum.eigenvalues, beta);
    let [p1, p2, p3, p4] = analytic_probs;

    let eta = p.eta();
    let c_hat = middle_block_phase(p, eta);
    let mut rho = ComplexMatrix::zeros(4);
    rho.set(0, 0, Complex64::new((p1 + p4) / 2.0, 0.0));
    rho.set(3, 3, Complex64::new((p1 + p4) / 2.0, 0.0));
    rho.set(0, 3, Complex64::new((p1 - p4) / 2.0, 0.0));
    rho.set(3, 0, Complex64::new((p1 - p4) / 2.0, 0.0));
    rho.set(1, 1, Complex64::new((p2 + p3) / 2.0, 0.0));
    rho.set(2, 2, Complex64::new((p2 + p3) / 2.0, 0.0));
    let mid = c_hat * ((p2 - p3) / 2.0);
    rho.set(1, 2, mid);
    rho.set(2, 1, mid.conj());

    // Numeric route.
    let h = build_hamiltonian(p);
    let eig = hermitian_eig(&h).expect("Hamiltonian is Hermitian by construction");
    let mut evals = [0.0; 4];
    evals.copy_from_slice(&eig.eigenvalues);
    let weights = boltzmann_probs(&evals, beta);
    let rho_numeric = reassemble(&eig.eigenvectors, &weights);

    let gap = rho.max_abs_diff(&rho_numeric);
    assert!(
        gap <= 1e-10,
        "closed-form and numeric Gibbs states disagree by {gap:.3e} at {p:?}"
    );

    // Ascending energies pair with descending populations.
    let mut probs = analytic_probs;
    probs.sort_by(|a, b| b.partial_cmp(a).expect("finite populations"));

    Ok(ThermalState {
        rho,
        probs,
        basis: eig.eigenvectors,
        params: *p,
        partition,
    })
}

/// exp(-beta * (e_i - e_min)) normalized to sum 1.
fn boltzmann_probs(energies: &[f64; 4], beta: f64) -> [f64; 4] {
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let mut w = [0.0; 4];
    for (wi, &e) in w.iter_mut().zip(energies) {
        *wi = (-beta * (e - e_min)).exp();
    }
    let total: f64 = w.iter().sum();
    for wi in &mut w {
        *wi /= total;
    }
    w
}
