//! Thermal quantum correlations of a dipolar spin-1/2 pair with
//! Dzyaloshinsky-Moriya coupling.
//!
//! The crate builds the two-spin dipolar + DM Hamiltonian and its Gibbs
//! state, and computes two discord-like correlation measures on it:
//! local quantum uncertainty (minimal Wigner-Yanase skew information
//! over local observables) and local quantum Fisher information. Closed
//! forms are validated against brute-force minimization over a
//! Bloch-sphere direction lattice, and a sweep engine emits CSV tables
//! and SVG plots over any model parameter. The `spincorr` binary exposes
//! the sweeps on the command line.
//!
//! ```
//! use spincorr::model::{thermal_state, ModelParams};
//!
//! let state = thermal_state(&ModelParams::new(2.0, 2.0, 1.0, 0.5))?;
//! let lqu = state.lqu()?.value;
//! let lqfi = state.lqfi()?.value;
//! assert!(lqu <= lqfi && lqfi <= 2.0 * lqu + 1e-12);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod cli;
pub mod correlations;
pub mod model;
pub mod qmat;
pub mod sweep;

#[cfg(test)]
pub(crate) mod testutil;
