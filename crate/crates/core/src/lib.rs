//! Bound states, Green functions and densities of states for the
//! one-dimensional spin-1 Dirac Hamiltonian with a flat band,
//!
//! ```text
//! H = -i S_x d/dx + m S_z + V_p(x),      (v_F = hbar = 1)
//! ```
//!
//! where `S_x`, `S_z` are the spin-1 matrices and `V_p` is a diagonal
//! potential. The free spectrum consists of two dispersive bands
//! `E = ±sqrt(k^2 + m^2)` and a flat band `E = 0`. The flat band carries a
//! formally infinite density of states and puts a `1/z` pole into the
//! resolvent, which is what makes the bound-state problem here unusual:
//! a delta potential binds for either sign of the strength, and square
//! wells acting on the middle component support infinitely many levels
//! with a `1/n^2` accumulation law.
//!
//! The crate is `no_std` + `alloc` compatible (float math goes through
//! `libm` when the `std` feature is disabled). It is organized as:
//!
//! - [`model`] - spin matrices, dispersion, band eigenstates
//! - [`greens`] - closed-form free Green function, DOS, spectral checks
//! - [`potential`] - diagonal potential descriptions and classification
//! - [`analytic`] - per-family characteristic equations and spectra
//! - [`generic`] - family-agnostic interface-matching bound-state engine
//! - [`oracles`] - staggered-grid lattice and Nystrom integral-equation
//!   solvers used to cross-validate the analytic results
//!
//! All numerical routines are pure functions over immutable inputs and are
//! safe to evaluate concurrently.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod analytic;
pub mod generic;
pub mod greens;
pub mod linalg;
pub mod model;
pub mod oracles;
pub mod potential;
pub mod quad;
pub mod roots;

mod error;

pub use error::Error;
pub use model::{BandIndex, ModelParams, PlaneWaveState};
pub use potential::{Potential, PotentialClass};

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
