//! Independent numerical solvers used to cross-validate the closed-form
//! and matching-based results.
//!
//! Two oracles are provided, chosen so that they share nothing with the
//! analytic pipeline or with each other:
//!
//! - [`lattice`] diagonalizes the Hamiltonian on a staggered real-space
//!   grid. The first-order derivative couples the middle component on
//!   half-integer sites to the outer components on integer sites, which
//!   keeps the discrete flat band exactly at zero energy and avoids
//!   fermion doubling.
//! - [`nystrom`] solves the homogeneous Lippmann-Schwinger equation
//!   `psi = G_0(E) V psi` by Gauss-Legendre discretization of the integral
//!   over the potential support; bound energies are zeros of
//!   `det(I - K(E))`.
//!
//! Both oracles take the potential description and model parameters only;
//! they never consult the characteristic equations they are meant to
//! check.

pub mod lattice;
pub mod nystrom;

pub use lattice::{
    lattice_bound_states, lattice_hamiltonian, lattice_hamiltonian_naive, InGapState,
    LatticeConfig,
};
pub use nystrom::{nystrom_bound_states, nystrom_characteristic};
