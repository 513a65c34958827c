//! Periodic Toda and Fermi–Pasta–Ulam lattices with their spectral
//! (near-)Birkhoff coordinates.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice`]: canonical states and the Toda, FPU and harmonic Hamiltonians.
//! - [`fourier`]: the unitary DFT, linear Birkhoff variables, weighted norms,
//!   mode energies and the cubic Hamiltonian in complex variables.
//! - [`linalg`]: the dense symmetric eigensolver and small matrix helpers.
//! - [`spectral`]: the Flaschka map, the doubled Jacobi matrix, spectral gaps,
//!   projectors, transformation operators and the coordinate maps `Z` and `Ψ`.
//! - [`dynamics`]: Hamiltonian vector fields and symplectic integrators.
//! - [`majorant`]: truncated power-series maps, averaging operators and the
//!   majorant norm calculus.

pub mod dynamics;
pub mod error;
pub mod fourier;
pub mod lattice;
pub mod linalg;
pub mod majorant;
pub mod spectral;

mod sum;

pub use error::{Error, Result};
