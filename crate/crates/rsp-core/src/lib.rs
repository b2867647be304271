//! Simulation core for remote preparation of a polarization qubit through a
//! photonic teleportation channel.
//!
//! The crate models the full chain as exact density-matrix algebra on 2-, 4-
//! and 8-dimensional Hilbert spaces:
//!
//! * [`linalg`] — dense complex matrices, Hermitian eigendecomposition,
//!   fidelity, purity and Bloch-vector conversions;
//! * [`elements`] — the fixed operators of the optical bench (Pauli set,
//!   Bell resource, wave plates, beamsplitter, path-controlled C-NOT) and
//!   parameterized entangled-resource models;
//! * [`prepare`] — the interferometric input state with its coherence-length
//!   visibility envelope;
//! * [`protocol`] — the teleportation circuit with its four projective
//!   outcomes and Pauli corrections;
//! * [`counting`] — Poisson coincidence counting and Stokes-based state
//!   reconstruction;
//! * [`process`] — chi-matrix process tomography, average fidelity, CHSH and
//!   the classical measure-and-resend baseline;
//! * [`sample`] — random-state sampling for Monte Carlo averages.
//!
//! All operations are pure functions on immutable values. The crate is
//! `no_std`-compatible (with `alloc`) when built without the `std` feature.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod counting;
pub mod elements;
mod error;
pub mod linalg;
pub mod prepare;
pub mod process;
pub mod protocol;
pub mod sample;

pub use error::{Error, Result};
pub use linalg::{BlochVector, ComplexMatrix, DensityMatrix};
