//! Signaling witnesses for linear but non-unitary dynamics.
//!
//! Two nonorthogonal qubit states are cloned (or deleted) by a machine acting
//! on one half of an entangled probe. Quantum-attainable machines preserve the
//! pairwise overlap of their outputs and leave the far half untouched; any
//! linear machine that beats the best quantum fidelity changes that overlap and
//! therefore the von Neumann entropy observed on the far half.
//!
//! Module map:
//! - [`hilbert`]: pure states, density matrices, partial trace, entropy, Schmidt form.
//! - [`machines`]: cone geometry, optimal quantum fidelity, super-quantum linear machines.
//! - [`signaling`]: probe states, the detection protocol, sweeps, bounds, experiment planning.
//! - [`optimizer`]: brute-force search oracles for the optimal fidelity.

pub mod error;
pub mod exec;
pub mod hilbert;
pub mod machines;
pub mod optimizer;
pub mod signaling;

pub use error::{Error, Result};
pub use exec::Execution;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
