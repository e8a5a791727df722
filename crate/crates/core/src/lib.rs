//! Simulation core for a quantum dynamic RAM: qubits stored as the spin of
//! single quantons in quantum dots, kept alive by periodic refresh cycles.
//!
//! The crate is `no_std` (it needs `alloc` for cell arrays and time series)
//! and contains no IO. Everything random takes an explicit [`rand::Rng`], and
//! [`measure::substream`] defines how independent streams are split off a
//! single seed so parallel runs stay reproducible.
//!
//! Modules, bottom-up:
//!
//! - [`state`]: pure qubit states, 2×2 density matrices, fidelities.
//! - [`channels`]: amplitude/phase damping and coherent leakage over time.
//! - [`measure`]: projective Z measurement, Wilson estimates, re-preparation,
//!   Zeno survival.
//! - [`erasure`]: quanton ⊗ detector entanglement and the erasure protocol.
//! - [`memory`]: redundant logical qubits, the three refresh policies,
//!   capacity arithmetic and the experiment loop.
//!
//! ```
//! use qdram_core::channels::NoiseModel;
//! use qdram_core::measure::{substream, PhasePolicy};
//! use qdram_core::memory::LogicalQubit;
//! use qdram_core::state::QubitState;
//!
//! let mut rng = substream(7, 0);
//! let mut qubit = LogicalQubit::with_state(100, QubitState::from_probability(0.3, 0.0)?)?;
//! qubit.step(1e-7, &NoiseModel::markovian(2e-6, 1e-6)?)?;
//! let report = qubit.refresh_measure_recreate(PhasePolicy::Zero, &mut rng);
//! assert!(report.magnitude_fidelity > 0.9);
//! # Ok::<(), qdram_core::Error>(())
//! ```

#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;

pub mod channels;
pub mod erasure;
mod error;
pub mod measure;
pub mod memory;
pub mod state;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Absolute tolerance used by every state invariant check.
pub const TOLERANCE: f64 = 1e-12;
