//! Quantum walks on chains, their number-conserving matchgate circuits,
//! and simulators that exploit the single-excitation contraction.
//!
//! A staggered walk on `d` nodes is the same dynamics as a chain of `d`
//! qubits driven by nearest-neighbour matchgates restricted to states with
//! one excitation. That lets a `2^d`-dimensional circuit be simulated with
//! `d` amplitudes (or on `⌈log₂ d⌉` qubits).

pub mod backends;
pub mod bench;
pub mod cli;
pub mod error;
pub mod format;
pub mod matchgate;
pub mod numerics;
pub mod qasm_emit;
pub mod scalar_walk;
pub mod spin_chain;

pub use error::{Error, Result};
pub use numerics::{ComplexMatrix, Mat2, C64};
