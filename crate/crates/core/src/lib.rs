//! Scalable Clifford randomized benchmarking.
//!
//! * [`clifford`]: symplectic representation, uniform sampling, decomposition.
//! * [`channels`]: dense superoperators, Kraus/Pauli/χ forms, twirls.
//! * [`metrics`]: Pauli-channel diamond distance, 1→1 Hermitian norm, fidelity bounds.
//! * [`engine`]: noise models, sequence simulation, exact averages, perturbation bounds.
//! * [`fitting`]: zeroth- and first-order decay fits and model comparison.
//! * [`cli`]: the `rblab` command-line front end.

pub mod channels;
pub mod cli;
pub mod clifford;
pub mod error;
pub mod fitting;
pub mod gf2;
pub mod engine;
pub mod metrics;

pub use error::{RbError, Result};
