//! Grover-based search and quantum counting for the network signal
//! coordination (NSC) decision problem.
//!
//! The crate is layered bottom-up:
//!
//! - [`statevec`]: exact complex state-vector engine with a small gate set
//!   (H, X, Z, CNOT, CCX, MCX, MCZ, CP), shot sampling and Pauli-noise
//!   trajectories.
//! - [`gadgets`]: reversible sub-circuits (register layout, delay lookups,
//!   half-adder chains, constant comparator, diffuser, QFT).
//! - [`model`]: the classical problem: graphs, periodic delay tables,
//!   total delay, feasibility, robust decision, instance generation.
//! - [`engine`]: full oracle assembly, gate-level and fast Grover search,
//!   quantum counting.
//! - [`complexity`]: closed-form iteration, qubit and gate-cost calculators.
//! - [`verify`]: oracle-equivalence and cross-backend checks shared by the
//!   CLI and the test suites.

pub mod complexity;
pub mod engine;
mod error;
pub mod gadgets;
pub mod metrics;
pub mod model;
pub mod rng;
pub mod statevec;
pub mod verify;

pub use error::{Error, Result};
