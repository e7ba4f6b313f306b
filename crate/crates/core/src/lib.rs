//! Dense state-vector simulation and numerical auditing of the one-way
//! (measurement-based) CNOT gate on a 15-qubit cluster state.
//!
//! The crate is organized bottom-up:
//!
//! - [`statevector`] and [`pauli`]: the simulation substrate.
//! - [`cluster`]: cluster graphs, state preparation, stabilizers.
//! - [`measurement`]: projective Pauli-basis measurements.
//! - [`cnot`]: the CNOT measurement pattern, byproduct operators, branch sweeps.
//! - [`tabular`]: sign/symbol tables of cluster states.
//! - [`subcluster`]: the pieces the CNOT cluster is joined from, with golden tables.
//! - [`gf2`]: affine fitting over GF(2).
//! - [`audit`]: claim-by-claim numerical checks and the report format.
//! - [`cli`]: the `oneway` command-line front end.

pub mod audit;
pub mod cli;
pub mod cluster;
pub mod cnot;
pub mod dense;
pub mod error;
pub mod gf2;
pub mod measurement;
pub mod pauli;
pub mod statevector;
pub mod subcluster;
pub mod tabular;

pub use error::{Error, Result};
pub use pauli::{Pauli, PauliString, Phase};
pub use statevector::{InputQubitState, QubitLabel, StateVector};
