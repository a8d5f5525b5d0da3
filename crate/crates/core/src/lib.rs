//! Digital quantum simulation of spin Hamiltonians.
//!
//! The pipeline runs from a [`PauliHamiltonian`] through Trotter splitting
//! ([`trotter`]) and gate-set compilation ([`compiler`]) to execution on a
//! [`StateVector`], where [`observables`] are read out. Dense matrices are
//! used only as verification oracles.
//!
//! Qubits are labelled from 1; qubit 1 is the most significant bit of the
//! amplitude index and `|0⟩` is spin up.

pub mod compiler;
pub mod dense;
pub mod error;
pub mod gates;
pub mod observables;
pub mod pauli;
pub mod scalar;
pub mod statevector;
pub mod trotter;

pub use compiler::{Circuit, GateSet};
pub use dense::{DenseMatrix, DenseUnitary};
pub use error::{Result, SimError};
pub use gates::{Axis, GateKind, GateOp};
pub use pauli::{PauliHamiltonian, PauliString};
pub use scalar::Real;
pub use statevector::StateVector;
pub use trotter::{Growth, Schedule, TrotterPlan};

pub type StateVectorF32 = StateVector<f32>;
pub type StateVectorF64 = StateVector<f64>;
pub type DenseF32 = DenseMatrix<f32>;
pub type DenseF64 = DenseMatrix<f64>;
