//! QAOA on a statevector simulator: the Pauli-Z cost Hamiltonian of the
//! overlap TSP, ansatz compilation, exact expectations and a Nelder-Mead
//! variational loop.

mod circuit;
mod driver;
mod hamiltonian;
mod nelder_mead;
mod statevector;

pub use circuit::{compile_ansatz, Ansatz, AnsatzGate, Gate, GateList, Param};
pub use driver::{
    run_qaoa, top_basis_states, BasisState, Evaluation, QaoaConfig, QaoaObjective, QaoaResult,
    RestartSummary,
};
pub use hamiltonian::{build_cost_hamiltonian, PauliHamiltonian};
pub use nelder_mead::{nelder_mead, NelderMeadConfig, NelderMeadResult};
pub use statevector::{hamiltonian_expectation, simulate, Statevector, MAX_QUBITS};
