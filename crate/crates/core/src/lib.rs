//! Reference-free DNA sequence reconstruction expressed as a chain of
//! reductions: reads become a directed overlap graph, the graph becomes a
//! travelling-salesman QUBO, and the QUBO becomes either an Ising model (for
//! annealing-style samplers) or a Pauli-Z cost Hamiltonian (for QAOA).
//!
//! The crate ships three solvers that work entirely in-process:
//!
//! - [`samplers::solve_exact`]: exhaustive enumeration up to 24 variables,
//! - [`samplers::solve_sa`]: single-flip Metropolis simulated annealing,
//! - [`qaoa::run_qaoa`]: a p-layer QAOA loop on a statevector simulator driven
//!   by Nelder-Mead,
//!
//! plus Chimera-topology utilities in [`chimera`] for minor embedding and
//! majority-vote unembedding.
//!
//! ```
//! use olcqubo::{reads::{ReadSet, overlap_graph}, qubo::{tsp_to_qubo, Penalties}};
//! use olcqubo::samplers::solve_exact;
//!
//! let reads = ReadSet::new(["ATGGCGTGCA", "GCGTGCAATG", "TGCAATGGCG", "AATGGCGTGC"]).unwrap();
//! let graph = overlap_graph(&reads, 0).unwrap();
//! let model = tsp_to_qubo(&graph, Penalties::default()).unwrap();
//! let samples = solve_exact(&model).unwrap();
//! assert_eq!(samples.lowest_energy(), Some(-30.0));
//! ```

pub mod chimera;
pub mod error;
pub mod fmt;
pub mod ising;
pub mod qaoa;
pub mod qubo;
pub mod reads;
pub mod samplers;
pub mod samples;

pub use error::{Error, Result};
pub use ising::IsingModel;
pub use qubo::QuboModel;
pub use reads::{OverlapGraph, ReadSet};
pub use samples::{SampleSet, Vartype};
