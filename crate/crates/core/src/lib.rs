//! Simulation toolkit for embedding integer linear inequalities in variational
//! quantum optimization.
//!
//! Three ways of handling the knapsack capacity inequality are compared:
//!
//! - **standard slack**: slack bits in the circuit Hamiltonian, full QUBO
//!   evaluation of logical and slack bits;
//! - **slack, x-only**: same circuit, but only the logical bits are scored
//!   with the classical inequality objective;
//! - **no slack**: the inequality is treated as an equality in the circuit
//!   and evaluated exactly as an inequality on the classical side.
//!
//! Circuits are simulated exactly on a dense state vector. Both QAOA (angles
//! optimized with Adam over finite differences) and trotterized adiabatic
//! evolution (angles fixed by an annealing schedule) share the same layered
//! phase/mixer structure.
//!
//! ```
//! use qineq::instances::catalog;
//! use qineq::qubo::{build_hamiltonian, default_weights, Variant};
//!
//! let inst = catalog::scenario(0).unwrap();
//! let w = default_weights(&inst, Variant::NoSlack);
//! let h = build_hamiltonian(&inst, Variant::NoSlack, w);
//! assert_eq!(h.num_vars(), 2);
//! assert_eq!(h.energy(&[true, true]).unwrap(), 2250.0 * 0.0 + 45.0 - 35.0);
//! ```

pub mod error;
pub mod evaluation;
pub mod harness;
pub mod instances;
pub mod optimizer;
pub mod qubo;
pub mod schedule;
pub mod seed;
pub mod statevector;

pub use error::{Error, Result};
