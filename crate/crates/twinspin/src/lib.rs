//! Simulation library for measurements on a pair of entangled spin-1
//! particles.
//!
//! The crate is organized around the maximally correlated two-qutrit state
//! Υ = (|11⟩+|22⟩+|33⟩)/√3 and the different classical and quantum stories
//! that reproduce its measurement statistics:
//!
//! * [`hilbert`] — dense complex linear algebra for small tensor-product
//!   registers (state vectors, operators, density operators, partial trace).
//! * [`measure`] — joint/marginal/conditional probabilities, von Neumann
//!   measurement superoperators and the four-zone two-clock evolution.
//! * [`spin1`] — spin-1 observables, frames, the K operator, the 3×3
//!   correlation table, a finite Kochen-Specker satisfiability checker and
//!   possibility relations.
//! * [`network`] — no-collapse measurement circuits: measurement/swap gates
//!   on system ⊗ carrier, comparison gates, carrier replication and branch
//!   extraction.
//! * [`signed`] — decomposition of any two-qutrit density operator over a
//!   fixed product basis with positive and negative weights, exact counter
//!   expectations and a seeded Monte-Carlo counter simulator.
//! * [`roulette`] — hidden-variable samplers: the single nonlocal roulette
//!   and conditional-chain models.

pub mod error;
pub mod hilbert;
pub mod measure;
pub mod network;
pub mod roulette;
pub mod signed;
pub mod spin1;
pub mod tol;

pub use error::{Error, Result};
pub use hilbert::{DensityOperator, Operator, StateVector};
