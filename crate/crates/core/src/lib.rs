//! Exact-arithmetic workbench for greedy Policy Iteration on Markov decision
//! processes.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs: file formats, threads and the command-line tool
//! live in the `pi-workbench` companion crate.
//!
//! - [`mdp`]: MDP representation, exact policy evaluation, domination,
//!   switching and improvement sets, brute-force oracles.
//! - [`generate`]: seeded random MDP instances.
//! - [`dag`]: the domination orientation of the policy grid.
//! - [`iteration`]: greedy Policy Iteration with full traces.
//! - [`analysis`]: verifiers for the combinatorial properties of
//!   (pseudo-)PI-sequences.
//! - [`pseudo`]: the canonical pseudo-PI-sequence of length
//!   `(k^(n+1) - 1) / ((n + 1)(k - 1))`.
//! - [`bounds`]: computable iteration bounds.
//! - [`order_regular`]: order-regular binary matrices and their maximal
//!   length search.

#![no_std]

extern crate alloc;

pub mod analysis;
mod bitset;
pub mod bounds;
pub mod dag;
pub mod error;
pub mod generate;
pub mod iteration;
pub mod linalg;
pub mod mdp;
pub mod order_regular;
pub mod pseudo;
pub mod rational;

pub use error::{Error, Result};
pub use mdp::{Comparison, ImprovementSet, Mdp, Policy, SwitchSet, ValueVector};
pub use rational::Rational;

/// Default guard on the number of policies an enumeration may visit.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 1 << 24;
