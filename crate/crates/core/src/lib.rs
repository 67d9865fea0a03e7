//! Numerics for the concavity of von Neumann entropy.
//!
//! - [`hermitian`]: complex Hermitian eigensolver, matrix functions, trace norm, Kronecker product.
//! - [`states`]: density matrices, Bloch vectors, mixtures, block embedding, seeded samplers.
//! - [`entropies`]: entropy, relative entropy, Renyi and sandwiched Renyi divergences,
//!   max-relative entropy, fidelity, Bures distance.
//! - [`bounds`]: the concavity gap, its lower and upper bounds, chain checks and the
//!   critical Renyi-parameter search.
//! - [`harness`]: appendix reproduction, fuzz campaigns and report rendering used by the CLI.



pub mod bounds;
pub mod cli;
pub mod entropies;
pub mod error;

pub mod harness;
pub mod hermitian;
pub mod states;

pub use error::{Error, Result};
