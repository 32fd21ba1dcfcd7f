//! Neural codes, their canonical forms and polarized neural ideals, piercing
//! structure, and Betti numbers computed three independent ways.
//!
//! Neurons are 1-based everywhere in the public interface. Codewords are
//! bit masks with neuron `i` at bit `i - 1`.

pub mod betti;
pub mod cli;
pub mod code;
pub mod error;
pub mod graphs;
pub mod oracle;
pub mod piercing;
pub mod polarize;
pub mod pseudomonomial;
pub mod samples;

pub use error::{Error, Result};
