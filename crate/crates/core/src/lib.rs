//! Multi-layer extended integrated interleaved (EII) erasure codes over GF(2^w).
//!
//! The crate covers field arithmetic, code descriptions, systematic encoding,
//! the recursive erasure decoder, parity-check matrix synthesis and a
//! Monte-Carlo estimator of the average number of erasures to failure.

pub mod anetf;
pub mod capability;
pub mod codec;
pub mod codespec;
pub mod error;
pub mod gf;
pub mod matrix;
pub mod pcheck;
pub mod word;

pub use capability::{code_from_capability, CapabilityTree};
pub use codec::{DecodeOutcome, DecodeReport};
pub use codespec::{Code, CodeParams, CodeSpec};
pub use error::{Error, Result, ValidationError};
pub use gf::{Field, Symbol};
pub use matrix::{ErasureSolution, Matrix, VectorBasis};
pub use pcheck::ParityCheck;
pub use word::SymbolWord;
