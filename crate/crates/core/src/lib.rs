//! Exact achievable-rate computations for repetition ("cat") codes on qubit
//! Pauli channels.
//!
//! The crate evaluates the coherent-information rate of single-level and
//! two-level concatenated cat codes from the closed-form joint distribution of
//! syndromes and logical errors, searches noise thresholds and optimal code
//! lengths, and tests small channels for degradability through the Choi
//! matrix of the solved degrading map. A brute-force enumerator in [`oracle`]
//! provides independent ground truth for small instances.

pub mod catcode;
mod combinatorics;
pub mod channel;
pub mod concat;
pub mod degradable;
mod error;
pub mod oracle;
pub mod search;
pub mod signed;

pub use catcode::{cat_rate, CatCodeSpec, SyndromeClass};
pub use channel::{entropy4, hashing_rate, permute_basis, Basis, ChannelFamily, PauliChannel};
pub use concat::{concat_rate, ConcatLimits, ConcatSpec, InducedEnsemble};
pub use error::{Error, Result};
pub use signed::SignedLogValue;
