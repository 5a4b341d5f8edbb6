//! Hermitian self-orthogonal MDS codes over GF(q^2) from multiplicative
//! subgroups and their unions, the quantum MDS parameters they give, and
//! exact checks of both.

pub mod audit;
pub mod char_sums;
pub mod cli;
pub mod code;
pub mod constructions;
pub mod error;
pub mod eval_sets;
pub mod field;
pub mod numtheory;
pub mod verifier;

pub use error::{Error, Result};
pub use field::{Elt, Field};
