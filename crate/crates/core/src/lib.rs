//! Kloosterman sums over GF(3^r) and the weight distributions of the ternary
//! codes attached to double cosets of the minus-type orthogonal group.
//!
//! The crate computes power moments of Kloosterman sums two ways: directly
//! from the sums themselves, and through Pless power-moment identities for
//! codes whose weights are expressible through those sums.

pub mod charsum;
pub mod cli;
pub mod code;
pub mod constants;
pub mod eisenstein;
pub mod error;
pub mod field;
pub mod group;
pub mod json;
pub mod moments;

pub use eisenstein::Eisenstein;
pub use error::{Error, Result};
pub use field::{Elem, Field};
