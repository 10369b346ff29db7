//! Exact finite-field toolkit for classical and quantum product codes.

pub mod algebra;
pub mod bounds;
pub mod chain;
pub mod decoder;
pub mod codes;
pub mod error;
pub mod expansion;
pub mod quantum;
pub mod subsystem;
pub mod transversal;

pub use error::{Error, Result};
