//! Preserved measures and first integrals of Kahan's method for quadratic
//! vector fields, found in the span of aromatic functions.

pub mod algebra;
pub mod corpus;
pub mod coalgebra;
pub mod darboux;
pub mod error;
pub mod field;
pub mod graphs;

pub use error::{Error, Result};
