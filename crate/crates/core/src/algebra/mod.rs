//! Exact arithmetic: rationals, sparse polynomials, rational functions,
//! matrices, and power series in one variable.

pub mod matrix;
pub mod modular;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod series;

pub use matrix::RationalMatrix;
pub use poly::{Monomial, Polynomial};
pub use ratfunc::{rf_substitute, RationalFunction};
pub use rational::Rational;
pub use series::series_in_h;
