//! Quadratic vector fields, aromatic functions, and the Kahan map.

pub mod aroma_fn;
pub mod kahan;
pub mod quadratic;
pub mod transform;

pub use aroma_fn::{aroma_function, elementary_differential, AromaEvaluator};
pub use kahan::{det_shifted, kahan_series, KahanMap};
pub use quadratic::QuadraticVectorField;
pub use transform::{affine_pullback, hamiltonian_field, modified_hamiltonian};
