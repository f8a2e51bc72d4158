//! Coefficient functionals on aromas, the coproducts that govern products
//! and compositions of aromatic B-series, and the map `Q` whose kernel
//! describes B-series Darboux polynomials of the Kahan map.

pub mod bseries;
pub mod coproduct;
pub mod functional;
pub mod q;
pub mod series;

pub use bseries::{eta_functional, eta_value, kahan_coeff};
pub use coproduct::{compose_with_bseries, coproduct_comodule, coproduct_disjoint, multiply_functionals};
pub use functional::{CoefficientFunctional, ForestFunctional, TensorSum};
pub use q::{q_apply, q_functional, q_linear, q_matrix, q_table};
pub use series::{newton_series, series_evaluate};
