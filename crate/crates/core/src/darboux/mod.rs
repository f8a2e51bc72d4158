//! Densities of measures preserved by the Kahan map, searched for in the
//! span of aromatic functions.

pub mod analysis;
pub mod basis;
pub mod conjecture;
pub mod family;
pub mod report;
pub mod solve;
pub mod verify;

pub use basis::{build_basis, Augmenter, Basis, BasisElement, Parity};
pub use solve::{solve_darboux, DarbouxSolution, SolutionVector};
pub use verify::{verify_density, DarbouxContext, DensityCheck};
pub use analysis::{
    cycle_condition, first_integrals, kernel_relations, necessary_conditions, Conditions, CycleCondition, FirstIntegrals, KernelRelations,
};
pub use family::{gamma_space, parameter_independent_solve, FamilySolution, GammaSpace};
pub use conjecture::{conjecture_check, ConjectureOutcome, ConjectureReport};
