pub mod golden;
pub mod systems;

pub use golden::{golden_suite, golden_text, GoldenCheck, GoldenReport, FIXTURES};
pub use systems::{get_system, sample_params, seeded_params, SystemSpec, SYSTEMS};
