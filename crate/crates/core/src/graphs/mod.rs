//! Rooted trees, forests, aromas and aroma multisets.

pub mod aroma;
pub mod enumerate;
pub mod multiset;
pub mod parse;
pub mod tree;

pub use aroma::Aroma;
pub use enumerate::{enumerate_aromas, enumerate_forests, enumerate_multisets, enumerate_trees, tall_tree};
pub use multiset::AromaMultiset;
pub use parse::{parse_aroma, parse_forest, parse_multiset, parse_tree};
pub use tree::{Forest, RootedTree};
