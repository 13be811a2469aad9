//! Reduction of general set disjointness / intersection to instances over a
//! small universe: large sets answered from a precomputed matrix, small sets
//! by scanning, medium sets through hashed copies of the instance.

pub mod battery;
pub mod classify;
pub mod reduced;

pub use battery::{select_hash_battery, verify_battery, HashBattery, UniversalHash};
pub use classify::{classify, Mode, SizeClass, SizeClassification};
pub use reduced::{Alg1Builder, Answer, InnerBuilder, OracleBuilder, ReducedStructure, ReductionParams};
