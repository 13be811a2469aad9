//! Set-intersection and set-disjointness structures, bounded-universe
//! reductions built on them, and brute-force oracles to check everything.

pub mod apps;
pub mod bench;
pub mod cost;
pub mod error;
pub mod gen;
pub mod index;
pub mod instance;
pub mod oracle;
pub mod quadtree;
pub mod si;
pub mod universe;

pub use cost::CostMeter;
pub use error::{Error, ParseError, Result};
pub use index::{DisjointIndex, SetIndex};
pub use instance::{canon1, load_instance, save_instance, SetSystem};
pub use oracle::{oracle_intersect, QueryResult};
