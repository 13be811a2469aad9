//! 3SUM-Indexing through hybrid quad trees over hashed characteristic
//! vectors, with shift-set reductions to SetDisjointness / SetIntersection.

pub mod bucket;
pub mod charvec;
pub mod conv;
pub mod hash;
pub mod index;
pub mod shiftset;
pub mod tree;
pub mod twosum;

pub use hash::{HashFamily, LinearHash};
pub use index::{
    threesum_solve, ts_build, ts_query, ts_query_reporting, LevelReport, QueryOutcome, ThreeSumIndex, TsConfig,
};
pub use tree::{build_quadtree, HybridQuadTree, InnerBuilders, TreeParams, TsCounters};
pub use twosum::twosum_scan;
