//! Encoders from set systems into range mode, bipartite distances and
//! 3SUM-Indexing, with exact solvers for each target problem.

pub mod distoracle;
pub mod rangemode;
pub mod threesum;

pub use distoracle::{bfs_distance, distoracle_encode, BipartiteEncoding};
pub use rangemode::{
    brute_mode, brute_mode_all, rangemode_build_baseline, rangemode_encode, rangemode_query_baseline,
    rangemode_reporting, RangeModeDecider, RangeModeEncoding, RangeModeIndex,
};
pub use threesum::{
    threesum_encode, threesum_indexing_report, threesum_indexing_solve, threesum_query_number, ThreeSumEncoding,
    ThreeSumSolver,
};
