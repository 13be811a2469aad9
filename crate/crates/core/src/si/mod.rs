//! Set-intersection structures with tunable space/query tradeoffs.

pub mod alg1;
pub mod alg2;
pub mod alg3;
pub mod hybrid;
pub mod sdcount;

pub use alg1::Alg1;
pub use alg2::Alg2;
pub use alg3::Alg3;
pub use hybrid::{Hybrid, HybridConfig, HybridPath, ReporterKind};
pub use sdcount::SdCount;
