//! Approximate colored range counting.
//!
//! Colored objects are mapped to standard stabbing problems, counted with
//! nested shallow cuttings, grid recursion trees and verified random samples,
//! and checked against the brute-force [`oracle`].

pub mod apps_nd;
pub mod dataset;
pub mod dominance;
pub mod error;
pub mod geom;
pub mod oracle;
pub mod ortho2d;
pub mod rank;
pub mod reductions;
pub mod rng;
pub mod stab2d;
pub mod stab3d;

pub use error::{CrcError, Result};
pub use geom::*;
pub use oracle::{Instance, Query, QueryUniverse, Setting};
