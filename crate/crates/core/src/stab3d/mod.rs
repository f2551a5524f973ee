//! Colored dominance counting in R³.
//!
//! Each color's dominance region is cut into disjoint 5-sided boxes, so the
//! colored count becomes a 5-sided stabbing count, answered by a verified
//! sample over a grid recursion tree.

pub mod phi;
pub mod report;
pub mod sampled;
pub mod tree;

pub use phi::{phi_decompose, phi_pieces, PhiDecomposition};
pub use report::{report_stabbed_capped, FiveSidedIndex};
pub use sampled::{SampleStats, SampledConfig, SampledStabber};
pub use tree::{assign_case, Assignment, Lines, RecursionTree, Sketch, TreeConfig, TreeStats};

use crate::error::{CrcError, Result};
use crate::geom::*;
use crate::oracle::{Instance, Query};

/// `(1 ± ε)` colored dominance counter for points in R³.
#[derive(Clone, Debug)]
pub struct ColoredDominance3 {
    pieces: Vec<Rect5>,
    stabber: SampledStabber,
}

impl ColoredDominance3 {
    pub fn build(points: &[ColoredPoint3], eps: f64, cfg: &SampledConfig) -> Result<Self> {
        let pieces = phi_decompose(points).all();
        let stabber = SampledStabber::build(&pieces, eps, cfg)?;
        Ok(Self { pieces, stabber })
    }

    pub fn from_instance(inst: &Instance, eps: f64, cfg: &SampledConfig) -> Result<Self> {
        match inst {
            Instance::Dom3d(v) => Self::build(v, eps, cfg),
            other => Err(CrcError::SettingUnsupported(other.setting().to_string())),
        }
    }

    /// Pieces tagged with their color ids.
    pub fn pieces(&self) -> &[Rect5] {
        &self.pieces
    }

    pub fn stabber(&self) -> &SampledStabber {
        &self.stabber
    }

    pub fn count(&self, q: &[i64; 3]) -> ApproxAnswer {
        self.stabber.query(q)
    }

    pub fn query(&self, q: &Query) -> Result<ApproxAnswer> {
        match q {
            Query::Octant(c) => Ok(self.count(c)),
            _ => Err(CrcError::QueryMalformed(format!("{q:?} is not an octant"))),
        }
    }

    pub fn space_units(&self) -> usize {
        self.stabber.space_units()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{enumerate_queries, exact_colored_count};

    #[test]
    fn colored_counts_are_exact_at_small_k() {
        let pts: Vec<ColoredPoint3> =
            (0..60).map(|i| ColoredPoint3::new((i * 7) % 13, (i * 5) % 11, (i * 3) % 17, (i % 9) as u32)).collect();
        let inst = Instance::Dom3d(pts.clone());
        let c = ColoredDominance3::build(&pts, 0.5, &SampledConfig::default()).unwrap();
        for q in enumerate_queries(&inst).unwrap().iter() {
            let k = exact_colored_count(&inst, &q).unwrap() as u64;
            assert_eq!(c.query(&q).unwrap().value, k as f64);
        }
    }
}
