//! Colored 3-sided and 4-sided range counting in R².
//!
//! A capped colored reporter and a constant-factor approximator are combined
//! by [`Reduction1`]. The 3-sided approximator is [`BucketedCApprox`]; the
//! 4-sided one puts it in every node of a range tree on y.

pub mod bucketed;
pub mod four_sided;
pub mod interval_tree;
pub mod three_sided;

pub use bucketed::{BucketConfig, BucketedCApprox};
pub use four_sided::{FourSidedCApprox, FourSidedReporter, YRangeTree};
pub use interval_tree::{Half, IntervalTree};
pub use three_sided::{Colored3sReporter, InitialApprox, Opening};

use crate::error::{CrcError, Result};
use crate::geom::{ColorId, ColoredPoint2};
use crate::oracle::{enumerate_queries, Instance, Query};
use crate::reductions::{CApproximator, ColorProfile, ColoredReporter, Reduction1, ReductionConfig};

fn points_of(inst: &Instance) -> Result<&[ColoredPoint2]> {
    match inst {
        Instance::Range3s(v) | Instance::Range4s(v) => Ok(v),
        other => Err(CrcError::SettingUnsupported(other.setting().to_string())),
    }
}

fn wrong_query(q: &Query) -> CrcError {
    CrcError::QueryMalformed(format!("unexpected query {q:?}"))
}

impl ColoredReporter for Colored3sReporter {
    fn report_colors(&self, q: &Query, cap: usize) -> Result<Vec<ColorId>> {
        match (q, self.opening()) {
            (Query::Range3s { x1, x2, y }, Opening::Up) => Ok(self.report(*x1, *x2, *y, cap)),
            _ => Err(wrong_query(q)),
        }
    }

    fn space_units(&self) -> usize {
        Colored3sReporter::space_units(self)
    }
}

impl CApproximator for BucketedCApprox {
    fn factor(&self) -> f64 {
        Self::FACTOR
    }

    fn capprox(&self, q: &Query) -> Result<f64> {
        match (q, self.opening()) {
            (Query::Range3s { x1, x2, y }, Opening::Up) => Ok(self.count(*x1, *x2, *y)? as f64),
            _ => Err(wrong_query(q)),
        }
    }

    fn space_units(&self) -> usize {
        BucketedCApprox::space_units(self)
    }
}

impl ColoredReporter for FourSidedReporter {
    fn report_colors(&self, q: &Query, cap: usize) -> Result<Vec<ColorId>> {
        match q {
            Query::Range4s { x1, x2, y1, y2 } => Ok(self.report(*x1, *x2, *y1, *y2, cap)),
            _ => Err(wrong_query(q)),
        }
    }

    fn space_units(&self) -> usize {
        FourSidedReporter::space_units(self)
    }
}

impl CApproximator for FourSidedCApprox {
    fn factor(&self) -> f64 {
        Self::FACTOR
    }

    fn capprox(&self, q: &Query) -> Result<f64> {
        match q {
            Query::Range4s { x1, x2, y1, y2 } => Ok(self.count(*x1, *x2, *y1, *y2) as f64),
            _ => Err(wrong_query(q)),
        }
    }

    fn space_units(&self) -> usize {
        FourSidedCApprox::space_units(self)
    }
}

#[derive(Clone, Debug)]
pub struct OrthoConfig {
    pub reduction: ReductionConfig,
    pub buckets: BucketConfig,
    /// Largest number of queries used to verify samples.
    pub verify_budget: usize,
}

impl Default for OrthoConfig {
    fn default() -> Self {
        Self { reduction: ReductionConfig::default(), buckets: BucketConfig::default(), verify_budget: 200_000 }
    }
}

pub type Colored3Sided = Reduction1<Colored3sReporter, BucketedCApprox>;
pub type Colored4Sided = Reduction1<FourSidedReporter, FourSidedCApprox>;

fn profile(inst: &Instance, cfg: &OrthoConfig) -> Result<ColorProfile> {
    ColorProfile::build(inst, enumerate_queries(inst)?.limit(cfg.verify_budget, cfg.reduction.seed))
}

/// `(1 ± ε)` colored counting for `[x1, x2] × [y, ∞)`.
pub fn build_colored_3sided(points: &[ColoredPoint2], eps: f64, cfg: &OrthoConfig) -> Result<Colored3Sided> {
    let inst = Instance::Range3s(points.to_vec());
    let factory = |i: &Instance| Ok(Colored3sReporter::build(points_of(i)?, Opening::Up));
    let approx = BucketedCApprox::build(points, Opening::Up, &cfg.buckets);
    Reduction1::build(&inst, eps, &factory, approx, &profile(&inst, cfg)?, &cfg.reduction)
}

/// `(1 ± ε)` colored counting for `[x1, x2] × [y1, y2]`.
pub fn build_colored_4sided(points: &[ColoredPoint2], eps: f64, cfg: &OrthoConfig) -> Result<Colored4Sided> {
    let inst = Instance::Range4s(points.to_vec());
    let factory = |i: &Instance| Ok(FourSidedReporter::build(points_of(i)?));
    let approx = FourSidedCApprox::build(points, &cfg.buckets);
    Reduction1::build(&inst, eps, &factory, approx, &profile(&inst, cfg)?, &cfg.reduction)
}
