//! Colored 1D interval stabbing, 2D dominance and 3-sided stabbing in the plane.
//!
//! Colored inputs are embedded as colored 3-sided rectangles, each color's
//! union is split into disjoint pieces, and the standard count of pieces is
//! approximated by [`RefinedLadderCounter`].

pub mod counter;
pub mod cutting;
pub mod table;
pub mod union;

pub use counter::{RefinedLadderCounter, Route, StabCounterConfig};
pub use cutting::{LadderAnswer, LevelLadder, ShallowCutting, Y_INF};
pub use table::{canonicalize_conflict_list, SharedTable, TableAnswer};
pub use union::{union_decompose, union_decompose_color, UnionDecomposition};

use crate::error::{CrcError, Result};
use crate::geom::*;
use crate::oracle::{Instance, Query};

/// Colored 3-sided rectangles equivalent to a 1D or 2D colored instance.
pub fn embed_setting(inst: &Instance) -> Result<Vec<ColoredRect3S>> {
    match inst {
        Instance::Intervals(v) => {
            Ok(v.iter().map(|i| ColoredRect3S { rect: StabRect3S::new(i.lo, i.hi, 0), color: i.color }).collect())
        }
        Instance::Dom2d(v) => {
            Ok(v.iter().map(|p| ColoredRect3S { rect: StabRect3S::new(NEG_INF, p.x, -p.y), color: p.color }).collect())
        }
        Instance::Stab3s(v) => Ok(v.clone()),
        other => Err(CrcError::SettingUnsupported(other.setting().to_string())),
    }
}

/// Stabbing point matching a raw query of an embeddable setting.
pub fn embed_query(q: &Query) -> Result<(i64, i64)> {
    match *q {
        Query::Point1(x) => Ok((x, 0)),
        Query::Quadrant { x, y } => Ok((x, -y)),
        Query::Point2 { x, y } => Ok((x, y)),
        _ => Err(CrcError::QueryMalformed(format!("{q:?} is not a planar stabbing query"))),
    }
}

/// `(1 ± ε)` colored counter for intervals, 2D dominance and 3-sided stabbing.
#[derive(Clone, Debug)]
pub struct ColoredStabCounter {
    pieces: Vec<ColoredRect3S>,
    counter: RefinedLadderCounter,
}

impl ColoredStabCounter {
    pub fn build(inst: &Instance, eps: f64, cfg: &StabCounterConfig) -> Result<Self> {
        let decomp = union_decompose(&embed_setting(inst)?);
        let raw: Vec<StabRect3S> = decomp.all.iter().map(|p| p.rect).collect();
        let counter = RefinedLadderCounter::build(&raw, eps, cfg)?;
        Ok(Self { pieces: decomp.all, counter })
    }

    pub fn pieces(&self) -> &[ColoredRect3S] {
        &self.pieces
    }

    pub fn counter(&self) -> &RefinedLadderCounter {
        &self.counter
    }

    pub fn query(&self, q: &Query) -> Result<ApproxAnswer> {
        let (x, y) = embed_query(q)?;
        Ok(self.counter.query(x, y))
    }

    pub fn space_units(&self) -> usize {
        self.counter.space_units()
    }
}
