//! Shared geometric types.
//!
//! All coordinates are integers on a grid. Unbounded sides are represented by
//! the [`NEG_INF`] / [`POS_INF`] sentinels, which sit far outside any grid a
//! caller is expected to use but leave headroom for `±1` arithmetic.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Sentinel for a side unbounded towards `-∞`.
pub const NEG_INF: i64 = i64::MIN / 4;
/// Sentinel for a side unbounded towards `+∞`.
pub const POS_INF: i64 = i64::MAX / 4;

/// Dense, 0-based color index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColorId(pub u32);

impl ColorId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// Anything carrying a color.
pub trait Colored {
    fn color(&self) -> ColorId;
}

/// Number of colors needed to index every object, i.e. `max id + 1`.
pub fn color_count<T: Colored>(objects: &[T]) -> usize {
    objects.iter().map(|o| o.color().index() + 1).max().unwrap_or(0)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColoredInterval {
    pub lo: i64,
    pub hi: i64,
    pub color: ColorId,
}

impl ColoredInterval {
    pub fn new(lo: i64, hi: i64, color: u32) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi, color: ColorId(color) }
    }

    #[inline]
    pub fn contains(&self, q: i64) -> bool {
        self.lo <= q && q <= self.hi
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColoredPoint2 {
    pub x: i64,
    pub y: i64,
    pub color: ColorId,
}

impl ColoredPoint2 {
    pub fn new(x: i64, y: i64, color: u32) -> Self {
        Self { x, y, color: ColorId(color) }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColoredPoint3 {
    pub coords: [i64; 3],
    pub color: ColorId,
}

impl ColoredPoint3 {
    pub fn new(x: i64, y: i64, z: i64, color: u32) -> Self {
        Self { coords: [x, y, z], color: ColorId(color) }
    }

    /// True when this point lies in the octant `[q, +∞)^3`.
    #[inline]
    pub fn dominates(&self, q: &[i64; 3]) -> bool {
        self.coords.iter().zip(q).all(|(p, q)| p >= q)
    }
}

/// A colored point in `d` dimensions, `d <= 4`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColoredPointD {
    pub coords: Vec<i64>,
    pub color: ColorId,
}

impl ColoredPointD {
    pub fn new(coords: Vec<i64>, color: u32) -> Self {
        Self { coords, color: ColorId(color) }
    }

    #[inline]
    pub fn in_box(&self, lo: &[i64], hi: &[i64]) -> bool {
        self.coords.iter().zip(lo.iter().zip(hi)).all(|(c, (l, h))| l <= c && c <= h)
    }
}

/// Standard 3-sided rectangle `[x1, x2] × [y, +∞)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StabRect3S {
    pub x1: i64,
    pub x2: i64,
    pub y: i64,
    pub tag: Option<u32>,
}

impl StabRect3S {
    pub fn new(x1: i64, x2: i64, y: i64) -> Self {
        debug_assert!(x1 <= x2);
        Self { x1, x2, y, tag: None }
    }

    pub fn with_tag(mut self, tag: u32) -> Self {
        self.tag = Some(tag);
        self
    }

    #[inline]
    pub fn contains(&self, qx: i64, qy: i64) -> bool {
        self.x1 <= qx && qx <= self.x2 && self.y <= qy
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColoredRect3S {
    pub rect: StabRect3S,
    pub color: ColorId,
}

impl ColoredRect3S {
    pub fn new(x1: i64, x2: i64, y: i64, color: u32) -> Self {
        Self { rect: StabRect3S::new(x1, x2, y), color: ColorId(color) }
    }
}

/// 5-sided box `[x1, x2] × [y1, y2] × (-∞, ztop]`.
///
/// Any of the four xy-sides may be a sentinel, which turns the box into a
/// 4- or 3-sided one.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect5 {
    pub x1: i64,
    pub x2: i64,
    pub y1: i64,
    pub y2: i64,
    pub ztop: i64,
    pub tag: Option<u32>,
}

impl Rect5 {
    pub fn new(x1: i64, x2: i64, y1: i64, y2: i64, ztop: i64) -> Self {
        debug_assert!(x1 <= x2 && y1 <= y2);
        Self { x1, x2, y1, y2, ztop, tag: None }
    }

    pub fn with_tag(mut self, tag: u32) -> Self {
        self.tag = Some(tag);
        self
    }

    #[inline]
    pub fn contains(&self, q: &[i64; 3]) -> bool {
        self.contains_xy(q[0], q[1]) && q[2] <= self.ztop
    }

    #[inline]
    pub fn contains_xy(&self, qx: i64, qy: i64) -> bool {
        self.x1 <= qx && qx <= self.x2 && self.y1 <= qy && qy <= self.y2
    }

    /// True when the two boxes share at least one integer point.
    pub fn intersects(&self, other: &Rect5) -> bool {
        self.x1.max(other.x1) <= self.x2.min(other.x2) && self.y1.max(other.y1) <= self.y2.min(other.y2)
    }

    pub fn is_empty(&self) -> bool {
        self.x1 > self.x2 || self.y1 > self.y2
    }
}

impl Colored for ColoredInterval {
    fn color(&self) -> ColorId {
        self.color
    }
}
impl Colored for ColoredPoint2 {
    fn color(&self) -> ColorId {
        self.color
    }
}
impl Colored for ColoredPoint3 {
    fn color(&self) -> ColorId {
        self.color
    }
}
impl Colored for ColoredPointD {
    fn color(&self) -> ColorId {
        self.color
    }
}
impl Colored for ColoredRect3S {
    fn color(&self) -> ColorId {
        self.color
    }
}

/// Contract attached to a returned count.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum AnswerKind {
    /// `value == k`.
    Exact,
    /// Lower-bound normal form: `k ∈ [value, C·value]`.
    CApprox(f64),
    /// `value ∈ [(1-ε)k, (1+ε)k]`.
    EpsApprox(f64),
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxAnswer {
    pub value: f64,
    pub kind: AnswerKind,
}

const SLACK: f64 = 1e-9;

impl ApproxAnswer {
    pub fn exact(k: u64) -> Self {
        Self { value: k as f64, kind: AnswerKind::Exact }
    }

    pub fn capprox(value: f64, c: f64) -> Self {
        Self { value, kind: AnswerKind::CApprox(c) }
    }

    pub fn eps(value: f64, eps: f64) -> Self {
        Self { value, kind: AnswerKind::EpsApprox(eps) }
    }

    /// Whether the answer honors its contract against the true count `k`.
    pub fn holds_for(&self, k: u64) -> bool {
        let k = k as f64;
        match self.kind {
            AnswerKind::Exact => (self.value - k).abs() <= SLACK,
            AnswerKind::CApprox(c) => self.value - SLACK <= k && k <= c * self.value + SLACK,
            AnswerKind::EpsApprox(eps) => (self.value - k).abs() <= eps * k + SLACK,
        }
    }

    /// `|value - k| / k`, with `0/0 = 0` and `x/0 = ∞`.
    pub fn ratio_error(&self, k: u64) -> f64 {
        ratio_error(self.value, k)
    }
}

pub fn ratio_error(value: f64, k: u64) -> f64 {
    let diff = (value - k as f64).abs();
    if k == 0 {
        if diff <= SLACK {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        diff / k as f64
    }
}
