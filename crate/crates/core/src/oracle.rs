//! Brute-force ground truth for every setting, plus query enumeration.
//!
//! Every function here is a plain scan. Nothing is shared with the fast
//! structures, so they can be checked against it.

use crate::error::{CrcError, Result};
use crate::geom::*;
use crate::rank::{AxisSlots, Side};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Setting {
    IntervalStab1d,
    Dom2d,
    Stab3s2d,
    Dom3d,
    Stab5s3d,
    Range3s2d,
    Range4s2d,
    OrthoRd,
}

impl Setting {
    pub const ALL: [Setting; 8] = [
        Setting::IntervalStab1d,
        Setting::Dom2d,
        Setting::Stab3s2d,
        Setting::Dom3d,
        Setting::Stab5s3d,
        Setting::Range3s2d,
        Setting::Range4s2d,
        Setting::OrthoRd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Setting::IntervalStab1d => "interval-stab-1d",
            Setting::Dom2d => "dom2d",
            Setting::Stab3s2d => "stab3s-2d",
            Setting::Dom3d => "dom3d",
            Setting::Stab5s3d => "stab5s-3d",
            Setting::Range3s2d => "range3s-2d",
            Setting::Range4s2d => "range4s-2d",
            Setting::OrthoRd => "ortho-rd",
        }
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Setting {
    type Err = CrcError;

    fn from_str(s: &str) -> Result<Self> {
        Setting::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| CrcError::BadParams(format!("unknown setting `{s}`")))
    }
}

/// A dataset in one of the supported settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Instance {
    Intervals(Vec<ColoredInterval>),
    /// Points queried by quadrants `[qx, ∞) × [qy, ∞)`.
    Dom2d(Vec<ColoredPoint2>),
    Stab3s(Vec<ColoredRect3S>),
    /// Points queried by octants `[q, ∞)^3`.
    Dom3d(Vec<ColoredPoint3>),
    /// Uncolored 5-sided boxes.
    Stab5s(Vec<Rect5>),
    Range3s(Vec<ColoredPoint2>),
    Range4s(Vec<ColoredPoint2>),
    Ortho {
        dim: usize,
        points: Vec<ColoredPointD>,
    },
}

impl Instance {
    pub fn setting(&self) -> Setting {
        match self {
            Instance::Intervals(_) => Setting::IntervalStab1d,
            Instance::Dom2d(_) => Setting::Dom2d,
            Instance::Stab3s(_) => Setting::Stab3s2d,
            Instance::Dom3d(_) => Setting::Dom3d,
            Instance::Stab5s(_) => Setting::Stab5s3d,
            Instance::Range3s(_) => Setting::Range3s2d,
            Instance::Range4s(_) => Setting::Range4s2d,
            Instance::Ortho { .. } => Setting::OrthoRd,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Instance::Intervals(v) => v.len(),
            Instance::Dom2d(v) | Instance::Range3s(v) | Instance::Range4s(v) => v.len(),
            Instance::Stab3s(v) => v.len(),
            Instance::Dom3d(v) => v.len(),
            Instance::Stab5s(v) => v.len(),
            Instance::Ortho { points, .. } => points.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Color of object `i`; `None` for the uncolored setting.
    pub fn color_of(&self, i: usize) -> Option<ColorId> {
        Some(match self {
            Instance::Intervals(v) => v[i].color,
            Instance::Dom2d(v) | Instance::Range3s(v) | Instance::Range4s(v) => v[i].color,
            Instance::Stab3s(v) => v[i].color,
            Instance::Dom3d(v) => v[i].color,
            Instance::Stab5s(_) => return None,
            Instance::Ortho { points, .. } => points[i].color,
        })
    }

    /// The objects whose color passes `keep`; uncolored boxes are kept as is.
    pub fn restrict_colors(&self, keep: impl Fn(ColorId) -> bool) -> Instance {
        fn filt<T: Clone + Colored>(v: &[T], keep: &impl Fn(ColorId) -> bool) -> Vec<T> {
            v.iter().filter(|o| keep(o.color())).cloned().collect()
        }
        match self {
            Instance::Intervals(v) => Instance::Intervals(filt(v, &keep)),
            Instance::Dom2d(v) => Instance::Dom2d(filt(v, &keep)),
            Instance::Stab3s(v) => Instance::Stab3s(filt(v, &keep)),
            Instance::Dom3d(v) => Instance::Dom3d(filt(v, &keep)),
            Instance::Stab5s(v) => Instance::Stab5s(v.clone()),
            Instance::Range3s(v) => Instance::Range3s(filt(v, &keep)),
            Instance::Range4s(v) => Instance::Range4s(filt(v, &keep)),
            Instance::Ortho { dim, points } => Instance::Ortho { dim: *dim, points: filt(points, &keep) },
        }
    }

    pub fn num_colors(&self) -> usize {
        (0..self.len()).filter_map(|i| self.color_of(i)).map(|c| c.index() + 1).max().unwrap_or(0)
    }
}

/// A query in raw grid coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Query {
    Point1(i64),
    /// `[x, ∞) × [y, ∞)`.
    Quadrant {
        x: i64,
        y: i64,
    },
    Point2 {
        x: i64,
        y: i64,
    },
    /// `[q, ∞)^3`.
    Octant([i64; 3]),
    Point3([i64; 3]),
    /// `[x1, x2] × [y, ∞)`.
    Range3s {
        x1: i64,
        x2: i64,
        y: i64,
    },
    Range4s {
        x1: i64,
        x2: i64,
        y1: i64,
        y2: i64,
    },
    Box {
        lo: Vec<i64>,
        hi: Vec<i64>,
    },
}

fn mismatch(inst: &Instance, q: &Query) -> CrcError {
    CrcError::SettingUnsupported(format!("query {q:?} for setting {}", inst.setting()))
}

/// Indices of the objects that intersect `q`.
pub fn hits(inst: &Instance, q: &Query) -> Result<Vec<usize>> {
    let pick = |n: usize, f: &dyn Fn(usize) -> bool| (0..n).filter(|&i| f(i)).collect::<Vec<_>>();
    Ok(match (inst, q) {
        (Instance::Intervals(v), Query::Point1(x)) => pick(v.len(), &|i| v[i].contains(*x)),
        (Instance::Dom2d(v), Query::Quadrant { x, y }) => pick(v.len(), &|i| v[i].x >= *x && v[i].y >= *y),
        (Instance::Stab3s(v), Query::Point2 { x, y }) => pick(v.len(), &|i| v[i].rect.contains(*x, *y)),
        (Instance::Dom3d(v), Query::Octant(c)) => pick(v.len(), &|i| v[i].dominates(c)),
        (Instance::Stab5s(v), Query::Point3(c)) => pick(v.len(), &|i| v[i].contains(c)),
        (Instance::Range3s(v), Query::Range3s { x1, x2, y }) => {
            pick(v.len(), &|i| *x1 <= v[i].x && v[i].x <= *x2 && v[i].y >= *y)
        }
        (Instance::Range4s(v), Query::Range4s { x1, x2, y1, y2 }) => {
            pick(v.len(), &|i| *x1 <= v[i].x && v[i].x <= *x2 && *y1 <= v[i].y && v[i].y <= *y2)
        }
        (Instance::Ortho { dim, points }, Query::Box { lo, hi }) => {
            if lo.len() != *dim || hi.len() != *dim {
                return Err(CrcError::QueryMalformed(format!("box of dimension {}", lo.len())));
            }
            pick(points.len(), &|i| points[i].in_box(lo, hi))
        }
        _ => return Err(mismatch(inst, q)),
    })
}

pub fn exact_standard_count(inst: &Instance, q: &Query) -> Result<usize> {
    hits(inst, q).map(|h| h.len())
}

/// Sorted, distinct colors present in `q`.
pub fn exact_colors(inst: &Instance, q: &Query) -> Result<Vec<ColorId>> {
    if inst.setting() == Setting::Stab5s3d {
        return Err(CrcError::SettingUnsupported("colored queries on uncolored boxes".into()));
    }
    let mut c: Vec<ColorId> = hits(inst, q)?.into_iter().filter_map(|i| inst.color_of(i)).collect();
    c.sort_unstable();
    c.dedup();
    Ok(c)
}

pub fn exact_colored_count(inst: &Instance, q: &Query) -> Result<usize> {
    exact_colors(inst, q).map(|c| c.len())
}

/// Candidate query values along one axis, one per distinct slot.
///
/// `constraints` lists every side on the axis as seen from the query
/// parameter: `Lo(v)` means the object requires `v <= q`, `Hi(v)` means it
/// requires `q <= v`. The returned values are the smallest integer realizing
/// each slot, in increasing order.
pub fn axis_representatives(constraints: &[(i64, Side)]) -> Vec<i64> {
    if constraints.is_empty() {
        return vec![0];
    }
    let (slots, _) = AxisSlots::build(constraints);
    let mut cand: Vec<i64> = constraints.iter().flat_map(|&(v, _)| [v, v + 1]).collect();
    cand.push(constraints.iter().map(|c| c.0).min().unwrap() - 1);
    cand.sort_unstable();
    cand.dedup();
    let mut out: Vec<i64> = Vec::new();
    let mut last = usize::MAX;
    for c in cand {
        let s = slots.slot(c);
        if s != last {
            out.push(c);
            last = s;
        }
    }
    out
}

/// A dimension of the query product: plain values or ordered `(lo, hi)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Group {
    Single(Vec<i64>),
    Pairs(Vec<(i64, i64)>),
}

impl Group {
    fn len(&self) -> usize {
        match self {
            Group::Single(v) => v.len(),
            Group::Pairs(v) => v.len(),
        }
    }

    fn pairs(lo: &[i64], hi: &[i64]) -> Self {
        let mut p = Vec::new();
        for &a in lo {
            for &b in hi.iter().filter(|&&b| b >= a) {
                p.push((a, b));
            }
        }
        Group::Pairs(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Selection {
    Exhaustive,
    Sampled(Vec<usize>),
}

/// Combinatorially distinct queries of one dataset.
///
/// Stored as a lazy product over per-axis candidate lists, so sizes in the
/// tens of millions cost only the axis lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryUniverse {
    pub setting: Setting,
    pub dim: usize,
    pub groups: Vec<Group>,
    pub selection: Selection,
}

impl QueryUniverse {
    /// Size of the full product, ignoring any sampling.
    pub fn full_len(&self) -> usize {
        self.groups.iter().map(Group::len).product()
    }

    pub fn len(&self) -> usize {
        match &self.selection {
            Selection::Exhaustive => self.full_len(),
            Selection::Sampled(ix) => ix.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exhaustive(&self) -> bool {
        self.selection == Selection::Exhaustive
    }

    /// Keeps at most `budget` queries, drawn uniformly without replacement.
    pub fn limit(mut self, budget: usize, seed: u64) -> Self {
        let full = self.full_len();
        if full > budget {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut ix = sample(&mut rng, full, budget).into_vec();
            ix.sort_unstable();
            self.selection = Selection::Sampled(ix);
        }
        self
    }

    /// The `i`-th query of the selection.
    pub fn get(&self, i: usize) -> Query {
        let mut idx = match &self.selection {
            Selection::Exhaustive => i,
            Selection::Sampled(ix) => ix[i],
        };
        let mut params = vec![
            0i64;
            self.groups
                .iter()
                .map(|g| match g {
                    Group::Single(_) => 1,
                    Group::Pairs(_) => 2,
                })
                .sum()
        ];
        let mut pos = params.len();
        for g in self.groups.iter().rev() {
            let len = g.len();
            let k = idx % len;
            idx /= len;
            match g {
                Group::Single(v) => {
                    pos -= 1;
                    params[pos] = v[k];
                }
                Group::Pairs(v) => {
                    pos -= 2;
                    params[pos] = v[k].0;
                    params[pos + 1] = v[k].1;
                }
            }
        }
        self.build_query(&params)
    }

    fn build_query(&self, p: &[i64]) -> Query {
        match self.setting {
            Setting::IntervalStab1d => Query::Point1(p[0]),
            Setting::Dom2d => Query::Quadrant { x: p[0], y: p[1] },
            Setting::Stab3s2d => Query::Point2 { x: p[0], y: p[1] },
            Setting::Dom3d => Query::Octant([p[0], p[1], p[2]]),
            Setting::Stab5s3d => Query::Point3([p[0], p[1], p[2]]),
            Setting::Range3s2d => Query::Range3s { x1: p[0], x2: p[1], y: p[2] },
            Setting::Range4s2d => Query::Range4s { x1: p[0], x2: p[1], y1: p[2], y2: p[3] },
            Setting::OrthoRd => Query::Box {
                lo: p.iter().step_by(2).copied().collect(),
                hi: p.iter().skip(1).step_by(2).copied().collect(),
            },
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Query> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }
}

fn hi_sides(vals: impl Iterator<Item = i64>) -> Vec<(i64, Side)> {
    vals.map(|v| (v, Side::Hi)).collect()
}

fn lo_sides(vals: impl Iterator<Item = i64>) -> Vec<(i64, Side)> {
    vals.map(|v| (v, Side::Lo)).collect()
}

/// Enumerates queries realizing every outcome set of `inst`.
pub fn enumerate_queries(inst: &Instance) -> Result<QueryUniverse> {
    let reps = |c: Vec<(i64, Side)>| axis_representatives(&c);
    let single = |c: Vec<(i64, Side)>| Group::Single(axis_representatives(&c));
    let range =
        |vals: Vec<i64>| Group::pairs(&reps(hi_sides(vals.iter().copied())), &reps(lo_sides(vals.iter().copied())));
    let (groups, dim) = match inst {
        Instance::Intervals(v) => {
            let c = v.iter().flat_map(|i| [(i.lo, Side::Lo), (i.hi, Side::Hi)]).collect();
            (vec![single(c)], 1)
        }
        Instance::Dom2d(v) => {
            (vec![single(hi_sides(v.iter().map(|p| p.x))), single(hi_sides(v.iter().map(|p| p.y)))], 2)
        }
        Instance::Stab3s(v) => {
            let xs = v.iter().flat_map(|r| [(r.rect.x1, Side::Lo), (r.rect.x2, Side::Hi)]).collect();
            (vec![single(xs), single(lo_sides(v.iter().map(|r| r.rect.y)))], 2)
        }
        Instance::Dom3d(v) => ((0..3).map(|a| single(hi_sides(v.iter().map(|p| p.coords[a])))).collect(), 3),
        Instance::Stab5s(v) => {
            let finite = |x: i64| x > NEG_INF && x < POS_INF;
            let xs = v.iter().flat_map(|r| [(r.x1, Side::Lo), (r.x2, Side::Hi)]).filter(|c| finite(c.0)).collect();
            let ys = v.iter().flat_map(|r| [(r.y1, Side::Lo), (r.y2, Side::Hi)]).filter(|c| finite(c.0)).collect();
            let zs = v.iter().map(|r| (r.ztop, Side::Hi)).filter(|c| finite(c.0)).collect();
            (vec![single(xs), single(ys), single(zs)], 3)
        }
        Instance::Range3s(v) => {
            (vec![range(v.iter().map(|p| p.x).collect()), single(hi_sides(v.iter().map(|p| p.y)))], 2)
        }
        Instance::Range4s(v) => {
            (vec![range(v.iter().map(|p| p.x).collect()), range(v.iter().map(|p| p.y).collect())], 2)
        }
        Instance::Ortho { dim, points } => {
            if *dim == 0 || *dim > 4 {
                return Err(CrcError::SettingUnsupported(format!("dimension {dim}")));
            }
            ((0..*dim).map(|a| range(points.iter().map(|p| p.coords[a]).collect())).collect(), *dim)
        }
    };
    Ok(QueryUniverse { setting: inst.setting(), dim, groups, selection: Selection::Exhaustive })
}

/// Exact 3-sided stabbing counts on a grid of query coordinates.
///
/// Returns a row-major `xs.len() × ys.len()` table (x outer) where entry
/// `(i, j)` counts rectangles containing `(xs[i], ys[j])`. Both coordinate
/// lists must be ascending. Built with a 2D difference array.
pub fn stab3s_count_grid(rects: &[StabRect3S], xs: &[i64], ys: &[i64]) -> Vec<u32> {
    let (w, h) = (xs.len(), ys.len());
    let mut diff = vec![0i32; (w + 1) * h];
    for r in rects {
        let a = xs.partition_point(|&x| x < r.x1);
        let b = xs.partition_point(|&x| x <= r.x2);
        let c = ys.partition_point(|&y| y < r.y);
        if a >= b || c >= h {
            continue;
        }
        diff[a * h + c] += 1;
        diff[b * h + c] -= 1;
    }
    let mut out = vec![0u32; w * h];
    let mut col = vec![0i32; h];
    for i in 0..w {
        for j in 0..h {
            col[j] += diff[i * h + j];
        }
        let mut acc = 0i32;
        for j in 0..h {
            acc += col[j];
            out[i * h + j] = acc as u32;
        }
    }
    out
}

/// Exact 5-sided stabbing counts on a grid of query coordinates.
///
/// Returns an `xs × ys × zs` table (x outermost, z innermost); all three
/// lists must be ascending.
pub fn stab5s_count_grid(rects: &[Rect5], xs: &[i64], ys: &[i64], zs: &[i64]) -> Vec<u32> {
    let (w, h, d) = (xs.len(), ys.len(), zs.len());
    let idx = |i: usize, j: usize, k: usize| (i * (h + 1) + j) * (d + 1) + k;
    let mut diff = vec![0i32; (w + 1) * (h + 1) * (d + 1)];
    for r in rects {
        let (a, b) = (xs.partition_point(|&x| x < r.x1), xs.partition_point(|&x| x <= r.x2));
        let (c, e) = (ys.partition_point(|&y| y < r.y1), ys.partition_point(|&y| y <= r.y2));
        let f = zs.partition_point(|&z| z <= r.ztop);
        if a >= b || c >= e || f == 0 {
            continue;
        }
        for (i, si) in [(a, 1), (b, -1)] {
            for (j, sj) in [(c, 1), (e, -1)] {
                diff[idx(i, j, 0)] += si * sj;
                diff[idx(i, j, f)] -= si * sj;
            }
        }
    }
    for i in 0..=w {
        for j in 0..=h {
            for k in 1..=d {
                diff[idx(i, j, k)] += diff[idx(i, j, k - 1)];
            }
        }
    }
    for i in 0..=w {
        for j in 1..=h {
            for k in 0..=d {
                diff[idx(i, j, k)] += diff[idx(i, j - 1, k)];
            }
        }
    }
    for i in 1..=w {
        for j in 0..=h {
            for k in 0..=d {
                diff[idx(i, j, k)] += diff[idx(i - 1, j, k)];
            }
        }
    }
    let mut out = Vec::with_capacity(w * h * d);
    for i in 0..w {
        for j in 0..h {
            out.extend((0..d).map(|k| diff[idx(i, j, k)] as u32));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn colored_interval_example() {
        let inst = Instance::Intervals(vec![
            ColoredInterval::new(1, 5, 0),
            ColoredInterval::new(3, 9, 0),
            ColoredInterval::new(4, 6, 1),
        ]);
        assert_eq!(exact_colored_count(&inst, &Query::Point1(4)).unwrap(), 2);
        assert_eq!(exact_colored_count(&inst, &Query::Point1(100)).unwrap(), 0);
    }

    #[test]
    fn standard_stab_example() {
        let inst = Instance::Stab3s(vec![ColoredRect3S::new(0, 4, 2, 0), ColoredRect3S::new(1, 2, 5, 1)]);
        assert_eq!(exact_standard_count(&inst, &Query::Point2 { x: 1, y: 5 }).unwrap(), 2);
        assert_eq!(exact_standard_count(&Instance::Stab3s(vec![]), &Query::Point2 { x: 1, y: 5 }).unwrap(), 0);
    }

    #[test]
    fn setting_mismatch_is_an_error() {
        let inst = Instance::Intervals(vec![ColoredInterval::new(1, 5, 0)]);
        assert!(matches!(
            exact_colored_count(&inst, &Query::Point2 { x: 0, y: 0 }),
            Err(CrcError::SettingUnsupported(_))
        ));
    }

    #[test]
    fn single_rect_universe() {
        let inst = Instance::Stab3s(vec![ColoredRect3S::new(10, 30, 5, 0)]);
        let u = enumerate_queries(&inst).unwrap();
        assert_eq!(u.len(), 3 * 2);
        let outcomes: BTreeSet<usize> = u.iter().map(|q| exact_standard_count(&inst, &q).unwrap()).collect();
        assert_eq!(outcomes, BTreeSet::from([0, 1]));
    }

    #[test]
    fn identical_rects_realize_both_outcomes() {
        let inst = Instance::Stab3s(vec![ColoredRect3S::new(3, 3, 3, 0); 5]);
        let u = enumerate_queries(&inst).unwrap();
        let outcomes: BTreeSet<usize> = u.iter().map(|q| exact_standard_count(&inst, &q).unwrap()).collect();
        assert_eq!(outcomes, BTreeSet::from([0, 5]));
    }

    #[test]
    fn interval_universe_size_bound() {
        let inst = Instance::Intervals((0..20).map(|i| ColoredInterval::new(i * 3, i * 3 + 7, 0)).collect());
        assert!(enumerate_queries(&inst).unwrap().len() <= 4 * 20 + 1);
    }

    #[test]
    fn sampled_universe_is_deterministic() {
        let inst = Instance::Dom3d((0..30).map(|i| ColoredPoint3::new(i, 30 - i, i % 7, 0)).collect());
        let a = enumerate_queries(&inst).unwrap().limit(100, 9);
        let b = enumerate_queries(&inst).unwrap().limit(100, 9);
        assert_eq!(a.len(), 100);
        assert_eq!(a.iter().collect::<Vec<_>>(), b.iter().collect::<Vec<_>>());
    }

    #[test]
    fn count_grid_matches_scan() {
        let rects = vec![StabRect3S::new(0, 4, 2), StabRect3S::new(1, 2, 5), StabRect3S::new(3, 9, 0)];
        let xs: Vec<i64> = (-1..11).collect();
        let ys: Vec<i64> = (-1..7).collect();
        let g = stab3s_count_grid(&rects, &xs, &ys);
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                let k = rects.iter().filter(|r| r.contains(x, y)).count() as u32;
                assert_eq!(g[i * ys.len() + j], k);
            }
        }
    }

    #[test]
    fn count_grid_5s_matches_scan() {
        let rects =
            vec![Rect5::new(0, 4, 1, 3, 2), Rect5::new(NEG_INF, 2, 2, POS_INF, 5), Rect5::new(3, 6, NEG_INF, 2, 0)];
        let axis: Vec<i64> = (-1..8).collect();
        let g = stab5s_count_grid(&rects, &axis, &axis, &axis);
        let n = axis.len();
        for (i, &x) in axis.iter().enumerate() {
            for (j, &y) in axis.iter().enumerate() {
                for (k, &z) in axis.iter().enumerate() {
                    let c = rects.iter().filter(|r| r.contains(&[x, y, z])).count() as u32;
                    assert_eq!(g[(i * n + j) * n + k], c);
                }
            }
        }
    }

    fn outcome_sets(inst: &Instance, qs: impl Iterator<Item = Query>) -> BTreeSet<Vec<usize>> {
        qs.map(|q| hits(inst, &q).unwrap()).collect()
    }

    fn dense(lo: i64, hi: i64) -> impl Iterator<Item = i64> + Clone {
        lo - 1..=hi + 1
    }

    proptest! {
        #[test]
        fn universe_complete_stab3s(raw in prop::collection::vec((0i64..8, 0i64..4, 0i64..8), 1..12)) {
            let inst = Instance::Stab3s(raw.iter().map(|&(a, w, y)| ColoredRect3S::new(a, a + w, y, 0)).collect());
            let u = enumerate_queries(&inst).unwrap();
            let dense_q = dense(0, 12).flat_map(|x| dense(0, 8).map(move |y| Query::Point2 { x, y }));
            prop_assert_eq!(outcome_sets(&inst, u.iter()), outcome_sets(&inst, dense_q));
        }

        #[test]
        fn universe_complete_dom3d(raw in prop::collection::vec((0i64..6, 0i64..6, 0i64..6), 1..12)) {
            let inst = Instance::Dom3d(raw.iter().map(|&(x, y, z)| ColoredPoint3::new(x, y, z, 0)).collect());
            let u = enumerate_queries(&inst).unwrap();
            let d = dense(0, 5);
            let dense_q = d.clone().flat_map(|x| {
                let d2 = d.clone();
                d.clone().flat_map(move |y| d2.clone().map(move |z| Query::Octant([x, y, z])))
            });
            prop_assert_eq!(outcome_sets(&inst, u.iter()), outcome_sets(&inst, dense_q));
        }

        #[test]
        fn universe_complete_range4s(raw in prop::collection::vec((0i64..6, 0i64..6), 1..12)) {
            let inst = Instance::Range4s(raw.iter().map(|&(x, y)| ColoredPoint2::new(x, y, 0)).collect());
            let u = enumerate_queries(&inst).unwrap();
            let d = dense(0, 5);
            let mut dense_q = Vec::new();
            for x1 in d.clone() { for x2 in d.clone() { for y1 in d.clone() { for y2 in d.clone() {
                dense_q.push(Query::Range4s { x1, x2, y1, y2 });
            }}}}
            prop_assert_eq!(outcome_sets(&inst, u.iter()), outcome_sets(&inst, dense_q.into_iter()));
        }

        #[test]
        fn universe_complete_stab5s(raw in prop::collection::vec((0i64..5, 0i64..3, 0i64..5, 0i64..3, 0i64..5, 0u8..3), 1..10)) {
            let inst = Instance::Stab5s(raw.iter().map(|&(x, w, y, h, z, open)| {
                let x1 = if open == 1 { NEG_INF } else { x };
                let y2 = if open == 2 { POS_INF } else { y + h };
                Rect5::new(x1, x + w, y, y2, z)
            }).collect());
            let u = enumerate_queries(&inst).unwrap();
            let d = dense(0, 8);
            let dense_q = d.clone().flat_map(|x| {
                let d2 = d.clone();
                d.clone().flat_map(move |y| d2.clone().map(move |z| Query::Point3([x, y, z])))
            });
            prop_assert_eq!(outcome_sets(&inst, u.iter()), outcome_sets(&inst, dense_q));
        }
    }
}
