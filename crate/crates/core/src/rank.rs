//! Rank-space reduction and predecessor search.

use crate::geom::StabRect3S;
use serde::{Deserialize, Serialize};

/// Index of the largest key `<= q`, or `None` when every key exceeds `q`.
pub fn predecessor<T: Ord>(keys: &[T], q: &T) -> Option<usize> {
    keys.partition_point(|k| k <= q).checked_sub(1)
}

/// Orientation of a side relative to the query parameter on its axis.
///
/// `Lo` sides constrain `value <= q`, `Hi` sides constrain `q <= value`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    Lo,
    Hi,
}

/// Sorted side values of one axis; maps query coordinates to slots.
///
/// The slot of `q` is the number of sides with `value < q`, or `value == q`
/// and kind `Lo`. Two queries with equal slots satisfy exactly the same sides.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct AxisSlots {
    keys: Vec<(i64, Side)>,
}

impl AxisSlots {
    /// Sorts `sides` and returns the rank of every input entry.
    ///
    /// Equal `(value, side)` pairs keep their input order.
    pub fn build(sides: &[(i64, Side)]) -> (Self, Vec<usize>) {
        let mut order: Vec<usize> = (0..sides.len()).collect();
        order.sort_by_key(|&i| (sides[i], i));
        let mut ranks = vec![0; sides.len()];
        for (r, &i) in order.iter().enumerate() {
            ranks[i] = r;
        }
        let keys = order.iter().map(|&i| sides[i]).collect();
        (Self { keys }, ranks)
    }

    #[inline]
    pub fn slot(&self, q: i64) -> usize {
        self.keys.partition_point(|&k| k <= (q, Side::Lo))
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[(i64, Side)] {
        &self.keys
    }
}

/// Rank-space image of a set of 3-sided rectangles.
///
/// Rectangle `i` becomes `[x1r, x2r] × [yr, ∞)` with ranks in `0..2n` on x and
/// `0..n` on y. A query maps to slots `(sx, sy)`; the reduced rectangle
/// contains it iff `x1r < sx <= x2r` and `yr < sy`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RankSpace {
    pub x: AxisSlots,
    pub y: AxisSlots,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct SlotPoint {
    pub sx: usize,
    pub sy: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RankRect {
    pub x1: u32,
    pub x2: u32,
    pub y: u32,
}

impl RankRect {
    #[inline]
    pub fn contains(&self, s: SlotPoint) -> bool {
        (self.x1 as usize) < s.sx && s.sx <= self.x2 as usize && (self.y as usize) < s.sy
    }
}

impl RankSpace {
    #[inline]
    pub fn locate(&self, qx: i64, qy: i64) -> SlotPoint {
        SlotPoint { sx: self.x.slot(qx), sy: self.y.slot(qy) }
    }

    /// Number of distinct x slots (`2n + 1`).
    pub fn x_slots(&self) -> usize {
        self.x.len() + 1
    }

    /// Number of distinct y slots (`n + 1`).
    pub fn y_slots(&self) -> usize {
        self.y.len() + 1
    }
}

pub fn rank_space_reduce(rects: &[StabRect3S]) -> (Vec<RankRect>, RankSpace) {
    let xs: Vec<(i64, Side)> = rects.iter().flat_map(|r| [(r.x1, Side::Lo), (r.x2, Side::Hi)]).collect();
    let ys: Vec<(i64, Side)> = rects.iter().map(|r| (r.y, Side::Lo)).collect();
    let (x, xr) = AxisSlots::build(&xs);
    let (y, yr) = AxisSlots::build(&ys);
    let reduced = (0..rects.len())
        .map(|i| RankRect { x1: xr[2 * i] as u32, x2: xr[2 * i + 1] as u32, y: yr[i] as u32 })
        .collect();
    (reduced, RankSpace { x, y })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn predecessor_basics() {
        let k = [1, 3, 3, 7];
        assert_eq!(predecessor(&k, &0), None);
        assert_eq!(predecessor(&k, &3), Some(2));
        assert_eq!(predecessor(&k, &5), Some(2));
        assert_eq!(predecessor(&k, &9), Some(3));
    }

    #[test]
    fn shared_side_ties() {
        let rects = [StabRect3S::new(0, 10, 0), StabRect3S::new(10, 20, 0)];
        let (red, _) = rank_space_reduce(&rects);
        assert_eq!(red[0], RankRect { x1: 0, x2: 2, y: 0 });
        assert_eq!(red[1], RankRect { x1: 1, x2: 3, y: 1 });
    }

    #[test]
    fn single_rect() {
        let (red, rs) = rank_space_reduce(&[StabRect3S::new(2, 5, 1)]);
        assert_eq!(red[0], RankRect { x1: 0, x2: 1, y: 0 });
        assert!(red[0].contains(rs.locate(2, 1)));
        assert!(red[0].contains(rs.locate(5, 100)));
        assert!(!red[0].contains(rs.locate(6, 100)));
        assert!(!red[0].contains(rs.locate(3, 0)));
    }

    proptest! {
        #[test]
        fn reduction_preserves_stabbing(
            raw in prop::collection::vec((0i64..12, 0i64..6, 0i64..12), 1..20),
            qs in prop::collection::vec((-1i64..20, -1i64..13), 1..30),
        ) {
            let rects: Vec<_> = raw.iter().map(|&(a, w, y)| StabRect3S::new(a, a + w, y)).collect();
            let (red, rs) = rank_space_reduce(&rects);
            for (qx, qy) in qs {
                let s = rs.locate(qx, qy);
                for (r, rr) in rects.iter().zip(&red) {
                    prop_assert_eq!(r.contains(qx, qy), rr.contains(s));
                }
            }
        }
    }
}
