use crate::geom::{ColorId, ColoredPoint2, ColoredPoint3, Rect5, NEG_INF, POS_INF};
use crate::stab3d::{phi_decompose, FiveSidedIndex};

/// Which way the open side of a 3-sided range points.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Opening {
    /// `[x1, x2] × [y, ∞)`.
    Up,
    /// `[x1, x2] × (-∞, y]`.
    Down,
}

impl Opening {
    fn sign(self) -> i64 {
        match self {
            Opening::Up => 1,
            Opening::Down => -1,
        }
    }

    /// Point `(x, y)` as a dominance point `(x, -x, ±y)`.
    pub fn lift(self, p: &ColoredPoint2) -> ColoredPoint3 {
        ColoredPoint3 { coords: [p.x, -p.x, self.sign() * p.y], color: p.color }
    }

    /// The octant corner matching range `[x1, x2]` with bound `y`.
    pub fn corner(self, x1: i64, x2: i64, y: i64) -> [i64; 3] {
        let clamp = |v: i64| v.clamp(NEG_INF, POS_INF);
        [clamp(x1), clamp(-x2), clamp(self.sign() * y)]
    }
}

fn colored_pieces(points: &[ColoredPoint2], dir: Opening) -> Vec<Rect5> {
    let lifted: Vec<ColoredPoint3> = points.iter().map(|p| dir.lift(p)).collect();
    phi_decompose(&lifted).all()
}

/// Capped colored reporting for 3-sided ranges of one opening.
///
/// Each color's points become disjoint 5-sided pieces in the lifted space;
/// a query corner lies in one piece per present color.
#[derive(Clone, Debug)]
pub struct Colored3sReporter {
    dir: Opening,
    pieces: Vec<Rect5>,
    index: FiveSidedIndex,
}

impl Colored3sReporter {
    pub fn build(points: &[ColoredPoint2], dir: Opening) -> Self {
        let pieces = colored_pieces(points, dir);
        let index = FiveSidedIndex::build(&pieces, false);
        Self { dir, pieces, index }
    }

    pub fn opening(&self) -> Opening {
        self.dir
    }

    pub fn report(&self, x1: i64, x2: i64, y: i64, cap: usize) -> Vec<ColorId> {
        if x1 > x2 {
            return Vec::new();
        }
        self.index
            .report_capped(&self.dir.corner(x1, x2, y), cap)
            .into_iter()
            .map(|id| ColorId(self.pieces[id as usize].tag.expect("pieces carry colors")))
            .collect()
    }

    pub fn space_units(&self) -> usize {
        self.index.space_units()
    }
}

/// Colored 3-sided counting in lower-bound form with factor 2.
///
/// The inner counter is exact, so answers are the true count.
#[derive(Clone, Debug)]
pub struct InitialApprox {
    dir: Opening,
    index: FiveSidedIndex,
}

impl InitialApprox {
    pub const FACTOR: f64 = 2.0;

    pub fn build(points: &[ColoredPoint2], dir: Opening) -> Self {
        let index = FiveSidedIndex::build(&colored_pieces(points, dir), true);
        Self { dir, index }
    }

    pub fn count(&self, x1: i64, x2: i64, y: i64) -> usize {
        if x1 > x2 {
            return 0;
        }
        self.index.count(&self.dir.corner(x1, x2, y))
    }

    pub fn space_units(&self) -> usize {
        self.index.space_units()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{enumerate_queries, exact_colors, Instance, Query};
    use proptest::prelude::*;

    fn random_points(n: usize, seed: u64) -> Vec<ColoredPoint2> {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 33) as i64
        };
        (0..n).map(|_| ColoredPoint2::new(next() % 40, next() % 40, (next() % 12) as u32)).collect()
    }

    #[test]
    fn empty_and_single_color() {
        let r = Colored3sReporter::build(&[], Opening::Up);
        assert!(r.report(0, 10, 0, 0).is_empty());
        let pts: Vec<_> = (0..20).map(|i| ColoredPoint2::new(i, i, 3)).collect();
        let d = InitialApprox::build(&pts, Opening::Up);
        assert_eq!(d.count(0, 19, 0), 1);
        assert_eq!(d.count(0, 5, 6), 0);
        assert_eq!(d.count(5, 4, 0), 0);
    }

    #[test]
    fn initial_approx_is_exact_on_random_points() {
        let pts = random_points(300, 11);
        let inst = Instance::Range3s(pts.clone());
        let d = InitialApprox::build(&pts, Opening::Up);
        for q in enumerate_queries(&inst).unwrap().limit(20_000, 1).iter() {
            let Query::Range3s { x1, x2, y } = q else { unreachable!() };
            let k = exact_colors(&inst, &q).unwrap().len();
            let z = d.count(x1, x2, y);
            assert!(z <= k && k <= 2 * z || k == 0 && z == 0);
            assert_eq!(z, k);
        }
    }

    proptest! {
        #[test]
        fn capped_reports_match_oracle(seed in 0u64..1000, cap in 0usize..8, x1 in -2i64..42, w in 0i64..44, y in -2i64..42, down in any::<bool>()) {
            let pts = random_points(120, seed);
            let dir = if down { Opening::Down } else { Opening::Up };
            let r = Colored3sReporter::build(&pts, dir);
            let x2 = x1 + w;
            let mut truth: Vec<ColorId> = pts
                .iter()
                .filter(|p| x1 <= p.x && p.x <= x2 && if down { p.y <= y } else { p.y >= y })
                .map(|p| p.color)
                .collect();
            truth.sort_unstable();
            truth.dedup();
            let mut got = r.report(x1, x2, y, cap);
            got.sort_unstable();
            let before = got.len();
            got.dedup();
            prop_assert_eq!(before, got.len());
            if truth.len() <= cap {
                prop_assert_eq!(got, truth);
            } else {
                prop_assert_eq!(got.len(), cap + 1);
                prop_assert!(got.iter().all(|c| truth.binary_search(c).is_ok()));
            }
        }
    }
}
