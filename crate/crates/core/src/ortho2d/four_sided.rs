use super::bucketed::{BucketConfig, BucketedCApprox};
use super::three_sided::{Colored3sReporter, Opening};
use crate::geom::{ColorId, ColoredPoint2};

/// Nodes at most this size are scanned directly.
pub const LEAF_SIZE: usize = 16;

#[derive(Clone, Debug)]
enum Body<S> {
    Leaf(Vec<ColoredPoint2>),
    Inner { split: i64, left: usize, right: usize, up: S, down: S },
}

#[derive(Clone, Debug)]
struct YNode<S> {
    ymin: i64,
    ymax: i64,
    body: Body<S>,
}

/// One piece of a decomposed 4-sided query.
pub enum Part<'a, S> {
    /// Points to filter by the full query.
    Scan(&'a [ColoredPoint2]),
    /// A 3-sided query `[x1, x2]` with bound `y` on a node structure.
    Side(&'a S, Opening, i64),
}

/// Balanced range tree on y whose inner nodes keep an upward and a downward
/// 3-sided structure over their points.
#[derive(Clone, Debug)]
pub struct YRangeTree<S> {
    nodes: Vec<YNode<S>>,
    root: Option<usize>,
}

impl<S> YRangeTree<S> {
    pub fn build(points: &[ColoredPoint2], make: &mut impl FnMut(&[ColoredPoint2], Opening) -> S) -> Self {
        let mut pts = points.to_vec();
        pts.sort_by_key(|p| (p.y, p.x));
        let mut t = Self { nodes: Vec::new(), root: None };
        if !pts.is_empty() {
            t.root = Some(t.build_rec(&pts, make));
        }
        t
    }

    fn build_rec(&mut self, pts: &[ColoredPoint2], make: &mut impl FnMut(&[ColoredPoint2], Opening) -> S) -> usize {
        let (ymin, ymax) = (pts[0].y, pts[pts.len() - 1].y);
        let body = if pts.len() <= LEAF_SIZE || ymin == ymax {
            Body::Leaf(pts.to_vec())
        } else {
            let s = pts[pts.len() / 2 - 1].y;
            let mut cut = pts.partition_point(|p| p.y <= s);
            if cut == pts.len() {
                cut = pts.partition_point(|p| p.y < s);
            }
            let split = pts[cut - 1].y;
            let left = self.build_rec(&pts[..cut], make);
            let right = self.build_rec(&pts[cut..], make);
            Body::Inner { split, left, right, up: make(pts, Opening::Up), down: make(pts, Opening::Down) }
        };
        self.nodes.push(YNode { ymin, ymax, body });
        self.nodes.len() - 1
    }

    /// At most two parts whose answers together cover `[x1, x2] × [y1, y2]`.
    pub fn decompose(&self, y1: i64, y2: i64) -> Vec<Part<'_, S>> {
        let mut out = Vec::new();
        let Some(mut cur) = self.root else { return out };
        if y1 > y2 {
            return out;
        }
        loop {
            let node = &self.nodes[cur];
            if y2 < node.ymin || y1 > node.ymax {
                return out;
            }
            match &node.body {
                Body::Leaf(p) => {
                    out.push(Part::Scan(p));
                    return out;
                }
                Body::Inner { up, .. } if y1 <= node.ymin && node.ymax <= y2 => {
                    out.push(Part::Side(up, Opening::Up, y1));
                    return out;
                }
                Body::Inner { split, left, right, .. } => {
                    if y2 <= *split {
                        cur = *left;
                    } else if y1 > *split {
                        cur = *right;
                    } else {
                        out.push(self.side(*left, Opening::Up, y1));
                        out.push(self.side(*right, Opening::Down, y2));
                        return out;
                    }
                }
            }
        }
    }

    fn side(&self, i: usize, dir: Opening, y: i64) -> Part<'_, S> {
        match &self.nodes[i].body {
            Body::Leaf(p) => Part::Scan(p),
            Body::Inner { up, down, .. } => Part::Side(if dir == Opening::Up { up } else { down }, dir, y),
        }
    }

    pub fn structures(&self) -> impl Iterator<Item = &S> {
        self.nodes.iter().flat_map(|n| match &n.body {
            Body::Inner { up, down, .. } => vec![up, down],
            Body::Leaf(_) => vec![],
        })
    }

    pub fn stored_points(&self) -> usize {
        self.nodes.iter().map(|n| if let Body::Leaf(p) = &n.body { p.len() } else { 0 }).sum()
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }
}

fn in_rect(p: &ColoredPoint2, x1: i64, x2: i64, y1: i64, y2: i64) -> bool {
    x1 <= p.x && p.x <= x2 && y1 <= p.y && p.y <= y2
}

/// Colored 4-sided counting in lower-bound form with factor 16: the larger
/// of the two 3-sided answers at the split node.
#[derive(Clone, Debug)]
pub struct FourSidedCApprox {
    tree: YRangeTree<BucketedCApprox>,
}

impl FourSidedCApprox {
    pub const FACTOR: f64 = 2.0 * BucketedCApprox::FACTOR;

    pub fn build(points: &[ColoredPoint2], cfg: &BucketConfig) -> Self {
        Self { tree: YRangeTree::build(points, &mut |p, dir| BucketedCApprox::build(p, dir, cfg)) }
    }

    pub fn count(&self, x1: i64, x2: i64, y1: i64, y2: i64) -> usize {
        if x1 > x2 {
            return 0;
        }
        let mut z = 0;
        for part in self.tree.decompose(y1, y2) {
            let c = match part {
                Part::Scan(p) => {
                    let mut cs: Vec<ColorId> =
                        p.iter().filter(|p| in_rect(p, x1, x2, y1, y2)).map(|p| p.color).collect();
                    cs.sort_unstable();
                    cs.dedup();
                    cs.len()
                }
                Part::Side(s, _, y) => s.count(x1, x2, y).expect("x1 <= x2"),
            };
            z = z.max(c);
        }
        z
    }

    pub fn space_units(&self) -> usize {
        self.tree.structures().map(BucketedCApprox::space_units).sum::<usize>()
            + self.tree.stored_points()
            + self.tree.num_nodes()
    }
}

/// Capped colored reporting for 4-sided ranges.
#[derive(Clone, Debug)]
pub struct FourSidedReporter {
    tree: YRangeTree<Colored3sReporter>,
}

impl FourSidedReporter {
    pub fn build(points: &[ColoredPoint2]) -> Self {
        Self { tree: YRangeTree::build(points, &mut |p, dir| Colored3sReporter::build(p, dir)) }
    }

    /// All colors in the range if at most `cap`, otherwise `cap + 1` of them.
    pub fn report(&self, x1: i64, x2: i64, y1: i64, y2: i64, cap: usize) -> Vec<ColorId> {
        if x1 > x2 {
            return Vec::new();
        }
        let limit = cap.saturating_add(1);
        let mut out: Vec<ColorId> = Vec::new();
        for part in self.tree.decompose(y1, y2) {
            let found = match part {
                Part::Scan(p) => p.iter().filter(|p| in_rect(p, x1, x2, y1, y2)).map(|p| p.color).collect(),
                Part::Side(s, _, y) => s.report(x1, x2, y, cap),
            };
            for c in found {
                if out.len() < limit && !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }

    pub fn space_units(&self) -> usize {
        self.tree.structures().map(Colored3sReporter::space_units).sum::<usize>()
            + self.tree.stored_points()
            + self.tree.num_nodes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{enumerate_queries, exact_colors, Instance, Query};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn points(n: usize, u: i64, colors: u32, seed: u64) -> Vec<ColoredPoint2> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| ColoredPoint2::new(rng.gen_range(0..u), rng.gen_range(0..u), rng.gen_range(0..colors))).collect()
    }

    #[test]
    fn reporter_and_approx_on_enumerated_queries() {
        let pts = points(300, 12, 40, 3);
        let inst = Instance::Range4s(pts.clone());
        let rep = FourSidedReporter::build(&pts);
        let apx = FourSidedCApprox::build(&pts, &BucketConfig { bucket_size: Some(8) });
        for (i, q) in enumerate_queries(&inst).unwrap().iter().enumerate() {
            let Query::Range4s { x1, x2, y1, y2 } = q else { unreachable!() };
            let truth = exact_colors(&inst, &q).unwrap();
            let k = truth.len();
            let z = apx.count(x1, x2, y1, y2);
            assert!(z <= k && k <= 16 * z, "k {k} z {z}");
            let cap = i % 12;
            let mut got = rep.report(x1, x2, y1, y2, cap);
            got.sort_unstable();
            if k <= cap {
                assert_eq!(got, truth);
            } else {
                assert_eq!(got.len(), cap + 1);
                assert!(got.iter().all(|c| truth.binary_search(c).is_ok()));
            }
        }
    }

    #[test]
    fn heavy_ties_and_empty_ranges() {
        let pts: Vec<_> = (0..100).map(|i| ColoredPoint2::new(i, 5, (i % 7) as u32)).collect();
        let rep = FourSidedReporter::build(&pts);
        assert_eq!(rep.report(0, 99, 5, 5, 10).len(), 7);
        assert!(rep.report(0, 99, 6, 9, 10).is_empty());
        assert!(rep.report(0, 99, 9, 6, 10).is_empty());
        let apx = FourSidedCApprox::build(&[], &BucketConfig::default());
        assert_eq!(apx.count(0, 1, 0, 1), 0);
    }
}
