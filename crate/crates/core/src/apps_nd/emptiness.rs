/// Sets at most this large are scanned.
const SCAN_SIZE: usize = 8;

/// A node of [`Emptiness::Tree`].
#[derive(Clone, Debug)]
pub struct TNode {
    lo: usize,
    hi: usize,
    assoc: Emptiness,
    children: Option<(Box<TNode>, Box<TNode>)>,
}

/// Static orthogonal range emptiness over points in up to 4 dimensions.
///
/// A plain multi-level range tree: the first coordinate is split by a
/// balanced tree whose nodes hold a structure on the remaining coordinates.
#[derive(Clone, Debug)]
pub enum Emptiness {
    Scan(Vec<Vec<i64>>),
    /// One coordinate left, sorted.
    Sorted(Vec<i64>),
    Tree {
        keys: Vec<i64>,
        root: Box<TNode>,
    },
}

impl Emptiness {
    pub fn build(mut points: Vec<Vec<i64>>) -> Self {
        let dim = points.first().map_or(1, Vec::len);
        if points.len() <= SCAN_SIZE {
            return Emptiness::Scan(points);
        }
        if dim == 1 {
            let mut v: Vec<i64> = points.into_iter().map(|p| p[0]).collect();
            v.sort_unstable();
            return Emptiness::Sorted(v);
        }
        points.sort_unstable_by_key(|p| p[0]);
        let keys = points.iter().map(|p| p[0]).collect();
        let root = Box::new(Self::node(&points, 0, points.len()));
        Emptiness::Tree { keys, root }
    }

    fn node(points: &[Vec<i64>], lo: usize, hi: usize) -> TNode {
        let assoc = Emptiness::build(points[lo..hi].iter().map(|p| p[1..].to_vec()).collect());
        let children = (hi - lo > SCAN_SIZE).then(|| {
            let mid = (lo + hi) / 2;
            (Box::new(Self::node(points, lo, mid)), Box::new(Self::node(points, mid, hi)))
        });
        TNode { lo, hi, assoc, children }
    }

    /// Whether some point lies in the box `[lo, hi]`.
    pub fn nonempty(&self, lo: &[i64], hi: &[i64]) -> bool {
        match self {
            Emptiness::Scan(pts) => {
                pts.iter().any(|p| p.iter().zip(lo.iter().zip(hi)).all(|(c, (l, h))| l <= c && c <= h))
            }
            Emptiness::Sorted(v) => {
                let i = v.partition_point(|&x| x < lo[0]);
                i < v.len() && v[i] <= hi[0]
            }
            Emptiness::Tree { keys, root } => {
                let a = keys.partition_point(|&x| x < lo[0]);
                let b = keys.partition_point(|&x| x <= hi[0]);
                a < b && Self::search(root, a, b, &lo[1..], &hi[1..])
            }
        }
    }

    fn search(node: &TNode, a: usize, b: usize, lo: &[i64], hi: &[i64]) -> bool {
        if b <= node.lo || node.hi <= a {
            return false;
        }
        if a <= node.lo && node.hi <= b {
            return node.assoc.nonempty(lo, hi);
        }
        match &node.children {
            Some((l, r)) => Self::search(l, a, b, lo, hi) || Self::search(r, a, b, lo, hi),
            // A small partially covered node: its assoc scans the remaining
            // coordinates only, so filter the first one by index.
            None => match &node.assoc {
                Emptiness::Scan(pts) => pts[a.max(node.lo) - node.lo..b.min(node.hi) - node.lo]
                    .iter()
                    .any(|p| p.iter().zip(lo.iter().zip(hi)).all(|(c, (l, h))| l <= c && c <= h)),
                _ => unreachable!("small nodes scan"),
            },
        }
    }

    pub fn space_units(&self) -> usize {
        fn node_units(n: &TNode) -> usize {
            1 + n.assoc.space_units() + n.children.as_ref().map_or(0, |(l, r)| node_units(l) + node_units(r))
        }
        match self {
            Emptiness::Scan(p) => p.iter().map(Vec::len).sum(),
            Emptiness::Sorted(v) => v.len(),
            Emptiness::Tree { keys, root } => keys.len() + node_units(root),
        }
    }
}
