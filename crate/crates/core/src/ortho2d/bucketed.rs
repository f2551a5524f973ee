use super::three_sided::{InitialApprox, Opening};
use crate::error::{CrcError, Result};
use crate::geom::{ColorId, ColoredPoint2, NEG_INF, POS_INF};
use std::collections::HashMap;

#[derive(Clone, Debug, Default)]
pub struct BucketConfig {
    /// Points per bucket; `None` means `max(4, ⌈log₂² n⌉)`.
    pub bucket_size: Option<usize>,
}

impl BucketConfig {
    pub fn resolve(&self, n: usize) -> usize {
        self.bucket_size
            .unwrap_or_else(|| {
                let l = (n.max(2) as f64).log2();
                (l * l).ceil() as usize
            })
            .max(4)
    }
}

#[derive(Clone, Debug)]
#[cfg_attr(not(test), allow(dead_code))]
struct TNode {
    parent: Option<usize>,
    left: Option<usize>,
    right: Option<usize>,
    depth: usize,
    /// Buckets `[lo, hi)`.
    lo: usize,
    hi: usize,
}

/// `(right, left)` sketches of one (leaf, ancestor) pair.
type PairSketch = (Vec<i64>, Vec<i64>);

/// Colored 3-sided counting in lower-bound form with factor 8.
///
/// Points sorted by x are cut into buckets, each with an [`InitialApprox`],
/// under a balanced tree. For every bucket `u` and proper ancestor `v`, the
/// per-color extreme y-values of the subtrees hanging off the path `u → v`
/// are kept at ranks `2^0, 2^1, …`. A query splits into the two end buckets
/// and the two hanging sides below the lowest common ancestor.
#[derive(Clone, Debug)]
pub struct BucketedCApprox {
    dir: Opening,
    xs: Vec<i64>,
    bucket: usize,
    buckets: Vec<InitialApprox>,
    nodes: Vec<TNode>,
    leaf_of: Vec<usize>,
    /// `sketches[u][t - 1]` for the ancestor `t` steps above bucket `u`.
    sketches: Vec<Vec<PairSketch>>,
}

impl BucketedCApprox {
    pub const FACTOR: f64 = 8.0;

    pub fn build(points: &[ColoredPoint2], dir: Opening, cfg: &BucketConfig) -> Self {
        let mut pts = points.to_vec();
        pts.sort_by_key(|p| (p.x, p.y));
        let bucket = cfg.resolve(pts.len());
        let chunks: Vec<&[ColoredPoint2]> = pts.chunks(bucket).collect();
        let buckets = chunks.iter().map(|c| InitialApprox::build(c, dir)).collect();
        let sign = if dir == Opening::Up { 1 } else { -1 };
        let mut me = Self {
            dir,
            xs: pts.iter().map(|p| p.x).collect(),
            bucket,
            buckets,
            nodes: Vec::new(),
            leaf_of: vec![0; chunks.len()],
            sketches: vec![Vec::new(); chunks.len()],
        };
        if chunks.is_empty() {
            return me;
        }
        let mut maxima: Vec<HashMap<ColorId, i64>> = Vec::new();
        me.build_node(&chunks, 0, chunks.len(), None, 0, sign, &mut maxima);
        for u in 0..chunks.len() {
            let (mut acc_r, mut acc_l) = (HashMap::new(), HashMap::new());
            let mut child = me.leaf_of[u];
            while let Some(v) = me.nodes[child].parent {
                me.sketches[u].push((rank_sketch(&acc_r), rank_sketch(&acc_l)));
                let node = &me.nodes[v];
                let (other, acc) =
                    if node.left == Some(child) { (node.right, &mut acc_r) } else { (node.left, &mut acc_l) };
                if let Some(o) = other {
                    merge_max(acc, &maxima[o]);
                }
                child = v;
            }
        }
        me
    }

    #[allow(clippy::too_many_arguments)]
    fn build_node(
        &mut self,
        chunks: &[&[ColoredPoint2]],
        lo: usize,
        hi: usize,
        parent: Option<usize>,
        depth: usize,
        sign: i64,
        maxima: &mut Vec<HashMap<ColorId, i64>>,
    ) -> usize {
        let id = self.nodes.len();
        self.nodes.push(TNode { parent, left: None, right: None, depth, lo, hi });
        maxima.push(HashMap::new());
        if hi - lo == 1 {
            self.leaf_of[lo] = id;
            let mut m = HashMap::new();
            for p in chunks[lo] {
                let e = m.entry(p.color).or_insert(i64::MIN);
                *e = (*e).max(sign * p.y);
            }
            maxima[id] = m;
            return id;
        }
        let mid = (lo + hi) / 2;
        let l = self.build_node(chunks, lo, mid, Some(id), depth + 1, sign, maxima);
        let r = self.build_node(chunks, mid, hi, Some(id), depth + 1, sign, maxima);
        self.nodes[id].left = Some(l);
        self.nodes[id].right = Some(r);
        let mut m = maxima[l].clone();
        merge_max(&mut m, &maxima[r]);
        maxima[id] = m;
        id
    }

    pub fn opening(&self) -> Opening {
        self.dir
    }

    pub fn bucket_size(&self) -> usize {
        self.bucket
    }

    pub fn num_buckets(&self) -> usize {
        self.buckets.len()
    }

    /// Number of (bucket, proper ancestor) pairs holding sketches.
    pub fn num_pairs(&self) -> usize {
        self.sketches.iter().map(Vec::len).sum()
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while self.nodes[a].depth > self.nodes[b].depth {
            a = self.nodes[a].parent.unwrap();
        }
        while self.nodes[b].depth > self.nodes[a].depth {
            b = self.nodes[b].parent.unwrap();
        }
        while a != b {
            a = self.nodes[a].parent.unwrap();
            b = self.nodes[b].parent.unwrap();
        }
        a
    }

    /// The four sub-answers `[left end, left side, right side, right end]`.
    pub fn parts(&self, x1: i64, x2: i64, y: i64) -> Result<[usize; 4]> {
        if x1 > x2 {
            return Err(CrcError::QueryMalformed(format!("x1 = {x1} > x2 = {x2}")));
        }
        let a = self.xs.partition_point(|&x| x < x1);
        let b = self.xs.partition_point(|&x| x <= x2);
        if a >= b {
            return Ok([0; 4]);
        }
        let (ul, ur) = (a / self.bucket, (b - 1) / self.bucket);
        if ul == ur {
            return Ok([self.buckets[ul].count(x1, x2, y), 0, 0, 0]);
        }
        let end_l = self.buckets[ul].count(x1, POS_INF, y);
        let end_r = self.buckets[ur].count(NEG_INF, x2, y);
        let v = self.lca(self.leaf_of[ul], self.leaf_of[ur]);
        let qv = if self.dir == Opening::Up { y } else { -y };
        let steps = |u: usize| self.nodes[self.leaf_of[u]].depth - self.nodes[v].depth;
        let side_l = scan(&self.sketches[ul][steps(ul) - 1].0, qv);
        let side_r = scan(&self.sketches[ur][steps(ur) - 1].1, qv);
        Ok([end_l, side_l, side_r, end_r])
    }

    /// `z` with `k ∈ [z, 8z]`.
    pub fn count(&self, x1: i64, x2: i64, y: i64) -> Result<usize> {
        Ok(self.parts(x1, x2, y)?.into_iter().max().unwrap())
    }

    pub fn space_units(&self) -> usize {
        self.buckets.iter().map(InitialApprox::space_units).sum::<usize>()
            + self.sketches.iter().flatten().map(|(r, l)| r.len() + l.len()).sum::<usize>()
            + self.nodes.len()
            + self.xs.len()
    }
}

fn merge_max(acc: &mut HashMap<ColorId, i64>, other: &HashMap<ColorId, i64>) {
    for (&c, &y) in other {
        let e = acc.entry(c).or_insert(i64::MIN);
        *e = (*e).max(y);
    }
}

/// Values at ranks `2^0, 2^1, …` of the descending per-color maxima.
fn rank_sketch(maxima: &HashMap<ColorId, i64>) -> Vec<i64> {
    let mut v: Vec<i64> = maxima.values().copied().collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = Vec::new();
    let mut r = 1usize;
    while r <= v.len() {
        out.push(v[r - 1]);
        r *= 2;
    }
    out
}

/// Largest `2^j` whose entry reaches `qv`, or 0.
fn scan(sketch: &[i64], qv: i64) -> usize {
    let j = sketch.partition_point(|&e| e >= qv);
    if j == 0 {
        0
    } else {
        1 << (j - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{enumerate_queries, exact_colored_count, Instance, Query};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn points(n: usize, u: i64, colors: u32, seed: u64) -> Vec<ColoredPoint2> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| ColoredPoint2::new(rng.gen_range(0..u), rng.gen_range(0..u), rng.gen_range(0..colors))).collect()
    }

    #[test]
    fn sketches_hold_hanging_maxima() {
        let pts = points(400, 1000, 30, 5);
        for dir in [Opening::Up, Opening::Down] {
            let b = BucketedCApprox::build(&pts, dir, &BucketConfig { bucket_size: Some(16) });
            let mut sorted = pts.clone();
            sorted.sort_by_key(|p| (p.x, p.y));
            let sign = if dir == Opening::Up { 1 } else { -1 };
            let maxima = |lo: usize, hi: usize| {
                let mut m: HashMap<ColorId, i64> = HashMap::new();
                for p in &sorted[(lo * 16).min(sorted.len())..(hi * 16).min(sorted.len())] {
                    let e = m.entry(p.color).or_insert(i64::MIN);
                    *e = (*e).max(sign * p.y);
                }
                m
            };
            for u in 0..b.num_buckets() {
                let mut child = b.leaf_of[u];
                for (r, l) in &b.sketches[u] {
                    let c = &b.nodes[child];
                    assert_eq!(*r, rank_sketch(&maxima(u + 1, c.hi)));
                    assert_eq!(*l, rank_sketch(&maxima(c.lo, u)));
                    assert!(r.len() <= (400f64).log2().ceil() as usize + 1);
                    child = c.parent.unwrap();
                }
            }
        }
    }

    #[test]
    fn scan_edges() {
        assert_eq!(scan(&[], 0), 0);
        assert_eq!(scan(&[9, 5, 2], 10), 0);
        assert_eq!(scan(&[9, 5, 2], 5), 2);
        assert_eq!(scan(&[9, 5, 2], 1), 4);
    }

    #[test]
    fn single_bucket_is_exact() {
        let pts = points(10, 50, 4, 1);
        let b = BucketedCApprox::build(&pts, Opening::Up, &BucketConfig::default());
        assert_eq!(b.num_buckets(), 1);
        let inst = Instance::Range3s(pts);
        for q in enumerate_queries(&inst).unwrap().iter() {
            let Query::Range3s { x1, x2, y } = q else { unreachable!() };
            assert_eq!(b.count(x1, x2, y).unwrap(), exact_colored_count(&inst, &q).unwrap());
        }
        assert!(b.count(3, 2, 0).is_err());
    }

    #[test]
    fn factor_eight_on_enumerated_queries() {
        let pts = points(600, 24, 60, 9);
        let inst = Instance::Range3s(pts.clone());
        let b = BucketedCApprox::build(&pts, Opening::Up, &BucketConfig::default());
        assert!(b.num_buckets() > 4);
        for q in enumerate_queries(&inst).unwrap().iter() {
            let Query::Range3s { x1, x2, y } = q else { unreachable!() };
            let k = exact_colored_count(&inst, &q).unwrap();
            let z = b.count(x1, x2, y).unwrap();
            assert!(z <= k && k <= 8 * z, "k {k} z {z}");
        }
    }
}
