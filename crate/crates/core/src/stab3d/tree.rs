use crate::dominance::Dominance3;
use crate::error::{CrcError, Result};
use crate::geom::{ApproxAnswer, Rect5, NEG_INF, POS_INF};
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct TreeConfig {
    /// Nodes with fewer pieces are leaves answered by scanning.
    pub leaf_size: usize,
}

impl Default for TreeConfig {
    fn default() -> Self {
        Self { leaf_size: 16 }
    }
}

#[inline]
fn finite(v: i64) -> bool {
    v > NEG_INF && v < POS_INF
}

/// Slab boundaries along one axis. A line at `b` separates `b` from `b + 1`;
/// slab `i` holds the values in `(lines[i-1], lines[i]]`.
#[derive(Clone, Debug, Default)]
pub struct Lines(pub Vec<i64>);

impl Lines {
    pub fn slabs(&self) -> usize {
        self.0.len() + 1
    }

    pub fn slab_of(&self, v: i64) -> usize {
        self.0.partition_point(|&b| b < v)
    }

    fn lo(&self, slab: usize) -> i64 {
        if slab == 0 {
            NEG_INF
        } else {
            self.0[slab - 1] + 1
        }
    }

    fn hi(&self, slab: usize) -> i64 {
        self.0.get(slab).copied().unwrap_or(POS_INF)
    }

    /// Indices of the first and last lines strictly inside `[a, b]`.
    fn crossed(&self, a: i64, b: i64) -> Option<(usize, usize)> {
        let l = self.0.partition_point(|&v| v < a);
        let r = self.0.partition_point(|&v| v < b);
        (l < r).then(|| (l, r - 1))
    }

    /// Sides reaching a slab boundary become unbounded.
    fn normalize(&self, slab: usize, a: i64, b: i64) -> (i64, i64) {
        let a = if a <= self.lo(slab) { NEG_INF } else { a };
        let b = if b >= self.hi(slab) { POS_INF } else { b };
        (a, b)
    }

    /// `parts - 1` lines at quantiles of the finite side positions.
    fn at_quantiles(mut cand: Vec<i64>, parts: usize) -> Self {
        cand.sort_unstable();
        let mut out: Vec<i64> = (1..parts).filter_map(|i| cand.get(i * cand.len() / parts).copied()).collect();
        out.dedup();
        Self(out)
    }
}

/// How one piece is handled at a node.
#[derive(Clone, Debug, PartialEq)]
pub enum Assignment {
    /// Crosses no vertical line: goes to a column slab whole.
    Column(usize, Rect5),
    /// Crosses vertical lines but no horizontal one: goes to a row slab whole.
    Row(usize, Rect5),
    /// Crosses both: split into the grid-aligned part and side remnants.
    Split {
        /// Covered cells `[cx0, cx1] × [cy0, cy1]` and the grid piece.
        grid: Option<([usize; 4], Rect5)>,
        columns: Vec<(usize, Rect5)>,
        rows: Vec<(usize, Rect5)>,
    },
}

/// Splits `r` against the grid formed by `xs` and `ys`.
///
/// On an axis without lines, a piece unbounded on both sides counts as
/// crossing it.
pub fn assign_case(r: &Rect5, xs: &Lines, ys: &Lines) -> Assignment {
    let cx = xs.crossed(r.x1, r.x2);
    let cy = ys.crossed(r.y1, r.y2);
    let cross_x = cx.is_some() || (xs.0.is_empty() && !finite(r.x1) && !finite(r.x2));
    let cross_y = cy.is_some() || (ys.0.is_empty() && !finite(r.y1) && !finite(r.y2));
    if !cross_x {
        return Assignment::Column(xs.slab_of(r.x1), *r);
    }
    if !cross_y {
        return Assignment::Row(ys.slab_of(r.y1), *r);
    }
    let last_x = xs.slabs() - 1;
    let last_y = ys.slabs() - 1;
    // With no lines the piece is unbounded on that axis, so these are unused.
    let (lx, rx) = cx.unwrap_or((0, 0));
    let (ly, ry) = cy.unwrap_or((0, 0));
    let col0 = if finite(r.x1) { lx + 1 } else { 0 };
    let col1 = if finite(r.x2) { rx } else { last_x };
    let row0 = if finite(r.y1) { ly + 1 } else { 0 };
    let row1 = if finite(r.y2) { ry } else { last_y };
    let gx1 = if finite(r.x1) { xs.0[lx] + 1 } else { NEG_INF };
    let gx2 = if finite(r.x2) { xs.0[rx] } else { POS_INF };
    let gy1 = if finite(r.y1) { ys.0[ly] + 1 } else { NEG_INF };
    let gy2 = if finite(r.y2) { ys.0[ry] } else { POS_INF };
    let mut columns = Vec::new();
    if finite(r.x1) {
        columns.push((lx, Rect5 { x2: xs.0[lx], ..*r }));
    }
    if finite(r.x2) {
        columns.push((rx + 1, Rect5 { x1: xs.0[rx] + 1, ..*r }));
    }
    let mut rows = Vec::new();
    let mut grid = None;
    if col0 <= col1 {
        let band = Rect5 { x1: gx1, x2: gx2, ..*r };
        if finite(r.y1) {
            rows.push((ly, Rect5 { y2: ys.0[ly], ..band }));
        }
        if finite(r.y2) {
            rows.push((ry + 1, Rect5 { y1: ys.0[ry] + 1, ..band }));
        }
        if row0 <= row1 {
            grid = Some(([col0, col1, row0, row1], Rect5 { y1: gy1, y2: gy2, ..band }));
        }
    }
    Assignment::Split { grid, columns, rows }
}

/// Exact counter for pieces with at most one bounded side per xy-axis.
#[derive(Clone, Debug, Default)]
struct OrientedDominance {
    groups: Vec<(u8, Dominance3)>,
}

impl OrientedDominance {
    fn orientation(a: i64, b: i64) -> u8 {
        if finite(a) {
            0
        } else if finite(b) {
            1
        } else {
            2
        }
    }

    fn fits(r: &Rect5) -> bool {
        !(finite(r.x1) && finite(r.x2)) && !(finite(r.y1) && finite(r.y2))
    }

    fn lift(o: u8, a: i64, b: i64) -> i64 {
        match o {
            0 => -a,
            1 => b,
            _ => 0,
        }
    }

    fn lift_query(o: u8, q: i64) -> i64 {
        match o {
            0 => -q,
            1 => q,
            _ => 0,
        }
    }

    fn build(pieces: &[Rect5]) -> Self {
        let mut by: HashMap<u8, Vec<[i64; 3]>> = HashMap::new();
        for r in pieces {
            let ox = Self::orientation(r.x1, r.x2);
            let oy = Self::orientation(r.y1, r.y2);
            by.entry(ox * 3 + oy).or_default().push([Self::lift(ox, r.x1, r.x2), Self::lift(oy, r.y1, r.y2), r.ztop]);
        }
        let mut groups: Vec<(u8, Dominance3)> = by.into_iter().map(|(k, v)| (k, Dominance3::new(&v))).collect();
        groups.sort_by_key(|g| g.0);
        Self { groups }
    }

    fn count(&self, q: &[i64; 3]) -> usize {
        self.groups
            .iter()
            .map(|(k, d)| d.count([Self::lift_query(k / 3, q[0]), Self::lift_query(k % 3, q[1]), q[2]]))
            .sum()
    }

    fn space_units(&self) -> usize {
        self.groups.iter().map(|g| g.1.space_units()).sum()
    }
}

/// Covering z-tops of one grid cell kept at geometrically spaced ranks.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Sketch {
    /// `(rank, value)` with the `rank`-th largest z-top, ranks 1-based.
    entries: Vec<(u32, i64)>,
}

impl Sketch {
    pub fn build(mut ztops: Vec<i64>, eps: f64) -> Self {
        ztops.sort_unstable_by(|a, b| b.cmp(a));
        let mut entries = Vec::new();
        let mut r = 1usize;
        while r <= ztops.len() {
            entries.push((r as u32, ztops[r - 1]));
            r = (r + 1).max(((1.0 + eps) * r as f64).floor() as usize);
        }
        Self { entries }
    }

    /// A value in `[c / (1+ε), c]` where `c` counts z-tops `>= qz`.
    pub fn estimate(&self, qz: i64) -> u64 {
        let i = self.entries.partition_point(|e| e.1 >= qz);
        if i == 0 {
            0
        } else {
            self.entries[i - 1].0 as u64
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Debug)]
enum Node {
    Leaf(Vec<Rect5>),
    Inner(Box<Inner>),
}

#[derive(Clone, Debug)]
struct Inner {
    xs: Lines,
    ys: Lines,
    /// Row-major over (column, row).
    sketches: Vec<Sketch>,
    col_structs: Vec<OrientedDominance>,
    row_structs: Vec<OrientedDominance>,
    col_children: Vec<Option<Node>>,
    row_children: Vec<Option<Node>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeStats {
    pub nodes: usize,
    pub leaves: usize,
    pub depth: usize,
    /// Largest number of distinct nodes at one depth holding parts of one input box.
    pub max_assignments_per_level: usize,
}

struct Builder<'a> {
    eps: f64,
    cfg: &'a TreeConfig,
    next_id: u32,
    /// `(input box, depth)` to the nodes holding parts of it.
    assigned: HashMap<(u32, u32), Vec<u32>>,
    stats: TreeStats,
}

type Piece = (Rect5, u32);

impl Builder<'_> {
    fn record(&mut self, origin: u32, depth: u32, node: u32) {
        let v = self.assigned.entry((origin, depth)).or_default();
        if !v.contains(&node) {
            v.push(node);
        }
    }

    fn leaf(&mut self, pieces: Vec<Piece>, depth: u32, id: u32) -> Node {
        self.stats.leaves += 1;
        for p in &pieces {
            self.record(p.1, depth, id);
        }
        Node::Leaf(pieces.into_iter().map(|p| p.0).collect())
    }

    fn build(&mut self, pieces: Vec<Piece>, depth: u32) -> Node {
        let id = self.next_id;
        self.next_id += 1;
        self.stats.nodes += 1;
        self.stats.depth = self.stats.depth.max(depth as usize + 1);
        let m = pieces.len();
        if m < self.cfg.leaf_size.max(2) {
            return self.leaf(pieces, depth, id);
        }
        let t = ((m as f64).ln() / (1.0 + self.eps).ln()).ceil().max(2.0);
        let g = (2.0 * (m as f64 / t).sqrt()).ceil().max(2.0) as usize;
        let cand = |f: &dyn Fn(&Rect5) -> [i64; 2]| -> Vec<i64> {
            pieces
                .iter()
                .flat_map(|p| {
                    let [a, b] = f(&p.0);
                    [finite(a).then(|| a - 1), finite(b).then_some(b)]
                })
                .flatten()
                .collect()
        };
        let xs = Lines::at_quantiles(cand(&|r| [r.x1, r.x2]), g);
        let ys = Lines::at_quantiles(cand(&|r| [r.y1, r.y2]), g);
        let (nx, ny) = (xs.slabs(), ys.slabs());

        let mut cell_z: Vec<Vec<i64>> = vec![Vec::new(); nx * ny];
        let mut col_in: Vec<Vec<Piece>> = vec![Vec::new(); nx];
        let mut row_in: Vec<Vec<Piece>> = vec![Vec::new(); ny];
        let mut here: Vec<u32> = Vec::new();
        for &(r, origin) in &pieces {
            match assign_case(&r, &xs, &ys) {
                Assignment::Column(c, p) => col_in[c].push((p, origin)),
                Assignment::Row(c, p) => row_in[c].push((p, origin)),
                Assignment::Split { grid, columns, rows } => {
                    if let Some(([c0, c1, r0, r1], _)) = grid {
                        here.push(origin);
                        for c in c0..=c1 {
                            for rr in r0..=r1 {
                                cell_z[c * ny + rr].push(r.ztop);
                            }
                        }
                    }
                    columns.into_iter().for_each(|(c, p)| col_in[c].push((p, origin)));
                    rows.into_iter().for_each(|(c, p)| row_in[c].push((p, origin)));
                }
            }
        }
        if col_in.iter().chain(&row_in).any(|v| v.len() >= m) {
            return self.leaf(pieces, depth, id);
        }
        drop(pieces);
        for o in here {
            self.record(o, depth, id);
        }
        let sketches = cell_z.into_iter().map(|z| Sketch::build(z, self.eps)).collect();

        let split_side = |this: &mut Self, input: Vec<Vec<Piece>>, lines: &Lines, by_x: bool| {
            let mut structs = Vec::with_capacity(input.len());
            let mut children = Vec::with_capacity(input.len());
            for (slab, group) in input.into_iter().enumerate() {
                let mut fit = Vec::new();
                let mut down = Vec::new();
                for (mut r, o) in group {
                    if by_x {
                        (r.x1, r.x2) = lines.normalize(slab, r.x1, r.x2);
                    } else {
                        (r.y1, r.y2) = lines.normalize(slab, r.y1, r.y2);
                    }
                    if OrientedDominance::fits(&r) {
                        this.record(o, depth, id);
                        fit.push(r);
                    } else {
                        down.push((r, o));
                    }
                }
                structs.push(OrientedDominance::build(&fit));
                children.push((!down.is_empty()).then(|| this.build(down, depth + 1)));
            }
            (structs, children)
        };
        let (col_structs, col_children) = split_side(self, col_in, &xs, true);
        let (row_structs, row_children) = split_side(self, row_in, &ys, false);
        Node::Inner(Box::new(Inner { xs, ys, sketches, col_structs, row_structs, col_children, row_children }))
    }
}

/// Approximate 5-sided stabbing counter on a grid recursion tree.
///
/// Each node lays a grid over its pieces; the part of a piece covering whole
/// cells goes to per-cell rank sketches, remnants with at most one bounded
/// side per axis go to exact slab counters, and the rest recurse into the
/// slab's child. Answers lie in `[k / (1+ε), k]`.
#[derive(Clone, Debug)]
pub struct RecursionTree {
    root: Option<Node>,
    eps: f64,
    len: usize,
    stats: TreeStats,
}

impl RecursionTree {
    pub fn build(rects: &[Rect5], eps: f64, cfg: &TreeConfig) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(CrcError::BadParams(format!("eps must lie in (0, 1], got {eps}")));
        }
        let mut b = Builder { eps, cfg, next_id: 0, assigned: HashMap::new(), stats: TreeStats::default() };
        let pieces: Vec<Piece> = rects.iter().copied().zip(0u32..).collect();
        let root = (!pieces.is_empty()).then(|| b.build(pieces, 0));
        let mut stats = b.stats;
        stats.max_assignments_per_level = b.assigned.values().map(Vec::len).max().unwrap_or(0);
        Ok(Self { root, eps, len: rects.len(), stats })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn stats(&self) -> &TreeStats {
        &self.stats
    }

    pub fn count(&self, q: &[i64; 3]) -> u64 {
        let mut total = 0u64;
        let mut stack: Vec<&Node> = self.root.iter().collect();
        while let Some(node) = stack.pop() {
            match node {
                Node::Leaf(v) => total += v.iter().filter(|r| r.contains(q)).count() as u64,
                Node::Inner(n) => {
                    let cx = n.xs.slab_of(q[0]);
                    let cy = n.ys.slab_of(q[1]);
                    total += n.sketches[cx * n.ys.slabs() + cy].estimate(q[2]);
                    total += (n.col_structs[cx].count(q) + n.row_structs[cy].count(q)) as u64;
                    stack.extend(n.col_children[cx].iter());
                    stack.extend(n.row_children[cy].iter());
                }
            }
        }
        total
    }

    pub fn query(&self, q: &[i64; 3]) -> ApproxAnswer {
        ApproxAnswer::eps(self.count(q) as f64, self.eps)
    }

    pub fn space_units(&self) -> usize {
        fn walk(n: &Node) -> usize {
            match n {
                Node::Leaf(v) => v.len(),
                Node::Inner(i) => {
                    i.xs.0.len()
                        + i.ys.0.len()
                        + i.sketches.iter().map(|s| s.len() + 1).sum::<usize>()
                        + i.col_structs.iter().chain(&i.row_structs).map(|s| s.space_units()).sum::<usize>()
                        + i.col_children.iter().chain(&i.row_children).flatten().map(walk).sum::<usize>()
                }
            }
        }
        self.root.as_ref().map_or(0, walk)
    }
}
