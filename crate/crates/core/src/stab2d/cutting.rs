use crate::rank::{RankRect, SlotPoint};

/// `ytop` of a cell with fewer than `t` spanning rectangles.
pub const Y_INF: u32 = u32::MAX;

/// Shallow cutting of rank-space rectangles at level `t`.
///
/// The x-sides of the input, sorted, are cut every `t` sides. Boundary `b_j`
/// is the `(j·t)`-th side and slab `j` holds the slots `(b_j, b_{j+1}]`; the
/// first and last slabs are unbounded. The cell over slab `j` is
/// `slab × (-∞, ytop_j]` where `ytop_j` is the `t`-th smallest bottom among
/// rectangles spanning the slab.
#[derive(Clone, Debug)]
pub struct ShallowCutting {
    t: usize,
    bounds: Vec<u32>,
    ytop: Vec<u32>,
    conflicts: Vec<Vec<u32>>,
}

fn next_open(next: &mut [usize], j: usize) -> usize {
    let mut root = j;
    while next[root] != root {
        root = next[root];
    }
    let mut cur = j;
    while next[cur] != root {
        let up = next[cur];
        next[cur] = root;
        cur = up;
    }
    root
}

impl ShallowCutting {
    pub fn build(rects: &[RankRect], t: usize) -> Self {
        assert!(t >= 1, "cutting level must be positive");
        if rects.is_empty() {
            return Self { t, bounds: Vec::new(), ytop: Vec::new(), conflicts: Vec::new() };
        }
        let mut sides: Vec<u32> = rects.iter().flat_map(|r| [r.x1, r.x2]).collect();
        sides.sort_unstable();
        let bounds: Vec<u32> = sides.iter().copied().skip(t).step_by(t).collect();
        let cells = bounds.len() + 1;

        let mut by_y: Vec<u32> = (0..rects.len() as u32).collect();
        by_y.sort_unstable_by_key(|&i| rects[i as usize].y);
        let mut ytop = vec![Y_INF; cells];
        let mut count = vec![0usize; cells];
        // Union-find over slabs, skipping those whose ytop is already fixed.
        let mut next: Vec<usize> = (0..=cells).collect();
        for &i in &by_y {
            let r = &rects[i as usize];
            let lo = 1 + bounds.partition_point(|&b| b < r.x1);
            let hi = bounds.partition_point(|&b| b <= r.x2);
            // Spans slabs lo ..= hi - 1.
            let mut j = next_open(&mut next, lo.min(cells));
            while j < hi {
                count[j] += 1;
                if count[j] == t {
                    ytop[j] = r.y;
                    next[j] = j + 1;
                }
                j = next_open(&mut next, j + 1);
            }
        }

        let mut conflicts = vec![Vec::new(); cells];
        for (i, r) in rects.iter().enumerate() {
            let first = bounds.partition_point(|&b| b < r.x1 + 1);
            let last = bounds.partition_point(|&b| b < r.x2);
            for j in first..=last {
                if r.y <= ytop[j] {
                    conflicts[j].push(i as u32);
                }
            }
        }
        Self { t, bounds, ytop, conflicts }
    }

    pub fn level(&self) -> usize {
        self.t
    }

    pub fn num_cells(&self) -> usize {
        self.ytop.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ytop.is_empty()
    }

    /// Slab holding x-slot `sx`. Meaningless on an empty cutting.
    #[inline]
    pub fn slab_of(&self, sx: usize) -> usize {
        self.bounds.partition_point(|&b| (b as usize) < sx)
    }

    /// Slots covered by slab `j`, as an inclusive range clipped to `0..=max_slot`.
    pub fn slab_slots(&self, j: usize, max_slot: usize) -> (usize, usize) {
        let lo = if j == 0 { 0 } else { self.bounds[j - 1] as usize + 1 };
        let hi = if j == self.bounds.len() { max_slot } else { self.bounds[j] as usize };
        (lo, hi)
    }

    #[inline]
    pub fn ytop(&self, j: usize) -> u32 {
        self.ytop[j]
    }

    /// Cell containing the query, or `None` when it lies above its cell.
    #[inline]
    pub fn locate(&self, s: SlotPoint) -> Option<usize> {
        if self.ytop.is_empty() {
            return None;
        }
        let j = self.slab_of(s.sx);
        (s.sy as u64 <= self.ytop[j] as u64).then_some(j)
    }

    /// True when the query is at or below the level (inside some cell).
    pub fn covers(&self, s: SlotPoint) -> bool {
        self.ytop.is_empty() || self.locate(s).is_some()
    }

    /// Indices of rectangles intersecting cell `j`.
    pub fn conflict(&self, j: usize) -> &[u32] {
        &self.conflicts[j]
    }

    pub fn has_conflicts(&self) -> bool {
        self.ytop.is_empty() || self.conflicts.len() == self.ytop.len()
    }

    pub fn drop_conflicts(&mut self) {
        self.conflicts = Vec::new();
    }

    /// Stored primitives: boundaries, ytops and conflict entries.
    pub fn space_units(&self) -> usize {
        self.bounds.len() + self.ytop.len() + self.conflicts.iter().map(Vec::len).sum::<usize>()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LadderAnswer {
    /// Inside the base cell: `k <= 2t`.
    BelowBase,
    /// Above level `j` and inside level `j + 1`: `k ∈ [value, 4·value]`.
    Level { j: usize, value: usize },
    /// Above the top level: `k >= t'`.
    AboveTop,
}

/// Nested cuttings at levels `t, 2t, …, t'` with per-base-cell chains.
#[derive(Clone, Debug)]
pub struct LevelLadder {
    base: usize,
    levels: Vec<ShallowCutting>,
    /// Per base cell, ytops of its containing cells at levels `1..`.
    chains: Vec<u32>,
}

impl LevelLadder {
    /// Ladder from `t` doubling until the level reaches `t_top`.
    pub fn build(rects: &[RankRect], t: usize, t_top: usize) -> Self {
        let mut levels = vec![ShallowCutting::build(rects, t)];
        let mut cur = t;
        while cur < t_top {
            cur *= 2;
            levels.push(ShallowCutting::build(rects, cur));
        }
        Self::from_levels(levels)
    }

    pub fn from_levels(levels: Vec<ShallowCutting>) -> Self {
        let base = levels[0].level();
        for (j, l) in levels.iter().enumerate() {
            debug_assert_eq!(l.level(), base << j);
        }
        let height = levels.len() - 1;
        let mut chains = Vec::with_capacity(levels[0].num_cells() * height);
        for c in 0..levels[0].num_cells() {
            let (rep, _) = levels[0].slab_slots(c, usize::MAX);
            for l in &levels[1..] {
                chains.push(if l.is_empty() { Y_INF } else { l.ytop(l.slab_of(rep)) });
            }
        }
        Self { base, levels, chains }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn top(&self) -> usize {
        self.base << (self.levels.len() - 1)
    }

    pub fn height(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[ShallowCutting] {
        &self.levels
    }

    pub fn level_mut(&mut self, j: usize) -> &mut ShallowCutting {
        &mut self.levels[j]
    }

    pub fn chain(&self, cell: usize) -> &[u32] {
        let h = self.height();
        &self.chains[cell * h..(cell + 1) * h]
    }

    pub fn query(&self, s: SlotPoint) -> LadderAnswer {
        if self.levels[0].is_empty() {
            return LadderAnswer::BelowBase;
        }
        self.query_cell(self.levels[0].slab_of(s.sx), s.sy)
    }

    /// Same as [`query`](Self::query) for a query known to sit in base slab `cell`.
    pub fn query_cell(&self, cell: usize, sy: usize) -> LadderAnswer {
        let base = &self.levels[0];
        if base.is_empty() || sy as u64 <= base.ytop(cell) as u64 {
            return LadderAnswer::BelowBase;
        }
        let j = self.chain(cell).partition_point(|&y| (y as u64) < sy as u64);
        if j == self.height() {
            LadderAnswer::AboveTop
        } else {
            LadderAnswer::Level { j, value: self.base << j }
        }
    }

    pub fn space_units(&self) -> usize {
        self.levels.iter().map(ShallowCutting::space_units).sum::<usize>() + self.chains.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::StabRect3S;
    use crate::rank::rank_space_reduce;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_rects(n: usize, seed: u64) -> Vec<RankRect> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<_> = (0..n)
            .map(|_| {
                let a = rng.gen_range(0..1000);
                StabRect3S::new(a, a + rng.gen_range(0..300), rng.gen_range(0..1000))
            })
            .collect();
        rank_space_reduce(&raw).0
    }

    fn count(rects: &[RankRect], s: SlotPoint) -> usize {
        rects.iter().filter(|r| r.contains(s)).count()
    }

    #[test]
    fn empty_input() {
        let c = ShallowCutting::build(&[], 2);
        assert_eq!(c.num_cells(), 0);
        assert!(c.covers(SlotPoint { sx: 0, sy: 0 }));
    }

    #[test]
    fn four_rects_level_two() {
        let rects = random_rects(4, 1);
        assert!(ShallowCutting::build(&rects, 2).num_cells() <= 4);
    }

    #[test]
    fn properties_random_64() {
        let n = 64;
        let rects = random_rects(n, 7);
        for t in [1, 2, 3, 8, 17, 64, 128] {
            let c = ShallowCutting::build(&rects, t);
            assert!(c.num_cells() <= (2 * n).div_ceil(t));
            for j in 0..c.num_cells() {
                assert!(c.conflict(j).len() <= 2 * t);
            }
            for sx in 0..=2 * n {
                for sy in 0..=n {
                    let s = SlotPoint { sx, sy };
                    let k = count(&rects, s);
                    match c.locate(s) {
                        None => assert!(k >= t),
                        Some(j) => {
                            let inside = c.conflict(j).iter().filter(|&&i| rects[i as usize].contains(s)).count();
                            assert_eq!(inside, k);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ladder_brackets() {
        let n = 128;
        let rects = random_rects(n, 3);
        let ladder = LevelLadder::build(&rects, 2, 32);
        assert_eq!(ladder.top(), 32);
        for cell in 0..ladder.levels()[0].num_cells() {
            let ch = ladder.chain(cell);
            assert!(ch.windows(2).all(|w| w[0] <= w[1]));
            assert!(ladder.levels()[0].ytop(cell) <= ch[0]);
        }
        for sx in 0..=2 * n {
            for sy in 0..=n {
                let s = SlotPoint { sx, sy };
                let k = count(&rects, s);
                match ladder.query(s) {
                    LadderAnswer::BelowBase => assert!(k <= 4),
                    LadderAnswer::Level { value, .. } => assert!(value <= k && k <= 4 * value),
                    LadderAnswer::AboveTop => assert!(k >= 32),
                }
            }
        }
    }
}
