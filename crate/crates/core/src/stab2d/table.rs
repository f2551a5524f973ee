use super::cutting::ShallowCutting;
use crate::rank::{RankRect, SlotPoint};
use std::collections::HashMap;

/// Label of a conflict list after local rank reduction.
///
/// Each rectangle contributes `"x1 x2"` in local x ranks; entries appear in
/// increasing local y and are joined by `;`. Equal reduced lists give equal
/// labels regardless of input order.
pub fn canonicalize_conflict_list(list: &[RankRect]) -> String {
    local_pattern(list).0.iter().map(|(a, b)| format!("{a} {b}")).collect::<Vec<_>>().join(";")
}

/// Local `(x1, x2)` ranks ordered by y, with the sorted global x and y ranks.
fn local_pattern(list: &[RankRect]) -> (Vec<(u32, u32)>, Vec<u32>, Vec<u32>) {
    let mut xs: Vec<u32> = list.iter().flat_map(|r| [r.x1, r.x2]).collect();
    xs.sort_unstable();
    xs.dedup();
    let mut by_y: Vec<&RankRect> = list.iter().collect();
    by_y.sort_by_key(|r| (r.y, r.x1, r.x2));
    let ys: Vec<u32> = by_y.iter().map(|r| r.y).collect();
    let local = |v: u32| xs.partition_point(|&x| x < v) as u32;
    let pattern = by_y.iter().map(|r| (local(r.x1), local(r.x2))).collect();
    (pattern, xs, ys)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TableAnswer {
    Exact(usize),
    /// The query is above the table's cutting: `k >= level`.
    AtLeast(usize),
}

#[derive(Clone, Debug)]
struct TableCell {
    xs: Vec<u32>,
    ys: Vec<u32>,
    block: u32,
}

/// Exact counts for shallow queries, shared between identical conflict lists.
///
/// A block holds one bitmask per local x slot; bit `i` is set when the
/// rectangle with local y rank `i` covers that slot. The count at local slot
/// `(lx, ly)` is the popcount of the low `ly` bits.
#[derive(Clone, Debug)]
pub struct SharedTable {
    cutting: ShallowCutting,
    cells: Vec<TableCell>,
    blocks: Vec<Vec<u64>>,
    labels: Vec<String>,
}

impl SharedTable {
    pub fn build(rects: &[RankRect], t: usize) -> Self {
        assert!(2 * t <= 64, "table level too large for word-sized blocks");
        let mut cutting = ShallowCutting::build(rects, t);
        let mut ids: HashMap<String, u32> = HashMap::new();
        let mut blocks = Vec::new();
        let mut labels = Vec::new();
        let mut cells = Vec::with_capacity(cutting.num_cells());
        for j in 0..cutting.num_cells() {
            let list: Vec<RankRect> = cutting.conflict(j).iter().map(|&i| rects[i as usize]).collect();
            let (pattern, xs, ys) = local_pattern(&list);
            let label = pattern.iter().map(|(a, b)| format!("{a} {b}")).collect::<Vec<_>>().join(";");
            let block = *ids.entry(label.clone()).or_insert_with(|| {
                let mut masks = vec![0u64; xs.len() + 1];
                for (bit, &(a, b)) in pattern.iter().enumerate() {
                    for m in &mut masks[a as usize + 1..=b as usize] {
                        *m |= 1 << bit;
                    }
                }
                blocks.push(masks);
                labels.push(label);
                (blocks.len() - 1) as u32
            });
            cells.push(TableCell { xs, ys, block });
        }
        cutting.drop_conflicts();
        Self { cutting, cells, blocks, labels }
    }

    pub fn level(&self) -> usize {
        self.cutting.level()
    }

    pub fn cutting(&self) -> &ShallowCutting {
        &self.cutting
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn label_of_cell(&self, j: usize) -> &str {
        &self.labels[self.cells[j].block as usize]
    }

    pub fn block_of_cell(&self, j: usize) -> usize {
        self.cells[j].block as usize
    }

    pub fn query(&self, s: SlotPoint) -> TableAnswer {
        if self.cutting.is_empty() {
            return TableAnswer::Exact(0);
        }
        match self.cutting.locate(s) {
            None => TableAnswer::AtLeast(self.level()),
            Some(j) => TableAnswer::Exact(self.count_in_cell(j, s)),
        }
    }

    /// Exact count for a query known to lie in cell `j`.
    pub fn count_in_cell(&self, j: usize, s: SlotPoint) -> usize {
        let cell = &self.cells[j];
        let lx = cell.xs.partition_point(|&x| (x as usize) < s.sx);
        let ly = cell.ys.partition_point(|&y| (y as usize) < s.sy);
        let mask = if ly >= 64 { u64::MAX } else { (1u64 << ly) - 1 };
        (self.blocks[cell.block as usize][lx] & mask).count_ones() as usize
    }

    pub fn space_units(&self) -> usize {
        self.cutting.space_units()
            + self.cells.iter().map(|c| c.xs.len() + c.ys.len() + 1).sum::<usize>()
            + self.blocks.iter().map(Vec::len).sum::<usize>()
    }
}
