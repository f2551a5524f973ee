use crate::dominance::{Dominance3, DominanceReporter};
use crate::geom::Rect5;
use crate::ortho2d::interval_tree::{Half, IntervalTree};

/// Boxes sharing one x-half and one y-half, as 3D dominance points.
#[derive(Clone, Debug, Default)]
struct DomSet {
    counter: Option<Dominance3>,
    reporter: DominanceReporter,
}

impl DomSet {
    fn lift(r: &Rect5, hx: Half, hy: Half) -> [i64; 3] {
        let u = if hx == Half::Left { -r.x1 } else { r.x2 };
        let v = if hy == Half::Left { -r.y1 } else { r.y2 };
        [u, v, r.ztop]
    }

    fn query(q: &[i64; 3], hx: Half, hy: Half) -> [i64; 3] {
        let u = if hx == Half::Left { -q[0] } else { q[0] };
        let v = if hy == Half::Left { -q[1] } else { q[1] };
        [u, v, q[2]]
    }
}

type Leaf = [DomSet; 4];

/// Exact counting and capped reporting of 5-sided boxes containing a point.
///
/// An interval tree on x whose nodes hold interval trees on y; each inner
/// node splits its boxes into four dominance sets by the query's halves.
#[derive(Clone, Debug)]
pub struct FiveSidedIndex {
    tree: IntervalTree<IntervalTree<Leaf>>,
    len: usize,
    counts: bool,
}

impl FiveSidedIndex {
    /// Builds over `rects`; ids reported are indices into `rects`.
    ///
    /// Without `counts` only reporting is supported and space stays linear.
    pub fn build(rects: &[Rect5], counts: bool) -> Self {
        let items: Vec<(Rect5, u32)> = rects.iter().copied().zip(0u32..).collect();
        let mut make_leaf = |group: Vec<(Rect5, u32)>| -> Leaf {
            let mut sets: Leaf = Default::default();
            for hx in [Half::Left, Half::Right] {
                for hy in [Half::Left, Half::Right] {
                    let pts: Vec<([i64; 3], u32)> =
                        group.iter().map(|(r, id)| (DomSet::lift(r, hx, hy), *id)).collect();
                    let set = &mut sets[hx.index() * 2 + hy.index()];
                    if counts {
                        let raw: Vec<[i64; 3]> = pts.iter().map(|p| p.0).collect();
                        set.counter = Some(Dominance3::new(&raw));
                    }
                    set.reporter = DominanceReporter::new(pts);
                }
            }
            sets
        };
        let mut make_node = |group: Vec<(Rect5, u32)>| IntervalTree::build(group, |t| (t.0.y1, t.0.y2), &mut make_leaf);
        let tree = IntervalTree::build(items, |t| (t.0.x1, t.0.x2), &mut make_node);
        Self { tree, len: rects.len(), counts }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn visit_sets<'a>(&'a self, q: &[i64; 3], mut f: impl FnMut(&'a DomSet, [i64; 3]) -> bool) {
        let mut go = true;
        self.tree.visit(q[0], |ytree, hx| {
            ytree.visit(q[1], |leaf, hy| {
                if go {
                    go = f(&leaf[hx.index() * 2 + hy.index()], DomSet::query(q, hx, hy));
                }
            });
        });
    }

    /// Number of boxes containing `q`. Panics if built without counts.
    pub fn count(&self, q: &[i64; 3]) -> usize {
        assert!(self.counts, "index built without counters");
        let mut total = 0;
        self.visit_sets(q, |set, dq| {
            total += set.counter.as_ref().map_or(0, |c| c.count(dq));
            true
        });
        total
    }

    /// Ids of boxes containing `q`: all of them if there are at most `cap`,
    /// otherwise exactly `cap + 1` of them.
    pub fn report_capped(&self, q: &[i64; 3], cap: usize) -> Vec<u32> {
        let mut out = Vec::new();
        let limit = cap.saturating_add(1);
        self.visit_sets(q, |set, dq| {
            set.reporter.report(dq, limit, &mut out);
            out.len() < limit
        });
        out
    }

    pub fn space_units(&self) -> usize {
        self.tree
            .payloads()
            .flat_map(|t| t.payloads())
            .flat_map(|leaf| leaf.iter())
            .map(|s| s.reporter.space_units() + s.counter.as_ref().map_or(0, Dominance3::space_units))
            .sum::<usize>()
            + self.tree.num_nodes()
    }
}

/// Boxes of `rects` containing `q`, capped as in [`FiveSidedIndex::report_capped`].
pub fn report_stabbed_capped(rects: &[Rect5], q: &[i64; 3], cap: usize) -> Vec<u32> {
    FiveSidedIndex::build(rects, false).report_capped(q, cap)
}
