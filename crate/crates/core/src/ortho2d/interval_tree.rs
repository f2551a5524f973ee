/// Which side of the splitting value the query fell on.
///
/// With `Left` (query `<= h`) the stored items contain the query iff
/// `lo <= q`; with `Right` (query `> h`) iff `q <= hi`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Half {
    Left,
    Right,
}

impl Half {
    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Debug)]
struct Node<L> {
    h: i64,
    payload: L,
    left: Option<usize>,
    right: Option<usize>,
}

/// Interval tree over one axis.
///
/// Every item is stored at exactly one node: the first on its root path whose
/// splitting value it contains. A query visits one root-to-leaf path and, at
/// each node, needs only one side of each stored interval.
#[derive(Clone, Debug)]
pub struct IntervalTree<L> {
    nodes: Vec<Node<L>>,
    root: Option<usize>,
}

impl<L> IntervalTree<L> {
    /// Builds the tree; `make` turns each node's stored items into a payload.
    pub fn build<T>(items: Vec<T>, key: impl Fn(&T) -> (i64, i64) + Copy, make: &mut impl FnMut(Vec<T>) -> L) -> Self {
        let mut tree = Self { nodes: Vec::new(), root: None };
        tree.root = tree.build_rec(items, key, make);
        tree
    }

    fn build_rec<T>(
        &mut self,
        items: Vec<T>,
        key: impl Fn(&T) -> (i64, i64) + Copy,
        make: &mut impl FnMut(Vec<T>) -> L,
    ) -> Option<usize> {
        if items.is_empty() {
            return None;
        }
        let mut ends: Vec<i64> = items
            .iter()
            .flat_map(|t| {
                let (a, b) = key(t);
                [a, b]
            })
            .collect();
        let mid = ends.len() / 2;
        let h = *ends.select_nth_unstable(mid).1;
        let (mut here, mut lefts, mut rights) = (Vec::new(), Vec::new(), Vec::new());
        for t in items {
            let (a, b) = key(&t);
            if b < h {
                lefts.push(t);
            } else if a > h {
                rights.push(t);
            } else {
                here.push(t);
            }
        }
        let left = self.build_rec(lefts, key, make);
        let right = self.build_rec(rights, key, make);
        self.nodes.push(Node { h, payload: make(here), left, right });
        Some(self.nodes.len() - 1)
    }

    /// Payloads on the search path of `q`, each with the side to query.
    pub fn decompose(&self, q: i64) -> Vec<(&L, Half)> {
        let mut out = Vec::new();
        self.visit(q, |l, h| out.push((l, h)));
        out
    }

    pub fn visit<'a>(&'a self, q: i64, mut f: impl FnMut(&'a L, Half)) {
        let mut cur = self.root;
        while let Some(i) = cur {
            let node = &self.nodes[i];
            if q <= node.h {
                f(&node.payload, Half::Left);
                cur = node.left;
            } else {
                f(&node.payload, Half::Right);
                cur = node.right;
            }
        }
    }

    pub fn payloads(&self) -> impl Iterator<Item = &L> {
        self.nodes.iter().map(|n| &n.payload)
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn height(&self) -> usize {
        fn h<L>(t: &IntervalTree<L>, i: Option<usize>) -> usize {
            i.map_or(0, |i| 1 + h(t, t.nodes[i].left).max(h(t, t.nodes[i].right)))
        }
        h(self, self.root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn stabbed(tree: &IntervalTree<Vec<(i64, i64, usize)>>, q: i64) -> Vec<usize> {
        let mut out = Vec::new();
        for (items, half) in tree.decompose(q) {
            for &(a, b, id) in items {
                let hit = match half {
                    Half::Left => a <= q,
                    Half::Right => q <= b,
                };
                if hit {
                    out.push(id);
                }
            }
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn single_interval() {
        let tree = IntervalTree::build(vec![(2i64, 5i64, 0usize)], |t| (t.0, t.1), &mut |v| v);
        assert_eq!(tree.decompose(3).len(), 1);
        assert_eq!(stabbed(&tree, 3), vec![0]);
        assert!(stabbed(&tree, 7).is_empty());
    }

    #[test]
    fn query_left_of_everything_uses_left_halves() {
        let items: Vec<_> = (0..20).map(|i| (10 + i, 30 + i, i as usize)).collect();
        let tree = IntervalTree::build(items, |t| (t.0, t.1), &mut |v| v);
        assert!(tree.decompose(0).iter().all(|(_, h)| *h == Half::Left));
    }

    proptest! {
        #[test]
        fn decomposition_is_exact(raw in prop::collection::vec((0i64..100, 0i64..30), 1..128), qs in prop::collection::vec(-5i64..140, 1..50)) {
            let items: Vec<_> = raw.iter().enumerate().map(|(i, &(a, w))| (a, a + w, i)).collect();
            let tree = IntervalTree::build(items.clone(), |t| (t.0, t.1), &mut |v| v);
            prop_assert!(tree.height() <= 2 * (usize::BITS - items.len().leading_zeros()) as usize + 1);
            for q in qs {
                let expect: Vec<usize> = items.iter().filter(|t| t.0 <= q && q <= t.1).map(|t| t.2).collect();
                prop_assert_eq!(stabbed(&tree, q), expect);
            }
        }
    }
}
