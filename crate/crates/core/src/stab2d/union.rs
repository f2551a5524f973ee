use crate::geom::{ColorId, ColoredRect3S, StabRect3S};
use std::collections::{BTreeMap, HashMap};

/// Splits the union of same-colored 3-sided rectangles into disjoint pieces.
///
/// Pieces follow the lower envelope of the union: each maximal x-run with a
/// constant lowest bottom edge becomes one rectangle `[a, b] × [f, ∞)`.
/// At most `2m - 1` pieces come out of `m` rectangles.
pub fn union_decompose_color(rects: &[StabRect3S]) -> Vec<StabRect3S> {
    if rects.is_empty() {
        return Vec::new();
    }
    // Events at x1 (enter) and x2 + 1 (leave).
    let mut events: Vec<(i64, bool, i64)> = Vec::with_capacity(2 * rects.len());
    for r in rects {
        events.push((r.x1, true, r.y));
        events.push((r.x2 + 1, false, r.y));
    }
    events.sort_unstable();
    let mut active: BTreeMap<i64, usize> = BTreeMap::new();
    let mut out: Vec<StabRect3S> = Vec::new();
    let mut run: Option<(i64, i64)> = None; // (start, floor)
    let mut i = 0;
    while i < events.len() {
        let x = events[i].0;
        while i < events.len() && events[i].0 == x {
            let (_, enter, y) = events[i];
            if enter {
                *active.entry(y).or_default() += 1;
            } else {
                let c = active.get_mut(&y).expect("leave without enter");
                *c -= 1;
                if *c == 0 {
                    active.remove(&y);
                }
            }
            i += 1;
        }
        let floor = active.keys().next().copied();
        match (run, floor) {
            (Some((_, f)), Some(g)) if f == g => {}
            _ => {
                if let Some((start, f)) = run {
                    out.push(StabRect3S::new(start, x - 1, f));
                }
                run = floor.map(|g| (x, g));
            }
        }
    }
    debug_assert!(run.is_none());
    out
}

/// Per-color union pieces of a colored rectangle set.
#[derive(Clone, Debug, Default)]
pub struct UnionDecomposition {
    pub per_color: BTreeMap<ColorId, Vec<StabRect3S>>,
    pub all: Vec<ColoredRect3S>,
}

pub fn union_decompose(rects: &[ColoredRect3S]) -> UnionDecomposition {
    let mut groups: HashMap<ColorId, Vec<StabRect3S>> = HashMap::new();
    for r in rects {
        groups.entry(r.color).or_default().push(r.rect);
    }
    let mut d = UnionDecomposition::default();
    for (c, g) in groups {
        d.per_color.insert(c, union_decompose_color(&g));
    }
    for (&c, pieces) in &d.per_color {
        d.all.extend(pieces.iter().map(|&rect| ColoredRect3S { rect, color: c }));
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn singleton_is_unchanged() {
        let r = StabRect3S::new(0, 10, 5);
        assert_eq!(union_decompose_color(&[r]), vec![r]);
    }

    #[test]
    fn overlapping_pair() {
        let out = union_decompose_color(&[StabRect3S::new(0, 6, 4), StabRect3S::new(4, 10, 2)]);
        assert_eq!(out, vec![StabRect3S::new(0, 3, 4), StabRect3S::new(4, 10, 2)]);
    }

    #[test]
    fn disjoint_pair_is_unchanged() {
        let a = StabRect3S::new(0, 3, 1);
        let b = StabRect3S::new(7, 9, 8);
        assert_eq!(union_decompose_color(&[b, a]), vec![a, b]);
    }

    #[test]
    fn touching_equal_floors_merge() {
        let out = union_decompose_color(&[StabRect3S::new(0, 3, 1), StabRect3S::new(4, 9, 1)]);
        assert_eq!(out, vec![StabRect3S::new(0, 9, 1)]);
    }

    proptest! {
        #[test]
        fn exactly_one_stab(raw in prop::collection::vec((0i64..20, 0i64..8, 0i64..10), 1..15)) {
            let rects: Vec<_> = raw.iter().map(|&(a, w, y)| StabRect3S::new(a, a + w, y)).collect();
            let pieces = union_decompose_color(&rects);
            prop_assert!(pieces.len() < 2 * rects.len());
            for x in -1..30 {
                for y in -1..12 {
                    let present = rects.iter().any(|r| r.contains(x, y));
                    let stabbed = pieces.iter().filter(|p| p.contains(x, y)).count();
                    prop_assert_eq!(stabbed, present as usize);
                }
            }
        }
    }
}
