use crate::geom::{ColorId, ColoredPoint3, Rect5, NEG_INF};
use std::collections::{BTreeMap, HashMap};

/// Disjoint 5-sided pieces per color.
///
/// A dominance query `[q, ∞)^3` contains a point of color `c` iff the point
/// `q` lies in exactly one piece of `c`, and in none otherwise.
#[derive(Clone, Debug, Default)]
pub struct PhiDecomposition {
    pub per_color: BTreeMap<ColorId, Vec<Rect5>>,
}

impl PhiDecomposition {
    /// All pieces, tagged with their color id.
    pub fn all(&self) -> Vec<Rect5> {
        self.per_color.iter().flat_map(|(c, v)| v.iter().map(move |r| r.with_tag(c.0))).collect()
    }

    pub fn num_pieces(&self) -> usize {
        self.per_color.values().map(Vec::len).sum()
    }
}

/// Pieces of one color's region `∪ (-∞, p]`.
///
/// Points are swept by decreasing z against the 2D staircase of points seen
/// so far; each point contributes the part of its quadrant not yet covered,
/// split into vertical strips.
pub fn phi_pieces(points: &[[i64; 3]]) -> Vec<Rect5> {
    let mut order: Vec<&[i64; 3]> = points.iter().collect();
    order.sort_by(|a, b| b[2].cmp(&a[2]));
    // Staircase: x ascending, y strictly descending.
    let mut stair: BTreeMap<i64, i64> = BTreeMap::new();
    let mut out = Vec::new();
    for p in order {
        let [px, py, pz] = *p;
        if let Some((_, &y)) = stair.range(px..).next() {
            if y >= py {
                continue;
            }
        }
        let mut covered: Vec<(i64, i64)> = Vec::new();
        let mut prev: Option<i64> = None;
        for (&x, &y) in stair.range(..=px).rev() {
            if y <= py {
                covered.push((x, y));
            } else {
                prev = Some(x);
                break;
            }
        }
        covered.reverse();
        let start = |prev: Option<i64>| prev.map_or(NEG_INF, |x| x + 1);
        for &(x, y) in &covered {
            if y < py {
                out.push(Rect5::new(start(prev), x, y + 1, py, pz));
            }
            prev = Some(x);
        }
        if prev.is_none_or(|x| x < px) {
            let floor = stair.range(px + 1..).next().map_or(NEG_INF, |(_, &y)| y + 1);
            out.push(Rect5::new(start(prev), px, floor, py, pz));
        }
        for (x, _) in covered {
            stair.remove(&x);
        }
        stair.insert(px, py);
    }
    out
}

pub fn phi_decompose(points: &[ColoredPoint3]) -> PhiDecomposition {
    let mut groups: HashMap<ColorId, Vec<[i64; 3]>> = HashMap::new();
    for p in points {
        groups.entry(p.color).or_default().push(p.coords);
    }
    PhiDecomposition { per_color: groups.into_iter().map(|(c, g)| (c, phi_pieces(&g))).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::POS_INF;
    use proptest::prelude::*;

    #[test]
    fn single_point_is_an_octant() {
        assert_eq!(phi_pieces(&[[3, 4, 5]]), vec![Rect5::new(NEG_INF, 3, NEG_INF, 4, 5)]);
    }

    #[test]
    fn duplicate_point_adds_nothing() {
        assert_eq!(phi_pieces(&[[3, 4, 5], [3, 4, 5]]).len(), 1);
    }

    #[test]
    fn staircase_example() {
        let pts = [[1, 6, 9], [3, 4, 8], [5, 2, 7], [6, 5, 1]];
        let pieces = phi_pieces(&pts);
        assert!(pieces.len() <= 2 * pts.len());
        for x in -1..8 {
            for y in -1..8 {
                for z in -1..11 {
                    let q = [x, y, z];
                    let present = pts.iter().any(|p| p.iter().zip(&q).all(|(a, b)| a >= b));
                    assert_eq!(pieces.iter().filter(|r| r.contains(&q)).count(), present as usize);
                }
            }
        }
        assert!(pieces.iter().all(|r| r.y2 < POS_INF && r.x2 < POS_INF));
    }

    proptest! {
        #[test]
        fn exactly_one_piece(pts in prop::collection::vec((0i64..7, 0i64..7, 0i64..7), 1..20)) {
            let pts: Vec<[i64; 3]> = pts.iter().map(|&(a, b, c)| [a, b, c]).collect();
            let pieces = phi_pieces(&pts);
            prop_assert!(pieces.len() <= 2 * pts.len());
            for i in 0..pieces.len() {
                for j in i + 1..pieces.len() {
                    let (a, b) = (&pieces[i], &pieces[j]);
                    prop_assert!(!a.intersects(b), "{:?} {:?}", a, b);
                }
            }
            for x in -1..8 { for y in -1..8 { for z in -1..8 {
                let q = [x, y, z];
                let present = pts.iter().any(|p| p.iter().zip(&q).all(|(a, b)| a >= b));
                prop_assert_eq!(pieces.iter().filter(|r| r.contains(&q)).count(), present as usize);
            }}}
        }
    }
}
