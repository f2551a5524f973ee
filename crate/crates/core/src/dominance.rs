//! Exact dominance counting and capped reporting.
//!
//! A point `(u, v, w)` is counted by query `(U, V, W)` when `u >= U`,
//! `v >= V` and `w >= W`. Any 3-sided box in R³ becomes such a point after
//! negating the coordinates whose bound is an upper bound.

/// Static 2D dominance counter: Fenwick blocks over the `v`-descending order,
/// each block holding its `w` values sorted.
#[derive(Clone, Debug, Default)]
pub struct Dominance2 {
    vs: Vec<i64>,
    blocks: Vec<Vec<i64>>,
}

impl Dominance2 {
    pub fn new(points: &[(i64, i64)]) -> Self {
        let mut pts = points.to_vec();
        pts.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let n = pts.len();
        let mut blocks = Vec::with_capacity(n);
        for i in 1..=n {
            let lo = i - (i & i.wrapping_neg());
            let mut ws: Vec<i64> = pts[lo..i].iter().map(|p| p.1).collect();
            ws.sort_unstable();
            blocks.push(ws);
        }
        Self { vs: pts.iter().map(|p| p.0).collect(), blocks }
    }

    pub fn len(&self) -> usize {
        self.vs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vs.is_empty()
    }

    pub fn count(&self, v: i64, w: i64) -> usize {
        let mut i = self.vs.partition_point(|&x| x >= v);
        let mut total = 0;
        while i > 0 {
            let b = &self.blocks[i - 1];
            total += b.len() - b.partition_point(|&x| x < w);
            i -= i & i.wrapping_neg();
        }
        total
    }

    pub fn space_units(&self) -> usize {
        self.vs.len() + self.blocks.iter().map(Vec::len).sum::<usize>()
    }
}

/// Static 3D dominance counter: Fenwick blocks over the `u`-descending order,
/// each block holding a [`Dominance2`] of its points.
#[derive(Clone, Debug, Default)]
pub struct Dominance3 {
    us: Vec<i64>,
    blocks: Vec<Dominance2>,
}

impl Dominance3 {
    pub fn new(points: &[[i64; 3]]) -> Self {
        let mut pts = points.to_vec();
        pts.sort_unstable_by(|a, b| b[0].cmp(&a[0]));
        let n = pts.len();
        let mut blocks = Vec::with_capacity(n);
        for i in 1..=n {
            let lo = i - (i & i.wrapping_neg());
            let vw: Vec<(i64, i64)> = pts[lo..i].iter().map(|p| (p[1], p[2])).collect();
            blocks.push(Dominance2::new(&vw));
        }
        Self { us: pts.iter().map(|p| p[0]).collect(), blocks }
    }

    pub fn len(&self) -> usize {
        self.us.len()
    }

    pub fn is_empty(&self) -> bool {
        self.us.is_empty()
    }

    pub fn count(&self, q: [i64; 3]) -> usize {
        let mut i = self.us.partition_point(|&x| x >= q[0]);
        let mut total = 0;
        while i > 0 {
            total += self.blocks[i - 1].count(q[1], q[2]);
            i -= i & i.wrapping_neg();
        }
        total
    }

    pub fn space_units(&self) -> usize {
        self.us.len() + self.blocks.iter().map(Dominance2::space_units).sum::<usize>()
    }
}

/// Points with payloads, reported in decreasing `w` with an early stop.
#[derive(Clone, Debug, Default)]
pub struct DominanceReporter {
    points: Vec<([i64; 3], u32)>,
}

impl DominanceReporter {
    pub fn new(mut points: Vec<([i64; 3], u32)>) -> Self {
        points.sort_unstable_by(|a, b| b.0[2].cmp(&a.0[2]));
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Appends payloads of dominating points to `out` until `out` holds `limit`.
    pub fn report(&self, q: [i64; 3], limit: usize, out: &mut Vec<u32>) {
        for (p, id) in &self.points {
            if out.len() >= limit || p[2] < q[2] {
                return;
            }
            if p[0] >= q[0] && p[1] >= q[1] {
                out.push(*id);
            }
        }
    }

    /// Calls `f` on every dominating payload; stops when `f` returns false.
    pub fn for_each(&self, q: [i64; 3], mut f: impl FnMut(u32) -> bool) {
        for (p, id) in &self.points {
            if p[2] < q[2] {
                return;
            }
            if p[0] >= q[0] && p[1] >= q[1] && !f(*id) {
                return;
            }
        }
    }

    pub fn space_units(&self) -> usize {
        self.points.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn counts_match_scan(
            pts in prop::collection::vec((0i64..10, 0i64..10, 0i64..10), 0..60),
            qs in prop::collection::vec((-1i64..11, -1i64..11, -1i64..11), 1..30),
        ) {
            let p3: Vec<[i64; 3]> = pts.iter().map(|&(a, b, c)| [a, b, c]).collect();
            let d3 = Dominance3::new(&p3);
            let d2 = Dominance2::new(&pts.iter().map(|&(a, b, _)| (a, b)).collect::<Vec<_>>());
            let rep = DominanceReporter::new(p3.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect());
            for (u, v, w) in qs {
                let q = [u, v, w];
                let expect: Vec<u32> = (0..p3.len() as u32)
                    .filter(|&i| p3[i as usize].iter().zip(&q).all(|(a, b)| a >= b))
                    .collect();
                prop_assert_eq!(d3.count(q), expect.len());
                prop_assert_eq!(d2.count(u, v), pts.iter().filter(|p| p.0 >= u && p.1 >= v).count());
                let mut got = Vec::new();
                rep.report(q, usize::MAX, &mut got);
                got.sort_unstable();
                prop_assert_eq!(&got, &expect);
                let mut capped = Vec::new();
                rep.report(q, 2, &mut capped);
                prop_assert_eq!(capped.len(), expect.len().min(2));
            }
        }
    }
}
