//! Colored orthogonal range counting in R^d, `d <= 4`.
//!
//! Colored reporting is built from range emptiness alone: a balanced tree
//! over color ids keeps an emptiness structure per node and a query descends
//! only into non-empty subtrees. Counting then goes through [`Reduction2`].

pub mod emptiness;

pub use emptiness::Emptiness;

use crate::error::{CrcError, Result};
use crate::geom::{ColorId, ColoredPointD};
use crate::oracle::{enumerate_queries, Instance, Query};
use crate::reductions::{ColorProfile, ColoredReporter, Reduction2, ReductionConfig};

#[derive(Clone, Debug)]
struct CNode {
    /// Smallest color id below this node.
    lo: u32,
    set: Emptiness,
    children: Option<(usize, usize)>,
}

/// Capped colored reporting by emptiness tests over a color tree.
#[derive(Clone, Debug)]
pub struct ColoredRdReporter {
    dim: usize,
    nodes: Vec<CNode>,
    root: Option<usize>,
}

impl ColoredRdReporter {
    pub fn build(points: &[ColoredPointD], dim: usize) -> Result<Self> {
        if !(1..=4).contains(&dim) {
            return Err(CrcError::SettingUnsupported(format!("dimension {dim}")));
        }
        if let Some(p) = points.iter().find(|p| p.coords.len() != dim) {
            return Err(CrcError::BadParams(format!("point {:?} is not {dim}-dimensional", p.coords)));
        }
        let mut pts = points.to_vec();
        pts.sort_by_key(|p| p.color);
        let mut me = Self { dim, nodes: Vec::new(), root: None };
        if let (Some(first), Some(last)) = (pts.first(), pts.last()) {
            me.root = Some(me.build_rec(&pts, first.color.0, last.color.0 + 1));
        }
        Ok(me)
    }

    fn build_rec(&mut self, pts: &[ColoredPointD], lo: u32, hi: u32) -> usize {
        let set = Emptiness::build(pts.iter().map(|p| p.coords.clone()).collect());
        let children = (hi - lo > 1).then(|| {
            let mid = lo + (hi - lo) / 2;
            let cut = pts.partition_point(|p| p.color.0 < mid);
            (self.build_rec(&pts[..cut], lo, mid), self.build_rec(&pts[cut..], mid, hi))
        });
        self.nodes.push(CNode { lo, set, children });
        self.nodes.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn height(&self) -> usize {
        fn h(me: &ColoredRdReporter, i: usize) -> usize {
            1 + me.nodes[i].children.map_or(0, |(l, r)| h(me, l).max(h(me, r)))
        }
        self.root.map_or(0, |r| h(self, r))
    }

    /// Colors present in the box, capped at `cap + 1`, and the number of
    /// emptiness tests spent.
    pub fn report_counted(&self, lo: &[i64], hi: &[i64], cap: usize) -> Result<(Vec<ColorId>, usize)> {
        if lo.len() != self.dim || hi.len() != self.dim {
            return Err(CrcError::QueryMalformed(format!("box of dimension {}", lo.len())));
        }
        let limit = cap.saturating_add(1);
        let (mut out, mut tests) = (Vec::new(), 0);
        let mut stack: Vec<usize> = self.root.into_iter().collect();
        while let Some(i) = stack.pop() {
            if out.len() >= limit {
                break;
            }
            let node = &self.nodes[i];
            tests += 1;
            if !node.set.nonempty(lo, hi) {
                continue;
            }
            match node.children {
                Some((l, r)) => stack.extend([r, l]),
                None => out.push(ColorId(node.lo)),
            }
        }
        Ok((out, tests))
    }

    pub fn report(&self, lo: &[i64], hi: &[i64], cap: usize) -> Result<Vec<ColorId>> {
        Ok(self.report_counted(lo, hi, cap)?.0)
    }

    pub fn space_units(&self) -> usize {
        self.nodes.iter().map(|n| 1 + n.set.space_units()).sum()
    }
}

impl ColoredReporter for ColoredRdReporter {
    fn report_colors(&self, q: &Query, cap: usize) -> Result<Vec<ColorId>> {
        match q {
            Query::Box { lo, hi } => self.report(lo, hi, cap),
            _ => Err(CrcError::QueryMalformed(format!("unexpected query {q:?}"))),
        }
    }

    fn space_units(&self) -> usize {
        ColoredRdReporter::space_units(self)
    }
}

#[derive(Clone, Debug)]
pub struct OrthoRdConfig {
    pub reduction: ReductionConfig,
    /// Largest number of queries used to verify samples.
    pub verify_budget: usize,
}

impl Default for OrthoRdConfig {
    fn default() -> Self {
        Self { reduction: ReductionConfig::default(), verify_budget: 200_000 }
    }
}

pub type ColoredOrthoCount = Reduction2<ColoredRdReporter>;

/// `(1 ± 2ε)` colored box counting for `ε <= 1/2`.
pub fn build_colored_orthocount(
    points: &[ColoredPointD],
    dim: usize,
    eps: f64,
    cfg: &OrthoRdConfig,
) -> Result<ColoredOrthoCount> {
    let inst = Instance::Ortho { dim, points: points.to_vec() };
    let profile = ColorProfile::build(&inst, enumerate_queries(&inst)?.limit(cfg.verify_budget, cfg.reduction.seed))?;
    let factory = |i: &Instance| match i {
        Instance::Ortho { dim, points } => ColoredRdReporter::build(points, *dim),
        other => Err(CrcError::SettingUnsupported(other.setting().to_string())),
    };
    Reduction2::build(&inst, eps, &factory, &profile, &cfg.reduction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ApproxAnswer;
    use crate::oracle::{exact_colored_count, exact_colors};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn points(n: usize, d: usize, u: i64, colors: u32, seed: u64) -> Vec<ColoredPointD> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| ColoredPointD::new((0..d).map(|_| rng.gen_range(0..u)).collect(), rng.gen_range(0..colors)))
            .collect()
    }

    #[test]
    fn one_color_one_test() {
        let pts = points(30, 2, 10, 1, 0);
        let r = ColoredRdReporter::build(&pts, 2).unwrap();
        let (c, tests) = r.report_counted(&[0, 0], &[9, 9], 5).unwrap();
        assert_eq!((c, tests), (vec![ColorId(0)], 1));
        assert!(r.report(&[20, 20], &[30, 30], 5).unwrap().is_empty());
        assert!(r.report(&[0], &[1], 5).is_err());
    }

    #[test]
    fn reports_match_oracle_with_bounded_tests() {
        let pts = points(500, 3, 30, 60, 7);
        let inst = Instance::Ortho { dim: 3, points: pts.clone() };
        let r = ColoredRdReporter::build(&pts, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for i in 0..400 {
            let lo: Vec<i64> = (0..3).map(|_| rng.gen_range(-2..30)).collect();
            let hi: Vec<i64> = lo.iter().map(|l| l + rng.gen_range(0..25)).collect();
            let q = Query::Box { lo: lo.clone(), hi: hi.clone() };
            let truth = exact_colors(&inst, &q).unwrap();
            let cap = i % 70;
            let (mut got, tests) = r.report_counted(&lo, &hi, cap).unwrap();
            assert!(tests <= 2 * (cap + 1) * r.height() + 1);
            got.sort_unstable();
            if truth.len() <= cap {
                assert_eq!(got, truth);
            } else {
                assert_eq!(got.len(), cap + 1);
                assert!(got.iter().all(|c| truth.binary_search(c).is_ok()));
            }
        }
    }

    #[test]
    fn counting_within_composed_band() {
        let pts = points(400, 2, 12, 150, 3);
        let inst = Instance::Ortho { dim: 2, points: pts.clone() };
        let s = build_colored_orthocount(&pts, 2, 0.5, &OrthoRdConfig::default()).unwrap();
        assert!(s.num_decisions() > 0);
        assert_eq!(s.query(&Query::Box { lo: vec![50, 50], hi: vec![60, 60] }).unwrap(), ApproxAnswer::exact(0));
        for q in enumerate_queries(&inst).unwrap().iter() {
            let k = exact_colored_count(&inst, &q).unwrap() as u64;
            let a = s.query(&q).unwrap();
            assert!(a.holds_for(k), "k {k} got {}", a.value);
        }
    }
}
