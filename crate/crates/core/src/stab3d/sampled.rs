use super::report::FiveSidedIndex;
use super::tree::{RecursionTree, TreeConfig};
use crate::error::{CrcError, Result};
use crate::geom::{ApproxAnswer, Rect5};
use crate::oracle::{enumerate_queries, stab5s_count_grid, Group, Instance};
use crate::rng::{bernoulli_subset, stream_rng, DEFAULT_ATTEMPT_CAP};

/// Universes up to this many queries are verified with a full count grid.
const GRID_LIMIT: usize = 1 << 24;

#[derive(Clone, Debug)]
pub struct SampledConfig {
    /// Multiplier of the exact-answer threshold.
    pub c: f64,
    /// Inverse sampling rate; defaults to `max(2, ⌈log₂ log₂ n⌉)`.
    pub delta: Option<usize>,
    /// Allowed relative deviation of the scaled sample count; defaults to `ε/4`.
    pub sample_eps: Option<f64>,
    /// Accuracy of the tree over the sample; defaults to `ε/4`.
    pub tree_eps: Option<f64>,
    pub attempt_cap: usize,
    pub seed: u64,
    /// Queries checked per attempt when the universe is too large for a grid.
    pub verify_budget: usize,
    pub tree: TreeConfig,
}

impl Default for SampledConfig {
    fn default() -> Self {
        Self {
            c: 4.0,
            delta: None,
            sample_eps: None,
            tree_eps: None,
            attempt_cap: DEFAULT_ATTEMPT_CAP,
            seed: 0,
            verify_budget: 200_000,
            tree: TreeConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SampleStats {
    pub attempts: usize,
    pub sample_size: usize,
    /// Universe queries with `k` above the exact threshold.
    pub checked: usize,
    /// Whether every query of the universe was checked.
    pub exhaustive: bool,
}

/// Verified-sample `(1 ± ε)` counter for 5-sided stabbing.
///
/// Counts up to `K` are exact via capped reporting; larger ones are `δ` times
/// a recursion-tree estimate over a `1/δ` sample, both with accuracy `ε/4`
/// unless configured otherwise.
#[derive(Clone, Debug)]
pub struct SampledStabber {
    full: FiveSidedIndex,
    sampled: Option<RecursionTree>,
    threshold: usize,
    delta: usize,
    eps: f64,
    stats: SampleStats,
}

fn default_delta(n: usize) -> usize {
    let ll = (n.max(2) as f64).log2().log2();
    (ll.ceil() as usize).max(2)
}

impl SampledStabber {
    pub fn build(rects: &[Rect5], eps: f64, cfg: &SampledConfig) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(CrcError::BadParams(format!("eps must lie in (0, 1], got {eps}")));
        }
        let n = rects.len();
        let delta = cfg.delta.unwrap_or_else(|| default_delta(n)).max(1);
        let eps_s = cfg.sample_eps.unwrap_or(eps / 4.0);
        let eps_t = cfg.tree_eps.unwrap_or(eps / 4.0);
        // Sample within (1 ± eps_s) and tree within [1/(1+eps_t), 1] must compose to (1 ± eps).
        if !(eps_s > 0.0 && eps_t > 0.0 && eps_s <= eps && (1.0 - eps_s) / (1.0 + eps_t) >= 1.0 - eps - 1e-12) {
            return Err(CrcError::BadParams(format!(
                "sample accuracy {eps_s} and tree accuracy {eps_t} do not compose to {eps}"
            )));
        }
        let threshold = (cfg.c * (n.max(2) as f64).ln() * delta as f64 / (eps_s * eps_s)).ceil() as usize;
        let full = FiveSidedIndex::build(rects, false);
        let mut stats = SampleStats::default();
        let sampled = if threshold >= n {
            None
        } else {
            let members = Self::verified_sample(rects, eps_s, delta, threshold, cfg, &mut stats)?;
            let sample: Vec<Rect5> = members.iter().map(|&i| rects[i]).collect();
            stats.sample_size = sample.len();
            Some(RecursionTree::build(&sample, eps_t, &cfg.tree)?)
        };
        Ok(Self { full, sampled, threshold, delta, eps, stats })
    }

    fn verified_sample(
        rects: &[Rect5],
        eps_s: f64,
        delta: usize,
        threshold: usize,
        cfg: &SampledConfig,
        stats: &mut SampleStats,
    ) -> Result<Vec<usize>> {
        let inst = Instance::Stab5s(rects.to_vec());
        let universe = enumerate_queries(&inst)?;
        let axes: Vec<Vec<i64>> = universe
            .groups
            .iter()
            .map(|g| match g {
                Group::Single(v) => v.clone(),
                Group::Pairs(_) => unreachable!("stabbing universes are products of single axes"),
            })
            .collect();
        let exhaustive = universe.full_len() <= GRID_LIMIT;
        stats.exhaustive = exhaustive;
        let queries: Vec<[i64; 3]>;
        let full_counts: Vec<u32>;
        if exhaustive {
            queries = Vec::new();
            full_counts = stab5s_count_grid(rects, &axes[0], &axes[1], &axes[2]);
        } else {
            let index = FiveSidedIndex::build(rects, true);
            let u = universe.limit(cfg.verify_budget, cfg.seed);
            queries = u
                .iter()
                .map(|q| match q {
                    crate::oracle::Query::Point3(p) => p,
                    _ => unreachable!(),
                })
                .collect();
            full_counts = queries.iter().map(|q| index.count(q) as u32).collect();
        }
        let suitable = |sample: &[Rect5], checked: &mut usize| -> bool {
            let counts: Vec<u32> = if exhaustive {
                stab5s_count_grid(sample, &axes[0], &axes[1], &axes[2])
            } else {
                let index = FiveSidedIndex::build(sample, true);
                queries.iter().map(|q| index.count(q) as u32).collect()
            };
            *checked = 0;
            for (&k, &kr) in full_counts.iter().zip(&counts) {
                if (k as usize) > threshold {
                    *checked += 1;
                    let k = k as f64;
                    if (k - delta as f64 * kr as f64).abs() > eps_s * k + 1e-9 {
                        return false;
                    }
                }
            }
            true
        };
        for attempt in 0..cfg.attempt_cap {
            let members =
                bernoulli_subset(rects.len(), 1.0 / delta as f64, &mut stream_rng(cfg.seed, 0x5a3d, attempt as u64));
            let sample: Vec<Rect5> = members.iter().map(|&i| rects[i]).collect();
            let mut checked = 0;
            if suitable(&sample, &mut checked) {
                stats.attempts = attempt + 1;
                stats.checked = checked;
                return Ok(members);
            }
        }
        Err(CrcError::BuildFailedSuitability { structure: "stab3d sampled stabber", attempts: cfg.attempt_cap })
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn stats(&self) -> &SampleStats {
        &self.stats
    }

    pub fn sampled_tree(&self) -> Option<&RecursionTree> {
        self.sampled.as_ref()
    }

    pub fn query(&self, q: &[i64; 3]) -> ApproxAnswer {
        let hits = self.full.report_capped(q, self.threshold);
        match &self.sampled {
            Some(tree) if hits.len() > self.threshold => {
                ApproxAnswer::eps((self.delta as u64 * tree.count(q)) as f64, self.eps)
            }
            _ => ApproxAnswer::exact(hits.len() as u64),
        }
    }

    pub fn space_units(&self) -> usize {
        self.full.space_units() + self.sampled.as_ref().map_or(0, RecursionTree::space_units)
    }
}
