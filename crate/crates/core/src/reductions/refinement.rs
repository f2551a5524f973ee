use super::profile::{sample_colors, ColorProfile, ColorSet};
use super::{ColoredReporter, LevelStats, ReporterFactory};
use crate::error::{CrcError, Result};
use crate::oracle::{Instance, Query};
use crate::rng::stream_rng;

/// Whether `sample` certifies a refinement at scale `z`.
///
/// Every profiled query with `k ∈ [z, C·z]` and `k > floor_k` must satisfy
/// `|k − |R∩q|/M| ≤ εk`, and at most `10·n·M` objects may carry a sampled color.
pub fn verify_refinement_sample(
    profile: &ColorProfile,
    sample: &ColorSet,
    eps: f64,
    z: f64,
    big_c: f64,
    m: f64,
    floor_k: f64,
) -> bool {
    if profile.objects_in(sample) as f64 > 10.0 * profile.num_objects() as f64 * m {
        return false;
    }
    (0..profile.len()).all(|i| {
        let k = profile.k(i) as f64;
        if k < z || k > big_c * z || k <= floor_k {
            return true;
        }
        (k - profile.count_in(i, sample) as f64 / m).abs() <= eps * k + 1e-9
    })
}

/// `(1 ± ε)` estimate for queries known to have `k ∈ [z, C·z]`.
#[derive(Clone, Debug)]
pub struct Refinement<R> {
    z: f64,
    m: f64,
    cap: usize,
    /// `None` when `M = 1`: the caller's full reporter is used.
    reporter: Option<R>,
    stats: LevelStats,
}

impl<R: ColoredReporter> Refinement<R> {
    /// Builds the structure at scale `z`; `stream` separates the random
    /// streams of different levels.
    #[allow(clippy::too_many_arguments)]
    pub fn build(
        inst: &Instance,
        profile: &ColorProfile,
        factory: &impl ReporterFactory<R>,
        z: f64,
        eps: f64,
        big_c: f64,
        floor_k: f64,
        seed: u64,
        stream: u64,
        attempt_cap: usize,
    ) -> Result<Self> {
        let m = (floor_k / z).min(1.0);
        let cap = ((1.0 + eps) * big_c * z * m).ceil() as usize;
        if m >= 1.0 {
            let stats = LevelStats { z, m, attempts: 0, n_r: inst.len() };
            return Ok(Self { z, m, cap, reporter: None, stats });
        }
        for attempt in 0..attempt_cap {
            let sample = sample_colors(profile.num_colors(), m, &mut stream_rng(seed, stream, attempt as u64));
            if verify_refinement_sample(profile, &sample, eps, z, big_c, m, floor_k) {
                let restricted = inst.restrict_colors(|c| sample.contains(c));
                let stats = LevelStats { z, m, attempts: attempt + 1, n_r: restricted.len() };
                let reporter = Some(factory.build(&restricted)?);
                return Ok(Self { z, m, cap, reporter, stats });
            }
        }
        Err(CrcError::BuildFailedSuitability { structure: "refinement", attempts: attempt_cap })
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn stats(&self) -> &LevelStats {
        &self.stats
    }

    /// `|R∩q| / M`, with `full` standing in for the sample when `M = 1`.
    pub fn query(&self, full: &R, q: &Query) -> Result<f64> {
        let rep = self.reporter.as_ref().unwrap_or(full);
        Ok(rep.report_colors(q, self.cap)?.len() as f64 / self.m)
    }

    pub fn space_units(&self) -> usize {
        self.reporter.as_ref().map_or(0, ColoredReporter::space_units)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ColoredInterval;
    use crate::oracle::enumerate_queries;

    fn stairs(n: i64) -> Instance {
        Instance::Intervals((0..n).map(|i| ColoredInterval::new(i, n + i, i as u32)).collect())
    }

    #[test]
    fn full_sample_always_verifies() {
        let inst = stairs(50);
        let p = ColorProfile::build(&inst, enumerate_queries(&inst).unwrap()).unwrap();
        assert!(verify_refinement_sample(&p, &ColorSet::full(50), 0.1, 5.0, 4.0, 1.0, 0.0));
    }

    #[test]
    fn empty_sample_fails_when_in_scope() {
        let inst = stairs(50);
        let p = ColorProfile::build(&inst, enumerate_queries(&inst).unwrap()).unwrap();
        assert!(!verify_refinement_sample(&p, &ColorSet::empty(50), 0.5, 10.0, 4.0, 0.5, 3.0));
    }
}
