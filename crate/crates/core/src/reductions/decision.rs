use super::profile::{sample_colors, ColorProfile, ColorSet};
use super::{ColoredReporter, LevelStats, ReporterFactory};
use crate::error::{CrcError, Result};
use crate::oracle::{Instance, Query};
use crate::rng::stream_rng;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `k >= z`.
    Ge,
    /// `k < z`.
    Lt,
}

/// Whether `sample` certifies a decision at scale `z` with sample threshold
/// `t`: queries with `k < (1−ε)z` must see fewer than `t` sampled colors,
/// queries with `k >= (1+ε)z` at least `t`. Queries with `k <= skip_upto`
/// are answered elsewhere and ignored.
#[allow(clippy::too_many_arguments)]
pub fn verify_decision_sample(
    profile: &ColorProfile,
    sample: &ColorSet,
    eps: f64,
    z: f64,
    t: usize,
    m: f64,
    skip_upto: usize,
) -> bool {
    if profile.objects_in(sample) as f64 > 10.0 * profile.num_objects() as f64 * m {
        return false;
    }
    (0..profile.len()).all(|i| {
        let k = profile.k(i);
        if k as usize <= skip_upto {
            return true;
        }
        let k = k as f64;
        let seen = profile.count_in(i, sample) as usize;
        !(k < (1.0 - eps) * z && seen >= t || k >= (1.0 + eps) * z && seen < t)
    })
}

/// Answers `k >= z` or `k < z`, allowed to err only when `k` is within `(1 ± ε)z`.
#[derive(Clone, Debug)]
pub struct Decision<R> {
    z: f64,
    threshold: usize,
    reporter: R,
    stats: LevelStats,
}

impl<R: ColoredReporter> Decision<R> {
    /// `eps` is clamped to `1/2`; `floor_k = c1·ε⁻²·ln n` sets both the
    /// sampling rate `floor_k / z` and the sample threshold.
    #[allow(clippy::too_many_arguments)]
    pub fn build(
        inst: &Instance,
        profile: &ColorProfile,
        factory: &impl ReporterFactory<R>,
        z: f64,
        eps: f64,
        floor_k: f64,
        skip_upto: usize,
        seed: u64,
        stream: u64,
        attempt_cap: usize,
    ) -> Result<Self> {
        let eps = eps.min(0.5);
        let m = (floor_k / z).min(1.0);
        let threshold = (z * m).ceil().max(1.0) as usize;
        for attempt in 0..attempt_cap {
            let sample = sample_colors(profile.num_colors(), m, &mut stream_rng(seed, stream, attempt as u64));
            if verify_decision_sample(profile, &sample, eps, z, threshold, m, skip_upto) {
                let restricted = inst.restrict_colors(|c| sample.contains(c));
                let stats = LevelStats { z, m, attempts: attempt + 1, n_r: restricted.len() };
                let reporter = factory.build(&restricted)?;
                return Ok(Self { z, threshold, reporter, stats });
            }
        }
        Err(CrcError::BuildFailedSuitability { structure: "decision", attempts: attempt_cap })
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn stats(&self) -> &LevelStats {
        &self.stats
    }

    pub fn query(&self, q: &Query) -> Result<Verdict> {
        let seen = self.reporter.report_colors(q, self.threshold - 1)?.len();
        Ok(if seen >= self.threshold { Verdict::Ge } else { Verdict::Lt })
    }

    pub fn space_units(&self) -> usize {
        self.reporter.space_units()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enumerate_queries;
    use crate::reductions::reduction1::tests::{overlapping_intervals, ScanReporter};

    #[test]
    fn verdicts_outside_the_band() {
        let inst = overlapping_intervals(600);
        let profile = ColorProfile::build(&inst, enumerate_queries(&inst).unwrap()).unwrap();
        let factory = |i: &Instance| Ok(ScanReporter(i.clone()));
        let z = 200.0;
        let d = Decision::build(&inst, &profile, &factory, z, 0.5, 50.0, 0, 7, 1, 64).unwrap();
        assert!(d.stats().m < 1.0);
        for i in 0..profile.len() {
            let k = profile.k(i) as f64;
            let v = d.query(&profile.query(i)).unwrap();
            if k >= 2.0 * z * 0.75 {
                assert_eq!(v, Verdict::Ge);
            }
            if k < 0.5 * z {
                assert_eq!(v, Verdict::Lt);
            }
        }
    }

    #[test]
    fn unit_scale_says_lt_for_empty_queries() {
        let inst = overlapping_intervals(50);
        let profile = ColorProfile::build(&inst, enumerate_queries(&inst).unwrap()).unwrap();
        let factory = |i: &Instance| Ok(ScanReporter(i.clone()));
        let d = Decision::build(&inst, &profile, &factory, 1.0, 0.5, 10.0, 0, 0, 0, 64).unwrap();
        assert_eq!(d.query(&Query::Point1(-100)).unwrap(), Verdict::Lt);
    }
}
