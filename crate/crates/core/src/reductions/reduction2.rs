use super::decision::{Decision, Verdict};
use super::profile::ColorProfile;
use super::{floor_k, ColoredReporter, LevelStats, ReductionConfig, ReporterFactory};
use crate::error::{CrcError, Result};
use crate::geom::ApproxAnswer;
use crate::oracle::{Instance, Query};

/// Outcome of the binary search over the decision ladder.
#[derive(Clone, Debug, PartialEq)]
pub enum Trace2 {
    Exact(usize),
    /// Index `i` with `D_i = Ge` and `D_{i+1} = Lt`, where `D_0 = Ge` and
    /// `D_{W+1} = Lt` are implicit.
    Crossover {
        index: usize,
        tau: f64,
    },
}

/// `(1 ± O(ε))` colored counting from a capped reporter alone.
///
/// Decision structures at `z_i = c1·ε⁻²·ln n·(1+ε)^i` are binary-searched for
/// an adjacent `Ge`/`Lt` pair; the answer `z_i` lies in
/// `(k/(1+ε)², k/(1−ε)]`, inside `(1 ± 2ε)k` for `ε <= 1/2`.
#[derive(Clone, Debug)]
pub struct Reduction2<R> {
    reporter: R,
    eps: f64,
    exact_cap: usize,
    zs: Vec<f64>,
    decisions: Vec<Decision<R>>,
}

impl<R: ColoredReporter> Reduction2<R> {
    pub fn build(
        inst: &Instance,
        eps: f64,
        factory: &impl ReporterFactory<R>,
        profile: &ColorProfile,
        cfg: &ReductionConfig,
    ) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(CrcError::BadParams(format!("eps must lie in (0, 1], got {eps}")));
        }
        let eps = eps.min(0.5);
        let fk = floor_k(cfg.c1, eps, inst.len());
        let exact_cap = fk.floor() as usize;
        let colors = inst.num_colors() as f64;
        let reporter = factory.build(inst)?;
        let mut zs = vec![fk];
        let mut decisions = Vec::new();
        while *zs.last().unwrap() < colors {
            let z = zs.last().unwrap() * (1.0 + eps);
            let stream = 0x2d0 + decisions.len() as u64;
            decisions.push(Decision::build(
                inst,
                profile,
                factory,
                z,
                eps,
                fk,
                exact_cap,
                cfg.seed,
                stream,
                cfg.attempt_cap,
            )?);
            zs.push(z);
        }
        Ok(Self { reporter, eps, exact_cap, zs, decisions })
    }

    /// The accuracy actually used, `min(ε, 1/2)`.
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn exact_cap(&self) -> usize {
        self.exact_cap
    }

    pub fn num_decisions(&self) -> usize {
        self.decisions.len()
    }

    pub fn levels(&self) -> impl Iterator<Item = &LevelStats> {
        self.decisions.iter().map(Decision::stats)
    }

    /// Raw verdicts of every decision structure, for inspection.
    pub fn verdicts(&self, q: &Query) -> Result<Vec<Verdict>> {
        self.decisions.iter().map(|d| d.query(q)).collect()
    }

    pub fn trace(&self, q: &Query) -> Result<Trace2> {
        let seen = self.reporter.report_colors(q, self.exact_cap)?.len();
        if seen <= self.exact_cap {
            return Ok(Trace2::Exact(seen));
        }
        let (mut lo, mut hi) = (0usize, self.decisions.len() + 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            match self.decisions[mid - 1].query(q)? {
                Verdict::Ge => lo = mid,
                Verdict::Lt => hi = mid,
            }
        }
        Ok(Trace2::Crossover { index: lo, tau: self.zs[lo] })
    }

    /// The answer, tagged with the composed accuracy `2·min(ε, 1/2)`.
    pub fn query(&self, q: &Query) -> Result<ApproxAnswer> {
        Ok(match self.trace(q)? {
            Trace2::Exact(k) => ApproxAnswer::exact(k as u64),
            Trace2::Crossover { tau, .. } => ApproxAnswer::eps(tau, 2.0 * self.eps),
        })
    }

    pub fn space_units(&self) -> usize {
        self.reporter.space_units() + self.decisions.iter().map(Decision::space_units).sum::<usize>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ColoredInterval;
    use crate::oracle::enumerate_queries;
    use crate::reductions::reduction1::tests::{overlapping_intervals, ScanReporter};

    #[test]
    fn composed_band_and_crossover() {
        let inst = overlapping_intervals(800);
        let profile = ColorProfile::build(&inst, enumerate_queries(&inst).unwrap()).unwrap();
        let factory = |i: &Instance| Ok(ScanReporter(i.clone()));
        let red = Reduction2::build(&inst, 0.5, &factory, &profile, &ReductionConfig::default()).unwrap();
        assert!(red.num_decisions() > 2);
        assert!(red.levels().all(|l| l.m < 1.0));
        for i in 0..profile.len() {
            let q = profile.query(i);
            let k = profile.k(i) as u64;
            let a = red.query(&q).unwrap();
            assert!(a.holds_for(k), "k {k} answer {}", a.value);
            if let Trace2::Crossover { index, .. } = red.trace(&q).unwrap() {
                let v = red.verdicts(&q).unwrap();
                assert!(index == 0 || v[index - 1] == Verdict::Ge);
                assert!(index == v.len() || v[index] == Verdict::Lt);
            } else {
                assert!(k as usize <= red.exact_cap());
            }
        }
    }

    #[test]
    fn single_color_is_always_exact() {
        let inst = Instance::Intervals((0..100).map(|i| ColoredInterval::new(i, i + 50, 0)).collect());
        let profile = ColorProfile::build(&inst, enumerate_queries(&inst).unwrap()).unwrap();
        let factory = |i: &Instance| Ok(ScanReporter(i.clone()));
        let red = Reduction2::build(&inst, 0.5, &factory, &profile, &ReductionConfig::default()).unwrap();
        assert_eq!(red.num_decisions(), 0);
        assert_eq!(red.query(&Query::Point1(60)).unwrap(), ApproxAnswer::exact(1));
    }
}
