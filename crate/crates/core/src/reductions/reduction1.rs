use super::profile::ColorProfile;
use super::refinement::Refinement;
use super::{floor_k, CApproximator, ColoredReporter, LevelStats, ReductionConfig, ReporterFactory};
use crate::error::{CrcError, Result};
use crate::geom::ApproxAnswer;
use crate::oracle::{Instance, Query};

/// How a query was answered.
#[derive(Clone, Debug, PartialEq)]
pub enum Route1 {
    Exact(usize),
    Refined { level: usize, z: f64, ka: f64, tau: f64 },
}

/// `(1 ± ε)` colored counting from a capped reporter and a `√C`-approximator.
///
/// Counts up to `⌊c1·ε⁻²·ln n⌋` are reported exactly. Larger ones are
/// bracketed by the approximator and refined at the level
/// `z_i = (√C)^i · c1·ε⁻²·ln n` whose bracket `[z_i, C·z_i]` holds them.
#[derive(Clone, Debug)]
pub struct Reduction1<R, A> {
    reporter: R,
    approx: A,
    eps: f64,
    floor_k: f64,
    exact_cap: usize,
    big_c: f64,
    levels: Vec<Refinement<R>>,
}

impl<R: ColoredReporter, A: CApproximator> Reduction1<R, A> {
    pub fn build(
        inst: &Instance,
        eps: f64,
        factory: &impl ReporterFactory<R>,
        approx: A,
        profile: &ColorProfile,
        cfg: &ReductionConfig,
    ) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(CrcError::BadParams(format!("eps must lie in (0, 1], got {eps}")));
        }
        let root_c = approx.factor();
        if root_c <= 1.0 {
            return Err(CrcError::BadParams(format!("approximation factor {root_c} must exceed 1")));
        }
        let big_c = root_c * root_c;
        let fk = floor_k(cfg.c1, eps, inst.len());
        let reporter = factory.build(inst)?;
        let mut levels = Vec::new();
        let colors = inst.num_colors() as f64;
        let mut z = fk;
        loop {
            let stream = 0x1e0 + levels.len() as u64;
            levels.push(Refinement::build(
                inst,
                profile,
                factory,
                z,
                eps,
                big_c,
                fk,
                cfg.seed,
                stream,
                cfg.attempt_cap,
            )?);
            z *= root_c;
            if z > colors {
                break;
            }
        }
        Ok(Self { reporter, approx, eps, floor_k: fk, exact_cap: fk.floor() as usize, big_c, levels })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn floor_k(&self) -> f64 {
        self.floor_k
    }

    /// Largest count answered exactly.
    pub fn exact_cap(&self) -> usize {
        self.exact_cap
    }

    /// The composite factor `C` bracketing routed queries.
    pub fn big_c(&self) -> f64 {
        self.big_c
    }

    pub fn levels(&self) -> impl Iterator<Item = &LevelStats> {
        self.levels.iter().map(Refinement::stats)
    }

    pub fn route(&self, q: &Query) -> Result<Route1> {
        let seen = self.reporter.report_colors(q, self.exact_cap)?.len();
        if seen <= self.exact_cap {
            return Ok(Route1::Exact(seen));
        }
        let ka = self.approx.capprox(q)?;
        let level = self.levels.iter().rposition(|l| l.z() <= ka).unwrap_or(0);
        let r = &self.levels[level];
        let tau = r.query(&self.reporter, q)?;
        Ok(Route1::Refined { level, z: r.z(), ka, tau })
    }

    pub fn query(&self, q: &Query) -> Result<ApproxAnswer> {
        Ok(match self.route(q)? {
            Route1::Exact(k) => ApproxAnswer::exact(k as u64),
            Route1::Refined { tau, .. } => ApproxAnswer::eps(tau, self.eps),
        })
    }

    pub fn space_units(&self) -> usize {
        self.reporter.space_units()
            + self.approx.space_units()
            + self.levels.iter().map(Refinement::space_units).sum::<usize>()
    }
}
