//! Generic reductions from colored reporting to approximate colored counting.
//!
//! [`Reduction1`] combines a capped reporter with a constant-factor
//! approximator and a ladder of refinement structures. [`Reduction2`] needs
//! only the reporter and binary-searches a ladder of decision structures.
//! Every sample is verified against a [`ColorProfile`] of the query universe.

pub mod decision;
pub mod profile;
pub mod reduction1;
pub mod reduction2;
pub mod refinement;

pub use decision::{Decision, Verdict};
pub use profile::{sample_colors, ColorProfile, ColorSet};
pub use reduction1::{Reduction1, Route1};
pub use reduction2::{Reduction2, Trace2};
pub use refinement::Refinement;

use crate::error::Result;
use crate::geom::ColorId;
use crate::oracle::{Instance, Query};
use crate::rng::DEFAULT_ATTEMPT_CAP;

/// Capped colored reporting.
pub trait ColoredReporter {
    /// Distinct colors present in `q`: all of them if there are at most
    /// `cap`, otherwise exactly `cap + 1` of them.
    fn report_colors(&self, q: &Query, cap: usize) -> Result<Vec<ColorId>>;

    fn space_units(&self) -> usize;
}

/// Constant-factor colored counting in lower-bound form.
pub trait CApproximator {
    /// The factor `C`: answers `z` satisfy `k ∈ [z, C·z]`.
    fn factor(&self) -> f64;

    fn capprox(&self, q: &Query) -> Result<f64>;

    fn space_units(&self) -> usize;
}

/// Builds a reporter over a (color-restricted) instance.
pub trait ReporterFactory<R> {
    fn build(&self, inst: &Instance) -> Result<R>;
}

impl<R, F: Fn(&Instance) -> Result<R>> ReporterFactory<R> for F {
    fn build(&self, inst: &Instance) -> Result<R> {
        self(inst)
    }
}

#[derive(Clone, Debug)]
pub struct ReductionConfig {
    /// Scale of the exact-answer threshold `c1·ε⁻²·ln n`.
    pub c1: f64,
    pub attempt_cap: usize,
    pub seed: u64,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        Self { c1: 2.0, attempt_cap: DEFAULT_ATTEMPT_CAP, seed: 0 }
    }
}

/// `c1·ε⁻²·ln n`, with `n` floored at 2.
pub fn floor_k(c1: f64, eps: f64, n: usize) -> f64 {
    c1 * (n.max(2) as f64).ln() / (eps * eps)
}

/// Per-level build record.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelStats {
    pub z: f64,
    pub m: f64,
    pub attempts: usize,
    /// Objects whose color was sampled.
    pub n_r: usize,
}
