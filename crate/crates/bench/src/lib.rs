//! Fixed benchmark inputs shared by the criterion benches.

use crc_core::dataset::{generate, Distribution, GenSpec};
use crc_core::oracle::enumerate_queries;
use crc_core::{Instance, Query, Setting};

/// A uniform instance on a grid of side `grid`, with `n / 2` colors.
pub fn fixture(setting: Setting, n: usize, grid: i64) -> Instance {
    let mut spec = GenSpec::new(setting, n, (n as u32 / 2).max(1), Distribution::Uniform, 42);
    spec.grid_u = grid;
    generate(&spec).expect("valid fixture spec")
}

/// Up to `count` queries drawn from the instance's universe.
pub fn sample_queries(inst: &Instance, count: usize) -> Vec<Query> {
    enumerate_queries(inst).expect("supported setting").limit(count, 7).iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_stable() {
        let a = fixture(Setting::Range3s2d, 100, 32);
        assert_eq!(a, fixture(Setting::Range3s2d, 100, 32));
        assert_eq!(sample_queries(&a, 50).len(), 50);
    }
}
