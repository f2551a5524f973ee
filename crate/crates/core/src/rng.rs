//! Deterministic seed streams for sampled builds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default number of sampling attempts before a build gives up.
pub const DEFAULT_ATTEMPT_CAP: usize = 64;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for one `(stream, attempt)` pair under a base seed.
pub fn stream_rng(seed: u64, stream: u64, attempt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix(splitmix(seed ^ splitmix(stream)) ^ attempt))
}

/// Indices `0..n` kept independently with probability `p`.
pub fn bernoulli_subset(n: usize, p: f64, rng: &mut impl Rng) -> Vec<usize> {
    if p >= 1.0 {
        return (0..n).collect();
    }
    (0..n).filter(|_| rng.gen_bool(p.max(0.0))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<usize> = bernoulli_subset(100, 0.5, &mut stream_rng(1, 2, 3));
        let b: Vec<usize> = bernoulli_subset(100, 0.5, &mut stream_rng(1, 2, 3));
        let c: Vec<usize> = bernoulli_subset(100, 0.5, &mut stream_rng(1, 2, 4));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(bernoulli_subset(5, 1.0, &mut stream_rng(0, 0, 0)), vec![0, 1, 2, 3, 4]);
    }
}
