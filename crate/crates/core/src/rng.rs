//! The one source of randomness in the crate.
//!
//! State transition is SplitMix64 (add `0x9E3779B97F4A7C15`, then the
//! `mix13` finalizer), seeded directly with the 64-bit seed. Derived draws:
//!
//! * `uniform()`: `(next_u64() >> 11) * 2^-53`, a real in `[0, 1)`;
//! * `below(m)`: `(next_u64() as u128 * m as u128) >> 64`, an integer in `0..m`;
//! * `bernoulli(p)`: `uniform() < p`.
//!
//! These formulas are part of the reproducibility contract: a port that
//! follows them regenerates identical graphs and samples for a given seed.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

#[derive(Debug, Clone)]
pub struct SeededRng(SplitMix64);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self(SplitMix64::seed_from_u64(seed))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    #[inline]
    pub fn below(&mut self, m: usize) -> usize {
        ((self.next_u64() as u128 * m as u128) >> 64) as usize
    }

    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Uniform random `m`-subset of `0..n`, sorted (partial Fisher-Yates).
    pub fn subset_of_size(&mut self, n: usize, m: usize) -> Vec<usize> {
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..m.min(n) {
            let j = i + self.below(n - i);
            pool.swap(i, j);
        }
        pool.truncate(m.min(n));
        pool.sort_unstable();
        pool
    }

    /// Uniform random permutation of `0..n` (Fisher-Yates).
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.below(i + 1);
            perm.swap(i, j);
        }
        perm
    }
}
