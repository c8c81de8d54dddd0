use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Multiplier used to split a base seed into per-repeat seeds.
pub const REPEAT_SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// A seeded, reproducible random stream.
///
/// Backed by ChaCha8, which exposes 2⁶⁴ independent sub-streams per seed;
/// [`RngStream::substream`] selects one of them.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Seed for repeat `r` of an experiment: `base ^ (r · stride)`.
    pub fn repeat_seed(base_seed: u64, repeat: usize) -> u64 {
        base_seed ^ (repeat as u64).wrapping_mul(REPEAT_SEED_STRIDE)
    }

    pub fn for_repeat(base_seed: u64, repeat: usize) -> Self {
        Self::new(Self::repeat_seed(base_seed, repeat))
    }

    /// An independent stream determined by `(self.seed(), index)`.
    pub fn substream(&self, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        Self {
            seed: self.seed,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform on `(0, 1]`, safe to take logarithms of.
    pub fn uniform_open0(&mut self) -> f64 {
        1.0 - self.rng.random::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        (lo + (hi - lo) * self.uniform()).clamp(lo, hi)
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniformly random permutation of `0..n` (Fisher–Yates).
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.rng.random_range(0..=i);
            p.swap(i, j);
        }
        p
    }
}

/// One standard-normal variate.
pub fn normal_sample(rng: &mut RngStream) -> f64 {
    rng.normal()
}
