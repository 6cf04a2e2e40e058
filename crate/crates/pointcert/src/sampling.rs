//! Uniform subsampling without replacement, deterministic under a master seed.
//!
//! Randomness comes from a splitmix64 generator. Each subsample in a batch
//! runs on its own stream whose seed is derived from `(master_seed, index)`
//! by [`stream_seed`], so batches are reproducible bit-for-bit regardless of
//! evaluation order or worker count.
//!
//! Stream-seed derivation: the 128-bit pair `(master_seed, index)` is mixed
//! as `mix64(mix64(master_seed) ^ index * 0x9E3779B97F4A7C15)`, where
//! `mix64` is the splitmix64 finalizer. For a fixed master seed the map
//! `index -> seed` is a composition of bijections on u64, so distinct
//! streams never collide.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pointcloud::PointCloud;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 finalizer; a bijection on u64.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the `index`-th stream under `master_seed`. Injective in `index`
/// for any fixed master seed.
#[inline]
pub fn stream_seed(master_seed: u64, index: u64) -> u64 {
    mix64(mix64(master_seed) ^ index.wrapping_mul(GOLDEN_GAMMA))
}

/// Minimal splitmix64 generator. Stable across platforms and releases; the
/// sampled subsets are part of this crate's determinism contract, so we do
/// not delegate to an external RNG whose stream might change.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform draw in `[0, bound)` by rejection; unbiased for any bound.
    #[inline]
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let r = self.next_u64();
            if r >= threshold {
                return r % bound;
            }
        }
    }

    /// Uniform draw in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// A batch request: N subsamples of k points under a master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsamplePlan {
    pub k: usize,
    pub count: usize,
    pub master_seed: u64,
}

impl SubsamplePlan {
    pub fn new(k: usize, count: usize, master_seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "subsample size k must be >= 1".into(),
            ));
        }
        if count == 0 {
            return Err(Error::InvalidParameter(
                "subsample count must be >= 1".into(),
            ));
        }
        Ok(Self {
            k,
            count,
            master_seed,
        })
    }
}

/// Draws one uniform k-subset of `cloud` on the given stream.
///
/// The draw is a partial Fisher-Yates shuffle over the cloud's canonical
/// (coordinate-sorted) point order, so the result depends only on the point
/// set and the stream seed, not on input file order.
pub fn subsample(cloud: &PointCloud, k: usize, stream_seed: u64) -> Result<PointCloud> {
    let n = cloud.len();
    if k > n {
        return Err(Error::SubsampleTooLarge { k, n });
    }
    if k == 0 {
        return Err(Error::InvalidParameter(
            "subsample size k must be >= 1".into(),
        ));
    }
    if n > u32::MAX as usize {
        return Err(Error::InvalidParameter(format!(
            "cloud of {n} points exceeds index range"
        )));
    }
    let mut rng = SplitMix64::new(stream_seed);
    let mut indices: Vec<u32> = (0..n as u32).collect();
    for i in 0..k {
        let j = i + rng.next_below((n - i) as u64) as usize;
        indices.swap(i, j);
    }
    let mut chosen = indices[..k].to_vec();
    chosen.sort_unstable();
    let points = chosen
        .iter()
        .map(|&i| cloud.points()[i as usize].clone())
        .collect();
    Ok(PointCloud::from_canonical(points, cloud.dim()))
}

/// Draws `plan.count` subsamples; the j-th uses stream
/// `stream_seed(plan.master_seed, j)`. Output is identical for any worker
/// count or schedule.
pub fn subsample_batch(cloud: &PointCloud, plan: &SubsamplePlan) -> Result<Vec<PointCloud>> {
    if plan.k > cloud.len() {
        return Err(Error::SubsampleTooLarge {
            k: plan.k,
            n: cloud.len(),
        });
    }
    (0..plan.count)
        .into_par_iter()
        .map(|j| subsample(cloud, plan.k, stream_seed(plan.master_seed, j as u64)))
        .collect()
}
