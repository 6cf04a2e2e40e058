//! Brute-force ground truth for small instances: exact label probabilities
//! by exhaustive k-subset enumeration, exact region probabilities for the
//! subsample-space partition, and randomized-attack falsification of
//! certified sizes.

use num::{BigInt, One, Zero};

use crate::certify::{binom_int, AttackModel, Rational};
use crate::classifier::Classifier;
use crate::error::{Error, Result};
use crate::pointcloud::{perturbation_size, Point, PointCloud};
use crate::sampling::{stream_seed, SplitMix64};

/// Enumeration guard: instances with more than this many k-subsets are
/// rejected rather than ground through.
pub const ORACLE_LIMIT: u64 = 1_000_000;

/// C(n, k) if it fits in u64, else None. Zero when k > n.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

fn guard_instance(n: usize, k: usize) -> Result<u64> {
    if k > n {
        return Err(Error::SubsampleTooLarge { k, n });
    }
    match binomial_u64(n as u64, k as u64) {
        Some(count) if count <= ORACLE_LIMIT => Ok(count),
        _ => Err(Error::OracleTooLarge {
            n,
            k,
            limit: ORACLE_LIMIT,
        }),
    }
}

/// Streams the k-subsets of {0, .., n-1} in lexicographic order without
/// materializing them; `next` yields the same in-place buffer each time.
pub struct KSubsets {
    indices: Vec<usize>,
    n: usize,
    started: bool,
    done: bool,
}

impl KSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            indices: (0..k).collect(),
            n,
            started: false,
            done: k > n,
        }
    }

    // lends its internal buffer, so this cannot be std's Iterator::next
    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.indices);
        }
        let k = self.indices.len();
        // find the rightmost index that can still advance
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.indices[i] < self.n - k + i {
                break;
            }
        }
        self.indices[i] += 1;
        for j in (i + 1)..k {
            self.indices[j] = self.indices[j - 1] + 1;
        }
        Some(&self.indices)
    }
}

/// Exact per-label probabilities of a classifier over the uniform k-subset
/// distribution; every probability has denominator C(n, k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactLabelDistribution {
    probs: Vec<Rational>,
}

impl ExactLabelDistribution {
    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    /// Label with the largest probability, ties to the smaller index.
    pub fn top_label(&self) -> usize {
        let mut best = 0;
        for (i, p) in self.probs.iter().enumerate() {
            if p > &self.probs[best] {
                best = i;
            }
        }
        best
    }

    /// Largest probability among labels other than `skip`.
    pub fn runner_up_prob(&self, skip: usize) -> Rational {
        self.probs
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, p)| p.clone())
            .max()
            .expect("at least two classes")
    }
}

/// Classifies every k-subset of `cloud` and returns the exact label
/// distribution. Errors if C(n,k) exceeds [`ORACLE_LIMIT`].
pub fn exact_label_probs(
    model: &dyn Classifier,
    cloud: &PointCloud,
    k: usize,
) -> Result<ExactLabelDistribution> {
    let n = cloud.len();
    let total = guard_instance(n, k)?;
    let mut counts = vec![0u64; model.num_classes()];
    let points = cloud.points();
    let mut subsets = KSubsets::new(n, k);
    while let Some(subset) = subsets.next() {
        // indices ascend, so the subset is already in canonical order
        let sub_points: Vec<Point> = subset.iter().map(|&i| points[i].clone()).collect();
        let sub = PointCloud::from_canonical(sub_points, cloud.dim());
        let label = model.classify(&sub)?;
        if label >= counts.len() {
            return Err(Error::InvalidParameter(format!(
                "label {label} out of range for {} classes",
                counts.len()
            )));
        }
        counts[label] += 1;
    }
    let probs = counts
        .into_iter()
        .map(|c| Rational::new(BigInt::from(c), BigInt::from(total)))
        .collect();
    Ok(ExactLabelDistribution { probs })
}

/// The smoothed prediction computed exactly: argmax of the exact label
/// probabilities, ties to the smaller index.
pub fn exact_predict(model: &dyn Classifier, cloud: &PointCloud, k: usize) -> Result<usize> {
    Ok(exact_label_probs(model, cloud, k)?.top_label())
}

/// Exact masses of the subsample-space partition for original size n,
/// attacked size t, and s shared points. W subsamples the original cloud,
/// Z the attacked one; the space splits into subsets drawn entirely from
/// the shared points, subsets touching original-only points, and subsets
/// touching attacked-only points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionProbs {
    pub w_shared: Rational,
    pub w_original_only: Rational,
    pub w_attacked_only: Rational,
    pub z_shared: Rational,
    pub z_attacked_only: Rational,
    pub z_original_only: Rational,
}

pub fn region_probs(n: usize, t: usize, s: usize, k: usize) -> Result<RegionProbs> {
    if s > n.min(t) {
        return Err(Error::InvalidParameter(format!(
            "shared count s={s} exceeds min(n={n}, t={t})"
        )));
    }
    if k == 0 || k > n || k > t {
        return Err(Error::InvalidParameter(format!(
            "subsample size k={k} must satisfy 1 <= k <= min(n={n}, t={t})"
        )));
    }
    let c_s = binom_int(s as i128, k as u64);
    let w_shared = Rational::new(c_s.clone(), binom_int(n as i128, k as u64));
    let z_shared = Rational::new(c_s, binom_int(t as i128, k as u64));
    Ok(RegionProbs {
        w_original_only: Rational::one() - &w_shared,
        w_shared,
        w_attacked_only: Rational::zero(),
        z_attacked_only: Rational::one() - &z_shared,
        z_shared,
        z_original_only: Rational::zero(),
    })
}

fn fresh_points(cloud: &PointCloud, count: usize, offset: &mut u64) -> Vec<Point> {
    // fresh points live strictly outside the bounding box, so membership in
    // the original cloud is impossible without any float-equality subtlety
    let (_, hi) = cloud.bounding_box();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        *offset += 1;
        let mut coords = vec![0.0; cloud.dim()];
        coords[0] = hi[0] + *offset as f64;
        for (i, c) in coords.iter_mut().enumerate().skip(1) {
            *c = hi[i] + 1.0;
        }
        out.push(Point::new(&coords).expect("fresh coordinates are finite"));
    }
    out
}

/// Draws a random attacked cloud at exact perturbation size `r` with the
/// given attack shape: modification keeps the size, addition grows by r,
/// deletion shrinks by r, and perturbation mixes all three. New points are
/// always fresh.
pub fn random_attack(
    cloud: &PointCloud,
    r: u64,
    attack: AttackModel,
    seed: u64,
) -> Result<PointCloud> {
    let n = cloud.len();
    match attack {
        AttackModel::Deletion | AttackModel::Modification if r >= n as u64 => {
            return Err(Error::InvalidParameter(format!(
                "attack size r={r} must stay below n={n} for {attack}"
            )));
        }
        _ => {}
    }
    if r == 0 {
        return Ok(cloud.clone());
    }
    let r = r as usize;
    let mut rng = SplitMix64::new(seed);
    // (deleted, modified, added) with max(deleted, added) + modified = r
    let (deleted, modified, added) = match attack {
        AttackModel::Deletion => (r, 0, 0),
        AttackModel::Modification => (0, r, 0),
        AttackModel::Addition => (0, 0, r),
        AttackModel::Perturbation => {
            let modified = rng.next_below((r.min(n - 1) + 1) as u64) as usize;
            let q = r - modified;
            let deleted = if q == 0 {
                0
            } else {
                rng.next_below((q.min(n - 1 - modified) + 1) as u64) as usize
            };
            let added = if deleted == q && q > 0 {
                rng.next_below((q + 1) as u64) as usize
            } else {
                q
            };
            (deleted, modified, added)
        }
    };

    // pick the deleted+modified victims by partial shuffle of the indices
    let victims = deleted + modified;
    let mut indices: Vec<usize> = (0..n).collect();
    for i in 0..victims {
        let j = i + rng.next_below((n - i) as u64) as usize;
        indices.swap(i, j);
    }
    let mut points: Vec<Point> = indices[victims..]
        .iter()
        .map(|&i| cloud.points()[i].clone())
        .collect();
    let mut offset = 0u64;
    points.extend(fresh_points(cloud, modified + added, &mut offset));
    let attacked = PointCloud::new(points)?;
    debug_assert_eq!(
        perturbation_size(cloud, &attacked).unwrap(),
        (deleted.max(added) + modified) as u64
    );
    Ok(attacked)
}

/// Draws `trials` random attacks at every size 1..=r_star and counts how
/// often the exactly-computed smoothed prediction changes. When `r_star`
/// came from the certified-size solver fed with exact label probabilities,
/// the count must be zero.
pub fn falsify(
    model: &dyn Classifier,
    cloud: &PointCloud,
    k: usize,
    attack: AttackModel,
    r_star: u64,
    trials: u64,
    seed: u64,
) -> Result<u64> {
    let n = cloud.len();
    guard_instance(n, k)?;
    guard_instance(n + r_star as usize, k)?;
    let baseline = exact_predict(model, cloud, k)?;
    let mut violations = 0u64;
    for r in 1..=r_star {
        for trial in 0..trials {
            let attacked = random_attack(cloud, r, attack, stream_seed(seed, r * trials + trial))?;
            debug_assert_eq!(perturbation_size(cloud, &attacked)?, r);
            if attacked.len() < k {
                return Err(Error::SubsampleTooLarge {
                    k,
                    n: attacked.len(),
                });
            }
            if exact_predict(model, &attacked, k)? != baseline {
                violations += 1;
            }
        }
    }
    Ok(violations)
}
