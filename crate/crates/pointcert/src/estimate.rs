//! Monte-Carlo label-probability estimation: vote counting over classified
//! subsamples and simultaneous Clopper-Pearson bounds.
//!
//! With N classified subsamples and per-label counts N_i, the bound on each
//! label probability is a Beta-distribution quantile:
//!
//! - lower bound for the top label y: the (alpha/c)-quantile of
//!   Beta(N_y, N - N_y + 1);
//! - upper bound for every other label i: the (1 - alpha/c)-quantile of
//!   Beta(N_i, N - N_i + 1), with the zero-count case handled by the
//!   standard exact convention (1 - alpha/c quantile of Beta(1, N), i.e.
//!   1 - (alpha/c)^(1/N)).
//!
//! Splitting the error budget alpha evenly over all c labels makes the c
//! bounds hold simultaneously with confidence at least 1 - alpha.
//!
//! The Beta quantile is computed by bisection on the regularized incomplete
//! beta function (continued-fraction evaluation). Bisection is slower than
//! Newton-style inversion but monotone and free of divergence corner cases;
//! N stays small enough that this is never the bottleneck.

use rayon::prelude::*;

use crate::classifier::Classifier;
use crate::error::{Error, Result};
use crate::pointcloud::PointCloud;

/// Per-label vote counts from N classified subsamples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteCounts {
    counts: Vec<u64>,
    total: u64,
}

impl VoteCounts {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        let total = counts.iter().sum();
        if total == 0 {
            return Err(Error::InvalidParameter("vote total must be >= 1".into()));
        }
        Ok(Self { counts, total })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

/// Classifies every subsample and tallies votes per label. Classification
/// runs in parallel; the tally is order-independent.
pub fn count_votes(model: &dyn Classifier, subsamples: &[PointCloud]) -> Result<VoteCounts> {
    if subsamples.is_empty() {
        return Err(Error::InvalidParameter("no subsamples to classify".into()));
    }
    let c = model.num_classes();
    let labels: Vec<usize> = subsamples
        .par_iter()
        .enumerate()
        .map(|(index, sub)| {
            let label = model.classify(sub).map_err(|e| Error::ClassifyAt {
                index,
                source: Box::new(e),
            })?;
            if label >= c {
                return Err(Error::ClassifyAt {
                    index,
                    source: Box::new(Error::InvalidParameter(format!(
                        "label {label} out of range for {c} classes"
                    ))),
                });
            }
            Ok(label)
        })
        .collect::<Result<_>>()?;
    let mut counts = vec![0u64; c];
    for label in labels {
        counts[label] += 1;
    }
    VoteCounts::new(counts)
}

// Lanczos approximation, g = 7, n = 9. Published coefficients, kept at
// full printed precision.
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 8] = [
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::f64::consts::PI.ln()
            - (std::f64::consts::PI * x).sin().ln()
            - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    #[allow(clippy::excessive_precision)]
    let mut acc = 0.999_999_999_999_809_93;
    for (i, &c) in LANCZOS.iter().enumerate() {
        acc += c / (x + (i + 1) as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Continued fraction for the incomplete beta, modified Lentz method.
fn betainc_cf(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const TINY: f64 = 1e-30;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;

    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let mf = m as f64;
        let m2 = 2.0 * mf;

        let aa = mf * (b - mf) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let aa = -(a + mf) * (qab + mf) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Regularized incomplete beta function I_x(a, b) for a, b > 0 and
/// x in [0, 1].
pub fn reg_inc_beta(x: f64, a: f64, b: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0);
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_prefix = a * x.ln() + b * (1.0 - x).ln() - ln_beta(a, b);
    // switch to the mirrored expansion where the CF converges fast
    if x < (a + 1.0) / (a + b + 2.0) {
        (ln_prefix.exp() / a) * betainc_cf(a, b, x)
    } else {
        1.0 - (ln_prefix.exp() / b) * betainc_cf(b, a, 1.0 - x)
    }
}

/// The tau-th quantile of the Beta(mu, nu) distribution, by bisection on
/// `reg_inc_beta` down to adjacent floats. Monotone in tau.
/// |I(result) - tau| stays within 1e-12 for every vote-bound query this
/// crate issues; for shapes whose density at the quantile exceeds ~1e4
/// (endpoint singularities, extreme skew) the f64 grid itself is coarser
/// than that, and the result is simply the best representable value.
pub fn beta_inv_cdf(tau: f64, mu: f64, nu: f64) -> Result<f64> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "beta quantile level must lie in (0,1), got {tau}"
        )));
    }
    // NaN shape parameters must be rejected here too
    if mu.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
        || nu.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
    {
        return Err(Error::InvalidParameter(format!(
            "beta shape parameters must be positive, got ({mu}, {nu})"
        )));
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if reg_inc_beta(mid, mu, nu) < tau {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // endpoints now straddle the root at adjacent floats; pick the closer one
    let pick = if (reg_inc_beta(lo, mu, nu) - tau).abs() <= (reg_inc_beta(hi, mu, nu) - tau).abs() {
        lo
    } else {
        hi
    };
    Ok(pick)
}

/// Simultaneous bounds on the top and runner-up label probabilities.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ProbabilityBounds {
    /// Top label y (largest count, ties to the smaller index).
    pub top_label: usize,
    /// Runner-up label e (second largest count, ties to the smaller index).
    pub runner_up_label: usize,
    /// Lower confidence bound on the top label probability.
    pub p_top_lower: f64,
    /// Upper confidence bound on every other label probability.
    pub p_runner_up_upper: f64,
    /// Total error budget alpha; all bounds hold together with confidence
    /// at least 1 - alpha.
    pub alpha: f64,
    pub num_classes: usize,
}

/// Computes simultaneous Clopper-Pearson bounds from vote counts, splitting
/// alpha as alpha/c over all c labels. The runner-up upper bound is
/// tightened to `min(max_i p_upper_i, 1 - p_top_lower)`.
pub fn prob_bounds(votes: &VoteCounts, alpha: f64) -> Result<ProbabilityBounds> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0,1), got {alpha}"
        )));
    }
    let counts = votes.counts();
    let c = counts.len();
    if c < 2 {
        return Err(Error::InvalidParameter(
            "probability bounds need at least 2 classes".into(),
        ));
    }
    let n = votes.total();
    let top = argmax(counts);
    let runner_up = argmax_excluding(counts, top);
    let tau = alpha / c as f64;

    let n_y = counts[top];
    debug_assert!(n_y >= 1);
    let p_top_lower = if n_y == n {
        // Beta(tau; N, 1) in closed form
        tau.powf(1.0 / n as f64)
    } else {
        beta_inv_cdf(tau, n_y as f64, (n - n_y + 1) as f64)?
    };

    let mut max_upper = 0.0f64;
    for (i, &n_i) in counts.iter().enumerate() {
        if i == top {
            continue;
        }
        let upper = if n_i == 0 {
            // zero successes: 1 - (alpha/c)-th root convention
            1.0 - tau.powf(1.0 / n as f64)
        } else if n_i == n {
            1.0
        } else {
            beta_inv_cdf(1.0 - tau, n_i as f64, (n - n_i + 1) as f64)?
        };
        max_upper = max_upper.max(upper);
    }
    let p_runner_up_upper = max_upper.min(1.0 - p_top_lower);

    Ok(ProbabilityBounds {
        top_label: top,
        runner_up_label: runner_up,
        p_top_lower,
        p_runner_up_upper,
        alpha,
        num_classes: c,
    })
}

fn argmax(counts: &[u64]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

fn argmax_excluding(counts: &[u64], skip: usize) -> usize {
    let mut best = None;
    for (i, &c) in counts.iter().enumerate() {
        if i == skip {
            continue;
        }
        match best {
            None => best = Some(i),
            Some(b) if c > counts[b] => best = Some(i),
            _ => {}
        }
    }
    best.expect("at least two classes")
}
