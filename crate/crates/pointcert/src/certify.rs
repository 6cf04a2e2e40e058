//! The exact certification core.
//!
//! Everything here runs in arbitrary-precision rational arithmetic: the
//! certification condition compares sums of binomial-coefficient ratios
//! against probability bounds, C(2048,16) is on the order of 1e40, and the
//! grid rounding must take exact ceilings and floors. Floating bounds enter
//! exactly via their binary (dyadic) representation, so no rounding error
//! exists anywhere in a certification decision.
//!
//! For an n-point cloud with subsample size k, top-label lower bound p and
//! runner-up upper bound q (both integer multiples of 1/C(n,k) after
//! rounding), the certified perturbation size r* is the largest r such that
//!
//! ```text
//!   max over t in [n-r, n+r] of
//!     C(t,k)/C(n,k) - 2*C(max(n,t)-r, k)/C(n,k) + 1 - p + q  <  0
//! ```
//!
//! where t is the attacked cloud's size. Fixing t = n (modification),
//! t = n+r (addition), or t = n-r (deletion) simplifies the constraint to
//! the per-attack forms in [`condition_holds`]. The inequality is strict;
//! a left-hand side of exactly zero does not certify.

use num::integer::binomial;
use num::{BigInt, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::classifier::Classifier;
use crate::error::{Error, Result};
use crate::estimate::{count_votes, prob_bounds, ProbabilityBounds};
use crate::pointcloud::PointCloud;
use crate::sampling::{subsample_batch, SubsamplePlan};

/// Exact rational; all certification arithmetic happens in this type.
pub type Rational = num::BigRational;

/// C(top, k) as a big integer; zero when `top < k` (including negative top).
pub(crate) fn binom_int(top: i128, k: u64) -> BigInt {
    if top < 0 || (top as u128) < k as u128 {
        return BigInt::zero();
    }
    binomial(BigInt::from(top), BigInt::from(k))
}

/// The recurring ratio C(t,k)/C(n,k), exactly.
pub fn binom_ratio(t: u64, k: usize, n: usize) -> Result<Rational> {
    check_nk(n, k)?;
    Ok(Rational::new(
        binom_int(t as i128, k as u64),
        binom_int(n as i128, k as u64),
    ))
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "subsample size k must be >= 1".into(),
        ));
    }
    if k > n {
        return Err(Error::SubsampleTooLarge { k, n });
    }
    Ok(())
}

/// Converts a finite float to the exact rational it denotes.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or(Error::NonFiniteCoordinate)
}

/// Rounds estimated probability bounds onto the 1/C(n,k) grid: the lower
/// bound is rounded up, the upper bound down. Label probabilities are
/// integer multiples of 1/C(n,k), so this tightens both bounds without
/// invalidating them. The floats convert to exact dyadic rationals first,
/// so the ceiling and floor are exact.
pub fn round_bounds(
    p_top_lower: f64,
    p_runner_up_upper: f64,
    n: usize,
    k: usize,
) -> Result<(Rational, Rational)> {
    check_nk(n, k)?;
    for v in [p_top_lower, p_runner_up_upper] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidParameter(format!(
                "probability bound {v} outside [0,1]"
            )));
        }
    }
    let grid = Rational::from_integer(binom_int(n as i128, k as u64));
    let p = (rational_from_f64(p_top_lower)? * &grid).ceil() / &grid;
    let q = (rational_from_f64(p_runner_up_upper)? * &grid).floor() / &grid;
    Ok((p, q))
}

/// The certification condition's summand for one attacked-cloud size `t`:
/// `C(t,k)/C(n,k) - 2*C(max(n,t)-r, k)/C(n,k) + 1 - p + q`.
pub fn condition_lhs(
    n: usize,
    k: usize,
    r: u64,
    t: u64,
    p_top: &Rational,
    q_runner_up: &Rational,
) -> Result<Rational> {
    check_nk(n, k)?;
    let ti = t as i128;
    if ti < n as i128 - r as i128 || ti > n as i128 + r as i128 {
        return Err(Error::InvalidParameter(format!(
            "attacked size t={t} outside [n-r, n+r] = [{}, {}]",
            n as i128 - r as i128,
            n as i128 + r as i128
        )));
    }
    let s = ti.max(n as i128) - r as i128;
    let numer = binom_int(ti, k as u64) - 2 * binom_int(s, k as u64);
    let ratio = Rational::new(numer, binom_int(n as i128, k as u64));
    Ok(ratio + Rational::one() - p_top + q_runner_up)
}

/// The four attack models. `t = |attacked cloud|` ranges over `[n-r, n+r]`
/// for a mixed perturbation, and is pinned to `n`, `n+r`, or `n-r` for pure
/// modification, addition, or deletion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackModel {
    Perturbation,
    Modification,
    Addition,
    Deletion,
}

impl AttackModel {
    pub const ALL: [AttackModel; 4] = [
        AttackModel::Perturbation,
        AttackModel::Modification,
        AttackModel::Addition,
        AttackModel::Deletion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AttackModel::Perturbation => "perturbation",
            AttackModel::Modification => "modification",
            AttackModel::Addition => "addition",
            AttackModel::Deletion => "deletion",
        }
    }
}

impl std::str::FromStr for AttackModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AttackModel::ALL
            .iter()
            .copied()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown attack model {s:?}")))
    }
}

impl std::fmt::Display for AttackModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Whether the certification condition holds at perturbation size `r`,
/// strictly. Deletion requires `r < n` so the attacked cloud stays
/// nonempty.
pub fn condition_holds(
    n: usize,
    k: usize,
    r: u64,
    p_top: &Rational,
    q_runner_up: &Rational,
    attack: AttackModel,
) -> Result<bool> {
    check_nk(n, k)?;
    let ratio = |top: i128| Rational::new(binom_int(top, k as u64), binom_int(n as i128, k as u64));
    let zero = Rational::zero();
    match attack {
        AttackModel::Modification => {
            // 1 - C(n-r,k)/C(n,k) - (p - q)/2 < 0
            let lhs = Rational::one()
                - ratio(n as i128 - r as i128)
                - (p_top - q_runner_up) / Rational::from_integer(BigInt::from(2));
            Ok(lhs < zero)
        }
        AttackModel::Addition => {
            // C(n+r,k)/C(n,k) - 1 - p + q < 0
            let lhs = ratio(n as i128 + r as i128) - Rational::one() - p_top + q_runner_up;
            Ok(lhs < zero)
        }
        AttackModel::Deletion => {
            if r >= n as u64 {
                return Err(Error::InvalidParameter(format!(
                    "deletion of r={r} points would empty an n={n} cloud"
                )));
            }
            // -C(n-r,k)/C(n,k) + 1 - p + q < 0
            let lhs = Rational::one() - ratio(n as i128 - r as i128) - p_top + q_runner_up;
            Ok(lhs < zero)
        }
        AttackModel::Perturbation => {
            // strict max over every attacked size t in [n-r, n+r]
            let lo = (n as i128 - r as i128).max(0) as u64;
            let hi = n as u64 + r;
            for t in lo..=hi {
                if condition_lhs(n, k, r, t, p_top, q_runner_up)? >= zero {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Largest r for which `holds(r)` is true, given `holds(0)` and given that
/// the predicate is monotone (true up to some point, false beyond).
fn max_true(hi: u64, holds: impl Fn(u64) -> Result<bool>) -> Result<u64> {
    if holds(hi)? {
        return Ok(hi);
    }
    let mut lo = 0u64;
    let mut hi = hi;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// The certified perturbation size: the maximum r with the condition
/// strictly satisfied, found by binary search (the condition is monotone in
/// r). Returns `None` when `p_top <= q_runner_up`, in which case the caller
/// abstains. When `p_top > q_runner_up`, r = 0 always holds.
pub fn certified_size(
    n: usize,
    k: usize,
    p_top: &Rational,
    q_runner_up: &Rational,
    attack: AttackModel,
) -> Result<Option<u64>> {
    check_nk(n, k)?;
    if q_runner_up < &Rational::zero() || p_top > &Rational::one() {
        return Err(Error::InvalidParameter(
            "probability bounds outside [0,1]".into(),
        ));
    }
    if p_top <= q_runner_up {
        return Ok(None);
    }
    let holds = |r: u64| condition_holds(n, k, r, p_top, q_runner_up, attack);
    let r_star = match attack {
        // deletion must leave a point; modification of all n points can
        // never certify, so the same cap loses nothing
        AttackModel::Modification | AttackModel::Deletion => max_true((n - 1) as u64, holds)?,
        AttackModel::Perturbation => max_true(n as u64, holds)?,
        AttackModel::Addition => {
            // no a-priori cap: double until the condition fails, then search
            let mut lo = 0u64;
            let mut hi = 1u64;
            while holds(hi)? {
                lo = hi;
                hi *= 2;
            }
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if holds(mid)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        }
    };
    Ok(Some(r_star))
}

/// Worst-case label masses from the tightness construction: for sizes
/// beyond the certified one there is a classifier consistent with the
/// observed bounds whose vote flips. With `s = max(n,t) - r` and
/// `eps = C(t,k)/C(n,k)`:
///
/// ```text
///   mass_y = max(0, (p - (1 - C(s,k)/C(n,k)))) / eps
///   mass_e = q/eps + 1 - C(s,k)/C(t,k)
/// ```
///
/// These are the probabilities that the constructed classifier assigns the
/// top and runner-up labels on a random subsample of the attacked cloud.
/// Requires `p + q <= 1` and `t >= k` (an attacked cloud smaller than the
/// subsample has no subsample distribution).
pub fn tightness_witness(
    n: usize,
    k: usize,
    r: u64,
    t: u64,
    p_top: &Rational,
    q_runner_up: &Rational,
) -> Result<(Rational, Rational)> {
    check_nk(n, k)?;
    if p_top + q_runner_up > Rational::one() {
        return Err(Error::InvalidParameter(
            "tightness construction needs p + q <= 1".into(),
        ));
    }
    let ti = t as i128;
    if ti < n as i128 - r as i128 || ti > n as i128 + r as i128 {
        return Err(Error::InvalidParameter(format!(
            "attacked size t={t} outside [n-r, n+r]"
        )));
    }
    if (t as usize) < k {
        return Err(Error::InvalidParameter(format!(
            "attacked size t={t} smaller than subsample size k={k}"
        )));
    }
    let s = ti.max(n as i128) - r as i128;
    let c_s = binom_int(s, k as u64);
    let c_t = binom_int(ti, k as u64);
    let c_n = binom_int(n as i128, k as u64);
    let eps = Rational::new(c_t.clone(), c_n.clone());
    let shared_w = Rational::new(c_s.clone(), c_n); // Pr(W in shared region)
    let shared_z = Rational::new(c_s, c_t); // Pr(Z in shared region)

    let raw = p_top - (Rational::one() - shared_w);
    let mass_y = if raw.is_negative() {
        Rational::zero()
    } else {
        raw / &eps
    };
    let mass_e = q_runner_up / &eps + Rational::one() - shared_z;
    Ok((mass_y, mass_e))
}

/// Run parameters recorded alongside every certification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertifyParams {
    pub n: usize,
    pub k: usize,
    pub num_samples: usize,
    pub alpha: f64,
    pub seed: u64,
}

/// A certification either commits to a label with its certified size, or
/// abstains; the two never mix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Certified { label: usize, r_star: u64 },
    Abstain,
}

/// Result of certifying one cloud against one attack model.
#[derive(Debug, Clone)]
pub struct CertificationResult {
    pub attack: AttackModel,
    pub outcome: Outcome,
    pub bounds: ProbabilityBounds,
    pub params: CertifyParams,
}

/// End-to-end prediction and certification: subsample N times, count votes,
/// bound the top and runner-up label probabilities, then compute the
/// certified size per requested attack model. Abstains when the bounds do
/// not separate. Deterministic for fixed inputs, including under
/// parallelism.
pub fn predict_and_certify(
    model: &dyn Classifier,
    cloud: &PointCloud,
    k: usize,
    num_samples: usize,
    alpha: f64,
    seed: u64,
    attacks: &[AttackModel],
) -> Result<Vec<CertificationResult>> {
    let n = cloud.len();
    check_nk(n, k)?;
    let plan = SubsamplePlan::new(k, num_samples, seed)?;
    let subsamples = subsample_batch(cloud, &plan)?;
    let votes = count_votes(model, &subsamples)?;
    let bounds = prob_bounds(&votes, alpha)?;
    let params = CertifyParams {
        n,
        k,
        num_samples,
        alpha,
        seed,
    };

    if bounds.p_top_lower <= bounds.p_runner_up_upper {
        return Ok(attacks
            .iter()
            .map(|&attack| CertificationResult {
                attack,
                outcome: Outcome::Abstain,
                bounds: bounds.clone(),
                params,
            })
            .collect());
    }

    let (p, q) = round_bounds(bounds.p_top_lower, bounds.p_runner_up_upper, n, k)?;
    attacks
        .iter()
        .map(|&attack| {
            let r_star = certified_size(n, k, &p, &q, attack)?
                .expect("separated bounds stay separated after grid rounding");
            Ok(CertificationResult {
                attack,
                outcome: Outcome::Certified {
                    label: bounds.top_label,
                    r_star,
                },
                bounds: bounds.clone(),
                params,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::ConstantLabel;
    use crate::pointcloud::{generate_synthetic, Point, Shape};

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn binom_ratio_examples() {
        assert_eq!(binom_ratio(5, 2, 5).unwrap(), rat(1, 1));
        assert_eq!(binom_ratio(1, 2, 5).unwrap(), rat(0, 1));
        assert_eq!(binom_ratio(4, 2, 5).unwrap(), rat(3, 5));
        assert!(binom_ratio(4, 6, 5).is_err());
    }

    #[test]
    fn round_bounds_example() {
        // 0.85 * 10 is exactly 8.4999999999999997779... as a dyadic, so the
        // ceiling is 9; 0.12 * 10 is 1.1999999999999999556..., floor 1.
        let (p, q) = round_bounds(0.85, 0.12, 5, 2).unwrap();
        assert_eq!(p, rat(9, 10));
        assert_eq!(q, rat(1, 10));
    }

    #[test]
    fn round_bounds_endpoints() {
        let (p, q) = round_bounds(1.0, 0.0, 5, 2).unwrap();
        assert_eq!(p, rat(1, 1));
        assert_eq!(q, rat(0, 1));
    }

    #[test]
    fn round_bounds_exact_dyadic_grid_values() {
        // 0.5 is exactly 5/10: ceiling and floor agree.
        let (p, q) = round_bounds(0.5, 0.5, 5, 2).unwrap();
        assert_eq!(p, rat(1, 2));
        assert_eq!(q, rat(1, 2));
        // 0.3 as a double is strictly below 3/10, so the exact ceiling is
        // still 3/10 but the exact floor drops to 2/10.
        let (p, q) = round_bounds(0.3, 0.3, 5, 2).unwrap();
        assert_eq!(p, rat(3, 10));
        assert_eq!(q, rat(2, 10));
    }

    #[test]
    fn condition_lhs_at_r0_is_gap() {
        let p = rat(9, 10);
        let q = rat(1, 10);
        let lhs = condition_lhs(5, 2, 0, 5, &p, &q).unwrap();
        assert_eq!(lhs, &q - &p);
    }

    #[test]
    fn condition_lhs_examples() {
        let p = rat(9, 10);
        let q = rat(1, 10);
        assert_eq!(condition_lhs(5, 2, 1, 5, &p, &q).unwrap(), rat(0, 1));
        assert_eq!(condition_lhs(5, 2, 1, 4, &p, &q).unwrap(), rat(-4, 10));
    }

    #[test]
    fn condition_lhs_rejects_t_out_of_range() {
        let p = rat(9, 10);
        let q = rat(1, 10);
        assert!(condition_lhs(5, 2, 1, 3, &p, &q).is_err());
        assert!(condition_lhs(5, 2, 1, 7, &p, &q).is_err());
    }

    #[test]
    fn condition_holds_examples() {
        let p = rat(9, 10);
        let q = rat(1, 10);
        assert!(condition_holds(5, 2, 2, &p, &q, AttackModel::Deletion).unwrap());
        assert!(!condition_holds(5, 2, 3, &p, &q, AttackModel::Deletion).unwrap());
        assert!(condition_holds(5, 2, 1, &p, &q, AttackModel::Addition).unwrap());
        assert!(!condition_holds(5, 2, 2, &p, &q, AttackModel::Addition).unwrap());
        // modification at r=1 evaluates to exactly zero: strictness matters
        assert!(!condition_holds(5, 2, 1, &p, &q, AttackModel::Modification).unwrap());
    }

    #[test]
    fn deletion_requires_remainder() {
        let p = rat(1, 1);
        let q = rat(0, 1);
        assert!(condition_holds(5, 2, 5, &p, &q, AttackModel::Deletion).is_err());
    }

    #[test]
    fn certified_size_golden_table() {
        let p = rat(9, 10);
        let q = rat(1, 10);
        let r = |attack| certified_size(5, 2, &p, &q, attack).unwrap().unwrap();
        assert_eq!(r(AttackModel::Deletion), 2);
        assert_eq!(r(AttackModel::Addition), 1);
        assert_eq!(r(AttackModel::Modification), 0);
        assert_eq!(r(AttackModel::Perturbation), 0);

        let p = rat(1, 1);
        let q = rat(0, 1);
        let r = |attack| certified_size(5, 2, &p, &q, attack).unwrap().unwrap();
        assert_eq!(r(AttackModel::Modification), 1);
        assert_eq!(r(AttackModel::Perturbation), 1);
    }

    #[test]
    fn certified_size_requires_separation() {
        let p = rat(1, 2);
        assert_eq!(
            certified_size(5, 2, &p, &p, AttackModel::Deletion).unwrap(),
            None
        );
    }

    #[test]
    fn perturbation_never_exceeds_pure_attacks() {
        use num::ToPrimitive;
        for n in [5usize, 9, 14] {
            for k in 1..=3usize {
                let denom = binom_int(n as i128, k as u64).to_i64().unwrap();
                let stride = (denom / 8).max(1);
                for a in (1..=denom).step_by(stride as usize) {
                    for b in (0..a).step_by(stride as usize) {
                        let p = rat(a, denom);
                        let q = rat(b, denom);
                        let get = |attack| certified_size(n, k, &p, &q, attack).unwrap().unwrap();
                        let pert = get(AttackModel::Perturbation);
                        assert!(pert <= get(AttackModel::Modification));
                        assert!(pert <= get(AttackModel::Addition));
                        assert!(pert <= get(AttackModel::Deletion));
                    }
                }
            }
        }
    }

    #[test]
    fn pure_attack_shortcuts_agree_with_general_condition() {
        // each pure attack fixes the attacked size: modification t = n
        // (where the shortcut is half the general summand), addition
        // t = n+r, deletion t = n-r; the decisions must coincide
        use num::ToPrimitive;
        let zero = Rational::zero();
        for n in [4usize, 6, 11] {
            for k in 1..=3usize {
                let denom = binom_int(n as i128, k as u64).to_i64().unwrap();
                let stride = (denom / 6).max(1);
                for a in (1..=denom).step_by(stride as usize) {
                    for b in (0..a).step_by(stride as usize) {
                        let p = rat(a, denom);
                        let q = rat(b, denom);
                        for r in 0..n as u64 {
                            let modification =
                                condition_holds(n, k, r, &p, &q, AttackModel::Modification)
                                    .unwrap();
                            let at_n = condition_lhs(n, k, r, n as u64, &p, &q).unwrap() < zero;
                            assert_eq!(modification, at_n);

                            let addition =
                                condition_holds(n, k, r, &p, &q, AttackModel::Addition).unwrap();
                            let at_plus =
                                condition_lhs(n, k, r, n as u64 + r, &p, &q).unwrap() < zero;
                            assert_eq!(addition, at_plus);

                            let deletion =
                                condition_holds(n, k, r, &p, &q, AttackModel::Deletion).unwrap();
                            let at_minus =
                                condition_lhs(n, k, r, n as u64 - r, &p, &q).unwrap() < zero;
                            assert_eq!(deletion, at_minus);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn condition_monotone_in_r() {
        // once the condition fails it stays failed as r grows
        for n in [4usize, 7, 12] {
            for k in 1..=3usize {
                let p = rat(4, 5);
                let q = rat(1, 10);
                for attack in AttackModel::ALL {
                    let cap = if attack == AttackModel::Addition {
                        3 * n as u64
                    } else {
                        (n - 1) as u64
                    };
                    let mut failed = false;
                    for r in 0..=cap {
                        let ok = condition_holds(n, k, r, &p, &q, attack).unwrap();
                        if failed {
                            assert!(!ok, "condition re-held at r={r} for {attack} n={n} k={k}");
                        }
                        failed = !ok;
                    }
                }
            }
        }
    }

    #[test]
    fn region_assumptions_hold_whenever_condition_does() {
        // whenever the condition certifies r, the region construction's
        // assumptions hold for every t in range
        let n = 9;
        let k = 2;
        let p = rat(30, 36);
        let q = rat(4, 36);
        for r in 0u64..=5 {
            if !condition_holds(n, k, r, &p, &q, AttackModel::Perturbation).unwrap() {
                continue;
            }
            for t in (n as u64 - r)..=(n as u64 + r) {
                let s = (t as i128).max(n as i128) - r as i128;
                let shared = Rational::new(binom_int(s, k as u64), binom_int(n as i128, k as u64));
                assert!(&p - (Rational::one() - &shared) >= Rational::zero());
                assert!(shared >= q);
            }
        }
    }

    #[test]
    fn witness_masses_examples() {
        let p = rat(9, 10);
        let q = rat(1, 10);
        // deletion beyond r* = 2: at r = 3, t = 2 the construction ties or flips
        let (mass_y, mass_e) = tightness_witness(5, 2, 3, 2, &p, &q).unwrap();
        assert_eq!(mass_y, rat(0, 1));
        assert_eq!(mass_e, rat(1, 1));
        assert!(mass_e >= mass_y);
        // r = 0, t = n: the masses are exactly the bounds
        let (mass_y, mass_e) = tightness_witness(5, 2, 0, 5, &p, &q).unwrap();
        assert_eq!(mass_y, p);
        assert_eq!(mass_e, q);
    }

    #[test]
    fn witness_rejects_violated_hypotheses() {
        let p = rat(9, 10);
        let q = rat(2, 10);
        assert!(tightness_witness(5, 2, 1, 5, &p, &q).is_err()); // p + q > 1
        let q = rat(1, 10);
        assert!(tightness_witness(5, 2, 4, 1, &p, &q).is_err()); // t < k
    }

    #[test]
    fn predict_constant_classifier_never_abstains() {
        let model = ConstantLabel::new(0, 2).unwrap();
        let cloud = generate_synthetic(Shape::Sphere, 20, 1).unwrap();
        let results =
            predict_and_certify(&model, &cloud, 4, 1000, 0.001, 7, &AttackModel::ALL).unwrap();
        assert_eq!(results.len(), 4);
        for res in &results {
            match res.outcome {
                Outcome::Certified { label, r_star } => {
                    assert_eq!(label, 0);
                    assert!(r_star >= 1, "{}: r* = {r_star}", res.attack);
                }
                Outcome::Abstain => panic!("constant classifier abstained"),
            }
        }
    }

    #[test]
    fn predict_even_split_abstains() {
        // k=1 on a 2-point cloud with a classifier split by x: votes land
        // near 50/50, which cannot separate at alpha = 0.01.
        struct SplitByX;
        impl Classifier for SplitByX {
            fn num_classes(&self) -> usize {
                2
            }
            fn classify(&self, cloud: &PointCloud) -> Result<usize> {
                Ok(usize::from(cloud.points()[0].coords()[0] > 0.0))
            }
        }
        let cloud = PointCloud::new(vec![
            Point::new(&[-1.0, 0.0, 0.0]).unwrap(),
            Point::new(&[1.0, 0.0, 0.0]).unwrap(),
        ])
        .unwrap();
        let results =
            predict_and_certify(&SplitByX, &cloud, 1, 10_000, 0.01, 3, &AttackModel::ALL).unwrap();
        for res in &results {
            assert_eq!(res.outcome, Outcome::Abstain);
        }
    }

    #[test]
    fn attack_model_round_trip() {
        for attack in AttackModel::ALL {
            assert_eq!(attack.name().parse::<AttackModel>().unwrap(), attack);
            let json = serde_json::to_string(&attack).unwrap();
            assert_eq!(json, format!("\"{attack}\""));
        }
        assert!("mangle".parse::<AttackModel>().is_err());
    }
}
