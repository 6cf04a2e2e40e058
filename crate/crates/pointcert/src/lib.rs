//! Certified robustness for point-cloud classification via random subsampling.
//!
//! Given any deterministic point-cloud classifier, this crate builds a
//! smoothed classifier that predicts by majority vote over many random
//! k-point subsamples, and computes the exact number of points an adversary
//! may modify, add, and/or delete without changing that prediction.
//!
//! The pipeline:
//!
//! 1. [`sampling`] draws N uniform k-subsets of the input cloud under a
//!    deterministic per-stream seed scheme.
//! 2. [`estimate`] turns the observed votes into simultaneous
//!    Clopper-Pearson bounds on the top and runner-up label probabilities.
//! 3. [`certify`] rounds the bounds onto the 1/C(n,k) grid and evaluates a
//!    combinatorial certification condition in exact rational arithmetic,
//!    yielding the certified perturbation size r* per attack model
//!    (modification, addition, deletion, or any mix).
//! 4. [`oracle`] provides brute-force ground truth at small scale:
//!    exhaustive label probabilities, region probabilities, and randomized
//!    attack falsification.
//! 5. [`harness`] runs dataset-level evaluations and emits certified
//!    accuracy curves.
//!
//! Everything is deterministic for fixed seeds, including parallel runs.

pub mod certify;
pub mod classifier;
pub mod error;
pub mod estimate;
pub mod harness;
pub mod oracle;
pub mod pointcloud;
pub mod sampling;

pub use certify::{
    certified_size, predict_and_certify, AttackModel, CertificationResult, CertifyParams, Outcome,
    Rational,
};
pub use classifier::{descriptor, CentroidModel, Classifier, ConstantLabel, MajorityXSign};
pub use error::{Error, Result};
pub use estimate::{beta_inv_cdf, count_votes, prob_bounds, ProbabilityBounds, VoteCounts};
pub use pointcloud::{
    generate_synthetic, parse_xyz, perturbation_size, LabeledDataset, Point, PointCloud, Shape,
};
pub use sampling::{subsample, subsample_batch, SubsamplePlan};
