//! The pluggable deterministic classifier interface plus the toy
//! classifiers used throughout: a trainable nearest-centroid model over
//! shape descriptors, a closed-form majority-x-sign classifier (exact
//! oracles), and a constant classifier (edge cases).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointcloud::{LabeledDataset, PointCloud};
use crate::sampling::{stream_seed, subsample};

/// A deterministic, total, permutation-invariant point-cloud classifier.
///
/// `classify` must return the same label for the same point *set*,
/// independent of construction order, and a label below `num_classes` for
/// every nonempty cloud of the supported dimension.
pub trait Classifier: Send + Sync {
    fn num_classes(&self) -> usize;
    fn classify(&self, cloud: &PointCloud) -> Result<usize>;
}

/// Descriptor length for `dim`-dimensional clouds: per-coordinate means,
/// per-coordinate variances, mean point norm, mean pairwise distance, and
/// per-coordinate bounding-box extents.
pub const fn descriptor_len(dim: usize) -> usize {
    3 * dim + 2
}

/// Fixed shape statistics of a cloud; permutation-invariant and
/// deterministic (accumulation follows the canonical point order).
pub fn descriptor(cloud: &PointCloud) -> Vec<f64> {
    let d = cloud.dim();
    let n = cloud.len();
    let nf = n as f64;
    let points = cloud.points();

    let mut means = vec![0.0; d];
    for p in points {
        for (m, &c) in means.iter_mut().zip(p.coords()) {
            *m += c;
        }
    }
    for m in &mut means {
        *m /= nf;
    }

    let mut vars = vec![0.0; d];
    for p in points {
        for (v, (&c, &m)) in vars.iter_mut().zip(p.coords().iter().zip(&means)) {
            let dev = c - m;
            *v += dev * dev;
        }
    }
    for v in &mut vars {
        *v /= nf;
    }

    let mean_norm = points.iter().map(|p| p.norm()).sum::<f64>() / nf;

    let mean_pairwise = if n < 2 {
        0.0
    } else {
        let mut total = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                total += points[i].distance(&points[j]);
            }
        }
        total / (nf * (nf - 1.0) / 2.0)
    };

    let (lo, hi) = cloud.bounding_box();
    let mut out = Vec::with_capacity(descriptor_len(d));
    out.extend_from_slice(&means);
    out.extend_from_slice(&vars);
    out.push(mean_norm);
    out.push(mean_pairwise);
    out.extend(lo.iter().zip(&hi).map(|(l, h)| h - l));
    out
}

/// Nearest-centroid classifier over descriptors. Classes that never
/// appeared in training have no centroid and are never predicted.
///
/// Serialized as a JSON document `{num_classes, descriptor_length,
/// centroids}` where absent centroids are null.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CentroidModel {
    pub num_classes: usize,
    #[serde(rename = "descriptor_length")]
    pub descriptor_len: usize,
    pub centroids: Vec<Option<Vec<f64>>>,
}

impl CentroidModel {
    /// Trains by accumulating the descriptor of one fresh k-subsample per
    /// training cloud per epoch into its class centroid. Deterministic for
    /// fixed inputs.
    pub fn fit_with_subsampling(
        training: &LabeledDataset,
        k: usize,
        epochs: usize,
        seed: u64,
    ) -> Result<Self> {
        if epochs == 0 {
            return Err(Error::InvalidParameter("no training passes".into()));
        }
        if training.is_empty() {
            return Err(Error::InvalidParameter("empty training set".into()));
        }
        if let Some((i, (cloud, _))) = training
            .entries
            .iter()
            .enumerate()
            .find(|(_, (c, _))| c.len() < k)
        {
            return Err(Error::InvalidParameter(format!(
                "training cloud #{i} has {} points, fewer than k={k}",
                cloud.len()
            )));
        }
        let dim = training.entries[0].0.dim();
        if let Some((i, (cloud, _))) = training
            .entries
            .iter()
            .enumerate()
            .find(|(_, (c, _))| c.dim() != dim)
        {
            return Err(Error::InvalidParameter(format!(
                "training cloud #{i} has dimension {}, expected {dim}",
                cloud.dim()
            )));
        }

        let dlen = descriptor_len(dim);
        let c = training.num_classes;
        let mut sums = vec![vec![0.0; dlen]; c];
        let mut counts = vec![0u64; c];
        for epoch in 0..epochs {
            for (i, (cloud, label)) in training.entries.iter().enumerate() {
                let stream = stream_seed(seed, (epoch * training.len() + i) as u64);
                let sub = subsample(cloud, k, stream)?;
                let desc = descriptor(&sub);
                for (s, v) in sums[*label].iter_mut().zip(&desc) {
                    *s += v;
                }
                counts[*label] += 1;
            }
        }
        let centroids = sums
            .into_iter()
            .zip(&counts)
            .map(|(sum, &count)| {
                (count > 0).then(|| sum.iter().map(|s| s / count as f64).collect())
            })
            .collect();
        Ok(Self {
            num_classes: c,
            descriptor_len: dlen,
            centroids,
        })
    }

    fn validate(&self) -> Result<()> {
        if self.num_classes < 2 {
            return Err(Error::Config("model needs at least 2 classes".into()));
        }
        if self.centroids.len() != self.num_classes {
            return Err(Error::Config(format!(
                "model declares {} classes but has {} centroids",
                self.num_classes,
                self.centroids.len()
            )));
        }
        if self.descriptor_len < 2 || !(self.descriptor_len - 2).is_multiple_of(3) {
            return Err(Error::Config(format!(
                "descriptor_length {} does not match any dimension",
                self.descriptor_len
            )));
        }
        for (i, c) in self.centroids.iter().enumerate() {
            if let Some(c) = c {
                if c.len() != self.descriptor_len {
                    return Err(Error::Config(format!(
                        "centroid {i} has length {}, expected {}",
                        c.len(),
                        self.descriptor_len
                    )));
                }
                if c.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Config(format!(
                        "centroid {i} has non-finite entries"
                    )));
                }
            }
        }
        if !self.centroids.iter().any(|c| c.is_some()) {
            return Err(Error::Config("model has no centroids".into()));
        }
        Ok(())
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let model: Self = serde_json::from_slice(bytes)?;
        model.validate()?;
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

impl Classifier for CentroidModel {
    fn num_classes(&self) -> usize {
        self.num_classes
    }

    fn classify(&self, cloud: &PointCloud) -> Result<usize> {
        if descriptor_len(cloud.dim()) != self.descriptor_len {
            return Err(Error::IncompatibleDimensions(
                (self.descriptor_len - 2) / 3,
                cloud.dim(),
            ));
        }
        let desc = descriptor(cloud);
        let mut best: Option<(usize, f64)> = None;
        for (label, centroid) in self.centroids.iter().enumerate() {
            let Some(centroid) = centroid else { continue };
            let dist: f64 = centroid
                .iter()
                .zip(&desc)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            // strict < keeps the smaller label on ties
            if best.is_none_or(|(_, d)| dist < d) {
                best = Some((label, dist));
            }
        }
        let (label, _) = best.ok_or_else(|| Error::Config("model has no centroids".into()))?;
        Ok(label)
    }
}

/// Closed-form binary classifier: label 1 iff at least as many points have
/// positive first coordinate as not.
#[derive(Debug, Clone, Copy, Default)]
pub struct MajorityXSign;

impl Classifier for MajorityXSign {
    fn num_classes(&self) -> usize {
        2
    }

    fn classify(&self, cloud: &PointCloud) -> Result<usize> {
        let positive = cloud
            .points()
            .iter()
            .filter(|p| p.coords()[0] > 0.0)
            .count();
        Ok(usize::from(2 * positive >= cloud.len()))
    }
}

/// Always predicts the same label.
#[derive(Debug, Clone, Copy)]
pub struct ConstantLabel {
    label: usize,
    num_classes: usize,
}

impl ConstantLabel {
    pub fn new(label: usize, num_classes: usize) -> Result<Self> {
        if num_classes < 2 || label >= num_classes {
            return Err(Error::InvalidParameter(format!(
                "constant label {label} needs num_classes > {label}"
            )));
        }
        Ok(Self { label, num_classes })
    }
}

impl Classifier for ConstantLabel {
    fn num_classes(&self) -> usize {
        self.num_classes
    }

    fn classify(&self, _cloud: &PointCloud) -> Result<usize> {
        Ok(self.label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointcloud::{generate_synthetic, Point, Shape};
    use crate::sampling::stream_seed;

    fn cloud(coords: &[&[f64]]) -> PointCloud {
        PointCloud::new(coords.iter().map(|c| Point::new(c).unwrap()).collect()).unwrap()
    }

    #[test]
    fn constant_label_is_constant() {
        let c = ConstantLabel::new(2, 4).unwrap();
        let a = cloud(&[&[1., 2., 3.]]);
        assert_eq!(c.classify(&a).unwrap(), 2);
    }

    #[test]
    fn majority_x_sign_all_positive() {
        let m = MajorityXSign;
        let a = cloud(&[&[1., 0., 0.], &[2., 0., 0.], &[3., 0., 0.]]);
        assert_eq!(m.classify(&a).unwrap(), 1);
    }

    #[test]
    fn majority_x_sign_mostly_negative() {
        let m = MajorityXSign;
        let a = cloud(&[&[-1., 0., 0.], &[-2., 0., 0.], &[1., 0., 0.]]);
        assert_eq!(m.classify(&a).unwrap(), 0);
    }

    #[test]
    fn majority_x_sign_tie_goes_to_one() {
        let m = MajorityXSign;
        let a = cloud(&[&[-1., 0., 0.], &[1., 0., 0.]]);
        assert_eq!(m.classify(&a).unwrap(), 1);
    }

    #[test]
    fn descriptor_single_point() {
        let a = cloud(&[&[3., 4., 0.]]);
        let d = descriptor(&a);
        assert_eq!(d.len(), descriptor_len(3));
        assert_eq!(&d[0..3], &[3., 4., 0.]); // means
        assert_eq!(&d[3..6], &[0., 0., 0.]); // variances
        assert!((d[6] - 5.0).abs() < 1e-12); // mean norm
        assert_eq!(d[7], 0.0); // mean pairwise distance
        assert_eq!(&d[8..11], &[0., 0., 0.]); // extents
    }

    #[test]
    fn descriptor_permutation_invariant() {
        // PointCloud canonicalizes order, so any construction order gives
        // the same descriptor bit for bit.
        let a = cloud(&[&[1., 2., 3.], &[-1., 0., 2.], &[0.5, 0.5, 0.5]]);
        let b = cloud(&[&[0.5, 0.5, 0.5], &[1., 2., 3.], &[-1., 0., 2.]]);
        assert_eq!(descriptor(&a), descriptor(&b));
    }

    #[test]
    fn descriptor_sphere_mean_norm_near_one() {
        let a = generate_synthetic(Shape::Sphere, 64, 3).unwrap();
        let d = descriptor(&a);
        let mean_norm = d[2 * 3];
        assert!((0.99..=1.01).contains(&mean_norm), "mean norm {mean_norm}");
    }

    #[test]
    fn classify_deterministic() {
        let train = two_class_training(10, 64, 5);
        let model = CentroidModel::fit_with_subsampling(&train, 16, 2, 9).unwrap();
        let c = generate_synthetic(Shape::Sphere, 64, 123).unwrap();
        let first = model.classify(&c).unwrap();
        for _ in 0..9 {
            assert_eq!(model.classify(&c).unwrap(), first);
        }
    }

    fn two_class_training(per_class: usize, n: usize, seed: u64) -> LabeledDataset {
        let mut entries = Vec::new();
        for i in 0..per_class {
            entries.push((
                generate_synthetic(Shape::Sphere, n, stream_seed(seed, i as u64)).unwrap(),
                0,
            ));
            entries.push((
                generate_synthetic(Shape::Plane, n, stream_seed(seed, 1000 + i as u64)).unwrap(),
                1,
            ));
        }
        LabeledDataset::new(entries, 2).unwrap()
    }

    #[test]
    fn fit_zero_epochs_rejected() {
        let train = two_class_training(2, 32, 1);
        match CentroidModel::fit_with_subsampling(&train, 8, 0, 1) {
            Err(Error::InvalidParameter(msg)) => assert!(msg.contains("no training passes")),
            other => panic!("expected no-training-passes error, got {other:?}"),
        }
    }

    #[test]
    fn fit_small_cloud_rejected_by_name() {
        let small = cloud(&[&[0., 0., 0.], &[1., 1., 1.]]);
        let big = generate_synthetic(Shape::Sphere, 32, 1).unwrap();
        let train = LabeledDataset::new(vec![(big, 0), (small, 1)], 2).unwrap();
        match CentroidModel::fit_with_subsampling(&train, 8, 1, 1) {
            Err(Error::InvalidParameter(msg)) => assert!(msg.contains("#1"), "{msg}"),
            other => panic!("expected error naming cloud #1, got {other:?}"),
        }
    }

    #[test]
    fn single_class_training_predicts_that_class() {
        let entries: Vec<_> = (0..5)
            .map(|i| (generate_synthetic(Shape::Helix, 48, i).unwrap(), 1))
            .collect();
        let train = LabeledDataset::new(entries.clone(), 3).unwrap();
        let model = CentroidModel::fit_with_subsampling(&train, 12, 2, 4).unwrap();
        for (c, _) in &entries {
            for s in 0..20 {
                let sub = subsample(c, 12, s).unwrap();
                assert_eq!(model.classify(&sub).unwrap(), 1);
            }
        }
    }

    #[test]
    fn well_separated_classes_high_subsample_accuracy() {
        // sphere vs plane, 50 clouds each, k=16: >= 0.95 accuracy over 10^3
        // fresh subsamples.
        let train = two_class_training(50, 64, 21);
        let model = CentroidModel::fit_with_subsampling(&train, 16, 2, 22).unwrap();
        let mut correct = 0u32;
        let mut total = 0u32;
        let mut stream = 0u64;
        'outer: for (cloud, label) in &train.entries {
            for _ in 0..10 {
                let sub = subsample(cloud, 16, stream_seed(777, stream)).unwrap();
                stream += 1;
                if model.classify(&sub).unwrap() == *label {
                    correct += 1;
                }
                total += 1;
                if total >= 1000 {
                    break 'outer;
                }
            }
        }
        let accuracy = correct as f64 / total as f64;
        assert!(accuracy >= 0.95, "subsample accuracy {accuracy}");
    }

    #[test]
    fn fit_with_k_equal_n_uses_full_clouds() {
        let train = two_class_training(4, 24, 2);
        let model = CentroidModel::fit_with_subsampling(&train, 24, 3, 8).unwrap();
        // Every subsample was the full cloud, so centroids equal the mean of
        // full-cloud descriptors regardless of seed.
        let other = CentroidModel::fit_with_subsampling(&train, 24, 3, 9).unwrap();
        assert_eq!(model.centroids, other.centroids);
    }

    #[test]
    fn model_json_round_trip() {
        let train = two_class_training(3, 32, 6);
        let model = CentroidModel::fit_with_subsampling(&train, 8, 1, 7).unwrap();
        let loaded = CentroidModel::from_json(model.to_json().as_bytes()).unwrap();
        assert_eq!(loaded.num_classes, model.num_classes);
        assert_eq!(loaded.centroids, model.centroids);
    }

    #[test]
    fn model_json_rejects_inconsistent() {
        assert!(CentroidModel::from_json(
            b"{\"num_classes\":3,\"descriptor_length\":11,\"centroids\":[null,null]}"
        )
        .is_err());
        assert!(CentroidModel::from_json(b"not json").is_err());
    }

    #[test]
    fn centroid_dimension_mismatch_rejected() {
        let train = two_class_training(2, 32, 3);
        let model = CentroidModel::fit_with_subsampling(&train, 8, 1, 3).unwrap();
        let flat = cloud(&[&[0., 0.], &[1., 1.]]);
        assert!(matches!(
            model.classify(&flat),
            Err(Error::IncompatibleDimensions(_, 2))
        ));
    }
}
