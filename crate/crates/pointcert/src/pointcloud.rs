//! Point-cloud representation with set semantics, the set-difference
//! perturbation metric, XYZ text IO, and synthetic shape generation.
//!
//! A cloud is a *set*: duplicate points are dropped on construction and
//! point equality is exact (bit-level) equality of coordinates. Any
//! tolerance-based matching would make the intersection in the perturbation
//! metric ill-defined. Points are kept sorted in a canonical order
//! (lexicographic IEEE `total_cmp`) so sampling and statistics are
//! independent of input order.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};
use std::path::Path;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::sampling::{stream_seed, SplitMix64};

/// Coordinates are stored inline for clouds up to 6 dimensions (xyz or
/// xyz+rgb); higher dimensions spill to the heap.
type Coords = SmallVec<[f64; 6]>;

/// A single point: `d >= 1` finite coordinates.
#[derive(Debug, Clone)]
pub struct Point {
    coords: Coords,
}

impl Point {
    /// Rejects empty coordinate lists and non-finite values.
    pub fn new(coords: &[f64]) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter(
                "point must have at least one coordinate".into(),
            ));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        Ok(Self {
            coords: Coords::from_slice(coords),
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Point {}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    /// Lexicographic `total_cmp`. For finite coordinates this is consistent
    /// with bit-level equality (it distinguishes -0.0 from 0.0).
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.coords.iter().zip(other.coords.iter()) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.coords.len().cmp(&other.coords.len())
    }
}

impl Hash for Point {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for c in &self.coords {
            state.write_u64(c.to_bits());
        }
    }
}

/// A finite set of points, all of the same dimension, stored in canonical
/// sorted order. Never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCloud {
    points: Vec<Point>,
    dim: usize,
}

impl PointCloud {
    /// Builds a cloud, dropping exact duplicates (set semantics).
    pub fn new(mut points: Vec<Point>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::EmptyCloud);
        };
        let dim = first.dim();
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::IncompatibleDimensions(dim, p.dim()));
        }
        points.sort_unstable();
        points.dedup();
        Ok(Self { points, dim })
    }

    /// Constructs from points already sorted, deduplicated, and
    /// dimension-checked.
    pub(crate) fn from_canonical(points: Vec<Point>, dim: usize) -> Self {
        debug_assert!(!points.is_empty());
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(points.iter().all(|p| p.dim() == dim));
        Self { points, dim }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points in canonical order.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// Per-coordinate (min, max) over all points.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = self.points[0].coords().to_vec();
        let mut hi = lo.clone();
        for p in &self.points[1..] {
            for (i, &c) in p.coords().iter().enumerate() {
                lo[i] = lo[i].min(c);
                hi[i] = hi[i].max(c);
            }
        }
        (lo, hi)
    }

    /// Serializes to XYZ text with shortest round-trip decimals, one point
    /// per line in canonical order. `parse_xyz` recovers the exact set.
    pub fn to_xyz(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            let mut first = true;
            for c in p.coords() {
                if !first {
                    out.push(' ');
                }
                write!(out, "{c}").unwrap();
                first = false;
            }
            out.push('\n');
        }
        out
    }

    pub fn write_xyz_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_xyz())?;
        Ok(())
    }
}

/// Number of shared points between two canonically sorted clouds.
fn intersection_size(a: &PointCloud, b: &PointCloud) -> usize {
    let (mut i, mut j, mut shared) = (0, 0, 0);
    let (pa, pb) = (a.points(), b.points());
    while i < pa.len() && j < pb.len() {
        match pa[i].cmp(&pb[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                shared += 1;
                i += 1;
                j += 1;
            }
        }
    }
    shared
}

/// Perturbation size between two clouds: `max(|a|, |b|) - |a ∩ b|`, the
/// minimum number of point modifications, additions, and deletions that
/// turn one into the other. Symmetric; zero iff the clouds are equal sets.
pub fn perturbation_size(a: &PointCloud, b: &PointCloud) -> Result<u64> {
    if a.dim() != b.dim() {
        return Err(Error::IncompatibleDimensions(a.dim(), b.dim()));
    }
    let shared = intersection_size(a, b);
    Ok(a.len().max(b.len()) as u64 - shared as u64)
}

/// Result of parsing an XYZ stream: the cloud plus how many duplicate
/// points were dropped.
#[derive(Debug, Clone)]
pub struct ParsedCloud {
    pub cloud: PointCloud,
    pub duplicates_dropped: usize,
}

/// Parses XYZ text: each nonblank line holds `dim` whitespace-separated
/// decimal numbers; lines starting with '#' are comments. Duplicate points
/// are dropped and counted. Errors carry 1-based line numbers.
pub fn parse_xyz(bytes: &[u8], dim: usize) -> Result<ParsedCloud> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    let mut points = Vec::new();
    for (idx, raw) in bytes.split(|&b| b == b'\n').enumerate() {
        let line = idx + 1;
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        let text = std::str::from_utf8(raw).map_err(|_| Error::Parse {
            line,
            msg: "invalid UTF-8".into(),
        })?;
        let text = text.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut coords: Coords = Coords::new();
        for tok in text.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid number {tok:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    msg: format!("non-finite value {tok:?}"),
                });
            }
            coords.push(v);
        }
        if coords.len() != dim {
            return Err(Error::Parse {
                line,
                msg: format!("expected {dim} coordinates, found {}", coords.len()),
            });
        }
        points.push(Point { coords });
    }
    let parsed = points.len();
    let cloud = PointCloud::new(points)?;
    Ok(ParsedCloud {
        duplicates_dropped: parsed - cloud.len(),
        cloud,
    })
}

pub fn read_xyz_file(path: &Path, dim: usize) -> Result<ParsedCloud> {
    let bytes = std::fs::read(path)?;
    parse_xyz(&bytes, dim)
}

/// Parses a labels file: one `relative/path,label` line per cloud, UTF-8,
/// '#' comments allowed.
pub fn parse_labels(bytes: &[u8]) -> Result<Vec<(String, usize)>> {
    let text = std::str::from_utf8(bytes).map_err(|_| Error::Parse {
        line: 0,
        msg: "labels file is not UTF-8".into(),
    })?;
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((path, label)) = trimmed.rsplit_once(',') else {
            return Err(Error::Parse {
                line,
                msg: "expected \"relative/path,label\"".into(),
            });
        };
        let label: usize = label.trim().parse().map_err(|_| Error::Parse {
            line,
            msg: format!("invalid label {:?}", label.trim()),
        })?;
        let path = path.trim();
        if path.is_empty() {
            return Err(Error::Parse {
                line,
                msg: "empty path".into(),
            });
        }
        entries.push((path.to_string(), label));
    }
    Ok(entries)
}

/// Labeled clouds for training or evaluation.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    pub entries: Vec<(PointCloud, usize)>,
    pub num_classes: usize,
}

impl LabeledDataset {
    pub fn new(entries: Vec<(PointCloud, usize)>, num_classes: usize) -> Result<Self> {
        if num_classes < 2 {
            return Err(Error::InvalidParameter("need at least 2 classes".into()));
        }
        if let Some((i, &(_, label))) = entries
            .iter()
            .enumerate()
            .find(|(_, (_, l))| *l >= num_classes)
        {
            return Err(Error::InvalidParameter(format!(
                "entry {i} has label {label} but only {num_classes} classes"
            )));
        }
        Ok(Self {
            entries,
            num_classes,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Synthetic 3D shape classes for desk-scale experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    Sphere,
    CubeSurface,
    Plane,
    Line,
    Torus,
    TwoClusters,
    Helix,
    Cross,
}

impl Shape {
    pub const ALL: [Shape; 8] = [
        Shape::Sphere,
        Shape::CubeSurface,
        Shape::Plane,
        Shape::Line,
        Shape::Torus,
        Shape::TwoClusters,
        Shape::Helix,
        Shape::Cross,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Shape::Sphere => "sphere",
            Shape::CubeSurface => "cube-surface",
            Shape::Plane => "plane",
            Shape::Line => "line",
            Shape::Torus => "torus",
            Shape::TwoClusters => "two-clusters",
            Shape::Helix => "helix",
            Shape::Cross => "cross",
        }
    }
}

impl std::str::FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Shape::ALL
            .iter()
            .copied()
            .find(|shape| shape.name() == s)
            .ok_or_else(|| Error::UnknownShape(s.to_string()))
    }
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn gaussian(rng: &mut SplitMix64) -> f64 {
    // Box-Muller; u1 in (0, 1] so the log is finite.
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
    let u2 = rng.next_f64();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn uniform_sym(rng: &mut SplitMix64) -> f64 {
    2.0 * rng.next_f64() - 1.0
}

fn sample_shape(shape: Shape, index: usize, rng: &mut SplitMix64) -> [f64; 3] {
    match shape {
        Shape::Sphere => loop {
            let g = [gaussian(rng), gaussian(rng), gaussian(rng)];
            let norm = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
            if norm > 1e-6 {
                return [g[0] / norm, g[1] / norm, g[2] / norm];
            }
        },
        Shape::CubeSurface => {
            let face = rng.next_below(6);
            let a = uniform_sym(rng);
            let b = uniform_sym(rng);
            match face {
                0 => [1.0, a, b],
                1 => [-1.0, a, b],
                2 => [a, 1.0, b],
                3 => [a, -1.0, b],
                4 => [a, b, 1.0],
                _ => [a, b, -1.0],
            }
        }
        Shape::Plane => [uniform_sym(rng), uniform_sym(rng), 0.0],
        Shape::Line => {
            let t = uniform_sym(rng);
            let c = 1.0 / 3f64.sqrt();
            [t * c, t * c, t * c]
        }
        Shape::Torus => {
            let theta = std::f64::consts::TAU * rng.next_f64();
            let phi = std::f64::consts::TAU * rng.next_f64();
            let ring = 1.0 + 0.35 * phi.cos();
            [ring * theta.cos(), ring * theta.sin(), 0.35 * phi.sin()]
        }
        Shape::TwoClusters => {
            let cx = if index.is_multiple_of(2) { -0.7 } else { 0.7 };
            [
                cx + 0.15 * gaussian(rng),
                0.15 * gaussian(rng),
                0.15 * gaussian(rng),
            ]
        }
        Shape::Helix => {
            let t = uniform_sym(rng);
            let theta = 3.0 * std::f64::consts::PI * t;
            [0.8 * theta.cos(), 0.8 * theta.sin(), t]
        }
        Shape::Cross => {
            let t = uniform_sym(rng);
            if rng.next_u64() & 1 == 0 {
                [t, 0.0, 0.0]
            } else {
                [0.0, t, 0.0]
            }
        }
    }
}

/// Generates exactly `n` distinct points of the given shape class,
/// deterministic for a fixed `(shape, n, seed)` on every platform. Point
/// `i` is derived from its own counter-based stream, so generation order
/// does not matter.
pub fn generate_synthetic(shape: Shape, n: usize, seed: u64) -> Result<PointCloud> {
    if n < 8 {
        return Err(Error::InvalidParameter(format!(
            "synthetic clouds need n >= 8, got {n}"
        )));
    }
    let base = stream_seed(seed, shape as u64);
    let mut seen: HashSet<Point> = HashSet::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    for i in 0..n {
        let mut nonce = 0u64;
        loop {
            let mut rng = SplitMix64::new(stream_seed(stream_seed(base, i as u64), nonce));
            let coords = sample_shape(shape, i, &mut rng);
            let point = Point::new(&coords).expect("shape coordinates are finite");
            if seen.insert(point.clone()) {
                points.push(point);
                break;
            }
            nonce += 1;
        }
    }
    Ok(PointCloud::new(points).expect("n >= 8 distinct points"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coords: &[f64]) -> Point {
        Point::new(coords).unwrap()
    }

    fn cloud(coords: &[&[f64]]) -> PointCloud {
        PointCloud::new(coords.iter().map(|c| p(c)).collect()).unwrap()
    }

    #[test]
    fn perturbation_size_identical() {
        let a = cloud(&[&[0., 0., 0.], &[1., 0., 0.], &[2., 0., 0.]]);
        assert_eq!(perturbation_size(&a, &a).unwrap(), 0);
    }

    #[test]
    fn perturbation_size_one_modification() {
        let a = cloud(&[&[0., 0., 0.], &[1., 0., 0.], &[2., 0., 0.]]);
        let b = cloud(&[&[0., 0., 0.], &[1., 0., 0.], &[9., 0., 0.]]);
        assert_eq!(perturbation_size(&a, &b).unwrap(), 1);
        assert_eq!(perturbation_size(&b, &a).unwrap(), 1);
    }

    #[test]
    fn perturbation_size_two_additions() {
        let a = cloud(&[&[0., 0., 0.], &[1., 0., 0.], &[2., 0., 0.]]);
        let b = cloud(&[
            &[0., 0., 0.],
            &[1., 0., 0.],
            &[2., 0., 0.],
            &[3., 0., 0.],
            &[4., 0., 0.],
        ]);
        assert_eq!(perturbation_size(&a, &b).unwrap(), 2);
    }

    #[test]
    fn perturbation_size_dimension_mismatch() {
        let a = cloud(&[&[0., 0., 0.]]);
        let b = cloud(&[&[0., 0.]]);
        assert!(matches!(
            perturbation_size(&a, &b),
            Err(Error::IncompatibleDimensions(3, 2))
        ));
    }

    #[test]
    fn parse_two_points() {
        let parsed = parse_xyz(b"0 0 0\n1 0 0\n", 3).unwrap();
        assert_eq!(parsed.cloud.len(), 2);
        assert_eq!(parsed.duplicates_dropped, 0);
    }

    #[test]
    fn parse_drops_duplicates() {
        let parsed = parse_xyz(b"1 2 3\n1 2 3\n", 3).unwrap();
        assert_eq!(parsed.cloud.len(), 1);
        assert_eq!(parsed.duplicates_dropped, 1);
    }

    #[test]
    fn parse_arity_mismatch_reports_line() {
        match parse_xyz(b"1 2\n", 3) {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("expected parse error at line 1, got {other:?}"),
        }
    }

    #[test]
    fn parse_bad_number_reports_line() {
        match parse_xyz(b"0 0 0\n1 x 0\n", 3) {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("expected parse error at line 2, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_empty() {
        assert!(matches!(
            parse_xyz(b"# only comments\n\n", 3),
            Err(Error::EmptyCloud)
        ));
    }

    #[test]
    fn parse_comments_and_blank_lines() {
        let parsed = parse_xyz(b"# header\n\n0.5 -1 2e-3\n", 3).unwrap();
        assert_eq!(parsed.cloud.len(), 1);
    }

    #[test]
    fn parse_rejects_non_finite() {
        assert!(parse_xyz(b"inf 0 0\n", 3).is_err());
        assert!(parse_xyz(b"nan 0 0\n", 3).is_err());
    }

    #[test]
    fn xyz_round_trip_is_identity() {
        let a = generate_synthetic(Shape::Torus, 50, 3).unwrap();
        let text = a.to_xyz();
        let b = parse_xyz(text.as_bytes(), 3).unwrap().cloud;
        assert_eq!(a, b);
        assert_eq!(perturbation_size(&a, &b).unwrap(), 0);
    }

    #[test]
    fn labels_file_parses() {
        let entries = parse_labels(b"# comment\nsphere/000.xyz,0\nplane/001.xyz, 2\n").unwrap();
        assert_eq!(
            entries,
            vec![
                ("sphere/000.xyz".to_string(), 0),
                ("plane/001.xyz".to_string(), 2)
            ]
        );
    }

    #[test]
    fn labels_file_rejects_bad_lines() {
        assert!(matches!(
            parse_labels(b"no-comma\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_labels(b"a.xyz,x\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn sphere_points_unit_norm() {
        let c = generate_synthetic(Shape::Sphere, 64, 7).unwrap();
        assert_eq!(c.len(), 64);
        for p in c.points() {
            assert!((p.norm() - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn plane_points_flat() {
        let c = generate_synthetic(Shape::Plane, 32, 7).unwrap();
        assert_eq!(c.len(), 32);
        for p in c.points() {
            assert!(p.coords()[2].abs() <= 1e-9);
        }
    }

    #[test]
    fn synthetic_deterministic() {
        for shape in Shape::ALL {
            let a = generate_synthetic(shape, 40, 11).unwrap();
            let b = generate_synthetic(shape, 40, 11).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.len(), 40);
        }
    }

    #[test]
    fn synthetic_rejects_tiny_n() {
        assert!(generate_synthetic(Shape::Sphere, 7, 0).is_err());
    }

    #[test]
    fn shape_names_round_trip() {
        for shape in Shape::ALL {
            assert_eq!(shape.name().parse::<Shape>().unwrap(), shape);
        }
        assert!(matches!(
            "blob".parse::<Shape>(),
            Err(Error::UnknownShape(_))
        ));
    }

    #[test]
    fn dataset_rejects_bad_labels() {
        let c = cloud(&[&[0., 0., 0.]]);
        assert!(LabeledDataset::new(vec![(c.clone(), 5)], 3).is_err());
        assert!(LabeledDataset::new(vec![(c, 0)], 1).is_err());
    }

    #[test]
    fn negative_zero_is_distinct() {
        // Bit-level equality: -0.0 and 0.0 are different points, and both
        // survive a serialization round trip.
        let a = cloud(&[&[0., 1., 2.], &[-0., 1., 2.]]);
        assert_eq!(a.len(), 2);
        let b = parse_xyz(a.to_xyz().as_bytes(), 3).unwrap().cloud;
        assert_eq!(a, b);
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    fn arb_cloud(max_n: usize) -> impl Strategy<Value = PointCloud> {
        prop::collection::vec(prop::array::uniform3(-1000i32..1000), 1..max_n).prop_map(|pts| {
            let points: Vec<Point> = pts
                .into_iter()
                .map(|[x, y, z]| Point::new(&[x as f64, y as f64, z as f64]).unwrap())
                .collect();
            PointCloud::new(points).unwrap()
        })
    }

    proptest! {
        #[test]
        fn perturbation_size_symmetric(a in arb_cloud(30), b in arb_cloud(30)) {
            prop_assert_eq!(
                perturbation_size(&a, &b).unwrap(),
                perturbation_size(&b, &a).unwrap()
            );
        }

        #[test]
        fn perturbation_size_zero_iff_equal(a in arb_cloud(30), b in arb_cloud(30)) {
            let eta = perturbation_size(&a, &b).unwrap();
            prop_assert_eq!(eta == 0, a == b);
        }

        #[test]
        fn deleting_j_points_costs_j(a in arb_cloud(30), j in 0usize..10) {
            prop_assume!(j < a.len());
            let remaining: Vec<Point> = a.points()[j..].to_vec();
            let b = PointCloud::new(remaining).unwrap();
            prop_assert_eq!(perturbation_size(&a, &b).unwrap(), j as u64);
        }

        #[test]
        fn adding_j_fresh_points_costs_j(a in arb_cloud(30), j in 1usize..10) {
            let (_, hi) = a.bounding_box();
            let mut points = a.points().to_vec();
            for i in 0..j {
                points.push(Point::new(&[hi[0] + 1.0 + i as f64, 0.0, 0.0]).unwrap());
            }
            let b = PointCloud::new(points).unwrap();
            prop_assert_eq!(perturbation_size(&a, &b).unwrap(), j as u64);
        }

        #[test]
        fn modifying_j_points_costs_j(a in arb_cloud(30), j in 1usize..10) {
            prop_assume!(j <= a.len());
            let (_, hi) = a.bounding_box();
            let mut points: Vec<Point> = a.points()[j..].to_vec();
            for i in 0..j {
                points.push(Point::new(&[hi[0] + 1.0 + i as f64, 0.0, 0.0]).unwrap());
            }
            let b = PointCloud::new(points).unwrap();
            prop_assert_eq!(perturbation_size(&a, &b).unwrap(), j as u64);
        }

        #[test]
        fn parse_serialize_parse_identity(a in arb_cloud(30)) {
            let b = parse_xyz(a.to_xyz().as_bytes(), 3).unwrap().cloud;
            prop_assert_eq!(a, b);
        }
    }
}
