//! Fixed-length shape representations and pose normalization.
//!
//! Two descriptor kinds are supported:
//!
//! * **Geometric**: the boundary radius signature. The polygon boundary is
//!   resampled at `N` points equally spaced by arc length, starting at the
//!   boundary point farthest from the origin, and entry `i` is the
//!   distance of sample `i` from the origin.
//! * **Visual**: a log-polar occupancy histogram over radial rings and
//!   angular wedges. Ring boundaries are logarithmically spaced, so the
//!   resolution is finest near the center, the way retinal sampling
//!   density falls off with eccentricity.
//!
//! Descriptors carry a configuration hash and are only comparable when the
//! hashes match.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{ring_centroid, Point2, PointSet, Polygon};
use crate::scalar::{cast, Scalar};

#[derive(Debug, Error, PartialEq)]
pub enum DescriptorError {
    #[error("polygon degenerates under pose normalization")]
    DegeneratePolygon,
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("invalid descriptor config: {0}")]
    InvalidConfig(&'static str),
}

/// Which representation a descriptor was produced by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DescriptorKind {
    Geometric,
    Visual,
}

/// Rotation handling at comparison time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alignment {
    None,
    CircularShift,
}

/// Parameters for both descriptor kinds.
///
/// `geometric_samples` (N) is the signature length; `visual_rings` (R) and
/// `visual_wedges` (W) shape the log-polar histogram, giving it length
/// `R * W`. Defaults are N=64, R=5, W=16, so both kinds have comparable
/// length (64 vs 80).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorConfig {
    pub geometric_samples: usize,
    pub visual_rings: usize,
    pub visual_wedges: usize,
    pub rotation_alignment: Alignment,
}

impl Default for DescriptorConfig {
    fn default() -> Self {
        Self {
            geometric_samples: 64,
            visual_rings: 5,
            visual_wedges: 16,
            rotation_alignment: Alignment::CircularShift,
        }
    }
}

/// Radial extent of the log-polar grid on pose-normalized data: the
/// innermost ring captures `r < RING_MIN`, the outermost `r >=` the last
/// boundary, and the boundaries in between are log-spaced.
const RING_MIN: f64 = 0.125;
const RING_MAX: f64 = 2.5;

impl DescriptorConfig {
    pub fn validate(&self) -> Result<(), DescriptorError> {
        if self.geometric_samples < 8 {
            return Err(DescriptorError::InvalidConfig("geometric_samples must be >= 8"));
        }
        if self.visual_rings < 2 {
            return Err(DescriptorError::InvalidConfig("visual_rings must be >= 2"));
        }
        if self.visual_wedges < 4 {
            return Err(DescriptorError::InvalidConfig("visual_wedges must be >= 4"));
        }
        Ok(())
    }

    /// Ring boundaries (length R-1). Radii below the first edge fall in
    /// ring 0; radii at or above the last edge fall in ring R-1.
    pub fn ring_edges(&self) -> Vec<f64> {
        let m = self.visual_rings - 1;
        if m == 1 {
            return vec![RING_MIN];
        }
        let ratio = RING_MAX / RING_MIN;
        let mut edges: Vec<f64> = (0..m)
            .map(|k| RING_MIN * ratio.powf(k as f64 / (m - 1) as f64))
            .collect();
        edges[m - 1] = RING_MAX;
        edges
    }

    /// Opaque token identifying the generating configuration for one
    /// descriptor kind; mismatched tokens make descriptors incomparable.
    pub fn config_hash(&self, kind: DescriptorKind) -> u64 {
        let mut h = Fnv1a::new();
        match kind {
            DescriptorKind::Geometric => {
                h.write_u8(1);
                h.write_u64(self.geometric_samples as u64);
            }
            DescriptorKind::Visual => {
                h.write_u8(2);
                h.write_u64(self.visual_rings as u64);
                h.write_u64(self.visual_wedges as u64);
                for e in self.ring_edges() {
                    h.write_u64(e.to_bits());
                }
            }
        }
        h.write_u8(match self.rotation_alignment {
            Alignment::None => 0,
            Alignment::CircularShift => 1,
        });
        h.finish()
    }
}

/// FNV-1a, kept local so config hashes are stable across builds.
struct Fnv1a(u64);

impl Fnv1a {
    fn new() -> Self {
        Self(0xCBF2_9CE4_8422_2325)
    }
    fn write_u8(&mut self, b: u8) {
        self.0 ^= b as u64;
        self.0 = self.0.wrapping_mul(0x0000_0100_0000_01B3);
    }
    fn write_u64(&mut self, v: u64) {
        for b in v.to_le_bytes() {
            self.write_u8(b);
        }
    }
    fn finish(&self) -> u64 {
        self.0
    }
}

/// A fixed-length real vector summarizing one shape.
///
/// `rings`/`wedges` record the layout so circular-shift alignment knows
/// how to rotate the vector: geometric descriptors are one ring of N
/// wedges; visual descriptors are R rings of W wedges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Descriptor<T> {
    values: Vec<T>,
    kind: DescriptorKind,
    config_hash: u64,
    rings: usize,
    wedges: usize,
}

impl<T: Scalar> Descriptor<T> {
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn kind(&self) -> DescriptorKind {
        self.kind
    }

    pub fn config_hash(&self) -> u64 {
        self.config_hash
    }

    pub fn rings(&self) -> usize {
        self.rings
    }

    pub fn wedges(&self) -> usize {
        self.wedges
    }

    /// Entry at (ring, wedge) in the flattened layout.
    pub fn cell(&self, ring: usize, wedge: usize) -> T {
        self.values[ring * self.wedges + wedge]
    }

    /// Test-and-tooling constructor; production descriptors come from
    /// [`geometric_descriptor`] and [`visual_descriptor`].
    pub fn from_parts(
        values: Vec<T>,
        kind: DescriptorKind,
        config_hash: u64,
        rings: usize,
        wedges: usize,
    ) -> Self {
        assert_eq!(values.len(), rings * wedges, "layout must match length");
        Self {
            values,
            kind,
            config_hash,
            rings,
            wedges,
        }
    }
}

/// Translates the centroid to the origin and scales so the RMS distance of
/// the boundary to the origin equals 1. Rotation is left alone; it is
/// handled at the metric level by circular-shift alignment.
///
/// Internally the polygon is first re-expressed relative to its own first
/// vertex, so translated copies of a polygon normalize to bit-identical
/// results whenever the translation was exactly representable.
pub fn normalize_pose<T: Scalar>(poly: &Polygon<T>) -> Result<Polygon<T>, DescriptorError> {
    let origin = poly.vertices()[0];
    let rel: Vec<Point2<T>> = poly.vertices().iter().map(|v| *v - origin).collect();
    let c = ring_centroid(&rel);
    let shifted: Vec<Point2<T>> = rel.iter().map(|v| *v - c).collect();

    let rms = boundary_rms(&shifted);
    if !(rms > T::zero()) || !rms.is_finite() {
        return Err(DescriptorError::DegeneratePolygon);
    }
    let scaled: Vec<Point2<T>> = shifted
        .iter()
        .map(|v| Point2::new(v.x / rms, v.y / rms))
        .collect();
    Polygon::new(scaled).map_err(|_| DescriptorError::DegeneratePolygon)
}

/// Root-mean-square distance of a closed boundary to the origin, by exact
/// per-edge integration: for an edge a -> b with direction d = b - a,
/// the mean of |p|^2 over the edge is |a|^2 + a.d + |d|^2 / 3.
fn boundary_rms<T: Scalar>(ring: &[Point2<T>]) -> T {
    let third = T::one() / cast::<T>(3.0);
    let mut total_len = T::zero();
    let mut acc = T::zero();
    for i in 0..ring.len() {
        let a = ring[i];
        let b = ring[(i + 1) % ring.len()];
        let d = b - a;
        let len = d.norm();
        let mean_sq = a.norm_sq() + a.dot(&d) + d.norm_sq() * third;
        acc = acc + len * mean_sq;
        total_len = total_len + len;
    }
    (acc / total_len).sqrt()
}

/// Boundary radius signature of a pose-normalized polygon.
///
/// Sampling starts at the vertex farthest from the origin (the boundary
/// maximum always sits at a vertex); radius ties within a small relative
/// tolerance are broken by smallest angle.
pub fn geometric_descriptor<T: Scalar>(
    poly: &Polygon<T>,
    cfg: &DescriptorConfig,
) -> Result<Descriptor<T>, DescriptorError> {
    cfg.validate()?;
    let n = cfg.geometric_samples;
    let verts = poly.vertices();
    let k = verts.len();

    // Cumulative arc length; cum[i] is the arc position of vertex i.
    let mut cum: Vec<T> = Vec::with_capacity(k + 1);
    cum.push(T::zero());
    for i in 0..k {
        let seg = (verts[(i + 1) % k] - verts[i]).norm();
        let last = *cum.last().unwrap();
        cum.push(last + seg);
    }
    let total = cum[k];

    let start = start_vertex(verts);
    let start_arc = cum[start];

    let step = total / cast::<T>(n as f64);
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let mut s = start_arc + step * cast::<T>(i as f64);
        if s >= total {
            s = s - total;
        }
        let p = point_at_arc(verts, &cum, s);
        values.push(p.norm());
    }

    Ok(Descriptor {
        values,
        kind: DescriptorKind::Geometric,
        config_hash: cfg.config_hash(DescriptorKind::Geometric),
        rings: 1,
        wedges: n,
    })
}

/// Index of the vertex with maximum radius; ties within a relative
/// tolerance go to the smallest angle.
fn start_vertex<T: Scalar>(verts: &[Point2<T>]) -> usize {
    let radii: Vec<T> = verts.iter().map(|v| v.norm()).collect();
    let max_r = radii
        .iter()
        .copied()
        .fold(T::zero(), |a, b| if b > a { b } else { a });
    let tol = max_r * T::epsilon() * cast::<T>(32.0);
    let mut best = None;
    let mut best_angle = T::infinity();
    for (i, v) in verts.iter().enumerate() {
        if radii[i] + tol >= max_r {
            let angle = v.angle();
            if best.is_none() || angle < best_angle {
                best = Some(i);
                best_angle = angle;
            }
        }
    }
    best.unwrap()
}

/// Point at arc position `s` (within `[0, total)`) along the boundary.
fn point_at_arc<T: Scalar>(verts: &[Point2<T>], cum: &[T], s: T) -> Point2<T> {
    let k = verts.len();
    // cum is sorted; find the edge containing s.
    let mut lo = 0usize;
    let mut hi = k;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if cum[mid] <= s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = verts[lo];
    let b = verts[(lo + 1) % k];
    let seg = cum[lo + 1] - cum[lo];
    if seg == T::zero() {
        return a;
    }
    let t = (s - cum[lo]) / seg;
    Point2::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t)
}

/// Log-polar occupancy histogram of a pose-normalized point set.
///
/// Entry `(ring, wedge)` is the fraction of points in that cell; the
/// flattened vector has length `R * W`, is nonnegative, and sums to 1.
pub fn visual_descriptor<T: Scalar>(
    points: &PointSet<T>,
    cfg: &DescriptorConfig,
) -> Result<Descriptor<T>, DescriptorError> {
    cfg.validate()?;
    if points.is_empty() {
        return Err(DescriptorError::EmptyPointSet);
    }
    let rings = cfg.visual_rings;
    let wedges = cfg.visual_wedges;
    let edges: Vec<T> = cfg.ring_edges().into_iter().map(cast::<T>).collect();

    let mut counts = vec![0usize; rings * wedges];
    for p in points.iter() {
        let r = p.norm();
        let ring = edges.iter().take_while(|&&e| r >= e).count();
        let tau = T::TAU();
        let mut theta = p.angle();
        if theta < T::zero() {
            theta = theta + tau;
        }
        let mut wedge = (theta / tau * cast::<T>(wedges as f64))
            .floor()
            .to_usize()
            .unwrap_or(0);
        if wedge >= wedges {
            wedge = wedges - 1;
        }
        counts[ring * wedges + wedge] += 1;
    }

    let total = cast::<T>(points.len() as f64);
    let values: Vec<T> = counts
        .into_iter()
        .map(|c| cast::<T>(c as f64) / total)
        .collect();

    Ok(Descriptor {
        values,
        kind: DescriptorKind::Visual,
        config_hash: cfg.config_hash(DescriptorKind::Visual),
        rings,
        wedges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_polygon, PolygonFamily};

    fn p(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    fn square_at(cx: f64, cy: f64, half: f64) -> Polygon<f64> {
        Polygon::new(vec![
            p(cx - half, cy - half),
            p(cx + half, cy - half),
            p(cx + half, cy + half),
            p(cx - half, cy + half),
        ])
        .unwrap()
    }

    #[test]
    fn normalized_square_is_centered_with_unit_rms() {
        let norm = normalize_pose(&square_at(10.0, 10.0, 0.5)).unwrap();
        let c = norm.centroid();
        assert!(c.norm() < 1e-12);
        // Corner radius of an RMS-normalized square is sqrt(3/2).
        let expected = (1.5f64).sqrt();
        for v in norm.vertices() {
            assert!((v.norm() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn normalization_is_scale_invariant() {
        let base = square_at(0.3, -0.2, 0.5);
        let scaled = base.scaled(7.0).unwrap();
        let a = normalize_pose(&base).unwrap();
        let b = normalize_pose(&scaled).unwrap();
        for (u, v) in a.vertices().iter().zip(b.vertices()) {
            assert!((u.x - v.x).abs() < 1e-9);
            assert!((u.y - v.y).abs() < 1e-9);
        }
    }

    #[test]
    fn square_signature_is_four_periodic() {
        let cfg = DescriptorConfig::default();
        let norm = normalize_pose(&square_at(0.0, 0.0, 0.5)).unwrap();
        let d = geometric_descriptor(&norm, &cfg).unwrap();
        assert_eq!(d.len(), 64);
        let corner = (1.5f64).sqrt();
        for &offset in &[0usize, 16, 32, 48] {
            assert!(
                (d.values()[offset] - corner).abs() < 1e-12,
                "offset {offset}: {} vs {corner}",
                d.values()[offset]
            );
        }
        for i in 0..64 {
            assert!((d.values()[i] - d.values()[(i + 16) % 64]).abs() < 1e-12);
        }
    }

    #[test]
    fn near_circle_signature_is_near_constant() {
        let cfg = DescriptorConfig::default();
        let poly: Polygon<f64> =
            generate_polygon(PolygonFamily::Regular, 64, 0.0, 0.0, 1.0, 0).unwrap();
        let norm = normalize_pose(&poly).unwrap();
        let d = geometric_descriptor(&norm, &cfg).unwrap();
        let max = d.values().iter().cloned().fold(f64::MIN, f64::max);
        let min = d.values().iter().cloned().fold(f64::MAX, f64::min);
        assert!(max - min < 0.002, "spread {}", max - min);

        // Regular-polygon radius formula: the boundary RMS of a regular
        // n-gon with unit circumradius is sqrt((2 + cos(2pi/n)) / 3), and
        // with 64 samples over 64 edges every sample lands on a vertex.
        let n = 64f64;
        let expected = 1.0 / ((2.0 + (std::f64::consts::TAU / n).cos()) / 3.0).sqrt();
        for &v in d.values() {
            assert!((v - expected).abs() < 1e-9, "{v} vs {expected}");
        }
    }

    #[test]
    fn single_location_point_set_fills_one_cell() {
        let cfg = DescriptorConfig::default();
        let set = PointSet::new(vec![p(1.0, 0.0)]).unwrap();
        let d = visual_descriptor(&set, &cfg).unwrap();
        let nonzero: Vec<(usize, f64)> = d
            .values()
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(i, &v)| (i, v))
            .collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0].1, 1.0);
        // Radius 1.0 with default rings lands between the 2nd and 3rd edge.
        let edges = cfg.ring_edges();
        let ring = edges.iter().take_while(|&&e| 1.0 >= e).count();
        assert_eq!(nonzero[0].0, ring * cfg.visual_wedges);
    }

    #[test]
    fn wedge_rotation_shifts_the_histogram() {
        let cfg = DescriptorConfig::default();
        let w = cfg.visual_wedges;
        let step = std::f64::consts::TAU / w as f64;
        // Points at wedge centers, away from cell boundaries.
        let pts: Vec<Point2<f64>> = (0..5)
            .map(|i| {
                let theta = (i as f64 + 0.5) * step;
                let r = 0.2 + 0.4 * i as f64 / 5.0;
                p(r * theta.cos(), r * theta.sin())
            })
            .collect();
        let rotated: Vec<Point2<f64>> = pts
            .iter()
            .map(|q| {
                let (sin, cos) = step.sin_cos();
                p(q.x * cos - q.y * sin, q.x * sin + q.y * cos)
            })
            .collect();
        let a = visual_descriptor(&PointSet::new(pts).unwrap(), &cfg).unwrap();
        let b = visual_descriptor(&PointSet::new(rotated).unwrap(), &cfg).unwrap();
        for ring in 0..cfg.visual_rings {
            for wedge in 0..w {
                assert_eq!(a.cell(ring, wedge), b.cell(ring, (wedge + 1) % w));
            }
        }
    }

    #[test]
    fn visual_descriptor_is_a_probability_vector() {
        let cfg = DescriptorConfig::default();
        let poly: Polygon<f64> =
            generate_polygon(PolygonFamily::RandomStar, 12, 0.0, 0.0, 1.0, 5).unwrap();
        let norm = normalize_pose(&poly).unwrap();
        let d = visual_descriptor(&PointSet::from(&norm), &cfg).unwrap();
        assert!(d.values().iter().all(|&v| v >= 0.0));
        let sum: f64 = d.values().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn config_hash_separates_kinds_and_params() {
        let cfg = DescriptorConfig::default();
        assert_ne!(
            cfg.config_hash(DescriptorKind::Geometric),
            cfg.config_hash(DescriptorKind::Visual)
        );
        let other = DescriptorConfig {
            geometric_samples: 32,
            ..cfg
        };
        assert_ne!(
            cfg.config_hash(DescriptorKind::Geometric),
            other.config_hash(DescriptorKind::Geometric)
        );
        // Visual hash ignores the geometric sample count.
        assert_eq!(
            cfg.config_hash(DescriptorKind::Visual),
            other.config_hash(DescriptorKind::Visual)
        );
    }

    #[test]
    fn config_validation_bounds() {
        let mut cfg = DescriptorConfig::default();
        cfg.geometric_samples = 7;
        assert!(cfg.validate().is_err());
        let mut cfg = DescriptorConfig::default();
        cfg.visual_rings = 1;
        assert!(cfg.validate().is_err());
        let mut cfg = DescriptorConfig::default();
        cfg.visual_wedges = 3;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn ring_edges_are_log_spaced() {
        let cfg = DescriptorConfig::default();
        let edges = cfg.ring_edges();
        assert_eq!(edges.len(), cfg.visual_rings - 1);
        assert_eq!(edges[0], 0.125);
        assert_eq!(*edges.last().unwrap(), 2.5);
        // Log spacing: constant ratio between consecutive edges.
        let r0 = edges[1] / edges[0];
        for w in edges.windows(2) {
            assert!((w[1] / w[0] - r0).abs() < 1e-12);
        }
    }
}
