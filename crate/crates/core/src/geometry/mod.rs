//! Planar primitives: points, point sets, simple polygons, convex hulls,
//! convex layers (onion peeling), and synthetic polygon generation.
//!
//! Everything here is a pure function on immutable values and safe to call
//! concurrently. Orientation predicates compare cross products against
//! [`Scalar::orient_eps`]; data is expected at roughly unit scale.

mod generate;
mod hull;
mod peel;

pub use generate::{generate_polygon, splitmix64, PolygonFamily};
pub use hull::{convex_hull, DegenerateHull, Hull};
pub use peel::{onion_peel, Layer, LayerStack};

use std::cmp::Ordering;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{cast, Scalar};

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("coordinate is not finite")]
    NonFiniteCoordinate,
    #[error("point set must contain at least one point")]
    EmptyPointSet,
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon has zero signed area")]
    ZeroArea,
    #[error("polygon has three consecutive collinear vertices at index {0}")]
    CollinearVertices(usize),
    #[error("polygon is not simple: edges {0} and {1} intersect")]
    SelfIntersection(usize, usize),
    #[error("invalid generator parameters: {0}")]
    InvalidGeneratorParams(&'static str),
    #[error("polygon generation failed for {family:?} after {attempts} attempts")]
    GenerationFailed { family: PolygonFamily, attempts: u32 },
}

/// A point in the plane. Coordinates are finite by the invariants of every
/// container that holds them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn norm_sq(&self) -> T {
        self.x * self.x + self.y * self.y
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn dot(&self, other: &Self) -> T {
        self.x * other.x + self.y * other.y
    }

    /// Angle from the positive x-axis, in `(-pi, pi]`.
    pub fn angle(&self) -> T {
        self.y.atan2(self.x)
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self::new(self.x * factor, self.y * factor)
    }

    /// Lexicographic order on (x, y). Coordinates are finite, so the
    /// partial order is total here.
    pub(crate) fn lex_cmp(&self, other: &Self) -> Ordering {
        match self.x.partial_cmp(&other.x) {
            Some(Ordering::Equal) | None => self.y.partial_cmp(&other.y).unwrap_or(Ordering::Equal),
            Some(ord) => ord,
        }
    }
}

impl<T: Scalar> Add for Point2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Scalar> Sub for Point2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

/// Cross product of `(q - p)` and `(r - p)`: positive when `p,q,r` make a
/// counter-clockwise turn.
pub(crate) fn orient<T: Scalar>(p: Point2<T>, q: Point2<T>, r: Point2<T>) -> T {
    (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
}

/// Sign of an orientation cross product under the scalar's tolerance:
/// `1` = left turn, `-1` = right turn, `0` = collinear.
pub(crate) fn orient_sign<T: Scalar>(p: Point2<T>, q: Point2<T>, r: Point2<T>) -> i8 {
    let v = orient(p, q, r);
    if v > T::orient_eps() {
        1
    } else if v < -T::orient_eps() {
        -1
    } else {
        0
    }
}

/// An unordered, deduplicated set of finite points. Construction sorts
/// lexicographically, so equal member multisets give bit-identical sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet<T> {
    points: Vec<Point2<T>>,
}

impl<T: Scalar> PointSet<T> {
    /// Builds a set from arbitrary points: validates finiteness, sorts,
    /// and removes exact duplicates. Errors on an empty input.
    pub fn new(points: Vec<Point2<T>>) -> Result<Self, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::EmptyPointSet);
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::NonFiniteCoordinate);
        }
        let mut points = points;
        points.sort_by(|a, b| a.lex_cmp(b));
        points.dedup();
        Ok(Self { points })
    }

    /// Set union of several point sets (the pooling step for templates).
    pub fn pooled<'a, I>(sets: I) -> Result<Self, GeometryError>
    where
        T: 'a,
        I: IntoIterator<Item = &'a PointSet<T>>,
    {
        let mut all = Vec::new();
        for set in sets {
            all.extend_from_slice(&set.points);
        }
        Self::new(all)
    }

    pub fn points(&self) -> &[Point2<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point2<T>> {
        self.points.iter()
    }
}

impl<T: Scalar> From<&Polygon<T>> for PointSet<T> {
    fn from(poly: &Polygon<T>) -> Self {
        PointSet::new(poly.vertices().to_vec()).expect("polygon vertices form a valid point set")
    }
}

/// A simple polygon with strictly counter-clockwise orientation, no three
/// consecutive collinear vertices, and a canonical vertex order: the list
/// starts at the lexicographically smallest (x, then y) vertex. Canonical
/// ordering makes polygon equality plain list equality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon<T> {
    vertices: Vec<Point2<T>>,
}

impl<T: Scalar> Polygon<T> {
    /// Validates and canonicalizes a vertex ring. Clockwise input is
    /// reversed rather than rejected.
    pub fn new(vertices: Vec<Point2<T>>) -> Result<Self, GeometryError> {
        let k = vertices.len();
        if k < 3 {
            return Err(GeometryError::TooFewVertices(k));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::NonFiniteCoordinate);
        }

        let mut vertices = vertices;
        let area2 = ring_signed_area_doubled(&vertices);
        if area2 == T::zero() {
            return Err(GeometryError::ZeroArea);
        }
        if area2 < T::zero() {
            vertices.reverse();
        }

        // Rotate so the lexicographically smallest vertex comes first.
        let start = vertices
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.lex_cmp(b))
            .map(|(i, _)| i)
            .unwrap();
        vertices.rotate_left(start);

        for i in 0..vertices.len() {
            let p = vertices[i];
            let q = vertices[(i + 1) % k];
            let r = vertices[(i + 2) % k];
            if orient_sign(p, q, r) == 0 {
                return Err(GeometryError::CollinearVertices((i + 1) % k));
            }
        }
        if let Some((i, j)) = first_self_intersection(&vertices) {
            return Err(GeometryError::SelfIntersection(i, j));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point2<T>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Shoelace area; positive because vertices are counter-clockwise.
    pub fn signed_area(&self) -> T {
        ring_signed_area_doubled(&self.vertices) / cast::<T>(2.0)
    }

    /// Area-weighted centroid. Computed in a first-vertex-relative frame,
    /// which keeps the result accurate for polygons far from the origin.
    pub fn centroid(&self) -> Point2<T> {
        let origin = self.vertices[0];
        let rel: Vec<Point2<T>> = self.vertices.iter().map(|v| *v - origin).collect();
        let c = ring_centroid(&rel);
        c + origin
    }

    pub fn perimeter(&self) -> T {
        let mut total = T::zero();
        for i in 0..self.vertices.len() {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % self.vertices.len()];
            total = total + (b - a).norm();
        }
        total
    }

    pub fn translated(&self, offset: Point2<T>) -> Result<Self, GeometryError> {
        Self::new(self.vertices.iter().map(|v| *v + offset).collect())
    }

    pub fn scaled(&self, factor: T) -> Result<Self, GeometryError> {
        Self::new(self.vertices.iter().map(|v| v.scaled(factor)).collect())
    }

    /// Rotation about the origin by `angle` radians.
    pub fn rotated(&self, angle: T) -> Result<Self, GeometryError> {
        let (sin, cos) = angle.sin_cos();
        Self::new(
            self.vertices
                .iter()
                .map(|v| Point2::new(v.x * cos - v.y * sin, v.x * sin + v.y * cos))
                .collect(),
        )
    }
}

/// Twice the shoelace signed area of a vertex ring.
pub(crate) fn ring_signed_area_doubled<T: Scalar>(ring: &[Point2<T>]) -> T {
    let mut acc = T::zero();
    for i in 0..ring.len() {
        let a = ring[i];
        let b = ring[(i + 1) % ring.len()];
        acc = acc + (a.x * b.y - b.x * a.y);
    }
    acc
}

/// Area-weighted centroid of a vertex ring (assumed non-degenerate).
pub(crate) fn ring_centroid<T: Scalar>(ring: &[Point2<T>]) -> Point2<T> {
    let mut cx = T::zero();
    let mut cy = T::zero();
    let mut area2 = T::zero();
    for i in 0..ring.len() {
        let a = ring[i];
        let b = ring[(i + 1) % ring.len()];
        let w = a.x * b.y - b.x * a.y;
        cx = cx + (a.x + b.x) * w;
        cy = cy + (a.y + b.y) * w;
        area2 = area2 + w;
    }
    let scale = cast::<T>(3.0) * area2;
    Point2::new(cx / scale, cy / scale)
}

/// Returns the first pair of non-adjacent edges that intersect, if any.
fn first_self_intersection<T: Scalar>(ring: &[Point2<T>]) -> Option<(usize, usize)> {
    let k = ring.len();
    for i in 0..k {
        for j in (i + 1)..k {
            // Skip adjacent edges (they share exactly one endpoint).
            if j == i + 1 || (i == 0 && j == k - 1) {
                continue;
            }
            let (a1, a2) = (ring[i], ring[(i + 1) % k]);
            let (b1, b2) = (ring[j], ring[(j + 1) % k]);
            if segments_intersect(a1, a2, b1, b2) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Whether two closed segments intersect (properly or by touching).
fn segments_intersect<T: Scalar>(
    a1: Point2<T>,
    a2: Point2<T>,
    b1: Point2<T>,
    b2: Point2<T>,
) -> bool {
    let d1 = orient_sign(b1, b2, a1);
    let d2 = orient_sign(b1, b2, a2);
    let d3 = orient_sign(a1, a2, b1);
    let d4 = orient_sign(a1, a2, b2);
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d1 == 0 && on_segment(b1, b2, a1))
        || (d2 == 0 && on_segment(b1, b2, a2))
        || (d3 == 0 && on_segment(a1, a2, b1))
        || (d4 == 0 && on_segment(a1, a2, b2))
}

/// Whether `p` (already known collinear with `a..b`) lies within the
/// segment's bounding box.
fn on_segment<T: Scalar>(a: Point2<T>, b: Point2<T>, p: Point2<T>) -> bool {
    let (min_x, max_x) = if a.x <= b.x { (a.x, b.x) } else { (b.x, a.x) };
    let (min_y, max_y) = if a.y <= b.y { (a.y, b.y) } else { (b.y, a.y) };
    p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y
}
