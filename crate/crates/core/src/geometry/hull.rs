//! Convex hull by monotone chain, with the strict-hull convention:
//! points lying on a hull edge are not hull vertices.

use serde::{Deserialize, Serialize};

use super::{orient, Point2, PointSet, Polygon};
use crate::scalar::Scalar;

/// Hull of a point set: a convex polygon, or a degenerate report when the
/// input has fewer than three non-collinear points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Hull<T> {
    Polygon(Polygon<T>),
    Degenerate(DegenerateHull<T>),
}

/// Extreme points of a degenerate (single point or collinear) input: the
/// lexicographically smallest and largest points, in that order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegenerateHull<T> {
    pub extremes: Vec<Point2<T>>,
}

impl<T: Scalar> Hull<T> {
    pub fn as_polygon(&self) -> Option<&Polygon<T>> {
        match self {
            Hull::Polygon(p) => Some(p),
            Hull::Degenerate(_) => None,
        }
    }

    /// Vertices of the hull: polygon vertices or degenerate extremes.
    pub fn vertices(&self) -> &[Point2<T>] {
        match self {
            Hull::Polygon(p) => p.vertices(),
            Hull::Degenerate(d) => &d.extremes,
        }
    }
}

/// Minimal convex polygon containing all input points.
///
/// Vertices come out counter-clockwise starting from the lexicographically
/// smallest (x, then y) vertex. Collinear points on hull edges are dropped.
/// Collinear or too-small inputs yield `Hull::Degenerate` carrying the
/// extreme points. Finiteness is guaranteed by the `PointSet` invariants.
pub fn convex_hull<T: Scalar>(points: &PointSet<T>) -> Hull<T> {
    let pts = points.points(); // already sorted lexicographically
    let n = pts.len();
    if n <= 2 {
        return Hull::Degenerate(DegenerateHull {
            extremes: pts.to_vec(),
        });
    }

    let eps = T::orient_eps();
    let mut lower: Vec<Point2<T>> = Vec::with_capacity(n);
    for &p in pts {
        while lower.len() >= 2
            && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= eps
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2<T>> = Vec::with_capacity(n);
    for &p in pts.iter().rev() {
        while upper.len() >= 2
            && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= eps
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    let mut ring = lower;
    ring.extend(upper);

    // The chains guarantee strict turns inside each chain; the two seam
    // vertices can still be within tolerance of collinear, so sweep until
    // every turn is strict.
    loop {
        let k = ring.len();
        if k < 3 {
            return Hull::Degenerate(DegenerateHull {
                extremes: vec![pts[0], pts[n - 1]],
            });
        }
        let mut removed = false;
        let mut kept: Vec<Point2<T>> = Vec::with_capacity(k);
        for i in 0..k {
            let prev = ring[(i + k - 1) % k];
            let next = ring[(i + 1) % k];
            if orient(prev, ring[i], next) <= eps {
                removed = true;
            } else {
                kept.push(ring[i]);
            }
        }
        if !removed {
            break;
        }
        ring = kept;
    }

    let poly = Polygon::new(ring).expect("strict hull ring is a valid polygon");
    Hull::Polygon(poly)
}
