//! Onion peeling: iterated convex hulls over a point set.

use serde::{Deserialize, Serialize};

use super::{convex_hull, Hull, Point2, PointSet, Polygon};
use crate::scalar::Scalar;

/// One convex layer. A `Degenerate` layer holds the two extreme points of
/// a collinear remainder; such layers can only appear at the tail of a
/// stack, because once the remaining points are collinear they stay so.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Layer<T> {
    Hull(Polygon<T>),
    Degenerate(Vec<Point2<T>>),
}

impl<T: Scalar> Layer<T> {
    pub fn vertices(&self) -> &[Point2<T>] {
        match self {
            Layer::Hull(p) => p.vertices(),
            Layer::Degenerate(pts) => pts,
        }
    }

    pub fn as_hull(&self) -> Option<&Polygon<T>> {
        match self {
            Layer::Hull(p) => Some(p),
            Layer::Degenerate(_) => None,
        }
    }
}

/// The convex layers of a point set, outermost first, plus the residual
/// points (at most two) left when peeling terminates. Layer vertex sets
/// are pairwise disjoint and, together with the residual, partition the
/// input exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerStack<T> {
    layers: Vec<Layer<T>>,
    residual: Vec<Point2<T>>,
}

impl<T: Scalar> LayerStack<T> {
    pub fn layers(&self) -> &[Layer<T>] {
        &self.layers
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    /// The non-degenerate layers, outermost first. Always a prefix of
    /// `layers`.
    pub fn hull_layers(&self) -> impl Iterator<Item = &Polygon<T>> {
        self.layers.iter().filter_map(|l| l.as_hull())
    }

    pub fn residual(&self) -> &[Point2<T>] {
        &self.residual
    }

    /// Every input point, re-collected from layers and residual.
    pub fn all_points(&self) -> Vec<Point2<T>> {
        let mut out: Vec<Point2<T>> = self
            .layers
            .iter()
            .flat_map(|l| l.vertices().iter().copied())
            .collect();
        out.extend_from_slice(&self.residual);
        out
    }
}

/// Repeatedly takes the convex hull and removes its vertices until at most
/// two points remain; those become the residual.
pub fn onion_peel<T: Scalar>(points: &PointSet<T>) -> LayerStack<T> {
    let mut remaining: Vec<Point2<T>> = points.points().to_vec();
    let mut layers = Vec::new();

    while remaining.len() >= 3 {
        let set = PointSet::new(remaining.clone()).expect("peel remainder is nonempty");
        let hull = convex_hull(&set);
        let consumed: Vec<Point2<T>> = hull.vertices().to_vec();
        let layer = match hull {
            Hull::Polygon(p) => Layer::Hull(p),
            Hull::Degenerate(d) => Layer::Degenerate(d.extremes),
        };
        layers.push(layer);
        remaining.retain(|p| !consumed.contains(p));
    }

    LayerStack {
        layers,
        residual: remaining,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    fn set(pts: &[(f64, f64)]) -> PointSet<f64> {
        PointSet::new(pts.iter().map(|&(x, y)| p(x, y)).collect()).unwrap()
    }

    #[test]
    fn square_is_a_single_layer() {
        let stack = onion_peel(&set(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]));
        assert_eq!(stack.layer_count(), 1);
        assert!(stack.residual().is_empty());
        assert_eq!(stack.layers()[0].vertices().len(), 4);
    }

    #[test]
    fn nested_squares_with_center_point() {
        // Hand trace: outer square peels first, then the inner square,
        // leaving the near-center point as residual.
        let stack = onion_peel(&set(&[
            (-0.5, -0.5),
            (0.5, -0.5),
            (0.5, 0.5),
            (-0.5, 0.5),
            (-0.25, -0.25),
            (0.25, -0.25),
            (0.25, 0.25),
            (-0.25, 0.25),
            (0.0, 0.01),
        ]));
        assert_eq!(stack.layer_count(), 2);
        assert_eq!(stack.residual(), &[p(0.0, 0.01)]);
        let outer = stack.layers()[0].as_hull().unwrap();
        assert_eq!(
            outer.vertices(),
            &[p(-0.5, -0.5), p(0.5, -0.5), p(0.5, 0.5), p(-0.5, 0.5)]
        );
        let inner = stack.layers()[1].as_hull().unwrap();
        assert_eq!(inner.len(), 4);
    }

    #[test]
    fn tiny_inputs_are_all_residual() {
        let stack = onion_peel(&set(&[(0.0, 0.0)]));
        assert_eq!(stack.layer_count(), 0);
        assert_eq!(stack.residual(), &[p(0.0, 0.0)]);

        let stack = onion_peel(&set(&[(0.0, 0.0), (1.0, 2.0)]));
        assert_eq!(stack.layer_count(), 0);
        assert_eq!(stack.residual().len(), 2);
    }

    #[test]
    fn collinear_points_peel_into_degenerate_layers() {
        // Five points on a line: extremes peel off two at a time until one
        // point is left.
        let stack = onion_peel(&set(&[
            (0.0, 0.0),
            (1.0, 0.0),
            (2.0, 0.0),
            (3.0, 0.0),
            (4.0, 0.0),
        ]));
        assert_eq!(stack.layer_count(), 2);
        assert_eq!(
            stack.layers()[0],
            Layer::Degenerate(vec![p(0.0, 0.0), p(4.0, 0.0)])
        );
        assert_eq!(
            stack.layers()[1],
            Layer::Degenerate(vec![p(1.0, 0.0), p(3.0, 0.0)])
        );
        assert_eq!(stack.residual(), &[p(2.0, 0.0)]);

        // Partition still holds.
        let mut collected = stack.all_points();
        collected.sort_by(|a, b| a.lex_cmp(b));
        let expected: Vec<_> = (0..5).map(|i| p(i as f64, 0.0)).collect();
        assert_eq!(collected, expected);
    }

    #[test]
    fn partition_and_disjointness_hold() {
        let input = set(&[
            (0.0, 0.0),
            (4.0, 0.0),
            (4.0, 4.0),
            (0.0, 4.0),
            (1.0, 1.0),
            (3.0, 1.0),
            (3.0, 3.0),
            (1.0, 3.0),
            (2.0, 2.0),
            (2.1, 2.0),
        ]);
        let stack = onion_peel(&input);
        let mut collected = stack.all_points();
        collected.sort_by(|a, b| a.lex_cmp(b));
        assert_eq!(collected, input.points());

        // Disjoint: total count matches the deduplicated input size.
        let total: usize = stack
            .layers()
            .iter()
            .map(|l| l.vertices().len())
            .sum::<usize>()
            + stack.residual().len();
        assert_eq!(total, input.len());
    }
}
