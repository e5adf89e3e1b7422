//! Online learning of shape concepts from polygon observations.
//!
//! Observations arrive as planar polygons. Each one is pose-normalized,
//! summarized by a fixed-length descriptor, and compared against the
//! templates learned so far. Sufficiently novel observations are peeled
//! into convex layers and become new templates; familiar ones are assigned
//! to the best-matching template. Every observation is also described as a
//! vector of similarities to the learned templates, so the description
//! space grows one dimension per template.
//!
//! Modules follow the pipeline order:
//!
//! 1. [`geometry`] — points, polygons, convex hulls, convex layers
//!    (onion peeling), synthetic polygon generation.
//! 2. [`descriptors`] — pose normalization plus the two shape
//!    representations: a boundary radius signature and a log-polar
//!    occupancy histogram.
//! 3. [`metrics`] — euclidean / correlation distances, circular-shift
//!    alignment, and the distance-to-similarity map.
//! 4. [`templates`] — convex-layer templates over pooled member points and
//!    embedding of observations into template space.
//! 5. [`learner`] — the online observe / classify / describe loop.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the default `f64` precision used by the CLI.

pub mod descriptors;
pub mod geometry;
pub mod learner;
pub mod metrics;
pub mod scalar;
pub mod templates;

pub use scalar::Scalar;

pub use descriptors::{Alignment, Descriptor, DescriptorConfig, DescriptorKind};
pub use geometry::{Hull, Layer, LayerStack, Point2, PointSet, Polygon, PolygonFamily};
pub use learner::{ClassifyMode, Decision, DecisionKind, Learner, LearnerConfig, Memory};
pub use metrics::{MetricConfig, MetricKind};
pub use templates::{Embedding, Template, TemplateLibrary};

/// Default-precision aliases (`f64`), the instantiation the CLI uses.
pub type Point2d = Point2<f64>;
pub type PointSetD = PointSet<f64>;
pub type PolygonD = Polygon<f64>;
pub type LayerStackD = LayerStack<f64>;
pub type DescriptorD = Descriptor<f64>;
pub type EmbeddingD = Embedding<f64>;
pub type TemplateD = Template<f64>;
pub type TemplateLibraryD = TemplateLibrary<f64>;
pub type LearnerD = Learner<f64>;
pub type DecisionD = Decision<f64>;

/// Single-precision aliases for the geometric primitives.
pub type Point2f = Point2<f32>;
pub type PointSetF = PointSet<f32>;
pub type PolygonF = Polygon<f32>;
pub type LayerStackF = LayerStack<f32>;
