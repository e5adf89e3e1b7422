//! Scalar abstraction for the geometry and descriptor pipelines.

use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the whole pipeline is generic over.
///
/// Shape data is expected at unit scale (callers pose-normalize before
/// comparing), which keeps the absolute orientation tolerance meaningful.
pub trait Scalar: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {
    /// Tolerance for classifying the sign of an orientation cross product
    /// on unit-scale data. Cross products with magnitude at or below this
    /// are treated as collinear.
    fn orient_eps() -> Self;
}

impl Scalar for f32 {
    fn orient_eps() -> Self {
        1e-6
    }
}

impl Scalar for f64 {
    fn orient_eps() -> Self {
        1e-12
    }
}

/// Cast an `f64` constant into the working scalar type.
pub(crate) fn cast<T: Scalar>(v: f64) -> T {
    T::from(v).expect("finite f64 constant converts to scalar")
}
