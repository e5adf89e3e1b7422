//! Distances and similarities between descriptors.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::descriptors::{Alignment, Descriptor};
use crate::scalar::{cast, Scalar};

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("descriptors have mismatched config hashes and cannot be compared")]
    IncomparableDescriptors,
    #[error("descriptor has zero variance; correlation is undefined")]
    ZeroVariance,
    #[error("distance must be nonnegative")]
    NegativeDistance,
}

/// Base distance to use between descriptor vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    Euclidean,
    Correlation,
}

/// Distance configuration. The similarity form is fixed at `s = 1/(1+d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricConfig {
    pub metric: MetricKind,
    pub alignment: Alignment,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self {
            metric: MetricKind::Euclidean,
            alignment: Alignment::CircularShift,
        }
    }
}

fn check_comparable<T: Scalar>(a: &Descriptor<T>, b: &Descriptor<T>) -> Result<(), MetricError> {
    if a.config_hash() != b.config_hash() || a.len() != b.len() {
        return Err(MetricError::IncomparableDescriptors);
    }
    Ok(())
}

/// Plain euclidean distance between two comparable descriptors.
pub fn euclidean_distance<T: Scalar>(
    a: &Descriptor<T>,
    b: &Descriptor<T>,
) -> Result<T, MetricError> {
    check_comparable(a, b)?;
    Ok(euclidean_raw(a.values(), b.values()))
}

/// 1 - Pearson correlation, in `[0, 2]`. Errors when either vector is
/// constant (zero variance).
pub fn correlation_distance<T: Scalar>(
    a: &Descriptor<T>,
    b: &Descriptor<T>,
) -> Result<T, MetricError> {
    check_comparable(a, b)?;
    if is_constant(a.values()) || is_constant(b.values()) {
        return Err(MetricError::ZeroVariance);
    }
    Ok(correlation_raw(a.values(), b.values()))
}

/// Distance minimized over circular shifts of `b`, together with the
/// minimizing shift (ties go to the smallest shift index).
///
/// For geometric descriptors the shift rotates the whole signature; for
/// visual descriptors it rotates the wedge index consistently across all
/// rings. With `Alignment::None` this is the plain metric and shift 0.
pub fn aligned_distance<T: Scalar>(
    a: &Descriptor<T>,
    b: &Descriptor<T>,
    cfg: &MetricConfig,
) -> Result<(T, usize), MetricError> {
    check_comparable(a, b)?;
    if cfg.metric == MetricKind::Correlation
        && (is_constant(a.values()) || is_constant(b.values()))
    {
        return Err(MetricError::ZeroVariance);
    }

    let shifts = match cfg.alignment {
        Alignment::None => 1,
        Alignment::CircularShift => b.wedges(),
    };
    let mut best = T::infinity();
    let mut best_shift = 0usize;
    for s in 0..shifts {
        let d = shifted_distance(a, b, cfg.metric, s);
        if d < best {
            best = d;
            best_shift = s;
        }
    }
    Ok((best, best_shift))
}

/// Distance once `b`'s wedges are advanced by `shift`.
fn shifted_distance<T: Scalar>(
    a: &Descriptor<T>,
    b: &Descriptor<T>,
    metric: MetricKind,
    shift: usize,
) -> T {
    let wedges = b.wedges();
    let bv = b.values();
    let shifted: Vec<T> = (0..bv.len())
        .map(|i| {
            let ring = i / wedges;
            let wedge = (i % wedges + shift) % wedges;
            bv[ring * wedges + wedge]
        })
        .collect();
    match metric {
        MetricKind::Euclidean => euclidean_raw(a.values(), &shifted),
        MetricKind::Correlation => correlation_raw(a.values(), &shifted),
    }
}

fn euclidean_raw<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for i in 0..a.len() {
        let d = a[i] - b[i];
        acc = acc + d * d;
    }
    acc.sqrt()
}

fn correlation_raw<T: Scalar>(a: &[T], b: &[T]) -> T {
    // Exact identity: equal vectors correlate perfectly, without rounding
    // noise from the normalization.
    if a == b {
        return T::zero();
    }
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let mut cov = T::zero();
    for i in 0..a.len() {
        cov = cov + (a[i] - ma) * (b[i] - mb);
    }
    let mut r = cov / (va * vb).sqrt();
    if r > T::one() {
        r = T::one();
    } else if r < -T::one() {
        r = -T::one();
    }
    T::one() - r
}

/// Mean and (unnormalized) sum of squared deviations.
fn mean_var<T: Scalar>(v: &[T]) -> (T, T) {
    let n = cast::<T>(v.len() as f64);
    let mut sum = T::zero();
    for &x in v {
        sum = sum + x;
    }
    let mean = sum / n;
    let mut var = T::zero();
    for &x in v {
        let d = x - mean;
        var = var + d * d;
    }
    (mean, var)
}

/// A vector is zero-variance when all entries are exactly equal.
fn is_constant<T: Scalar>(v: &[T]) -> bool {
    v.iter().all(|&x| x == v[0])
}

/// Maps a distance to a similarity in `(0, 1]` via `s = 1/(1+d)`.
pub fn similarity<T: Scalar>(d: T) -> Result<T, MetricError> {
    if d < T::zero() {
        return Err(MetricError::NegativeDistance);
    }
    Ok(T::one() / (T::one() + d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptors::DescriptorKind;

    fn desc(values: Vec<f64>) -> Descriptor<f64> {
        let n = values.len();
        Descriptor::from_parts(values, DescriptorKind::Geometric, 99, 1, n)
    }

    #[test]
    fn euclidean_basics() {
        let a = desc(vec![0.0, 0.0, 0.0, 0.0]);
        let b = desc(vec![1.0, 1.0, 1.0, 1.0]);
        assert_eq!(euclidean_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(euclidean_distance(&a, &b).unwrap(), 2.0);
        assert_eq!(
            euclidean_distance(&a, &b).unwrap(),
            euclidean_distance(&b, &a).unwrap()
        );
    }

    #[test]
    fn mismatched_hashes_are_incomparable() {
        let a = desc(vec![1.0, 2.0, 3.0, 4.0]);
        let b = Descriptor::from_parts(vec![1.0, 2.0, 3.0, 4.0], DescriptorKind::Geometric, 7, 1, 4);
        assert_eq!(
            euclidean_distance(&a, &b).unwrap_err(),
            MetricError::IncomparableDescriptors
        );
    }

    #[test]
    fn correlation_basics() {
        let a = desc(vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(correlation_distance(&a, &a).unwrap(), 0.0);

        // Perfect anticorrelation: b = -a + c.
        let b = desc(vec![9.0, 8.0, 7.0, 6.0]);
        assert_eq!(correlation_distance(&a, &b).unwrap(), 2.0);

        // Affine invariance: b = 3a + 5.
        let b = desc(vec![8.0, 11.0, 14.0, 17.0]);
        assert!(correlation_distance(&a, &b).unwrap().abs() < 1e-12);
    }

    #[test]
    fn constant_vector_is_zero_variance() {
        let a = desc(vec![1.0, 2.0, 3.0, 4.0]);
        let c = desc(vec![0.5, 0.5, 0.5, 0.5]);
        assert_eq!(
            correlation_distance(&a, &c).unwrap_err(),
            MetricError::ZeroVariance
        );
    }

    #[test]
    fn aligned_distance_recovers_shift() {
        let base = vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0];
        let a = desc(base.clone());
        // b delayed by 7: b[i] = a[(i - 7) mod 8]; advancing b by 7 re-aligns.
        let delayed: Vec<f64> = (0..8).map(|i| base[(i + 8 - 7) % 8]).collect();
        let b = desc(delayed);
        let cfg = MetricConfig::default();
        let (d, shift) = aligned_distance(&a, &b, &cfg).unwrap();
        assert!(d < 1e-12);
        assert_eq!(shift, 7);
    }

    #[test]
    fn alignment_none_is_plain_metric() {
        let a = desc(vec![1.0, 2.0, 3.0, 4.0]);
        let b = desc(vec![4.0, 3.0, 2.0, 1.0]);
        let cfg = MetricConfig {
            metric: MetricKind::Euclidean,
            alignment: Alignment::None,
        };
        let (d, shift) = aligned_distance(&a, &b, &cfg).unwrap();
        assert_eq!(d, euclidean_distance(&a, &b).unwrap());
        assert_eq!(shift, 0);
    }

    #[test]
    fn visual_shift_is_consistent_across_rings() {
        // Two rings of four wedges; b is a delayed by one wedge in both
        // rings, so advancing b by one re-aligns it.
        let av = vec![1.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0];
        let bv = vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0];
        let a = Descriptor::from_parts(av, DescriptorKind::Visual, 5, 2, 4);
        let b = Descriptor::from_parts(bv, DescriptorKind::Visual, 5, 2, 4);
        let cfg = MetricConfig::default();
        let (d, shift) = aligned_distance(&a, &b, &cfg).unwrap();
        assert_eq!(d, 0.0);
        assert_eq!(shift, 1);
    }

    #[test]
    fn similarity_form() {
        assert_eq!(similarity(0.0).unwrap(), 1.0);
        assert_eq!(similarity(1.0).unwrap(), 0.5);
        assert_eq!(similarity(3.0).unwrap(), 0.25);
        assert_eq!(
            similarity(-0.1).unwrap_err(),
            MetricError::NegativeDistance
        );
    }
}
