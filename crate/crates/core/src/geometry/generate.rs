//! Deterministic synthetic polygon generation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{GeometryError, Point2, Polygon};
use crate::scalar::{cast, Scalar};

/// Shape family for the generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolygonFamily {
    /// Regular n-gon with a vertex at angle `pi/2 + rotation`.
    Regular,
    /// Regular n-gon with each vertex displaced radially and tangentially
    /// by uniform noise of amplitude `jitter * scale`.
    Perturbed,
    /// Star-shaped polygon: n sorted random angles, radii uniform in
    /// `[0.5, 1] * scale`.
    RandomStar,
}

const MAX_ATTEMPTS: u32 = 32;

/// Generates one polygon, deterministically in `seed`.
///
/// `jitter` is a fraction of the circumradius and must be below 0.5.
/// Candidates that violate the polygon invariants (possible for jittered
/// and star shapes) are regenerated from a per-attempt sub-seed, a bounded
/// number of times.
pub fn generate_polygon<T: Scalar>(
    family: PolygonFamily,
    sides: usize,
    jitter: f64,
    rotation: f64,
    scale: f64,
    seed: u64,
) -> Result<Polygon<T>, GeometryError> {
    if sides < 3 {
        return Err(GeometryError::InvalidGeneratorParams("sides must be >= 3"));
    }
    if !(0.0..0.5).contains(&jitter) {
        return Err(GeometryError::InvalidGeneratorParams(
            "jitter must be in [0, 0.5)",
        ));
    }
    if !(scale > 0.0) || !scale.is_finite() || !rotation.is_finite() {
        return Err(GeometryError::InvalidGeneratorParams(
            "scale must be positive and finite, rotation finite",
        ));
    }

    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(
            seed ^ (attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        ));
        let ring = match family {
            PolygonFamily::Regular => regular_ring(sides, rotation, scale),
            PolygonFamily::Perturbed => perturbed_ring(sides, jitter, rotation, scale, &mut rng),
            PolygonFamily::RandomStar => star_ring(sides, rotation, scale, &mut rng),
        };
        let vertices: Vec<Point2<T>> = ring
            .into_iter()
            .map(|(x, y)| Point2::new(cast(x), cast(y)))
            .collect();
        if let Ok(poly) = Polygon::new(vertices) {
            return Ok(poly);
        }
    }
    Err(GeometryError::GenerationFailed {
        family,
        attempts: MAX_ATTEMPTS,
    })
}

fn regular_ring(sides: usize, rotation: f64, scale: f64) -> Vec<(f64, f64)> {
    let phase = std::f64::consts::FRAC_PI_2 + rotation;
    (0..sides)
        .map(|k| {
            let theta = phase + std::f64::consts::TAU * k as f64 / sides as f64;
            (scale * theta.cos(), scale * theta.sin())
        })
        .collect()
}

fn perturbed_ring(
    sides: usize,
    jitter: f64,
    rotation: f64,
    scale: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<(f64, f64)> {
    let amp = jitter * scale;
    let phase = std::f64::consts::FRAC_PI_2 + rotation;
    (0..sides)
        .map(|k| {
            let theta = phase + std::f64::consts::TAU * k as f64 / sides as f64;
            let (sin, cos) = theta.sin_cos();
            let dr = if amp > 0.0 { rng.gen_range(-amp..=amp) } else { 0.0 };
            let dt = if amp > 0.0 { rng.gen_range(-amp..=amp) } else { 0.0 };
            // Radial unit (cos, sin), tangential unit (-sin, cos).
            (
                (scale + dr) * cos - dt * sin,
                (scale + dr) * sin + dt * cos,
            )
        })
        .collect()
}

fn star_ring(sides: usize, rotation: f64, scale: f64, rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let mut angles: Vec<f64> = (0..sides)
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    angles
        .into_iter()
        .map(|a| {
            let r = scale * rng.gen_range(0.5..=1.0);
            let theta = a + rotation;
            (r * theta.cos(), r * theta.sin())
        })
        .collect()
}

/// SplitMix64 step, used to decorrelate per-attempt sub-seeds.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_square_has_unit_circumradius() {
        let poly: Polygon<f64> =
            generate_polygon(PolygonFamily::Regular, 4, 0.0, 0.0, 1.0, 7).unwrap();
        assert_eq!(poly.len(), 4);
        for v in poly.vertices() {
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
        let c = poly.centroid();
        assert!(c.norm() < 1e-12);
        // Vertex at angle pi/2: (0, 1).
        assert!(poly
            .vertices()
            .iter()
            .any(|v| (v.x).abs() < 1e-12 && (v.y - 1.0).abs() < 1e-12));
    }

    #[test]
    fn rotated_triangle_vertex_lands_at_150_degrees() {
        let rot = std::f64::consts::FRAC_PI_3;
        let poly: Polygon<f64> =
            generate_polygon(PolygonFamily::Regular, 3, 0.0, rot, 1.0, 0).unwrap();
        let expected = (150f64.to_radians().cos(), 150f64.to_radians().sin());
        assert!(poly
            .vertices()
            .iter()
            .any(|v| (v.x - expected.0).abs() < 1e-12 && (v.y - expected.1).abs() < 1e-12));
    }

    #[test]
    fn perturbed_generation_is_deterministic() {
        let a: Polygon<f64> =
            generate_polygon(PolygonFamily::Perturbed, 6, 0.02, 0.0, 1.0, 42).unwrap();
        let b: Polygon<f64> =
            generate_polygon(PolygonFamily::Perturbed, 6, 0.02, 0.0, 1.0, 42).unwrap();
        assert_eq!(a, b);
        let c: Polygon<f64> =
            generate_polygon(PolygonFamily::Perturbed, 6, 0.02, 0.0, 1.0, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn stars_are_valid_polygons() {
        for seed in 0..50 {
            let poly: Polygon<f64> =
                generate_polygon(PolygonFamily::RandomStar, 9, 0.0, 0.3, 1.0, seed).unwrap();
            assert!(poly.len() >= 3);
            assert!(poly.signed_area() > 0.0);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(
            generate_polygon::<f64>(PolygonFamily::Regular, 2, 0.0, 0.0, 1.0, 0),
            Err(GeometryError::InvalidGeneratorParams(_))
        ));
        assert!(matches!(
            generate_polygon::<f64>(PolygonFamily::Perturbed, 4, 0.5, 0.0, 1.0, 0),
            Err(GeometryError::InvalidGeneratorParams(_))
        ));
        assert!(matches!(
            generate_polygon::<f64>(PolygonFamily::Regular, 4, 0.0, 0.0, 0.0, 0),
            Err(GeometryError::InvalidGeneratorParams(_))
        ));
    }
}
