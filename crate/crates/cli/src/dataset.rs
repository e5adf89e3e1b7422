//! Line-delimited polygon datasets and their deterministic generation.
//!
//! One record per line:
//! `{"id":0,"label":"triangle","vertices":[[x,y],...]}`.
//! Labels are ground truth for evaluation only; the learner never sees
//! them.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use shapelearn_core::geometry::{generate_polygon, splitmix64, PolygonFamily};
use shapelearn_core::{Point2d, PolygonD};

use crate::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub id: u64,
    pub label: String,
    pub vertices: Vec<[f64; 2]>,
}

impl DatasetRecord {
    /// Validates the vertex list into a polygon.
    pub fn polygon(&self) -> Result<PolygonD, shapelearn_core::geometry::GeometryError> {
        PolygonD::new(
            self.vertices
                .iter()
                .map(|&[x, y]| Point2d::new(x, y))
                .collect(),
        )
    }
}

/// A named generator family: how many sides and which shape family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub name: String,
    pub family: PolygonFamily,
    pub sides: usize,
}

/// Parses family names: the named n-gons (`triangle` through `octagon`),
/// `ngon-N` for arbitrary N, and `star-N` for random stars.
pub fn parse_family(name: &str) -> Result<FamilySpec, HarnessError> {
    let sides = match name {
        "triangle" => Some(3),
        "square" => Some(4),
        "pentagon" => Some(5),
        "hexagon" => Some(6),
        "heptagon" => Some(7),
        "octagon" => Some(8),
        _ => None,
    };
    if let Some(sides) = sides {
        return Ok(FamilySpec {
            name: name.to_string(),
            family: PolygonFamily::Regular,
            sides,
        });
    }
    if let Some(n) = name.strip_prefix("ngon-").and_then(|s| s.parse().ok()) {
        if n >= 3 {
            return Ok(FamilySpec {
                name: name.to_string(),
                family: PolygonFamily::Regular,
                sides: n,
            });
        }
    }
    if let Some(n) = name.strip_prefix("star-").and_then(|s| s.parse().ok()) {
        if n >= 3 {
            return Ok(FamilySpec {
                name: name.to_string(),
                family: PolygonFamily::RandomStar,
                sides: n,
            });
        }
    }
    Err(HarnessError::UnknownFamily(name.to_string()))
}

pub fn parse_families(list: &str) -> Result<Vec<FamilySpec>, HarnessError> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_family)
        .collect()
}

/// Generates `per_family` observations of every family, each with its own
/// random rotation, then shuffles the records. Deterministic in `seed`;
/// record ids are assigned after the shuffle, so they increase in file
/// order.
pub fn generate_dataset(
    families: &[FamilySpec],
    per_family: usize,
    jitter: f64,
    seed: u64,
) -> Result<Vec<DatasetRecord>, HarnessError> {
    let mut records = Vec::with_capacity(families.len() * per_family);
    for (fi, spec) in families.iter().enumerate() {
        for j in 0..per_family {
            let record_seed = splitmix64(
                splitmix64(seed ^ (fi as u64).wrapping_mul(0xA24B_AED4_963E_E407))
                    ^ (j as u64).wrapping_mul(0x9FB2_1C65_1E98_DF25),
            );
            let mut rng = ChaCha8Rng::seed_from_u64(record_seed);
            let rotation = rng.gen_range(0.0..std::f64::consts::TAU);
            let family = match spec.family {
                PolygonFamily::Regular if jitter > 0.0 => PolygonFamily::Perturbed,
                other => other,
            };
            let poly: PolygonD =
                generate_polygon(family, spec.sides, jitter, rotation, 1.0, rng.gen())
                    .map_err(|source| HarnessError::Generation {
                        family: spec.name.clone(),
                        source,
                    })?;
            records.push(DatasetRecord {
                id: 0, // assigned after the shuffle
                label: spec.name.clone(),
                vertices: poly.vertices().iter().map(|v| [v.x, v.y]).collect(),
            });
        }
    }

    // Fisher-Yates with its own stream so families interleave.
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ 0x5851_F42D_4C95_7F2D));
    for i in (1..records.len()).rev() {
        let j = rng.gen_range(0..=i);
        records.swap(i, j);
    }
    for (i, rec) in records.iter_mut().enumerate() {
        rec.id = i as u64;
    }
    Ok(records)
}

pub fn write_dataset(path: &Path, records: &[DatasetRecord]) -> Result<(), HarnessError> {
    let mut out = String::new();
    for rec in records {
        out.push_str(&serde_json::to_string(rec).expect("record serializes"));
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Reads a dataset; malformed lines stop processing with their 1-based
/// line number.
pub fn read_dataset(path: &Path) -> Result<Vec<DatasetRecord>, HarnessError> {
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: DatasetRecord =
            serde_json::from_str(line).map_err(|e| HarnessError::MalformedRecord {
                line: i + 1,
                message: e.to_string(),
            })?;
        records.push(rec);
    }
    Ok(records)
}
