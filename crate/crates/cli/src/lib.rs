//! Experiment harness for the shape-concept learner: dataset I/O and
//! generation, the learn/classify runners, unsupervised evaluation with
//! Hungarian label matching, and SVG export of templates.

pub mod dataset;
pub mod eval;
pub mod run;
pub mod svg;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: malformed record: {message}")]
    MalformedRecord { line: usize, message: String },
    #[error("unknown family {0:?} (expected triangle..octagon, ngon-N, or star-N)")]
    UnknownFamily(String),
    #[error("dataset generation failed for family {family}: {source}")]
    Generation {
        family: String,
        source: shapelearn_core::geometry::GeometryError,
    },
    #[error("no observations in dataset")]
    NoObservations,
    #[error("evaluation requires labels on every record")]
    MissingLabels,
    #[error("unknown template id {0}")]
    UnknownTemplate(usize),
    #[error("state file is invalid: {0}")]
    InvalidState(String),
    #[error(transparent)]
    Learner(#[from] shapelearn_core::learner::LearnerError),
}

/// FNV-1a over a byte slice; used for the state-file config hash.
pub(crate) fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}
