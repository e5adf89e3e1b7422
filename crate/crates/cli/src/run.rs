//! Learn/classify runners and the versioned state file.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use shapelearn_core::learner::DecisionKind;
use shapelearn_core::{Learner, LearnerConfig};

use crate::dataset::DatasetRecord;
use crate::{fnv1a64, HarnessError};

pub const STATE_FORMAT_VERSION: u32 = 1;

/// Serialized learner with a versioned header. The config hash covers the
/// full learner configuration, so mismatched or corrupted state files are
/// rejected on load.
#[derive(Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub format_version: u32,
    pub config_hash: u64,
    pub learner: Learner<f64>,
}

pub fn config_hash(config: &LearnerConfig<f64>) -> u64 {
    fnv1a64(serde_json::to_string(config).expect("config serializes").as_bytes())
}

pub fn save_state(path: &Path, learner: &Learner<f64>) -> Result<(), HarnessError> {
    let state = StateFile {
        format_version: STATE_FORMAT_VERSION,
        config_hash: config_hash(learner.config()),
        learner: learner.clone(),
    };
    let mut text = serde_json::to_string(&state).expect("state serializes");
    text.push('\n');
    fs::write(path, text).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_state(path: &Path) -> Result<Learner<f64>, HarnessError> {
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let state: StateFile = serde_json::from_str(&text)
        .map_err(|e| HarnessError::InvalidState(e.to_string()))?;
    if state.format_version != STATE_FORMAT_VERSION {
        return Err(HarnessError::InvalidState(format!(
            "unsupported format version {}",
            state.format_version
        )));
    }
    let expected = config_hash(state.learner.config());
    if state.config_hash != expected {
        return Err(HarnessError::InvalidState(
            "config hash does not match embedded config".to_string(),
        ));
    }
    Ok(state.learner)
}

/// One decision-log line, mirroring the per-observation decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionLogEntry {
    pub id: u64,
    pub kind: DecisionKind,
    pub category: usize,
    pub best_similarity: f64,
}

/// Outcome of streaming one dataset through a fresh learner.
#[derive(Debug)]
pub struct LearnRun {
    pub learner: Learner<f64>,
    pub decisions: Vec<DecisionLogEntry>,
    /// Library size after each observation: (observation index, size).
    pub curve: Vec<(usize, usize)>,
}

/// Streams records in file order through `Learner::observe`. Invalid
/// records fail with their 1-based line number.
pub fn learn_dataset(
    records: &[DatasetRecord],
    config: LearnerConfig<f64>,
) -> Result<LearnRun, HarnessError> {
    let mut learner = Learner::new(config)?;
    let mut decisions = Vec::with_capacity(records.len());
    let mut curve = Vec::with_capacity(records.len());
    for (i, rec) in records.iter().enumerate() {
        let poly = rec.polygon().map_err(|e| HarnessError::MalformedRecord {
            line: i + 1,
            message: e.to_string(),
        })?;
        let decision = learner.observe(&poly)?;
        decisions.push(DecisionLogEntry {
            id: rec.id,
            kind: decision.kind,
            category: decision.category_id,
            best_similarity: decision.best_similarity,
        });
        curve.push((i, learner.library().len()));
    }
    Ok(LearnRun {
        learner,
        decisions,
        curve,
    })
}

pub fn write_decision_log(path: &Path, decisions: &[DecisionLogEntry]) -> Result<(), HarnessError> {
    let mut out = String::new();
    for d in decisions {
        out.push_str(&serde_json::to_string(d).expect("decision serializes"));
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Per-record classification output: record id plus the ranked
/// (category, score) list.
pub type RecordRanking = (u64, Vec<(usize, f64)>);

/// Classifies every record against an existing learner; returns the full
/// ranking per record.
pub fn classify_dataset(
    learner: &Learner<f64>,
    records: &[DatasetRecord],
) -> Result<Vec<RecordRanking>, HarnessError> {
    let mut out = Vec::with_capacity(records.len());
    for (i, rec) in records.iter().enumerate() {
        let poly = rec.polygon().map_err(|e| HarnessError::MalformedRecord {
            line: i + 1,
            message: e.to_string(),
        })?;
        let ranking = learner.classify(&poly)?;
        out.push((rec.id, ranking));
    }
    Ok(out)
}
