//! The online learning loop: normalize, describe, compare, assign or
//! create, remember.
//!
//! The learner is single-writer: `observe` calls mutate state and must be
//! serialized; `classify` and `describe` are read-only. Identical configs
//! and observation streams produce bit-identical libraries, memories, and
//! decisions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::descriptors::{
    geometric_descriptor, normalize_pose, visual_descriptor, Descriptor, DescriptorConfig,
    DescriptorKind,
};
use crate::geometry::{PointSet, Polygon};
use crate::metrics::MetricConfig;
use crate::scalar::{cast, Scalar};
use crate::templates::{build_template, embed, Embedding, TemplateError, TemplateLibrary};

#[derive(Debug, Error, PartialEq)]
pub enum LearnerError {
    #[error("invalid learner config: {0}")]
    InvalidConfig(&'static str),
    #[error("cannot classify or describe: no templates learned yet")]
    EmptyLibrary,
    #[error("observation {id} failed: {source}")]
    Observation { id: u64, source: TemplateError },
    #[error(transparent)]
    Pipeline(#[from] TemplateError),
}

/// How `classify` ranks categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassifyMode {
    /// Rank by the observation's embedding entries.
    MaxTemplateSimilarity,
    /// Majority vote among the k nearest memory records in template space.
    KnnInTemplateSpace,
}

/// Learner parameters. `threshold` is the similarity cutoff: observations
/// whose best template similarity falls below it seed a new template.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig<T> {
    pub threshold: T,
    pub descriptor_kind: DescriptorKind,
    pub descriptor: DescriptorConfig,
    pub metric: MetricConfig,
    pub template_update: bool,
    pub classify_mode: ClassifyMode,
    pub k: usize,
}

impl<T: Scalar> Default for LearnerConfig<T> {
    fn default() -> Self {
        Self {
            threshold: cast(0.8),
            descriptor_kind: DescriptorKind::Geometric,
            descriptor: DescriptorConfig::default(),
            metric: MetricConfig::default(),
            template_update: false,
            classify_mode: ClassifyMode::MaxTemplateSimilarity,
            k: 1,
        }
    }
}

impl<T: Scalar> LearnerConfig<T> {
    pub fn validate(&self) -> Result<(), LearnerError> {
        if !(self.threshold > T::zero() && self.threshold < T::one()) {
            return Err(LearnerError::InvalidConfig("threshold must be in (0, 1)"));
        }
        if self.k < 1 {
            return Err(LearnerError::InvalidConfig("k must be >= 1"));
        }
        self.descriptor
            .validate()
            .map_err(|_| LearnerError::InvalidConfig("descriptor config out of bounds"))?;
        Ok(())
    }
}

/// Whether an observation was assigned to an existing template or seeded
/// a new one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecisionKind {
    Assigned,
    Created,
}

/// Outcome of one `observe` call. For `Created` decisions the embedding is
/// recomputed against the grown library, so its last entry is the
/// observation's similarity to its own new template; `best_similarity`
/// remains the pre-creation best (zero when the library was empty).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decision<T> {
    pub kind: DecisionKind,
    pub category_id: usize,
    pub best_similarity: T,
    pub embedding: Embedding<T>,
}

/// One remembered observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryRecord<T> {
    pub observation_id: u64,
    pub points: PointSet<T>,
    pub descriptor: Descriptor<T>,
    pub embedding: Embedding<T>,
    pub category_id: usize,
    pub decision_kind: DecisionKind,
}

/// Append-only log of past observations. Observation ids are assigned
/// sequentially, so they are strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Memory<T> {
    records: Vec<MemoryRecord<T>>,
}

impl<T> Default for Memory<T> {
    fn default() -> Self {
        Self {
            records: Vec::new(),
        }
    }
}

impl<T: Scalar> Memory<T> {
    pub fn records(&self) -> &[MemoryRecord<T>] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Online shape-concept learner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Learner<T> {
    config: LearnerConfig<T>,
    library: TemplateLibrary<T>,
    memory: Memory<T>,
    next_observation_id: u64,
}

impl<T: Scalar> Learner<T> {
    pub fn new(config: LearnerConfig<T>) -> Result<Self, LearnerError> {
        config.validate()?;
        // The metric's alignment drives comparisons; mirror it into the
        // descriptor config so config hashes reflect the whole pipeline.
        let mut config = config;
        config.descriptor.rotation_alignment = config.metric.alignment;
        let library = TemplateLibrary::new(config.descriptor_kind, config.descriptor, config.metric);
        Ok(Self {
            config,
            library,
            memory: Memory::default(),
            next_observation_id: 0,
        })
    }

    pub fn config(&self) -> &LearnerConfig<T> {
        &self.config
    }

    /// Adjusts the classification knobs on an existing learner. These only
    /// affect `classify`, so they are safe to change after learning.
    pub fn set_classify_mode(&mut self, mode: ClassifyMode, k: usize) -> Result<(), LearnerError> {
        if k < 1 {
            return Err(LearnerError::InvalidConfig("k must be >= 1"));
        }
        self.config.classify_mode = mode;
        self.config.k = k;
        Ok(())
    }

    pub fn library(&self) -> &TemplateLibrary<T> {
        &self.library
    }

    pub fn memory(&self) -> &Memory<T> {
        &self.memory
    }

    /// Pose-normalizes an observation and computes its point set and
    /// descriptor. The observation's point set is its normalized vertex
    /// set.
    fn prepare(&self, poly: &Polygon<T>) -> Result<(PointSet<T>, Descriptor<T>), TemplateError> {
        let normalized = normalize_pose(poly)?;
        let points = PointSet::from(&normalized);
        let descriptor = match self.config.descriptor_kind {
            DescriptorKind::Geometric => geometric_descriptor(&normalized, &self.config.descriptor)?,
            DescriptorKind::Visual => visual_descriptor(&points, &self.config.descriptor)?,
        };
        Ok((points, descriptor))
    }

    /// Processes one observation: assigns it to the most similar template
    /// when that similarity reaches the threshold, otherwise creates a new
    /// single-member template. Appends a memory record either way.
    pub fn observe(&mut self, poly: &Polygon<T>) -> Result<Decision<T>, LearnerError> {
        let id = self.next_observation_id;
        let wrap = |source: TemplateError| LearnerError::Observation { id, source };

        let (points, descriptor) = self.prepare(poly).map_err(wrap)?;

        let prior = if self.library.is_empty() {
            None
        } else {
            Some(embed(&descriptor, &self.library).map_err(wrap)?)
        };
        let best = prior.as_ref().and_then(|e| e.best());

        let decision = match best {
            Some((s, template_id)) if s >= self.config.threshold => {
                if self.config.template_update {
                    self.rebuild_with(template_id, id, &points).map_err(wrap)?;
                }
                Decision {
                    kind: DecisionKind::Assigned,
                    category_id: template_id,
                    best_similarity: s,
                    embedding: prior.unwrap(),
                }
            }
            _ => {
                let new_id = self.library.len();
                let template = build_template(
                    new_id,
                    &[(id, points.clone())],
                    self.config.descriptor_kind,
                    &self.config.descriptor,
                )
                .map_err(wrap)?;
                self.library.push(template);
                let embedding = embed(&descriptor, &self.library).map_err(wrap)?;
                Decision {
                    kind: DecisionKind::Created,
                    category_id: new_id,
                    best_similarity: best.map_or(T::zero(), |(s, _)| s),
                    embedding,
                }
            }
        };

        self.memory.records.push(MemoryRecord {
            observation_id: id,
            points,
            descriptor,
            embedding: decision.embedding.clone(),
            category_id: decision.category_id,
            decision_kind: decision.kind,
        });
        self.next_observation_id = id + 1;
        Ok(decision)
    }

    /// Rebuilds a template with a new member appended (update mode).
    fn rebuild_with(
        &mut self,
        template_id: usize,
        new_member_id: u64,
        new_points: &PointSet<T>,
    ) -> Result<(), TemplateError> {
        let template = self.library.get(template_id).expect("assigned template exists");
        let mut members: Vec<(u64, PointSet<T>)> = template
            .member_ids
            .iter()
            .map(|&mid| {
                let rec = &self.memory.records()[mid as usize];
                (mid, rec.points.clone())
            })
            .collect();
        members.push((new_member_id, new_points.clone()));
        let rebuilt = build_template(
            template_id,
            &members,
            self.config.descriptor_kind,
            &self.config.descriptor,
        )?;
        self.library.replace(rebuilt);
        Ok(())
    }

    /// Ranks all categories for an observation, without mutating state.
    ///
    /// In `MaxTemplateSimilarity` mode the score is the embedding entry.
    /// In knn mode the score is the vote fraction among the k nearest
    /// memory records in template space (older, shorter embeddings are
    /// padded with zeros); vote ties are broken by the most similar single
    /// neighbor, then by lower category id.
    pub fn classify(&self, poly: &Polygon<T>) -> Result<Vec<(usize, T)>, LearnerError> {
        if self.library.is_empty() {
            return Err(LearnerError::EmptyLibrary);
        }
        let (_, descriptor) = self.prepare(poly)?;
        let embedding = embed(&descriptor, &self.library)?;

        match self.config.classify_mode {
            ClassifyMode::MaxTemplateSimilarity => {
                let mut ranking: Vec<(usize, T)> = embedding
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(i, &s)| (i, s))
                    .collect();
                // Stable sort: equal scores keep the lower id first.
                ranking.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
                Ok(ranking)
            }
            ClassifyMode::KnnInTemplateSpace => Ok(self.knn_ranking(&embedding)),
        }
    }

    fn knn_ranking(&self, embedding: &Embedding<T>) -> Vec<(usize, T)> {
        let dim = embedding.len();
        let mut neighbors: Vec<(T, &MemoryRecord<T>)> = self
            .memory
            .records()
            .iter()
            .map(|rec| {
                let mut acc = T::zero();
                for i in 0..dim {
                    let recorded = rec.embedding.values().get(i).copied().unwrap_or(T::zero());
                    let d = embedding.values()[i] - recorded;
                    acc = acc + d * d;
                }
                (acc.sqrt(), rec)
            })
            .collect();
        // Stable: distance ties keep memory (insertion) order.
        neighbors.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let k = self.config.k.min(neighbors.len());

        let categories = self.library.len();
        let mut votes = vec![0usize; categories];
        let mut best_dist = vec![T::infinity(); categories];
        for (d, rec) in neighbors.iter().take(k) {
            votes[rec.category_id] += 1;
            if *d < best_dist[rec.category_id] {
                best_dist[rec.category_id] = *d;
            }
        }

        let mut ranking: Vec<(usize, T)> = (0..categories)
            .map(|c| (c, cast::<T>(votes[c] as f64) / cast::<T>(self.config.k as f64)))
            .collect();
        ranking.sort_by(|&(ca, sa), &(cb, sb)| {
            sb.partial_cmp(&sa)
                .unwrap()
                .then(best_dist[ca].partial_cmp(&best_dist[cb]).unwrap())
                .then(ca.cmp(&cb))
        });
        ranking
    }

    /// Embeds an observation in template space, without mutating state.
    pub fn describe(&self, poly: &Polygon<T>) -> Result<Embedding<T>, LearnerError> {
        if self.library.is_empty() {
            return Err(LearnerError::EmptyLibrary);
        }
        let (_, descriptor) = self.prepare(poly)?;
        Ok(embed(&descriptor, &self.library)?)
    }
}
