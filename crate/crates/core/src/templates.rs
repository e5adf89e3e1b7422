//! Convex-layer templates and the template-space embedding.
//!
//! A template pools the points of all its member observations, peels them
//! into convex layers, and keeps one descriptor per non-degenerate layer.
//! Observations are compared to a template by a weighted average of
//! per-layer descriptor distances; outer layers dominate because they
//! carry the category silhouette. An observation's embedding is its
//! similarity to every template in the library, one dimension per
//! template.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::descriptors::{
    geometric_descriptor, visual_descriptor, Descriptor, DescriptorConfig, DescriptorError,
    DescriptorKind,
};
use crate::geometry::{onion_peel, GeometryError, LayerStack, PointSet};
use crate::metrics::{aligned_distance, similarity, MetricConfig, MetricError, MetricKind};
use crate::scalar::{cast, Scalar};

#[derive(Debug, Error, PartialEq)]
pub enum TemplateError {
    #[error("template must be built from at least one member")]
    NoMembers,
    #[error("template has no non-degenerate layers and cannot be compared")]
    UnusableTemplate,
    #[error("library contains no templates")]
    EmptyLibrary,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// A learned category representative: the convex-layer stack of the
/// pooled member points plus one descriptor per non-degenerate layer
/// (outermost first). Templates are a pure function of their members and
/// configuration; rebuilding from the same members reproduces them
/// bit-for-bit, regardless of member order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Template<T> {
    pub id: usize,
    pub layer_stack: LayerStack<T>,
    pub layer_descriptors: Vec<Descriptor<T>>,
    pub member_count: usize,
    pub member_ids: Vec<u64>,
}

/// Builds a template from pose-normalized member point sets.
pub fn build_template<T: Scalar>(
    id: usize,
    members: &[(u64, PointSet<T>)],
    kind: DescriptorKind,
    cfg: &DescriptorConfig,
) -> Result<Template<T>, TemplateError> {
    if members.is_empty() {
        return Err(TemplateError::NoMembers);
    }
    let pooled = PointSet::pooled(members.iter().map(|(_, s)| s))?;
    let stack = onion_peel(&pooled);

    let mut layer_descriptors = Vec::new();
    for layer in stack.hull_layers() {
        let desc = match kind {
            DescriptorKind::Geometric => geometric_descriptor(layer, cfg)?,
            DescriptorKind::Visual => visual_descriptor(&PointSet::from(layer), cfg)?,
        };
        layer_descriptors.push(desc);
    }

    let mut member_ids: Vec<u64> = members.iter().map(|(id, _)| *id).collect();
    member_ids.sort_unstable();

    Ok(Template {
        id,
        layer_stack: stack,
        layer_descriptors,
        member_count: members.len(),
        member_ids,
    })
}

/// Weighted average of aligned per-layer distances, weight `2^-i` for
/// layer `i` (outermost is 0), normalized by the weight sum. Degenerate
/// layers carry no descriptor and no weight.
///
/// Under the correlation metric, a pair hitting a zero-variance
/// descriptor falls back to euclidean for that pair (and is logged), so
/// the learning stream stays total on near-circular shapes.
pub fn template_distance<T: Scalar>(
    obs: &Descriptor<T>,
    template: &Template<T>,
    cfg: &MetricConfig,
) -> Result<T, TemplateError> {
    if template.layer_descriptors.is_empty() {
        return Err(TemplateError::UnusableTemplate);
    }
    let half = cast::<T>(0.5);
    let mut weight = T::one();
    let mut weight_sum = T::zero();
    let mut acc = T::zero();
    for layer_desc in &template.layer_descriptors {
        let d = match aligned_distance(obs, layer_desc, cfg) {
            Ok((d, _)) => d,
            Err(MetricError::ZeroVariance) if cfg.metric == MetricKind::Correlation => {
                log::warn!(
                    "zero-variance descriptor in template {}; falling back to euclidean for this pair",
                    template.id
                );
                let fallback = MetricConfig {
                    metric: MetricKind::Euclidean,
                    alignment: cfg.alignment,
                };
                aligned_distance(obs, layer_desc, &fallback)?.0
            }
            Err(e) => return Err(e.into()),
        };
        acc = acc + weight * d;
        weight_sum = weight_sum + weight;
        weight = weight * half;
    }
    Ok(acc / weight_sum)
}

/// The ordered collection of learned templates plus the configuration
/// every descriptor in it was produced under. Ids are contiguous, in
/// creation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemplateLibrary<T> {
    templates: Vec<Template<T>>,
    descriptor_kind: DescriptorKind,
    descriptor_config: DescriptorConfig,
    metric_config: MetricConfig,
}

impl<T: Scalar> TemplateLibrary<T> {
    pub fn new(
        descriptor_kind: DescriptorKind,
        descriptor_config: DescriptorConfig,
        metric_config: MetricConfig,
    ) -> Self {
        Self {
            templates: Vec::new(),
            descriptor_kind,
            descriptor_config,
            metric_config,
        }
    }

    pub fn templates(&self) -> &[Template<T>] {
        &self.templates
    }

    pub fn get(&self, id: usize) -> Option<&Template<T>> {
        self.templates.get(id)
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    /// Library version: the template count. Embeddings remember the
    /// version they were computed against.
    pub fn version(&self) -> usize {
        self.templates.len()
    }

    pub fn descriptor_kind(&self) -> DescriptorKind {
        self.descriptor_kind
    }

    pub fn descriptor_config(&self) -> &DescriptorConfig {
        &self.descriptor_config
    }

    pub fn metric_config(&self) -> &MetricConfig {
        &self.metric_config
    }

    /// Appends a template; its id must equal the current count.
    pub fn push(&mut self, template: Template<T>) {
        assert_eq!(
            template.id,
            self.templates.len(),
            "template ids are contiguous in creation order"
        );
        self.templates.push(template);
    }

    /// Replaces an existing template in place (template-update mode).
    pub fn replace(&mut self, template: Template<T>) {
        let id = template.id;
        assert!(id < self.templates.len(), "unknown template id {id}");
        self.templates[id] = template;
    }
}

/// An observation's coordinates in template space: entry `i` is its
/// similarity to template `i`. Every entry is in `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding<T> {
    values: Vec<T>,
    library_version: usize,
}

impl<T: Scalar> Embedding<T> {
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn library_version(&self) -> usize {
        self.library_version
    }

    /// Best (similarity, template id) entry; ties go to the lowest id.
    pub fn best(&self) -> Option<(T, usize)> {
        let mut best: Option<(T, usize)> = None;
        for (i, &s) in self.values.iter().enumerate() {
            if best.is_none_or(|(bs, _)| s > bs) {
                best = Some((s, i));
            }
        }
        best
    }
}

/// Embeds an observation descriptor into the library's template space.
pub fn embed<T: Scalar>(
    obs: &Descriptor<T>,
    library: &TemplateLibrary<T>,
) -> Result<Embedding<T>, TemplateError> {
    if library.is_empty() {
        return Err(TemplateError::EmptyLibrary);
    }
    let cfg = library.metric_config();
    let mut values = Vec::with_capacity(library.len());
    for template in library.templates() {
        let d = template_distance(obs, template, cfg)?;
        values.push(similarity(d)?);
    }
    Ok(Embedding {
        values,
        library_version: library.version(),
    })
}
