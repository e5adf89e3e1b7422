//! Unsupervised evaluation: confusion matrices against ground-truth
//! labels, Hungarian label-to-category matching, and the config sweep.

use serde::{Deserialize, Serialize};

use shapelearn_core::descriptors::Alignment;
use shapelearn_core::metrics::MetricKind;
use shapelearn_core::{DescriptorKind, LearnerConfig};

use crate::dataset::DatasetRecord;
use crate::run::{classify_dataset, learn_dataset, LearnRun};
use crate::HarnessError;

/// Evaluation summary. `confusion[r][c]` counts observations of label
/// `labels[r]` that landed in discovered category `c`; accuracy is the
/// best one-to-one label-to-category matching (Hungarian) over the
/// confusion matrix, divided by the total count.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub labels: Vec<String>,
    pub categories: usize,
    pub confusion: Vec<Vec<usize>>,
    pub template_count_curve: Vec<(usize, usize)>,
    pub config: LearnerConfig<f64>,
}

impl EvalReport {
    /// Majority-class baseline: always predicting the most common label.
    pub fn majority_baseline(&self) -> f64 {
        let total: usize = self.confusion.iter().flatten().sum();
        if total == 0 {
            return 0.0;
        }
        let best = self
            .confusion
            .iter()
            .map(|row| row.iter().sum::<usize>())
            .max()
            .unwrap_or(0);
        best as f64 / total as f64
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "accuracy {:.4} over {} labels x {} categories\n",
            self.accuracy,
            self.labels.len(),
            self.categories
        ));
        for (label, row) in self.labels.iter().zip(&self.confusion) {
            out.push_str(&format!("  {label:>12}: {row:?}\n"));
        }
        out
    }
}

/// Builds the label-by-category confusion matrix from per-record labels
/// and predicted categories. Label rows are sorted for determinism.
pub fn confusion_matrix(
    labeled: &[(String, usize)],
    categories: usize,
) -> (Vec<String>, Vec<Vec<usize>>) {
    let mut labels: Vec<String> = labeled.iter().map(|(l, _)| l.clone()).collect();
    labels.sort();
    labels.dedup();
    let mut matrix = vec![vec![0usize; categories]; labels.len()];
    for (label, cat) in labeled {
        let row = labels.binary_search(label).expect("label present");
        matrix[row][*cat] += 1;
    }
    (labels, matrix)
}

/// Maximum-weight one-to-one assignment of rows to columns. Returns the
/// total matched weight and, per row, the assigned column (None for rows
/// beyond the padding). O(n^3) Hungarian algorithm with potentials.
pub fn hungarian_max(weights: &[Vec<usize>]) -> (usize, Vec<Option<usize>>) {
    let rows = weights.len();
    let cols = weights.first().map_or(0, |r| r.len());
    if rows == 0 || cols == 0 {
        return (0, vec![None; rows]);
    }
    let n = rows.max(cols);
    let max_w = weights.iter().flatten().copied().max().unwrap_or(0) as i64;
    // Pad to square and convert to a minimization problem.
    let cost = |i: usize, j: usize| -> i64 {
        if i < rows && j < cols {
            max_w - weights[i][j] as i64
        } else {
            max_w
        }
    };

    let inf = i64::MAX / 2;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1]; // p[j]: row matched to column j (1-based)
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![None; rows];
    let mut total = 0usize;
    for j in 1..=n {
        let i = p[j];
        if i >= 1 && i <= rows && j <= cols {
            assignment[i - 1] = Some(j - 1);
            total += weights[i - 1][j - 1];
        }
    }
    (total, assignment)
}

fn report_from(
    labeled: &[(String, usize)],
    categories: usize,
    curve: Vec<(usize, usize)>,
    config: LearnerConfig<f64>,
) -> EvalReport {
    let (labels, confusion) = confusion_matrix(labeled, categories);
    let (matched, _) = hungarian_max(&confusion);
    let total: usize = labeled.len();
    EvalReport {
        accuracy: matched as f64 / total as f64,
        labels,
        categories,
        confusion,
        template_count_curve: curve,
        config,
    }
}

fn require_labels(records: &[DatasetRecord]) -> Result<(), HarnessError> {
    if records.iter().any(|r| r.label.trim().is_empty()) {
        return Err(HarnessError::MissingLabels);
    }
    Ok(())
}

/// Fresh-learn evaluation: streams the dataset through a new learner and
/// scores the assignment decisions themselves.
pub fn eval_fresh(
    records: &[DatasetRecord],
    config: LearnerConfig<f64>,
) -> Result<(EvalReport, LearnRun), HarnessError> {
    if records.is_empty() {
        return Err(HarnessError::NoObservations);
    }
    require_labels(records)?;
    let run = learn_dataset(records, config)?;
    let labeled: Vec<(String, usize)> = records
        .iter()
        .zip(&run.decisions)
        .map(|(rec, d)| (rec.label.clone(), d.category))
        .collect();
    let report = report_from(
        &labeled,
        run.learner.library().len(),
        run.curve.clone(),
        *run.learner.config(),
    );
    Ok((report, run))
}

/// Classification evaluation against an existing learner: each record is
/// classified (top-ranked category) and scored against its label. The
/// template-count curve is reconstructed from the learner's memory.
pub fn eval_classify(
    learner: &shapelearn_core::Learner<f64>,
    records: &[DatasetRecord],
) -> Result<EvalReport, HarnessError> {
    if records.is_empty() {
        return Err(HarnessError::NoObservations);
    }
    require_labels(records)?;
    let rankings = classify_dataset(learner, records)?;
    let labeled: Vec<(String, usize)> = records
        .iter()
        .zip(&rankings)
        .map(|(rec, (_, ranking))| (rec.label.clone(), ranking[0].0))
        .collect();
    let mut curve = Vec::with_capacity(learner.memory().len());
    let mut created = 0usize;
    for (i, rec) in learner.memory().records().iter().enumerate() {
        if rec.decision_kind == shapelearn_core::DecisionKind::Created {
            created += 1;
        }
        curve.push((i, created));
    }
    Ok(report_from(
        &labeled,
        learner.library().len(),
        curve,
        *learner.config(),
    ))
}

/// One cell of the configuration sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepCell {
    pub tau: f64,
    pub metric: MetricKind,
    pub descriptor: DescriptorKind,
    pub report: EvalReport,
}

pub const SWEEP_TAUS: [f64; 5] = [0.5, 0.6, 0.7, 0.8, 0.9];

/// Runs the full grid: descriptor x metric x tau (2 * 2 * 5 = 20 cells).
/// Each cell learns fresh on `train` and evaluates by classifying
/// `eval_set` (when given) or by its own assignment decisions.
pub fn run_sweep(
    train: &[DatasetRecord],
    eval_set: Option<&[DatasetRecord]>,
    base: LearnerConfig<f64>,
) -> Result<Vec<SweepCell>, HarnessError> {
    let mut cells = Vec::with_capacity(20);
    for descriptor in [DescriptorKind::Geometric, DescriptorKind::Visual] {
        for metric in [MetricKind::Euclidean, MetricKind::Correlation] {
            for tau in SWEEP_TAUS {
                let mut config = base;
                config.descriptor_kind = descriptor;
                config.metric.metric = metric;
                config.threshold = tau;
                let report = match eval_set {
                    Some(eval_records) => {
                        let run = learn_dataset(train, config)?;
                        let mut report = eval_classify(&run.learner, eval_records)?;
                        report.template_count_curve = run.curve;
                        report
                    }
                    None => eval_fresh(train, config)?.0,
                };
                cells.push(SweepCell {
                    tau,
                    metric,
                    descriptor,
                    report,
                });
            }
        }
    }
    Ok(cells)
}

/// Alignment is part of the base config; exposed for CLI mapping.
pub fn alignment_label(a: Alignment) -> &'static str {
    match a {
        Alignment::None => "none",
        Alignment::CircularShift => "shift",
    }
}
