use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use shapelearn_cli::dataset::{generate_dataset, parse_families, read_dataset, write_dataset};
use shapelearn_cli::eval::{eval_classify, eval_fresh, run_sweep};
use shapelearn_cli::run::{
    classify_dataset, learn_dataset, load_state, save_state, write_decision_log,
};
use shapelearn_cli::svg::export_template_svg;
use shapelearn_core::descriptors::Alignment;
use shapelearn_core::metrics::MetricKind;
use shapelearn_core::{ClassifyMode, DescriptorKind, LearnerConfig};

#[derive(Parser)]
#[command(
    name = "shapelearn",
    about = "Online shape-concept learning over convex-layer templates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a labeled polygon dataset (JSON lines).
    Generate {
        /// Comma-separated family names: triangle..octagon, ngon-N, star-N.
        #[arg(long, default_value = "triangle,square,hexagon")]
        families: String,
        /// Observations per family.
        #[arg(long, default_value_t = 20)]
        per_family: usize,
        /// Vertex jitter as a fraction of the circumradius, in [0, 0.5).
        #[arg(long, default_value_t = 0.0)]
        jitter: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output dataset path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Stream a dataset through a fresh learner and save its state.
    Learn {
        #[arg(long)]
        dataset: PathBuf,
        #[command(flatten)]
        learner: LearnerArgs,
        /// Output state file.
        #[arg(long)]
        out: PathBuf,
        /// Decision log path (default: <out>.decisions.jsonl).
        #[arg(long)]
        decisions: Option<PathBuf>,
    },
    /// Classify a dataset against a saved state.
    Classify {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        dataset: PathBuf,
        /// Override the classify mode stored in the state.
        #[arg(long, value_enum)]
        classify_mode: Option<ClassifyModeArg>,
        /// Override k for knn classification.
        #[arg(long)]
        k: Option<usize>,
        /// Rankings output path (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate accuracy against ground-truth labels.
    Eval {
        /// Labeled dataset to score.
        #[arg(long)]
        dataset: PathBuf,
        /// Classify against this saved state instead of learning fresh.
        #[arg(long, conflicts_with = "train")]
        state: Option<PathBuf>,
        /// Learn fresh on this dataset, then classify --dataset.
        #[arg(long)]
        train: Option<PathBuf>,
        /// Run the full tau x metric x descriptor grid.
        #[arg(long, conflicts_with = "state")]
        sweep: bool,
        #[command(flatten)]
        learner: LearnerArgs,
        /// Machine-readable JSON report path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render one template's convex layers to SVG.
    ExportSvg {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        template_id: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct LearnerArgs {
    /// Similarity threshold for creating new templates, in (0, 1).
    #[arg(long, default_value_t = 0.8)]
    tau: f64,
    #[arg(long, value_enum, default_value_t = MetricArg::Euclidean)]
    metric: MetricArg,
    #[arg(long, value_enum, default_value_t = DescriptorArg::Geometric)]
    descriptor: DescriptorArg,
    #[arg(long, value_enum, default_value_t = AlignmentArg::Shift)]
    alignment: AlignmentArg,
    #[arg(long, value_enum, default_value_t = ClassifyModeArg::Template)]
    classify_mode: ClassifyModeArg,
    /// Neighbor count for knn classification.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Rebuild a template when a new member is assigned to it.
    #[arg(long)]
    update_templates: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Euclidean,
    Correlation,
}

#[derive(Clone, Copy, ValueEnum)]
enum DescriptorArg {
    Geometric,
    Visual,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlignmentArg {
    None,
    Shift,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassifyModeArg {
    Template,
    Knn,
}

impl LearnerArgs {
    fn to_config(&self) -> LearnerConfig<f64> {
        let defaults = LearnerConfig::<f64>::default();
        LearnerConfig {
            threshold: self.tau,
            descriptor_kind: match self.descriptor {
                DescriptorArg::Geometric => DescriptorKind::Geometric,
                DescriptorArg::Visual => DescriptorKind::Visual,
            },
            descriptor: defaults.descriptor,
            metric: shapelearn_core::MetricConfig {
                metric: match self.metric {
                    MetricArg::Euclidean => MetricKind::Euclidean,
                    MetricArg::Correlation => MetricKind::Correlation,
                },
                alignment: match self.alignment {
                    AlignmentArg::None => Alignment::None,
                    AlignmentArg::Shift => Alignment::CircularShift,
                },
            },
            template_update: self.update_templates,
            classify_mode: match self.classify_mode {
                ClassifyModeArg::Template => ClassifyMode::MaxTemplateSimilarity,
                ClassifyModeArg::Knn => ClassifyMode::KnnInTemplateSpace,
            },
            k: self.k,
        }
    }
}

fn main() -> Result<()> {
    env_logger::init();
    let cli = Cli::parse();
    match cli.command {
        Command::Generate {
            families,
            per_family,
            jitter,
            seed,
            out,
        } => {
            let specs = parse_families(&families)?;
            let records = generate_dataset(&specs, per_family, jitter, seed)?;
            write_dataset(&out, &records)?;
            eprintln!(
                "wrote {} records ({} families x {per_family}) to {}",
                records.len(),
                specs.len(),
                out.display()
            );
        }
        Command::Learn {
            dataset,
            learner,
            out,
            decisions,
        } => {
            let records = read_dataset(&dataset)?;
            if records.is_empty() {
                eprintln!("no observations in {}; writing empty state", dataset.display());
            }
            let run = learn_dataset(&records, learner.to_config())?;
            save_state(&out, &run.learner)?;
            let log_path = decisions.unwrap_or_else(|| {
                let mut p = out.as_os_str().to_owned();
                p.push(".decisions.jsonl");
                PathBuf::from(p)
            });
            write_decision_log(&log_path, &run.decisions)?;
            eprintln!(
                "learned {} templates from {} observations; state {}, log {}",
                run.learner.library().len(),
                records.len(),
                out.display(),
                log_path.display()
            );
        }
        Command::Classify {
            state,
            dataset,
            classify_mode,
            k,
            out,
        } => {
            let mut learner = load_state(&state)?;
            if classify_mode.is_some() || k.is_some() {
                let mode = match classify_mode {
                    Some(ClassifyModeArg::Template) => ClassifyMode::MaxTemplateSimilarity,
                    Some(ClassifyModeArg::Knn) => ClassifyMode::KnnInTemplateSpace,
                    None => learner.config().classify_mode,
                };
                let k = k.unwrap_or(learner.config().k);
                learner.set_classify_mode(mode, k)?;
            }
            let records = read_dataset(&dataset)?;
            let rankings = classify_dataset(&learner, &records)?;
            let mut text = String::new();
            for (id, ranking) in &rankings {
                let row = serde_json::json!({ "id": id, "ranking": ranking });
                text.push_str(&row.to_string());
                text.push('\n');
            }
            match out {
                Some(path) => fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
        }
        Command::Eval {
            dataset,
            state,
            train,
            sweep,
            learner,
            out,
        } => {
            let records = read_dataset(&dataset)?;
            let config = learner.to_config();
            if sweep {
                let train_records = match &train {
                    Some(path) => Some(read_dataset(path)?),
                    None => None,
                };
                let cells = match &train_records {
                    Some(tr) => run_sweep(tr, Some(&records), config)?,
                    None => run_sweep(&records, None, config)?,
                };
                println!("tau     metric       descriptor  templates  accuracy");
                for cell in &cells {
                    let last = cell
                        .report
                        .template_count_curve
                        .last()
                        .map_or(0, |&(_, s)| s);
                    println!(
                        "{:<7} {:<12} {:<11} {:<10} {:.4}",
                        cell.tau,
                        format!("{:?}", cell.metric).to_lowercase(),
                        format!("{:?}", cell.descriptor).to_lowercase(),
                        last,
                        cell.report.accuracy
                    );
                }
                if let Some(path) = out {
                    let json = serde_json::to_string_pretty(&cells)?;
                    fs::write(&path, json)
                        .with_context(|| format!("writing {}", path.display()))?;
                }
            } else {
                let report = match (&state, &train) {
                    (Some(state_path), None) => {
                        let loaded = load_state(state_path)?;
                        eval_classify(&loaded, &records)?
                    }
                    (None, Some(train_path)) => {
                        let train_records = read_dataset(train_path)?;
                        let run = learn_dataset(&train_records, config)?;
                        let mut report = eval_classify(&run.learner, &records)?;
                        report.template_count_curve = run.curve;
                        report
                    }
                    (None, None) => eval_fresh(&records, config)?.0,
                    (Some(_), Some(_)) => bail!("--state conflicts with --train"),
                };
                print!("{}", report.render_text());
                if let Some(path) = out {
                    let json = serde_json::to_string_pretty(&report)?;
                    fs::write(&path, json)
                        .with_context(|| format!("writing {}", path.display()))?;
                }
            }
        }
        Command::ExportSvg {
            state,
            template_id,
            out,
        } => {
            let learner = load_state(&state)?;
            export_template_svg(&learner, template_id, &out)?;
            eprintln!("wrote template {template_id} to {}", out.display());
        }
    }
    Ok(())
}
