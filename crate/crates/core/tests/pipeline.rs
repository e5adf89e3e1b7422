//! End-to-end learner behavior: the observe loop, monotone refinement,
//! serialization stability, and a second scalar instantiation.

use shapelearn_core::descriptors::{geometric_descriptor, normalize_pose};
use shapelearn_core::geometry::{generate_polygon, PolygonFamily};
use shapelearn_core::metrics::{aligned_distance, similarity};
use shapelearn_core::{DecisionKind, Learner, LearnerConfig, PolygonD, PolygonF};

fn family_polygon(sides: usize, rotation: f64, seed: u64) -> PolygonD {
    generate_polygon(PolygonFamily::Regular, sides, 0.0, rotation, 1.0, seed).unwrap()
}

/// The clean three-family stream creates three templates, and a manual
/// pairwise distance audit confirms why: every cross-family similarity
/// sits below the threshold.
#[test]
fn clean_families_create_three_templates_with_pairwise_audit() {
    let config = LearnerConfig::<f64>::default();
    let shapes: Vec<PolygonD> = [3usize, 4, 6]
        .iter()
        .map(|&sides| family_polygon(sides, 0.0, 1))
        .collect();

    // Audit: pairwise similarities between the three family descriptors.
    let descs: Vec<_> = shapes
        .iter()
        .map(|poly| {
            let norm = normalize_pose(poly).unwrap();
            geometric_descriptor(&norm, &config.descriptor).unwrap()
        })
        .collect();
    for i in 0..descs.len() {
        for j in (i + 1)..descs.len() {
            let (d, _) = aligned_distance(&descs[i], &descs[j], &config.metric).unwrap();
            let s = similarity(d).unwrap();
            assert!(
                s < config.threshold,
                "families {i} and {j} too similar: {s}"
            );
        }
    }

    let mut learner = Learner::new(config).unwrap();
    for shape in &shapes {
        let decision = learner.observe(shape).unwrap();
        assert_eq!(decision.kind, DecisionKind::Created);
    }
    assert_eq!(learner.library().len(), 3);
}

#[test]
fn refinement_is_monotone_and_embeddings_track_library_size() {
    let config = LearnerConfig::<f64>::default();
    let mut learner = Learner::new(config).unwrap();
    let mut last_size = 0usize;
    for i in 0..30u64 {
        let sides = 3 + (i % 4) as usize;
        let poly = generate_polygon(
            PolygonFamily::Perturbed,
            sides,
            0.02,
            0.37 * i as f64,
            1.0,
            i,
        )
        .unwrap();
        let before = learner.library().len();
        let decision = learner.observe(&poly).unwrap();
        // Decision soundness relative to the pre-observation library.
        match decision.kind {
            DecisionKind::Assigned => assert!(decision.best_similarity >= config.threshold),
            DecisionKind::Created => {
                assert!(before == 0 || decision.best_similarity < config.threshold)
            }
        }
        let size = learner.library().len();
        assert!(size >= last_size, "library shrank at step {i}");
        last_size = size;
    }
    // Each record's embedding length equals the library size at its
    // record time, reconstructable from the cumulative created count.
    let mut created = 0usize;
    for rec in learner.memory().records() {
        if rec.decision_kind == DecisionKind::Created {
            created += 1;
        }
        assert_eq!(rec.embedding.len(), created);
        assert_eq!(rec.embedding.library_version(), created);
        assert!(rec
            .embedding
            .values()
            .iter()
            .all(|&v| v > 0.0 && v <= 1.0));
    }
}

#[test]
fn self_resemblance_dominates_on_clean_families() {
    let mut learner = Learner::new(LearnerConfig::<f64>::default()).unwrap();
    let shapes: Vec<PolygonD> = [3usize, 4, 5, 6]
        .iter()
        .map(|&sides| family_polygon(sides, 0.0, 2))
        .collect();
    for shape in &shapes {
        learner.observe(shape).unwrap();
    }
    for (own, shape) in shapes.iter().enumerate() {
        let emb = learner.describe(shape).unwrap();
        let own_value = emb.values()[own];
        for (other, &v) in emb.values().iter().enumerate() {
            if other != own {
                assert!(
                    own_value >= v,
                    "shape {own}: own {own_value} < other {other} {v}"
                );
            }
        }
    }
}

#[test]
fn learner_state_round_trips_through_serde() {
    let mut learner = Learner::new(LearnerConfig::<f64>::default()).unwrap();
    for i in 0..10u64 {
        let poly = generate_polygon(
            PolygonFamily::Perturbed,
            3 + (i % 3) as usize,
            0.02,
            0.5 * i as f64,
            1.0,
            40 + i,
        )
        .unwrap();
        learner.observe(&poly).unwrap();
    }
    let json = serde_json::to_string(&learner).unwrap();
    let restored: Learner<f64> = serde_json::from_str(&json).unwrap();
    assert_eq!(restored, learner);
    let again = serde_json::to_string(&restored).unwrap();
    assert_eq!(json, again);
}

#[test]
fn pipeline_runs_in_f32() {
    let mut learner = Learner::new(LearnerConfig::<f32>::default()).unwrap();
    for sides in [3usize, 4, 6] {
        let poly: PolygonF =
            generate_polygon(PolygonFamily::Regular, sides, 0.0, 0.0, 1.0, 3).unwrap();
        let decision = learner.observe(&poly).unwrap();
        assert_eq!(decision.kind, DecisionKind::Created);
    }
    assert_eq!(learner.library().len(), 3);
    let square: PolygonF = generate_polygon(PolygonFamily::Regular, 4, 0.0, 0.9, 1.0, 5).unwrap();
    let ranking = learner.classify(&square).unwrap();
    assert_eq!(ranking[0].0, 1);
}
