use std::collections::BTreeSet;
use std::io::BufReader;

use headcount::counter::{CrossingKind, LedgerSnapshot};
use headcount::engine::{io, run, run_frames, Engine, EngineConfig};
use headcount::ingest::{BoundingBox, DetectionRecord, Embedding, FrameRecord, Point};
use headcount::simulator::{evaluate, generate, scenario, Evaluation};
use proptest::prelude::*;

fn run_scenario(
    name: &str,
    seed: u64,
) -> (
    headcount::engine::RunOutput,
    headcount::simulator::Simulation,
) {
    let sim = generate(&scenario(name, seed).unwrap()).unwrap();
    let out = run_frames(&sim.frames, EngineConfig::default()).unwrap();
    (out, sim)
}

#[test]
fn clean_entry_counts_one_in() {
    let (out, _) = run_scenario("clean_entry", 0);
    assert_eq!(
        out.report.ledger,
        LedgerSnapshot {
            ins: 1,
            outs: 0,
            occupancy: 1
        }
    );
}

#[test]
fn oscillation_counts_nothing() {
    let (out, sim) = run_scenario("oscillation", 0);
    assert_eq!(
        out.report.ledger,
        LedgerSnapshot {
            ins: 0,
            outs: 0,
            occupancy: 0
        }
    );
    assert_eq!(
        evaluate(&out.ledger, &sim.truth),
        Evaluation::NotApplicable { error: 0 }
    );
}

#[test]
fn crossing_pair_keeps_two_identities() {
    let (out, sim) = run_scenario("crossing_pair", 0);
    assert_eq!((out.ledger.ins(), out.ledger.outs()), (1, 1));
    let ids: BTreeSet<_> = out.events().iter().map(|e| e.track_id).collect();
    assert_eq!(ids.len(), 2);
    // Events land on the same frames as the noiseless ground truth.
    let got: Vec<_> = out.events().iter().map(|e| (e.kind, e.frame_id)).collect();
    let want: Vec<_> = sim
        .truth
        .events
        .iter()
        .map(|e| (e.kind, e.frame_id))
        .collect();
    assert_eq!(got, want);
}

#[test]
fn noiseless_catalog_scores_perfectly() {
    for name in [
        "clean_entry",
        "clean_exit",
        "crossing_pair",
        "multi_3",
        "distraction_field",
    ] {
        for seed in 0..3 {
            let (out, sim) = run_scenario(name, seed);
            let eval = evaluate(&out.ledger, &sim.truth);
            assert_eq!(eval.error(), 0, "{name} seed {seed}");
            assert_eq!(eval.report().unwrap().rounded_percent(), 100.0);
        }
    }
}

#[test]
fn dropouts_within_miss_limit_keep_the_count() {
    let limit = EngineConfig::default().tracker.miss_limit as u64;
    for k in 0..=limit {
        let (out, _) = run_scenario(&format!("dropout_{k}"), 0);
        assert_eq!(out.ledger.ins() + out.ledger.outs(), 1, "k = {k}");
        assert_eq!(out.ledger.ins(), 1);
    }
}

#[test]
fn dropouts_beyond_miss_limit_split_the_track() {
    let limit = EngineConfig::default().tracker.miss_limit as u64;
    for k in limit + 1..limit + 6 {
        let (out, _) = run_scenario(&format!("dropout_{k}"), 0);
        assert!(out.ledger.ins() + out.ledger.outs() <= 1, "k = {k}");
    }
}

#[test]
fn stream_file_run_matches_in_memory_run() {
    let sim = generate(&scenario("multi_3", 4).unwrap()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stream.jsonl");
    io::write_frames(io::create(&path).unwrap(), &sim.frames).unwrap();
    let from_file = run(
        BufReader::new(std::fs::File::open(&path).unwrap()),
        EngineConfig::default(),
    )
    .unwrap();
    let in_memory = run_frames(&sim.frames, EngineConfig::default()).unwrap();
    assert_eq!(from_file.events(), in_memory.events());
    assert_eq!(from_file.report.frames, sim.frames.len() as u64);
}

#[test]
fn repeated_runs_are_identical() {
    let sim = generate(&scenario("noisy_crossings", 11).unwrap()).unwrap();
    let encode = |frames: &[FrameRecord]| {
        let out = run_frames(frames, EngineConfig::default()).unwrap();
        let mut buf = Vec::new();
        io::write_events(&mut buf, out.events()).unwrap();
        (buf, out.report.ledger)
    };
    assert_eq!(encode(&sim.frames), encode(&sim.frames));
}

#[test]
fn events_are_causal() {
    // Each event's frame carries a head at the counted track's position.
    let sim = generate(&scenario("multi_3", 0).unwrap()).unwrap();
    let mut engine = Engine::new(EngineConfig::default()).unwrap();
    for frame in &sim.frames {
        let outcome = engine.process_frame(frame).unwrap();
        for ev in &outcome.events {
            assert_eq!(ev.frame_id, frame.frame_id);
            let track = engine.tracker().get(ev.track_id).unwrap();
            assert_eq!(track.last_seen_frame, frame.frame_id);
            assert_eq!(track.e_count, 0);
        }
    }
}

fn head(emb: &[f32], x: f64, y: f64) -> DetectionRecord {
    DetectionRecord::head(
        0.9,
        BoundingBox::centered(Point::new(x, y), 0.08, 0.08).unwrap(),
        Embedding::new(emb.to_vec()).unwrap(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// One person seen on an arbitrary visible/missed pattern: the identity
    /// survives every gap of at most `miss_limit` frames and is replaced by a
    /// strictly larger one after a longer gap.
    #[test]
    fn identity_permanence(pattern in prop::collection::vec(any::<bool>(), 1..60), limit in 0u32..6) {
        let mut config = EngineConfig { embedding_dim: 3, ..EngineConfig::default() };
        config.tracker.miss_limit = limit;
        let mut engine = Engine::new(config).unwrap();
        let mut gap = 0u32;
        let mut current: Option<u64> = None;
        for (k, &visible) in pattern.iter().enumerate() {
            let detections = if visible { vec![head(&[0.2, 0.9, -0.1], 0.5, 0.2)] } else { vec![] };
            let frame = FrameRecord { frame_id: k as u64, timestamp_ms: 0, lighting: None, detections };
            let out = engine.process_frame(&frame).unwrap();
            prop_assert!(engine.tracker().objects().iter().all(|o| o.e_count <= limit));
            if visible {
                let id = out.step.observed().next().unwrap();
                match current {
                    Some(prev) if gap <= limit => prop_assert_eq!(id, prev),
                    Some(prev) => prop_assert!(id > prev),
                    None => {}
                }
                current = Some(id);
                gap = 0;
            } else {
                gap += 1;
            }
        }
    }
}

#[test]
fn entering_and_leaving_within_one_identity_counts_both() {
    let mut engine = Engine::new(EngineConfig {
        embedding_dim: 2,
        ..EngineConfig::default()
    })
    .unwrap();
    let ys = [0.1, 0.3, 0.5, 0.7, 0.9, 0.7, 0.5, 0.3, 0.1];
    for (k, y) in ys.iter().enumerate() {
        let frame = FrameRecord {
            frame_id: k as u64,
            timestamp_ms: 40 * k as u64,
            lighting: None,
            detections: vec![head(&[1.0, 0.5], 0.5, *y)],
        };
        engine.process_frame(&frame).unwrap();
    }
    let kinds: Vec<_> = engine.ledger().events().iter().map(|e| e.kind).collect();
    assert_eq!(kinds, vec![CrossingKind::Entry, CrossingKind::Exit]);
    assert_eq!(engine.ledger().occupancy(), 0);
}
