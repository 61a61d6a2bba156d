//! Deterministic synthetic detection streams with ground truth.
//!
//! Actors walk piecewise-linear paths through the frame. Every frame emits a
//! head detection per visible actor (position jittered, appearance perturbed,
//! randomly or deliberately dropped) plus static distraction objects. Ground
//! truth comes from the noiseless paths run through the same region rules
//! the counter uses, so a perfect tracker scores zero error.

mod scenarios;

pub use scenarios::{scenario, scenario_suite, CATALOG};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::counter::{AccuracyReport, CountLedger, CrossingKind, RegionHistory, RegionLayout};
use crate::ingest::{
    BoundingBox, ClassLabel, DetectionRecord, Embedding, FrameRecord, LightingMode, Point,
};

/// Side of the square head box placed on an actor's path.
pub const HEAD_BOX_SIZE: f64 = 0.08;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("invalid scenario: {0}")]
    InvalidSpec(String),
    #[error("unknown scenario {name:?}; available: {}", catalog.join(", "))]
    UnknownScenario { name: String, catalog: Vec<String> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waypoint {
    pub frame: u64,
    pub x: f64,
    pub y: f64,
}

impl Waypoint {
    pub fn new(frame: u64, x: f64, y: f64) -> Self {
        Self { frame, x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Intent {
    Enter,
    Exit,
    Loiter,
    Oscillate,
}

/// Frames `[start, start + len)` in which an actor is never detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameGap {
    pub start: u64,
    pub len: u64,
}

impl FrameGap {
    fn contains(&self, frame: u64) -> bool {
        frame >= self.start && frame < self.start + self.len
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActorSpec {
    pub actor_id: u64,
    pub path: Vec<Waypoint>,
    pub base_embedding: Embedding,
    pub intent: Intent,
    pub gaps: Vec<FrameGap>,
}

impl ActorSpec {
    pub fn first_frame(&self) -> u64 {
        self.path[0].frame
    }

    pub fn last_frame(&self) -> u64 {
        self.path[self.path.len() - 1].frame
    }

    /// Noiseless position at `frame`, or `None` outside the path's span.
    pub fn position(&self, frame: u64) -> Option<Point> {
        if frame < self.first_frame() || frame > self.last_frame() {
            return None;
        }
        let k = self.path.partition_point(|w| w.frame <= frame);
        let a = self.path[k - 1];
        let Some(&b) = self.path.get(k) else {
            return Some(Point::new(a.x, a.y));
        };
        let t = (frame - a.frame) as f64 / (b.frame - a.frame) as f64;
        Some(Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistractionSpec {
    pub class: ClassLabel,
    pub confidence: f64,
    pub bbox: BoundingBox,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub miss_probability: f64,
    /// Per-component additive Gaussian noise on embeddings.
    pub embedding_noise_sigma: f64,
    pub center_jitter_sigma: f64,
}

impl NoiseSpec {
    pub fn none() -> Self {
        Self::default()
    }

    /// Misses 10% of detections, jitters centres by 0.02, and perturbs
    /// embeddings so that two sightings of one unit-norm identity sit at half
    /// of `feature_threshold` in expected cosine distance.
    pub fn moderate(feature_threshold: f64, dim: usize) -> Self {
        Self {
            miss_probability: 0.1,
            embedding_noise_sigma: sigma_for_expected_distance(0.5 * feature_threshold, dim),
            center_jitter_sigma: 0.02,
        }
    }
}

/// Per-component sigma at which two independently perturbed copies of a
/// unit vector have expected cosine distance `distance`.
///
/// Each copy has squared norm ≈ 1 + dσ² while their dot product stays ≈ 1,
/// so the distance is dσ² / (1 + dσ²).
pub fn sigma_for_expected_distance(distance: f64, dim: usize) -> f64 {
    assert!((0.0..1.0).contains(&distance), "distance must be in [0, 1)");
    (distance / ((1.0 - distance) * dim as f64)).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub name: String,
    pub seed: u64,
    pub duration_frames: u64,
    pub fps: f64,
    pub embedding_dim: usize,
    pub layout: RegionLayout,
    pub lighting: Option<LightingMode>,
    pub actors: Vec<ActorSpec>,
    pub distractions: Vec<DistractionSpec>,
    pub noise: NoiseSpec,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<(), SimError> {
        let fail = |msg: String| Err(SimError::InvalidSpec(format!("{}: {msg}", self.name)));
        if self.duration_frames == 0 {
            return fail("duration_frames must be positive".into());
        }
        if !(self.fps > 0.0 && self.fps.is_finite()) {
            return fail(format!("fps must be positive, got {}", self.fps));
        }
        if !(0.0..1.0).contains(&self.noise.miss_probability)
            || !(self.noise.embedding_noise_sigma >= 0.0)
            || !(self.noise.center_jitter_sigma >= 0.0)
        {
            return fail(format!("noise out of range: {:?}", self.noise));
        }
        if self.layout.validate().is_err() {
            return fail("region layout is not ordered".into());
        }
        for actor in &self.actors {
            if actor.path.is_empty() {
                return fail(format!("actor {} has an empty path", actor.actor_id));
            }
            if actor.path.windows(2).any(|w| w[0].frame >= w[1].frame) {
                return fail(format!(
                    "actor {} waypoint frames not increasing",
                    actor.actor_id
                ));
            }
            let inside = |v: f64| (0.0..=1.0).contains(&v);
            if let Some(w) = actor.path.iter().find(|w| !inside(w.x) || !inside(w.y)) {
                return fail(format!(
                    "actor {} leaves the frame at ({}, {}) on frame {}",
                    actor.actor_id, w.x, w.y, w.frame
                ));
            }
            if actor.last_frame() >= self.duration_frames {
                return fail(format!("actor {} outlives the scenario", actor.actor_id));
            }
            if actor.base_embedding.dim() != self.embedding_dim {
                return fail(format!("actor {} embedding dimension", actor.actor_id));
            }
        }
        if let Some(d) = self
            .distractions
            .iter()
            .find(|d| d.class == ClassLabel::Head)
        {
            return fail(format!("distraction labelled as head at {:?}", d.bbox));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthEvent {
    pub kind: CrossingKind,
    pub actor_id: u64,
    pub frame_id: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundTruth {
    pub events: Vec<TruthEvent>,
    pub final_ins: u64,
    pub final_outs: u64,
}

impl GroundTruth {
    fn from_events(mut events: Vec<TruthEvent>) -> Self {
        events.sort_by_key(|e| (e.frame_id, e.actor_id));
        let final_ins = events
            .iter()
            .filter(|e| e.kind == CrossingKind::Entry)
            .count() as u64;
        let final_outs = events.len() as u64 - final_ins;
        Self {
            events,
            final_ins,
            final_outs,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub frames: Vec<FrameRecord>,
    pub truth: GroundTruth,
}

/// Orthonormal embeddings drawn from `rng`, one per identity.
pub fn orthonormal_embeddings<R: Rng>(rng: &mut R, count: usize, dim: usize) -> Vec<Embedding> {
    assert!(
        count <= dim,
        "cannot fit {count} orthogonal vectors in {dim} dimensions"
    );
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(count);
    while basis.len() < count {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        // Two Gram-Schmidt passes keep the f32 copies orthogonal to ~1e-7.
        for _ in 0..2 {
            for b in &basis {
                let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        basis.push(v);
    }
    basis
        .into_iter()
        .map(|v| Embedding::new(v.into_iter().map(|x| x as f32).collect()).expect("finite"))
        .collect()
}

/// Crossings an actor makes along its noiseless path.
fn actor_truth(actor: &ActorSpec, layout: &RegionLayout) -> Vec<TruthEvent> {
    let mut history: Option<RegionHistory> = None;
    let mut events = Vec::new();
    for frame in actor.first_frame()..=actor.last_frame() {
        let region = layout.classify(actor.position(frame).expect("within span").y);
        match history.as_mut() {
            None => history = Some(RegionHistory::seeded(region)),
            Some(h) => {
                if let Some(kind) = h.push(region) {
                    events.push(TruthEvent {
                        kind,
                        actor_id: actor.actor_id,
                        frame_id: frame,
                    });
                }
            }
        }
    }
    events
}

pub fn generate(spec: &ScenarioSpec) -> Result<Simulation, SimError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let jitter = Normal::new(0.0, spec.noise.center_jitter_sigma)
        .map_err(|e| SimError::InvalidSpec(e.to_string()))?;
    let emb_noise = Normal::new(0.0, spec.noise.embedding_noise_sigma)
        .map_err(|e| SimError::InvalidSpec(e.to_string()))?;
    let half = HEAD_BOX_SIZE / 2.0;

    let distractions: Vec<DetectionRecord> = spec
        .distractions
        .iter()
        .map(|d| DetectionRecord::new(d.class, d.confidence, d.bbox, None))
        .collect::<Result<_, _>>()
        .map_err(|e| SimError::InvalidSpec(e.to_string()))?;

    let mut frames = Vec::with_capacity(spec.duration_frames as usize);
    for frame in 0..spec.duration_frames {
        let mut detections = distractions.clone();
        for actor in &spec.actors {
            let Some(pos) = actor.position(frame) else {
                continue;
            };
            let missed = rng.gen_bool(spec.noise.miss_probability);
            if missed || actor.gaps.iter().any(|g| g.contains(frame)) {
                continue;
            }
            let mut center = pos;
            if spec.noise.center_jitter_sigma > 0.0 {
                center.x += jitter.sample(&mut rng);
                center.y += jitter.sample(&mut rng);
            }
            center.x = center.x.clamp(half, 1.0 - half);
            center.y = center.y.clamp(half, 1.0 - half);
            let embedding = if spec.noise.embedding_noise_sigma > 0.0 {
                let noisy = actor
                    .base_embedding
                    .as_slice()
                    .iter()
                    .map(|&v| v + emb_noise.sample(&mut rng) as f32)
                    .collect();
                Embedding::new(noisy).expect("finite")
            } else {
                actor.base_embedding.clone()
            };
            let confidence = rng.gen_range(0.80..0.99);
            let bbox = BoundingBox::centered(center, HEAD_BOX_SIZE, HEAD_BOX_SIZE)
                .map_err(|e| SimError::InvalidSpec(e.to_string()))?;
            detections.push(
                DetectionRecord::head(confidence, bbox, embedding)
                    .map_err(|e| SimError::InvalidSpec(e.to_string()))?,
            );
        }
        frames.push(FrameRecord {
            frame_id: frame,
            timestamp_ms: (frame as f64 * 1000.0 / spec.fps).round() as u64,
            lighting: spec.lighting,
            detections,
        });
    }

    let events = spec
        .actors
        .iter()
        .flat_map(|a| actor_truth(a, &spec.layout))
        .collect();
    Ok(Simulation {
        frames,
        truth: GroundTruth::from_events(events),
    })
}

/// Counting error of a ledger against ground truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Evaluation {
    Scored(AccuracyReport),
    /// Ground truth holds no crossings, so accuracy is undefined.
    NotApplicable {
        error: u64,
    },
}

impl Evaluation {
    pub fn total_observations(&self) -> u64 {
        match self {
            Evaluation::Scored(r) => r.total_observations,
            Evaluation::NotApplicable { .. } => 0,
        }
    }

    pub fn error(&self) -> u64 {
        match self {
            Evaluation::Scored(r) => r.error,
            Evaluation::NotApplicable { error } => *error,
        }
    }

    pub fn report(&self) -> Option<&AccuracyReport> {
        match self {
            Evaluation::Scored(r) => Some(r),
            Evaluation::NotApplicable { .. } => None,
        }
    }
}

pub fn evaluate_counts(ins: u64, outs: u64, truth: &GroundTruth) -> Evaluation {
    let total = truth.final_ins + truth.final_outs;
    let error = ins.abs_diff(truth.final_ins) + outs.abs_diff(truth.final_outs);
    match AccuracyReport::new(total, error) {
        Ok(report) => Evaluation::Scored(report),
        Err(_) => Evaluation::NotApplicable { error },
    }
}

pub fn evaluate(ledger: &CountLedger, truth: &GroundTruth) -> Evaluation {
    evaluate_counts(ledger.ins(), ledger.outs(), truth)
}
