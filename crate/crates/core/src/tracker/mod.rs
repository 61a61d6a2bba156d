//! Appearance-based head tracker.
//!
//! Each frame, new head detections are greedily associated with registered
//! objects by feature distance, gated by centre-to-centre distance. Matched
//! objects take over the detection's appearance and position; unmatched
//! detections become new objects; unmatched objects accumulate misses and
//! are dropped once they exceed the miss limit.

mod association;
mod distance;

pub use association::{associate, build_matrices, AssignmentResult, DistanceMatrices, Matrix};
pub use distance::{feature_distance, spatial_distance, FeatureMetric};

use serde::{Deserialize, Serialize};

use crate::counter::{RegionHistory, RegionLayout};
use crate::ingest::{BoundingBox, DetectionRecord, Embedding, Point};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrackerError {
    #[error("embedding dimensions differ ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },
    #[error("cosine distance is undefined for an all-zero embedding")]
    ZeroEmbedding,
    #[error("detection has no embedding")]
    MissingEmbedding,
    #[error("invalid tracker config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrackerConfig {
    /// Largest feature distance that may still be matched (strict).
    pub feature_threshold: f64,
    /// Largest centre displacement, in normalized units, that may be matched.
    pub spatial_threshold: f64,
    /// Consecutive missed frames an object survives.
    pub miss_limit: u32,
    pub feature_metric: FeatureMetric,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self {
            feature_threshold: 0.35,
            spatial_threshold: 0.25,
            miss_limit: 5,
            feature_metric: FeatureMetric::Cosine,
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<(), TrackerError> {
        if !(self.feature_threshold > 0.0 && self.feature_threshold.is_finite()) {
            return Err(TrackerError::InvalidConfig(format!(
                "feature_threshold must be positive, got {}",
                self.feature_threshold
            )));
        }
        if !(self.spatial_threshold > 0.0 && self.spatial_threshold.is_finite()) {
            return Err(TrackerError::InvalidConfig(format!(
                "spatial_threshold must be positive, got {}",
                self.spatial_threshold
            )));
        }
        Ok(())
    }
}

/// A registered identity.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackedObject {
    pub id: u64,
    pub embedding: Embedding,
    pub center: Point,
    pub bbox: BoundingBox,
    /// Consecutive frames without a matching detection.
    pub e_count: u32,
    pub region_history: RegionHistory,
    pub last_seen_frame: u64,
}

impl TrackedObject {
    fn adopt(&mut self, detection: &DetectionRecord, frame_id: u64) {
        if let Some(emb) = &detection.embedding {
            self.embedding.clone_from(emb);
        }
        self.bbox = detection.bbox;
        self.center = detection.center();
        self.e_count = 0;
        self.last_seen_frame = frame_id;
    }
}

/// Which identities a step created, re-observed and dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepReport {
    pub created: Vec<u64>,
    pub matched: Vec<u64>,
    pub evicted: Vec<u64>,
}

impl StepReport {
    /// Identities observed this frame, matched ones first.
    pub fn observed(&self) -> impl Iterator<Item = u64> + '_ {
        self.matched.iter().chain(&self.created).copied()
    }
}

/// Tracker state: the registered objects plus the ID counter.
#[derive(Debug, Clone)]
pub struct Tracker {
    config: TrackerConfig,
    objects: Vec<TrackedObject>,
    next_id: u64,
}

impl Tracker {
    pub fn new(config: TrackerConfig) -> Result<Self, TrackerError> {
        config.validate()?;
        Ok(Self {
            config,
            objects: Vec::new(),
            next_id: 1,
        })
    }

    pub fn config(&self) -> &TrackerConfig {
        &self.config
    }

    /// Registered objects in creation order.
    pub fn objects(&self) -> &[TrackedObject] {
        &self.objects
    }

    pub fn get(&self, id: u64) -> Option<&TrackedObject> {
        self.objects.iter().find(|o| o.id == id)
    }

    pub fn get_mut(&mut self, id: u64) -> Option<&mut TrackedObject> {
        self.objects.iter_mut().find(|o| o.id == id)
    }

    /// Advances one frame. `detections` must already be head-filtered. New
    /// objects start their region history at the region their centre lies in.
    pub fn step(
        &mut self,
        detections: &[DetectionRecord],
        frame_id: u64,
        layout: &RegionLayout,
    ) -> Result<StepReport, TrackerError> {
        let matrices = build_matrices(&self.objects, detections, &self.config)?;
        let assignment = associate(matrices, &self.config);
        let mut report = StepReport::default();

        for &(i, j) in &assignment.matches {
            let obj = &mut self.objects[i];
            obj.adopt(&detections[j], frame_id);
            report.matched.push(obj.id);
        }
        for &i in &assignment.unmatched_registered {
            self.objects[i].e_count += 1;
        }
        for &j in &assignment.unmatched_detections {
            let det = &detections[j];
            let embedding = det
                .embedding
                .clone()
                .ok_or(TrackerError::MissingEmbedding)?;
            let center = det.center();
            let id = self.next_id;
            self.next_id += 1;
            self.objects.push(TrackedObject {
                id,
                embedding,
                center,
                bbox: det.bbox,
                e_count: 0,
                region_history: RegionHistory::seeded(layout.classify(center.y)),
                last_seen_frame: frame_id,
            });
            report.created.push(id);
        }

        let limit = self.config.miss_limit;
        self.objects.retain(|o| {
            let keep = o.e_count <= limit;
            if !keep {
                report.evicted.push(o.id);
            }
            keep
        });
        Ok(report)
    }
}

/// Functional form of [`Tracker::step`].
pub fn step(
    mut state: Tracker,
    detections: &[DetectionRecord],
    frame_id: u64,
    layout: &RegionLayout,
) -> Result<(Tracker, StepReport), TrackerError> {
    let report = state.step(detections, frame_id, layout)?;
    Ok((state, report))
}
