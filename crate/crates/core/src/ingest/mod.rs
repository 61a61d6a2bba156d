//! Detection-stream data model.
//!
//! Everything upstream of the tracker lives here: the per-frame detection
//! records an external detector produces, the head/distraction filter, the
//! IR night-mode rule, and the line-delimited stream codec.

mod lighting;
mod stream;

pub use lighting::{classify_lighting, sample_grid, LightingError, PixelSample};
pub use stream::{parse_line, parse_stream, serialize_frame, FrameStream, StreamError};

use serde::{Deserialize, Serialize};

/// Embedding length produced by the appearance extractor.
pub const DEFAULT_EMBEDDING_DIM: usize = 1024;

/// Side length of the square head crop fed to the appearance extractor.
pub const CROP_SIZE: (u32, u32, u32) = (120, 120, 3);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassLabel {
    Head,
    Chair,
    Trolley,
    Bag,
}

impl ClassLabel {
    pub fn is_distraction(self) -> bool {
        !matches!(self, ClassLabel::Head)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LightingMode {
    Day,
    Night,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RecordError {
    #[error("bounding box [{0}, {1}, {2}, {3}] is not a non-empty box inside [0,1]")]
    InvalidBox(f64, f64, f64, f64),
    #[error("confidence {0} outside [0,1]")]
    InvalidConfidence(f64),
    #[error("embedding has a non-finite component at index {0}")]
    NonFiniteEmbedding(usize),
    #[error("head detection without an embedding")]
    MissingEmbedding,
}

/// Axis-aligned box in normalized frame coordinates (origin top-left, y down).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    x_min: f64,
    y_min: f64,
    x_max: f64,
    y_max: f64,
}

impl BoundingBox {
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> Result<Self, RecordError> {
        let inside = |v: f64| (0.0..=1.0).contains(&v);
        if [x_min, y_min, x_max, y_max].iter().all(|&v| inside(v)) && x_min < x_max && y_min < y_max
        {
            Ok(Self {
                x_min,
                y_min,
                x_max,
                y_max,
            })
        } else {
            Err(RecordError::InvalidBox(x_min, y_min, x_max, y_max))
        }
    }

    /// Box of the given size centered on `center`, shifted to stay inside the frame.
    pub fn centered(center: Point, width: f64, height: f64) -> Result<Self, RecordError> {
        let x_min = (center.x - width / 2.0).clamp(0.0, 1.0 - width);
        let y_min = (center.y - height / 2.0).clamp(0.0, 1.0 - height);
        Self::new(x_min, y_min, x_min + width, y_min + height)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn y_min(&self) -> f64 {
        self.y_min
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn y_max(&self) -> f64 {
        self.y_max
    }

    pub fn center(&self) -> Point {
        Point {
            x: (self.x_min + self.x_max) / 2.0,
            y: (self.y_min + self.y_max) / 2.0,
        }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.x_min, self.y_min, self.x_max, self.y_max]
    }
}

/// A point in normalized frame coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Appearance feature vector for one head crop.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding(Vec<f32>);

impl Embedding {
    pub fn new(values: Vec<f32>) -> Result<Self, RecordError> {
        if let Some(idx) = values.iter().position(|v| !v.is_finite()) {
            return Err(RecordError::NonFiniteEmbedding(idx));
        }
        Ok(Self(values))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f32> {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionRecord {
    pub class_label: ClassLabel,
    pub confidence: f64,
    pub bbox: BoundingBox,
    pub embedding: Option<Embedding>,
}

impl DetectionRecord {
    pub fn new(
        class_label: ClassLabel,
        confidence: f64,
        bbox: BoundingBox,
        embedding: Option<Embedding>,
    ) -> Result<Self, RecordError> {
        if !(0.0..=1.0).contains(&confidence) {
            return Err(RecordError::InvalidConfidence(confidence));
        }
        if class_label == ClassLabel::Head && embedding.is_none() {
            return Err(RecordError::MissingEmbedding);
        }
        Ok(Self {
            class_label,
            confidence,
            bbox,
            embedding,
        })
    }

    /// Shorthand for a head detection.
    pub fn head(
        confidence: f64,
        bbox: BoundingBox,
        embedding: Embedding,
    ) -> Result<Self, RecordError> {
        Self::new(ClassLabel::Head, confidence, bbox, Some(embedding))
    }

    pub fn center(&self) -> Point {
        self.bbox.center()
    }
}

/// All detections produced for one captured frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameRecord {
    pub frame_id: u64,
    pub timestamp_ms: u64,
    /// Set by the capture side when it already knows the camera mode.
    pub lighting: Option<LightingMode>,
    pub detections: Vec<DetectionRecord>,
}

/// Head detections at or above `min_confidence`, in input order.
pub fn filter_heads(frame: &FrameRecord, min_confidence: f64) -> Vec<DetectionRecord> {
    frame
        .detections
        .iter()
        .filter(|d| d.class_label == ClassLabel::Head && d.confidence >= min_confidence)
        .cloned()
        .collect()
}
