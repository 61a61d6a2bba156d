//! The frame loop: ingest, filter, track, count.

mod bench;
mod calibrate;
pub mod io;

pub use bench::{bench, BenchReport, LatencyGroup, LatencyRecorder, WARMUP_FRAMES};
pub use calibrate::{calibrate, CalibrationGrid, CalibrationRow};

use std::io::BufRead;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::counter::{update_history, CountLedger, CrossingEvent, LedgerSnapshot, RegionLayout};
use crate::ingest::{
    classify_lighting, filter_heads, parse_stream, FrameRecord, LightingError, LightingMode,
    PixelSample, StreamError, DEFAULT_EMBEDDING_DIM,
};
use crate::simulator::SimError;
use crate::tracker::{StepReport, Tracker, TrackerConfig, TrackerError};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("stream error: {0}")]
    Stream(#[from] StreamError),
    #[error(transparent)]
    Scenario(#[from] SimError),
    #[error("lighting classification failed: {0}")]
    Lighting(#[from] LightingError),
    #[error("frame {frame_id}: {source}")]
    Tracker {
        frame_id: u64,
        #[source]
        source: TrackerError,
    },
}

impl EngineError {
    /// Process exit code: 2 for configuration problems, 1 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            EngineError::Config(_) => 2,
            EngineError::Stream(_)
            | EngineError::Scenario(_)
            | EngineError::Lighting(_)
            | EngineError::Tracker { .. } => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LightingConfig {
    /// Largest max−min channel spread still counted as grayscale.
    pub channel_tolerance: u8,
    pub agreement_fraction: f64,
    /// Pixels are sampled on a `sample_grid` x `sample_grid` lattice.
    pub sample_grid: u32,
}

impl Default for LightingConfig {
    fn default() -> Self {
        Self {
            channel_tolerance: 2,
            agreement_fraction: 0.99,
            sample_grid: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    pub tracker: TrackerConfig,
    pub layout: RegionLayout,
    pub min_confidence: f64,
    pub lighting: LightingConfig,
    pub embedding_dim: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            tracker: TrackerConfig::default(),
            layout: RegionLayout::default(),
            min_confidence: 0.5,
            lighting: LightingConfig::default(),
            embedding_dim: DEFAULT_EMBEDDING_DIM,
        }
    }
}

impl EngineConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: Self = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config encoding is infallible")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |msg: String| Err(ConfigError::Invalid(msg));
        self.tracker
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.layout
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if !(0.0..=1.0).contains(&self.min_confidence) {
            return invalid(format!(
                "min_confidence {} outside [0,1]",
                self.min_confidence
            ));
        }
        let f = self.lighting.agreement_fraction;
        if !(f > 0.0 && f <= 1.0) {
            return invalid(format!("lighting.agreement_fraction {f} outside (0,1]"));
        }
        if self.lighting.sample_grid == 0 {
            return invalid("lighting.sample_grid must be positive".into());
        }
        if self.embedding_dim == 0 {
            return invalid("embedding_dim must be positive".into());
        }
        Ok(())
    }
}

/// What one frame did to the engine state.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameOutcome {
    pub frame_id: u64,
    /// Head detections that survived the class and confidence filter.
    pub head_count: usize,
    pub lighting: Option<LightingMode>,
    pub step: StepReport,
    pub events: Vec<CrossingEvent>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LightingStats {
    pub day: u64,
    pub night: u64,
    pub unknown: u64,
}

/// Counting engine for one doorway stream.
#[derive(Debug, Clone)]
pub struct Engine {
    config: EngineConfig,
    tracker: Tracker,
    ledger: CountLedger,
    lighting: LightingStats,
    frames: u64,
}

impl Engine {
    pub fn new(config: EngineConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        let tracker =
            Tracker::new(config.tracker).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(Self {
            config,
            tracker,
            ledger: CountLedger::new(),
            lighting: LightingStats::default(),
            frames: 0,
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn tracker(&self) -> &Tracker {
        &self.tracker
    }

    pub fn ledger(&self) -> &CountLedger {
        &self.ledger
    }

    pub fn into_ledger(self) -> CountLedger {
        self.ledger
    }

    pub fn lighting_stats(&self) -> LightingStats {
        self.lighting
    }

    pub fn frames_processed(&self) -> u64 {
        self.frames
    }

    pub fn process_frame(&mut self, frame: &FrameRecord) -> Result<FrameOutcome, EngineError> {
        self.advance(frame, frame.lighting)
    }

    /// Like [`Engine::process_frame`], but decides day/night from the frame's
    /// own pixels rather than trusting the record's `lighting` field.
    pub fn process_frame_with_pixels(
        &mut self,
        frame: &FrameRecord,
        samples: &[PixelSample],
    ) -> Result<FrameOutcome, EngineError> {
        let cfg = self.config.lighting;
        let mode = classify_lighting(samples, cfg.channel_tolerance, cfg.agreement_fraction)?;
        self.advance(frame, Some(mode))
    }

    fn advance(
        &mut self,
        frame: &FrameRecord,
        lighting: Option<LightingMode>,
    ) -> Result<FrameOutcome, EngineError> {
        match lighting {
            Some(LightingMode::Day) => self.lighting.day += 1,
            Some(LightingMode::Night) => self.lighting.night += 1,
            None => self.lighting.unknown += 1,
        }
        let heads = filter_heads(frame, self.config.min_confidence);
        let step = self
            .tracker
            .step(&heads, frame.frame_id, &self.config.layout)
            .map_err(|source| EngineError::Tracker {
                frame_id: frame.frame_id,
                source,
            })?;

        let mut matched = step.matched.clone();
        matched.sort_unstable();
        let mut events = Vec::new();
        for id in matched {
            let track = self.tracker.get_mut(id).expect("matched track is alive");
            let region = self.config.layout.classify(track.center.y);
            if let Some(event) = update_history(track, region, frame.frame_id, frame.timestamp_ms) {
                self.ledger.tally(event);
                events.push(event);
            }
        }
        self.frames += 1;
        Ok(FrameOutcome {
            frame_id: frame.frame_id,
            head_count: heads.len(),
            lighting,
            step,
            events,
        })
    }
}

/// Summary written next to the event log after a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub frames: u64,
    pub ledger: LedgerSnapshot,
    pub lighting: LightingStats,
    pub latency: BenchReport,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub ledger: CountLedger,
    pub report: RunReport,
}

impl RunOutput {
    pub fn events(&self) -> &[CrossingEvent] {
        self.ledger.events()
    }
}

fn run_iter<I>(frames: I, config: EngineConfig) -> Result<RunOutput, EngineError>
where
    I: IntoIterator<Item = Result<FrameRecord, EngineError>>,
{
    let mut engine = Engine::new(config)?;
    let mut latency = LatencyRecorder::new(WARMUP_FRAMES);
    for frame in frames {
        let frame = frame?;
        let start = Instant::now();
        let outcome = engine.process_frame(&frame)?;
        latency.record(outcome.head_count, start.elapsed());
    }
    let report = RunReport {
        frames: engine.frames_processed(),
        ledger: engine.ledger().snapshot(),
        lighting: engine.lighting_stats(),
        latency: latency.report(),
    };
    Ok(RunOutput {
        ledger: engine.into_ledger(),
        report,
    })
}

/// Processes a line-delimited detection stream end to end.
pub fn run<R: BufRead>(source: R, config: EngineConfig) -> Result<RunOutput, EngineError> {
    config.validate()?;
    let frames =
        parse_stream(source, Some(config.embedding_dim)).map(|f| f.map_err(EngineError::from));
    run_iter(frames, config)
}

/// Processes frames that are already in memory.
pub fn run_frames(frames: &[FrameRecord], config: EngineConfig) -> Result<RunOutput, EngineError> {
    run_iter(frames.iter().cloned().map(Ok), config)
}
