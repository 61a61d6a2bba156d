use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{Engine, EngineConfig, EngineError};
use crate::simulator::{generate, ScenarioSpec};

/// Frames excluded from latency statistics at the start of a measurement.
pub const WARMUP_FRAMES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyGroup {
    pub samples: usize,
    pub p50_us: f64,
    pub p95_us: f64,
    pub p99_us: f64,
    /// 1e6 / p95: the frame rate the engine alone could sustain.
    pub max_fps: f64,
}

/// Per-frame latency grouped by the number of people in the frame.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub warmup_frames: usize,
    pub groups: BTreeMap<usize, LatencyGroup>,
}

impl BenchReport {
    pub fn group(&self, people: usize) -> Option<&LatencyGroup> {
        self.groups.get(&people)
    }
}

#[derive(Debug, Clone)]
pub struct LatencyRecorder {
    warmup: usize,
    seen: usize,
    samples: BTreeMap<usize, Vec<f64>>,
}

impl LatencyRecorder {
    pub fn new(warmup: usize) -> Self {
        Self {
            warmup,
            seen: 0,
            samples: BTreeMap::new(),
        }
    }

    pub fn record(&mut self, people: usize, elapsed: Duration) {
        self.seen += 1;
        if self.seen > self.warmup {
            self.samples
                .entry(people)
                .or_default()
                .push(elapsed.as_secs_f64() * 1e6);
        }
    }

    pub fn report(&self) -> BenchReport {
        let groups = self
            .samples
            .iter()
            .map(|(&people, samples)| {
                let mut sorted = samples.clone();
                sorted.sort_by(f64::total_cmp);
                let p95 = percentile(&sorted, 95.0);
                let group = LatencyGroup {
                    samples: sorted.len(),
                    p50_us: percentile(&sorted, 50.0),
                    p95_us: p95,
                    p99_us: percentile(&sorted, 99.0),
                    max_fps: if p95 > 0.0 { 1e6 / p95 } else { f64::INFINITY },
                };
                (people, group)
            })
            .collect();
        BenchReport {
            warmup_frames: self.warmup,
            groups,
        }
    }
}

/// Nearest-rank percentile of an ascending slice.
fn percentile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let rank = (p / 100.0 * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Times the engine over pre-generated scenario frames, `repetitions` passes
/// each with a fresh engine. Stream parsing is not part of the measurement.
pub fn bench(
    scenarios: &[ScenarioSpec],
    repetitions: usize,
    config: EngineConfig,
) -> Result<BenchReport, EngineError> {
    config.validate()?;
    let streams = scenarios
        .iter()
        .map(|s| generate(s).map(|sim| sim.frames))
        .collect::<Result<Vec<_>, _>>()?;
    let mut recorder = LatencyRecorder::new(WARMUP_FRAMES);
    for _ in 0..repetitions {
        for frames in &streams {
            let mut engine = Engine::new(config)?;
            for frame in frames {
                let start = Instant::now();
                let outcome = engine.process_frame(frame)?;
                let elapsed = start.elapsed();
                recorder.record(outcome.head_count, elapsed);
            }
        }
    }
    Ok(recorder.report())
}
