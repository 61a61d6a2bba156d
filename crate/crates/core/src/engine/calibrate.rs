use serde::{Deserialize, Serialize};

use super::{run_frames, ConfigError, EngineConfig, EngineError};
use crate::counter::AccuracyReport;
use crate::simulator::{evaluate, generate, scenario};

/// Candidate values for the three tracker thresholds. A missing axis falls
/// back to the base config's value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationGrid {
    pub feature_threshold: Vec<f64>,
    pub spatial_threshold: Vec<f64>,
    pub miss_limit: Vec<u32>,
}

impl CalibrationGrid {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    fn configs(&self, base: &EngineConfig) -> Vec<EngineConfig> {
        let or_base = |v: &[f64], b: f64| if v.is_empty() { vec![b] } else { v.to_vec() };
        let ts = or_base(&self.feature_threshold, base.tracker.feature_threshold);
        let ds = or_base(&self.spatial_threshold, base.tracker.spatial_threshold);
        let es = if self.miss_limit.is_empty() {
            vec![base.tracker.miss_limit]
        } else {
            self.miss_limit.clone()
        };
        let mut out = Vec::with_capacity(ts.len() * ds.len() * es.len());
        for &t in &ts {
            for &d in &ds {
                for &e in &es {
                    let mut cfg = *base;
                    cfg.tracker.feature_threshold = t;
                    cfg.tracker.spatial_threshold = d;
                    cfg.tracker.miss_limit = e;
                    out.push(cfg);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRow {
    pub feature_threshold: f64,
    pub spatial_threshold: f64,
    pub miss_limit: u32,
    pub total_observations: u64,
    pub error: u64,
    /// Pooled over every scenario and seed.
    pub accuracy_percent: f64,
}

/// Scores every grid point on every (scenario, seed) and ranks by pooled
/// accuracy, breaking ties toward smaller miss limit, then smaller feature
/// threshold, then smaller spatial threshold.
pub fn calibrate<S: AsRef<str>>(
    grid: &CalibrationGrid,
    scenarios: &[S],
    seeds: &[u64],
    base: &EngineConfig,
) -> Result<Vec<CalibrationRow>, EngineError> {
    if scenarios.is_empty() || seeds.is_empty() {
        return Err(ConfigError::Invalid("calibration needs scenarios and seeds".into()).into());
    }
    let mut sims = Vec::new();
    for name in scenarios {
        for &seed in seeds {
            sims.push(generate(&scenario(name.as_ref(), seed)?)?);
        }
    }

    let mut rows = Vec::new();
    for cfg in grid.configs(base) {
        cfg.validate()?;
        let (mut total, mut error) = (0, 0);
        for sim in &sims {
            let out = run_frames(&sim.frames, cfg)?;
            let eval = evaluate(&out.ledger, &sim.truth);
            total += eval.total_observations();
            error += eval.error();
        }
        let accuracy_percent = AccuracyReport::new(total, error)
            .map(|r| r.accuracy_percent)
            .unwrap_or(if error == 0 { 100.0 } else { 0.0 });
        rows.push(CalibrationRow {
            feature_threshold: cfg.tracker.feature_threshold,
            spatial_threshold: cfg.tracker.spatial_threshold,
            miss_limit: cfg.tracker.miss_limit,
            total_observations: total,
            error,
            accuracy_percent,
        });
    }
    rows.sort_by(|a, b| {
        b.accuracy_percent
            .total_cmp(&a.accuracy_percent)
            .then(a.miss_limit.cmp(&b.miss_limit))
            .then(a.feature_threshold.total_cmp(&b.feature_threshold))
            .then(a.spatial_threshold.total_cmp(&b.spatial_threshold))
    });
    Ok(rows)
}
