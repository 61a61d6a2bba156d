//! Three-region doorway counting.
//!
//! The frame is cut by two horizontal lines into an outside region (A), a
//! critical buffer band (B) and an inside region (C). Each track keeps a
//! short deduplicated history of the regions it visited; an A…C pair is an
//! entry and a C…A pair is an exit. Staying in {A, B} or {B, C} never counts,
//! which is what makes the middle band absorb boundary oscillation.

use serde::{Deserialize, Serialize};

use crate::tracker::TrackedObject;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// Totally outside.
    A,
    /// Critical band between the lines.
    B,
    /// Totally inside.
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Outside region at the top of the frame.
    OutsideTop,
    OutsideBottom,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CounterError {
    #[error("region lines ab={line_ab} bc={line_bc} are not ordered for {orientation:?}")]
    InvalidLayout {
        line_ab: f64,
        line_bc: f64,
        orientation: Orientation,
    },
    #[error("accuracy needs at least one observation")]
    NoObservations,
}

/// Two horizontal lines in normalized y. `line_ab` separates A from B and
/// `line_bc` separates B from C.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegionLayout {
    pub line_ab: f64,
    pub line_bc: f64,
    pub orientation: Orientation,
}

impl Default for RegionLayout {
    fn default() -> Self {
        Self {
            line_ab: 0.4,
            line_bc: 0.6,
            orientation: Orientation::OutsideTop,
        }
    }
}

impl RegionLayout {
    pub fn new(line_ab: f64, line_bc: f64, orientation: Orientation) -> Result<Self, CounterError> {
        let layout = Self {
            line_ab,
            line_bc,
            orientation,
        };
        layout.validate()?;
        Ok(layout)
    }

    pub fn validate(&self) -> Result<(), CounterError> {
        let (lo, hi) = match self.orientation {
            Orientation::OutsideTop => (self.line_ab, self.line_bc),
            Orientation::OutsideBottom => (self.line_bc, self.line_ab),
        };
        if 0.0 < lo && lo < hi && hi < 1.0 {
            Ok(())
        } else {
            Err(CounterError::InvalidLayout {
                line_ab: self.line_ab,
                line_bc: self.line_bc,
                orientation: self.orientation,
            })
        }
    }

    /// Points exactly on a line fall in B.
    pub fn classify(&self, center_y: f64) -> Region {
        match self.orientation {
            Orientation::OutsideTop => {
                if center_y < self.line_ab {
                    Region::A
                } else if center_y > self.line_bc {
                    Region::C
                } else {
                    Region::B
                }
            }
            Orientation::OutsideBottom => {
                if center_y > self.line_ab {
                    Region::A
                } else if center_y < self.line_bc {
                    Region::C
                } else {
                    Region::B
                }
            }
        }
    }
}

pub fn classify_region(center_y: f64, layout: &RegionLayout) -> Region {
    layout.classify(center_y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossingKind {
    Entry,
    Exit,
}

/// Regions visited by one track since its last counted crossing.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RegionHistory(Vec<Region>);

impl RegionHistory {
    /// Longest history kept between crossings.
    pub const CAPACITY: usize = 3;

    pub fn seeded(region: Region) -> Self {
        Self(vec![region])
    }

    pub fn as_slice(&self) -> &[Region] {
        &self.0
    }

    pub fn last(&self) -> Option<Region> {
        self.0.last().copied()
    }

    /// Records a region observation. Repeats of the last region are ignored.
    pub fn push(&mut self, region: Region) -> Option<CrossingKind> {
        if self.last() == Some(region) {
            return None;
        }
        let crossed = match region {
            Region::C if self.0.contains(&Region::A) => Some(CrossingKind::Entry),
            Region::A if self.0.contains(&Region::C) => Some(CrossingKind::Exit),
            _ => None,
        };
        if crossed.is_some() {
            self.0.clear();
        } else if self.0.len() == Self::CAPACITY {
            // Without an anchor pair the history alternates between two
            // regions, so any window of three still holds the anchor.
            self.0.remove(0);
        }
        self.0.push(region);
        crossed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingEvent {
    pub kind: CrossingKind,
    pub track_id: u64,
    pub frame_id: u64,
    #[serde(rename = "ts_ms")]
    pub timestamp_ms: u64,
}

/// Appends `region` to the track's history and reports a crossing if it completes one.
pub fn update_history(
    track: &mut TrackedObject,
    region: Region,
    frame_id: u64,
    timestamp_ms: u64,
) -> Option<CrossingEvent> {
    track.region_history.push(region).map(|kind| CrossingEvent {
        kind,
        track_id: track.id,
        frame_id,
        timestamp_ms,
    })
}

/// Running entry/exit tallies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountLedger {
    ins: u64,
    outs: u64,
    events: Vec<CrossingEvent>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerSnapshot {
    pub ins: u64,
    pub outs: u64,
    pub occupancy: i64,
}

impl CountLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Ledger starting from existing tallies, without an event log behind them.
    pub fn with_counts(ins: u64, outs: u64) -> Self {
        Self {
            ins,
            outs,
            events: Vec::new(),
        }
    }

    pub fn tally(&mut self, event: CrossingEvent) {
        match event.kind {
            CrossingKind::Entry => self.ins += 1,
            CrossingKind::Exit => self.outs += 1,
        }
        self.events.push(event);
    }

    pub fn ins(&self) -> u64 {
        self.ins
    }

    pub fn outs(&self) -> u64 {
        self.outs
    }

    /// Entries minus exits. Negative when people were inside before counting started.
    pub fn occupancy(&self) -> i64 {
        self.ins as i64 - self.outs as i64
    }

    pub fn events(&self) -> &[CrossingEvent] {
        &self.events
    }

    pub fn snapshot(&self) -> LedgerSnapshot {
        LedgerSnapshot {
            ins: self.ins,
            outs: self.outs,
            occupancy: self.occupancy(),
        }
    }
}

pub fn tally(mut ledger: CountLedger, event: CrossingEvent) -> CountLedger {
    ledger.tally(event);
    ledger
}

/// (observations − error) / observations × 100.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub total_observations: u64,
    pub error: u64,
    pub accuracy_percent: f64,
}

impl AccuracyReport {
    pub fn new(total_observations: u64, error: u64) -> Result<Self, CounterError> {
        if total_observations == 0 {
            return Err(CounterError::NoObservations);
        }
        let accuracy_percent =
            (total_observations as f64 - error as f64) / total_observations as f64 * 100.0;
        Ok(Self {
            total_observations,
            error,
            accuracy_percent,
        })
    }

    /// Accuracy rounded to two decimals.
    pub fn rounded_percent(&self) -> f64 {
        (self.accuracy_percent * 100.0).round() / 100.0
    }

    /// Sums observations and errors across reports, e.g. several monitoring days.
    pub fn pool<'a, I>(reports: I) -> Result<Self, CounterError>
    where
        I: IntoIterator<Item = &'a AccuracyReport>,
    {
        let (total, error) = reports
            .into_iter()
            .fold((0, 0), |(t, e), r| (t + r.total_observations, e + r.error));
        Self::new(total, error)
    }
}

impl std::fmt::Display for AccuracyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:.2}% ({} observations, {} errors)",
            self.accuracy_percent, self.total_observations, self.error
        )
    }
}

pub fn accuracy(total_observations: u64, error: u64) -> Result<AccuracyReport, CounterError> {
    AccuracyReport::new(total_observations, error)
}
