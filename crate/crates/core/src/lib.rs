//! Real-time people counting for an overhead doorway camera.
//!
//! The pipeline per frame is: parse detections, drop distraction classes,
//! associate heads to tracked identities by appearance, classify each track
//! into the outside / critical / inside band, and count A→C as an entry and
//! C→A as an exit. A deterministic scenario simulator and a latency bench sit
//! alongside for evaluation.

pub mod counter;
pub mod engine;
pub mod ingest;
pub mod simulator;
pub mod tracker;
