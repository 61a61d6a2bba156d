//! Line-delimited file formats around a run.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::counter::CrossingEvent;
use crate::ingest::{serialize_frame, FrameRecord};
use crate::simulator::TruthEvent;

fn write_lines<W: Write, T: Serialize>(mut out: W, items: &[T]) -> io::Result<()> {
    for item in items {
        serde_json::to_writer(&mut out, item)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// `{kind, track_id, frame_id, ts_ms}` per line.
pub fn write_events<W: Write>(out: W, events: &[CrossingEvent]) -> io::Result<()> {
    write_lines(out, events)
}

/// `{kind, actor_id, frame_id}` per line.
pub fn write_truth<W: Write>(out: W, events: &[TruthEvent]) -> io::Result<()> {
    write_lines(out, events)
}

pub fn write_frames<W: Write>(mut out: W, frames: &[FrameRecord]) -> io::Result<()> {
    for frame in frames {
        out.write_all(serialize_frame(frame).as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn create(path: &Path) -> io::Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new)
}
