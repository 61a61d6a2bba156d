use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::{
    BoundingBox, ClassLabel, DetectionRecord, Embedding, FrameRecord, LightingMode, RecordError,
};

#[derive(Debug, thiserror::Error)]
pub enum StreamError {
    #[error("line {line}: read failed: {source}")]
    Io {
        line: usize,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: malformed record: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line} (frame {frame_id}): {source}")]
    Record {
        line: usize,
        frame_id: u64,
        #[source]
        source: RecordError,
    },
    #[error("line {line}: frame_id {frame_id} does not follow {previous}")]
    FrameOrder {
        line: usize,
        frame_id: u64,
        previous: u64,
    },
    #[error("line {line} (frame {frame_id}): timestamp {ts_ms} precedes {previous}")]
    TimestampOrder {
        line: usize,
        frame_id: u64,
        ts_ms: u64,
        previous: u64,
    },
    #[error("line {line} (frame {frame_id}): embedding length {actual}, stream uses {expected}")]
    Dimension {
        line: usize,
        frame_id: u64,
        expected: usize,
        actual: usize,
    },
}

impl StreamError {
    pub fn line(&self) -> usize {
        match self {
            StreamError::Io { line, .. }
            | StreamError::Parse { line, .. }
            | StreamError::Record { line, .. }
            | StreamError::FrameOrder { line, .. }
            | StreamError::TimestampOrder { line, .. }
            | StreamError::Dimension { line, .. } => *line,
        }
    }

    /// Frame the error belongs to, when the line got far enough to name one.
    pub fn frame_id(&self) -> Option<u64> {
        match self {
            StreamError::Io { .. } | StreamError::Parse { .. } => None,
            StreamError::Record { frame_id, .. }
            | StreamError::FrameOrder { frame_id, .. }
            | StreamError::TimestampOrder { frame_id, .. }
            | StreamError::Dimension { frame_id, .. } => Some(*frame_id),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct WireFrame {
    frame_id: u64,
    ts_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lighting: Option<LightingMode>,
    #[serde(default)]
    detections: Vec<WireDetection>,
}

#[derive(Debug, Serialize, Deserialize)]
struct WireDetection {
    class: ClassLabel,
    conf: f64,
    #[serde(rename = "box")]
    bbox: [f64; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    emb: Option<Vec<f32>>,
}

impl WireFrame {
    fn into_record(self) -> Result<FrameRecord, RecordError> {
        let detections = self
            .detections
            .into_iter()
            .map(|d| {
                let [x0, y0, x1, y1] = d.bbox;
                let bbox = BoundingBox::new(x0, y0, x1, y1)?;
                let emb = d.emb.map(Embedding::new).transpose()?;
                DetectionRecord::new(d.class, d.conf, bbox, emb)
            })
            .collect::<Result<_, _>>()?;
        Ok(FrameRecord {
            frame_id: self.frame_id,
            timestamp_ms: self.ts_ms,
            lighting: self.lighting,
            detections,
        })
    }

    fn from_record(frame: &FrameRecord) -> Self {
        WireFrame {
            frame_id: frame.frame_id,
            ts_ms: frame.timestamp_ms,
            lighting: frame.lighting,
            detections: frame
                .detections
                .iter()
                .map(|d| WireDetection {
                    class: d.class_label,
                    conf: d.confidence,
                    bbox: d.bbox.to_array(),
                    emb: d.embedding.as_ref().map(|e| e.as_slice().to_vec()),
                })
                .collect(),
        }
    }
}

/// Parses a single stream line without any cross-line ordering checks.
pub fn parse_line(line: &str) -> Result<FrameRecord, StreamError> {
    let wire: WireFrame = serde_json::from_str(line).map_err(|e| StreamError::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    let frame_id = wire.frame_id;
    wire.into_record().map_err(|source| StreamError::Record {
        line: 1,
        frame_id,
        source,
    })
}

/// Encodes one frame as a single line (no trailing newline).
pub fn serialize_frame(frame: &FrameRecord) -> String {
    serde_json::to_string(&WireFrame::from_record(frame)).expect("frame encoding is infallible")
}

/// Iterator over the frames of a line-delimited detection stream.
///
/// Stops after the first error. When `expected_dim` is `None` the first
/// embedding seen fixes the dimension for the rest of the stream.
pub struct FrameStream<R> {
    reader: R,
    line_no: usize,
    buf: String,
    last: Option<(u64, u64)>,
    dim: Option<usize>,
    failed: bool,
}

pub fn parse_stream<R: BufRead>(reader: R, expected_dim: Option<usize>) -> FrameStream<R> {
    FrameStream {
        reader,
        line_no: 0,
        buf: String::new(),
        last: None,
        dim: expected_dim,
        failed: false,
    }
}

impl<R: BufRead> FrameStream<R> {
    pub fn embedding_dim(&self) -> Option<usize> {
        self.dim
    }

    fn check(&mut self, frame: &FrameRecord) -> Result<(), StreamError> {
        let line = self.line_no;
        if let Some((prev_id, prev_ts)) = self.last {
            if frame.frame_id <= prev_id {
                return Err(StreamError::FrameOrder {
                    line,
                    frame_id: frame.frame_id,
                    previous: prev_id,
                });
            }
            if frame.timestamp_ms < prev_ts {
                return Err(StreamError::TimestampOrder {
                    line,
                    frame_id: frame.frame_id,
                    ts_ms: frame.timestamp_ms,
                    previous: prev_ts,
                });
            }
        }
        for emb in frame.detections.iter().filter_map(|d| d.embedding.as_ref()) {
            match self.dim {
                None => self.dim = Some(emb.dim()),
                Some(expected) if expected != emb.dim() => {
                    return Err(StreamError::Dimension {
                        line,
                        frame_id: frame.frame_id,
                        expected,
                        actual: emb.dim(),
                    })
                }
                Some(_) => {}
            }
        }
        self.last = Some((frame.frame_id, frame.timestamp_ms));
        Ok(())
    }

    fn next_frame(&mut self) -> Option<Result<FrameRecord, StreamError>> {
        loop {
            self.buf.clear();
            self.line_no += 1;
            let line = self.line_no;
            match self.reader.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(source) => return Some(Err(StreamError::Io { line, source })),
            }
            let text = self.buf.trim();
            if text.is_empty() {
                continue;
            }
            let frame = parse_line(text).map_err(|e| match e {
                StreamError::Parse { message, .. } => StreamError::Parse { line, message },
                StreamError::Record {
                    frame_id, source, ..
                } => StreamError::Record {
                    line,
                    frame_id,
                    source,
                },
                other => other,
            });
            return Some(frame.and_then(|f| self.check(&f).map(|_| f)));
        }
    }
}

impl<R: BufRead> Iterator for FrameStream<R> {
    type Item = Result<FrameRecord, StreamError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let item = self.next_frame();
        if matches!(item, Some(Err(_))) {
            self.failed = true;
        }
        item
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const GOOD: &str = r#"{"frame_id":1,"ts_ms":0,"lighting":"night","detections":[{"class":"head","conf":0.7,"box":[0.1,0.1,0.2,0.2],"emb":[1.0,0.0,0.5]},{"class":"chair","conf":0.89,"box":[0.5,0.5,0.7,0.8]}]}"#;

    fn collect(text: &str, dim: Option<usize>) -> Vec<Result<FrameRecord, StreamError>> {
        parse_stream(text.as_bytes(), dim).collect()
    }

    #[test]
    fn parses_well_formed_line() {
        let f = parse_line(GOOD).unwrap();
        assert_eq!(f.frame_id, 1);
        assert_eq!(f.lighting, Some(LightingMode::Night));
        assert_eq!(f.detections.len(), 2);
        assert_eq!(f.detections[1].class_label, ClassLabel::Chair);
        assert!(f.detections[1].embedding.is_none());
        assert_eq!(f.detections[0].embedding.as_ref().unwrap().dim(), 3);
    }

    #[test]
    fn serialize_reproduces_canonical_line() {
        assert_eq!(serialize_frame(&parse_line(GOOD).unwrap()), GOOD);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let text = format!("{GOOD}\n\n{{\"frame_id\": oops}}\n");
        let out = collect(&text, None);
        assert!(out[0].is_ok());
        match &out[1] {
            Err(e @ StreamError::Parse { line, .. }) => {
                assert_eq!(*line, 3);
                assert_eq!(e.frame_id(), None);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn non_monotonic_frame_id_is_rejected() {
        let text = format!("{GOOD}\n{GOOD}\n");
        let out = collect(&text, None);
        assert!(matches!(
            out[1],
            Err(StreamError::FrameOrder {
                line: 2,
                frame_id: 1,
                previous: 1
            })
        ));
    }

    #[test]
    fn timestamp_going_backwards_is_rejected() {
        let text = "{\"frame_id\":1,\"ts_ms\":50,\"detections\":[]}\n{\"frame_id\":2,\"ts_ms\":49,\"detections\":[]}\n";
        let out = collect(text, None);
        assert!(matches!(
            out[1],
            Err(StreamError::TimestampOrder { frame_id: 2, .. })
        ));
    }

    #[test]
    fn embedding_dimension_is_enforced() {
        let text = format!(
            "{GOOD}\n{}\n",
            r#"{"frame_id":2,"ts_ms":40,"detections":[{"class":"head","conf":0.9,"box":[0.1,0.1,0.2,0.2],"emb":[1.0,2.0]}]}"#
        );
        let out = collect(&text, None);
        assert!(matches!(
            out[1],
            Err(StreamError::Dimension {
                expected: 3,
                actual: 2,
                frame_id: 2,
                ..
            })
        ));
        let fixed = collect(GOOD, Some(1024));
        assert!(matches!(
            fixed[0],
            Err(StreamError::Dimension { expected: 1024, .. })
        ));
    }

    #[test]
    fn invalid_record_is_reported_with_frame() {
        let text = r#"{"frame_id":9,"ts_ms":0,"detections":[{"class":"head","conf":0.9,"box":[0.3,0.1,0.2,0.2],"emb":[1.0]}]}"#;
        let out = collect(text, None);
        match &out[0] {
            Err(e @ StreamError::Record { .. }) => assert_eq!(e.frame_id(), Some(9)),
            other => panic!("unexpected {other:?}"),
        }
        let headless = r#"{"frame_id":9,"ts_ms":0,"detections":[{"class":"head","conf":0.9,"box":[0.1,0.1,0.2,0.2]}]}"#;
        assert!(matches!(
            parse_line(headless),
            Err(StreamError::Record {
                source: RecordError::MissingEmbedding,
                ..
            })
        ));
        assert!(parse_line(
            r#"{"frame_id":1,"ts_ms":0,"detections":[{"class":"dog","conf":0.5,"box":[0,0,1,1]}]}"#
        )
        .is_err());
    }

    fn arb_frame() -> impl Strategy<Value = FrameRecord> {
        let det = (
            0usize..4,
            0.0f64..=1.0,
            (0.0f64..0.5, 0.0f64..0.5, 0.01f64..0.5, 0.01f64..0.5),
            prop::collection::vec(-10.0f32..10.0, 4),
            any::<bool>(),
        )
            .prop_map(|(c, conf, (x, y, w, h), emb, with_emb)| {
                let label = [
                    ClassLabel::Head,
                    ClassLabel::Chair,
                    ClassLabel::Trolley,
                    ClassLabel::Bag,
                ][c];
                let emb =
                    (label == ClassLabel::Head || with_emb).then(|| Embedding::new(emb).unwrap());
                DetectionRecord::new(
                    label,
                    conf,
                    BoundingBox::new(x, y, x + w, y + h).unwrap(),
                    emb,
                )
                .unwrap()
            });
        (
            any::<u32>(),
            any::<u32>(),
            prop::option::of(prop_oneof![
                Just(LightingMode::Day),
                Just(LightingMode::Night)
            ]),
            prop::collection::vec(det, 0..5),
        )
            .prop_map(|(id, ts, lighting, detections)| FrameRecord {
                frame_id: id as u64,
                timestamp_ms: ts as u64,
                lighting,
                detections,
            })
    }

    proptest! {
        #[test]
        fn serialize_parse_round_trip(frame in arb_frame()) {
            let line = serialize_frame(&frame);
            let parsed = parse_line(&line).unwrap();
            prop_assert_eq!(&parsed, &frame);
            prop_assert_eq!(serialize_frame(&parsed), line);
        }
    }
}
