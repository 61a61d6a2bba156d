//! Parse a JSON-lines detection stream and keep only confident heads.

use std::io::Cursor;

use headcount::ingest::{filter_heads, parse_stream};

const STREAM: &str = r#"{"frame_id":0,"ts_ms":0,"detections":[{"class":"head","conf":0.91,"box":[0.40,0.10,0.48,0.18],"emb":[1.0,0.0,0.0]},{"class":"chair","conf":0.97,"box":[0.1,0.6,0.3,0.9]}]}
{"frame_id":1,"ts_ms":40,"lighting":"night","detections":[{"class":"head","conf":0.32,"box":[0.41,0.14,0.49,0.22],"emb":[0.9,0.1,0.0]}]}

{"frame_id":2,"ts_ms":80,"detections":[{"class":"head","conf":0.88,"box":[0.42,0.18,0.50,0.26],"emb":[0.95,0.05,0.0]},{"class":"bag","conf":0.7,"box":[0.7,0.7,0.8,0.8]}]}
{"frame_id":2,"ts_ms":120,"detections":[]}
"#;

fn main() {
    for item in parse_stream(Cursor::new(STREAM), Some(3)) {
        match item {
            Ok(frame) => {
                let heads = filter_heads(&frame, 0.5);
                println!(
                    "frame {} ({:?}): {} detections, {} heads kept",
                    frame.frame_id,
                    frame.lighting,
                    frame.detections.len(),
                    heads.len()
                );
            }
            // The last line repeats frame 2, which the reader rejects.
            Err(e) => println!("stopped: {e}"),
        }
    }
}
