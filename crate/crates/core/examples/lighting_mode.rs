//! Day/night detection from a handful of pixel samples.
//!
//! An IR camera at night produces grayscale frames, so R == G == B almost
//! everywhere. This example builds one grayscale and one colour image and
//! classifies both.

use headcount::engine::LightingConfig;
use headcount::ingest::{classify_lighting, sample_grid};

fn image(width: u32, height: u32, pixel: impl Fn(u32, u32) -> [u8; 3]) -> Vec<u8> {
    let mut buf = Vec::with_capacity((width * height * 3) as usize);
    for y in 0..height {
        for x in 0..width {
            buf.extend_from_slice(&pixel(x, y));
        }
    }
    buf
}

fn main() -> anyhow::Result<()> {
    let cfg = LightingConfig::default();
    let (w, h) = (160, 120);

    let ir = image(w, h, |x, y| {
        let v = ((x + y) % 256) as u8;
        [v, v, v.saturating_add(1)]
    });
    let colour = image(w, h, |x, y| [(x % 256) as u8, (y * 2 % 256) as u8, 90]);

    for (name, img) in [("ir", &ir), ("colour", &colour)] {
        let samples = sample_grid(img, w, h, cfg.sample_grid)?;
        let agreeing = samples
            .iter()
            .filter(|s| s.channel_spread() <= cfg.channel_tolerance)
            .count();
        let mode = classify_lighting(&samples, cfg.channel_tolerance, cfg.agreement_fraction)?;
        println!(
            "{name:>7}: {agreeing}/{} samples grayscale -> {mode:?}",
            samples.len()
        );
    }
    Ok(())
}
