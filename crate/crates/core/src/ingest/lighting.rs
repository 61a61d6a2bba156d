use super::LightingMode;

/// One sampled RGB pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PixelSample {
    pub x: u32,
    pub y: u32,
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl PixelSample {
    pub fn rgb(r: u8, g: u8, b: u8) -> Self {
        Self {
            x: 0,
            y: 0,
            r,
            g,
            b,
        }
    }

    /// max(r,g,b) - min(r,g,b)
    pub fn channel_spread(&self) -> u8 {
        let hi = self.r.max(self.g).max(self.b);
        let lo = self.r.min(self.g).min(self.b);
        hi - lo
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LightingError {
    #[error("no pixel samples supplied")]
    EmptySamples,
    #[error("agreement fraction {0} outside (0, 1]")]
    InvalidFraction(f64),
    #[error("image buffer holds {actual} bytes, expected {expected} for {width}x{height} RGB")]
    BufferSize {
        width: u32,
        height: u32,
        expected: usize,
        actual: usize,
    },
    #[error("sample grid must be at least 1x1")]
    EmptyGrid,
}

/// IR-mode detector: the camera emits grayscale frames at night, so every
/// pixel has equal R, G and B. A sample "agrees" when its channel spread is
/// within `channel_tolerance`; the frame is Night when at least
/// `agreement_fraction` of the samples agree.
pub fn classify_lighting(
    samples: &[PixelSample],
    channel_tolerance: u8,
    agreement_fraction: f64,
) -> Result<LightingMode, LightingError> {
    if samples.is_empty() {
        return Err(LightingError::EmptySamples);
    }
    if !(agreement_fraction > 0.0 && agreement_fraction <= 1.0) {
        return Err(LightingError::InvalidFraction(agreement_fraction));
    }
    let agreeing = samples
        .iter()
        .filter(|s| s.channel_spread() <= channel_tolerance)
        .count();
    // Compare counts, not ratios, so 99/100 against 0.99 is not at the mercy of rounding.
    let needed = (agreement_fraction * samples.len() as f64 - 1e-9).ceil() as usize;
    Ok(if agreeing >= needed {
        LightingMode::Night
    } else {
        LightingMode::Day
    })
}

/// Samples a `grid` x `grid` lattice of cell centers from a packed RGB8 buffer.
pub fn sample_grid(
    rgb: &[u8],
    width: u32,
    height: u32,
    grid: u32,
) -> Result<Vec<PixelSample>, LightingError> {
    if grid == 0 || width == 0 || height == 0 {
        return Err(LightingError::EmptyGrid);
    }
    let expected = width as usize * height as usize * 3;
    if rgb.len() != expected {
        return Err(LightingError::BufferSize {
            width,
            height,
            expected,
            actual: rgb.len(),
        });
    }
    let coord =
        |i: u32, extent: u32| ((2 * i as u64 + 1) * extent as u64 / (2 * grid as u64)) as u32;
    let mut out = Vec::with_capacity((grid * grid) as usize);
    for gy in 0..grid {
        for gx in 0..grid {
            let (x, y) = (coord(gx, width), coord(gy, height));
            let off = (y as usize * width as usize + x as usize) * 3;
            out.push(PixelSample {
                x,
                y,
                r: rgb[off],
                g: rgb[off + 1],
                b: rgb[off + 2],
            });
        }
    }
    Ok(out)
}
