use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    orthonormal_embeddings, ActorSpec, DistractionSpec, FrameGap, Intent, NoiseSpec, ScenarioSpec,
    SimError, Waypoint,
};
use crate::counter::RegionLayout;
use crate::ingest::{BoundingBox, ClassLabel, Point, DEFAULT_EMBEDDING_DIM};
use crate::tracker::TrackerConfig;

/// Built-in scenario names. `dropout_<k>` takes the gap length, e.g. `dropout_3`.
pub const CATALOG: &[&str] = &[
    "clean_entry",
    "clean_exit",
    "oscillation",
    "dropout_<k>",
    "crossing_pair",
    "distraction_field",
    "multi_3",
    "noisy_crossings",
];

const FPS: f64 = 25.0;
const MAX_DROPOUT: u64 = 40;

struct Builder {
    name: String,
    seed: u64,
    duration_frames: u64,
    paths: Vec<(Intent, Vec<Waypoint>)>,
    gaps: Vec<(usize, FrameGap)>,
    distractions: Vec<DistractionSpec>,
    noise: NoiseSpec,
}

impl Builder {
    fn new(name: &str, seed: u64, duration_frames: u64) -> Self {
        Self {
            name: name.to_string(),
            seed,
            duration_frames,
            paths: Vec::new(),
            gaps: Vec::new(),
            distractions: Vec::new(),
            noise: NoiseSpec::none(),
        }
    }

    fn actor(mut self, intent: Intent, path: Vec<Waypoint>) -> Self {
        self.paths.push((intent, path));
        self
    }

    /// Straight vertical walk at lane `x` from `y0` to `y1`.
    fn walk(self, intent: Intent, x: f64, (f0, y0): (u64, f64), (f1, y1): (u64, f64)) -> Self {
        self.actor(
            intent,
            vec![Waypoint::new(f0, x, y0), Waypoint::new(f1, x, y1)],
        )
    }

    fn distraction(
        mut self,
        class: ClassLabel,
        confidence: f64,
        center: (f64, f64),
        size: f64,
    ) -> Self {
        let bbox = BoundingBox::centered(Point::new(center.0, center.1), size, size)
            .expect("catalog distraction fits the frame");
        self.distractions.push(DistractionSpec {
            class,
            confidence,
            bbox,
        });
        self
    }

    fn build(self) -> ScenarioSpec {
        let dim = DEFAULT_EMBEDDING_DIM;
        // Identity appearance gets its own stream so noise draws never shift it.
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x5eed_0f_1d_e47);
        let embeddings = orthonormal_embeddings(&mut rng, self.paths.len(), dim);
        let actors = self
            .paths
            .into_iter()
            .zip(embeddings)
            .enumerate()
            .map(|(k, ((intent, path), base_embedding))| ActorSpec {
                actor_id: k as u64,
                path,
                base_embedding,
                intent,
                gaps: self
                    .gaps
                    .iter()
                    .filter(|(a, _)| *a == k)
                    .map(|(_, g)| *g)
                    .collect(),
            })
            .collect();
        ScenarioSpec {
            name: self.name,
            seed: self.seed,
            duration_frames: self.duration_frames,
            fps: FPS,
            embedding_dim: dim,
            layout: RegionLayout::default(),
            lighting: None,
            actors,
            distractions: self.distractions,
            noise: self.noise,
        }
    }
}

fn unknown(name: &str) -> SimError {
    SimError::UnknownScenario {
        name: name.to_string(),
        catalog: CATALOG.iter().map(|s| s.to_string()).collect(),
    }
}

/// Builds the named catalog scenario with the given seed.
pub fn scenario(name: &str, seed: u64) -> Result<ScenarioSpec, SimError> {
    use Intent::*;
    let spec = match name {
        "clean_entry" => Builder::new(name, seed, 80)
            .walk(Enter, 0.5, (10, 0.1), (60, 0.9))
            .build(),
        "clean_exit" => Builder::new(name, seed, 80)
            .walk(Exit, 0.5, (10, 0.9), (60, 0.1))
            .build(),
        "oscillation" => {
            let path = (0..20)
                .map(|k| Waypoint::new(k * 10 + 9, 0.5, if k % 2 == 0 { 0.45 } else { 0.55 }))
                .collect();
            Builder::new(name, seed, 200).actor(Oscillate, path).build()
        }
        "crossing_pair" => Builder::new(name, seed, 100)
            .walk(Enter, 0.45, (10, 0.08), (70, 0.92))
            .walk(Exit, 0.55, (15, 0.92), (75, 0.08))
            .build(),
        "distraction_field" => Builder::new(name, seed, 100)
            .walk(Enter, 0.4, (10, 0.08), (60, 0.92))
            .walk(Exit, 0.6, (30, 0.92), (80, 0.08))
            .distraction(ClassLabel::Chair, 0.89, (0.7, 0.5), 0.2)
            .distraction(ClassLabel::Bag, 0.92, (0.2, 0.3), 0.1)
            .distraction(ClassLabel::Trolley, 0.86, (0.8, 0.8), 0.25)
            .build(),
        "multi_3" => Builder::new(name, seed, 110)
            .walk(Enter, 0.2, (10, 0.08), (70, 0.92))
            .walk(Exit, 0.5, (20, 0.92), (80, 0.08))
            .walk(Enter, 0.8, (30, 0.08), (90, 0.92))
            .build(),
        "noisy_crossings" => noisy_crossings(seed),
        _ => {
            let k = name
                .strip_prefix("dropout_")
                .and_then(|k| k.parse::<u64>().ok())
                .filter(|&k| k <= MAX_DROPOUT)
                .ok_or_else(|| unknown(name))?;
            dropout(name, seed, k)
        }
    };
    Ok(spec)
}

pub fn scenario_suite<S: AsRef<str>>(names: &[S]) -> Result<Vec<ScenarioSpec>, SimError> {
    names.iter().map(|n| scenario(n.as_ref(), 0)).collect()
}

/// One entry with `k` consecutive frames hidden while the actor is between
/// the lines.
fn dropout(name: &str, seed: u64, k: u64) -> ScenarioSpec {
    let mut b =
        Builder::new(name, seed, 100 + k).walk(Intent::Enter, 0.5, (10, 0.08), (70 + k, 0.92));
    if k > 0 {
        let start = 10 + (70 + k - 10) / 2 - k / 2;
        b.gaps.push((0, FrameGap { start, len: k }));
    }
    b.build()
}

/// Four seeded crossings and a loiterer under moderate noise.
fn noisy_crossings(seed: u64) -> ScenarioSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Builder::new("noisy_crossings", seed, 300);
    for _ in 0..4 {
        let enter = rng.gen_bool(0.5);
        let x0: f64 = rng.gen_range(0.1..0.9);
        let x1 = (x0 + rng.gen_range(-0.1..0.1)).clamp(0.06, 0.94);
        let start = rng.gen_range(5..200);
        let end = start + rng.gen_range(40..80);
        let (y0, y1) = (rng.gen_range(0.06..0.14), rng.gen_range(0.86..0.94));
        let (intent, ya, yb) = if enter {
            (Intent::Enter, y0, y1)
        } else {
            (Intent::Exit, y1, y0)
        };
        b = b.actor(
            intent,
            vec![Waypoint::new(start, x0, ya), Waypoint::new(end, x1, yb)],
        );
    }
    let outside = rng.gen_bool(0.5);
    let (lo, hi) = if outside { (0.06, 0.28) } else { (0.72, 0.94) };
    let mut frame = rng.gen_range(0..60);
    let mut path = Vec::new();
    for _ in 0..5 {
        path.push(Waypoint::new(
            frame,
            rng.gen_range(0.1..0.9),
            rng.gen_range(lo..hi),
        ));
        frame += rng.gen_range(20..50);
    }
    b = b.actor(Intent::Loiter, path);
    b.noise = NoiseSpec::moderate(
        TrackerConfig::default().feature_threshold,
        DEFAULT_EMBEDDING_DIM,
    );
    b.build()
}
