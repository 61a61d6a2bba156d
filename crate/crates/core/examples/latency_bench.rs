//! Per-frame engine latency, grouped by how many people are in view.
//!
//! Run with --release for representative numbers.

use headcount::engine::{bench, EngineConfig, WARMUP_FRAMES};
use headcount::simulator::scenario_suite;

fn main() -> anyhow::Result<()> {
    let specs = scenario_suite(&["clean_entry", "crossing_pair", "multi_3"])?;
    let report = bench(&specs, 20, EngineConfig::default())?;

    println!("first {WARMUP_FRAMES} frames of each pass discarded");
    println!(
        "{:>6} {:>8} {:>10} {:>10} {:>10} {:>10}",
        "people", "samples", "p50 us", "p95 us", "p99 us", "max fps"
    );
    for (people, g) in &report.groups {
        println!(
            "{people:>6} {:>8} {:>10.1} {:>10.1} {:>10.1} {:>10.0}",
            g.samples, g.p50_us, g.p95_us, g.p99_us, g.max_fps
        );
    }
    Ok(())
}
