//! Generate a synthetic scenario and write its stream and ground truth.
//!
//! Usage: cargo run --example simulate_scenario -- [scenario] [seed] [out-dir]

use std::path::PathBuf;

use headcount::engine::io;
use headcount::simulator::{generate, scenario, CATALOG};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "multi_3".into());
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let dir = PathBuf::from(
        args.next()
            .unwrap_or_else(|| std::env::temp_dir().display().to_string()),
    );

    println!("catalog: {}", CATALOG.join(", "));
    let spec = scenario(&name, seed)?;
    let sim = generate(&spec)?;

    let stream = dir.join(format!("{name}_{seed}.jsonl"));
    let truth = dir.join(format!("{name}_{seed}_truth.jsonl"));
    io::write_frames(io::create(&stream)?, &sim.frames)?;
    io::write_truth(io::create(&truth)?, &sim.truth.events)?;

    let heads: usize = sim.frames.iter().map(|f| f.detections.len()).sum();
    println!(
        "{name} seed {seed}: {} frames, {heads} detections, {} actors, truth {} in / {} out",
        sim.frames.len(),
        spec.actors.len(),
        sim.truth.final_ins,
        sim.truth.final_outs
    );
    for ev in &sim.truth.events {
        println!(
            "  actor {} {:?} at frame {}",
            ev.actor_id, ev.kind, ev.frame_id
        );
    }
    println!("wrote {} and {}", stream.display(), truth.display());
    Ok(())
}
