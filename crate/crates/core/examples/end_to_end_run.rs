//! Full pipeline: simulated stream in, event log and accuracy out.

use headcount::engine::{Engine, EngineConfig};
use headcount::simulator::{evaluate, generate, scenario};

fn main() -> anyhow::Result<()> {
    let config = EngineConfig::from_toml(
        r#"
        min_confidence = 0.5

        [tracker]
        feature_threshold = 0.35
        spatial_threshold = 0.25
        miss_limit = 5

        [layout]
        line_ab = 0.4
        line_bc = 0.6
        "#,
    )?;

    let sim = generate(&scenario("noisy_crossings", 1)?)?;
    let mut engine = Engine::new(config)?;
    for frame in &sim.frames {
        let outcome = engine.process_frame(frame)?;
        for ev in &outcome.events {
            println!(
                "frame {:>4}  track {:>3}  {:?}  ({} heads in view)",
                ev.frame_id, ev.track_id, ev.kind, outcome.head_count
            );
        }
    }

    let ledger = engine.ledger();
    println!(
        "ins {} outs {} occupancy {}",
        ledger.ins(),
        ledger.outs(),
        ledger.occupancy()
    );
    println!(
        "truth ins {} outs {}",
        sim.truth.final_ins, sim.truth.final_outs
    );
    match evaluate(ledger, &sim.truth).report() {
        Some(report) => println!("accuracy {report}"),
        None => println!("no crossings to score"),
    }
    Ok(())
}
