//! Sweep tracker thresholds over simulated scenarios and rank them.

use headcount::engine::{calibrate, CalibrationGrid, EngineConfig};

fn main() -> anyhow::Result<()> {
    let grid = CalibrationGrid::from_toml(
        r#"
        feature_threshold = [0.2, 0.35, 0.5]
        miss_limit = [0, 2, 5, 10]
        "#,
    )?;
    let scenarios = ["dropout_3", "crossing_pair", "noisy_crossings"];
    let rows = calibrate(&grid, &scenarios, &[0, 1, 2], &EngineConfig::default())?;

    println!(
        "{:>6} {:>6} {:>4} {:>6} {:>9}",
        "T", "D", "E", "error", "accuracy"
    );
    for r in rows.iter().take(8) {
        println!(
            "{:>6.2} {:>6.2} {:>4} {:>6} {:>8.2}%",
            r.feature_threshold, r.spatial_threshold, r.miss_limit, r.error, r.accuracy_percent
        );
    }
    Ok(())
}
