//! Region histories turn a track's vertical position into entry/exit events.

use headcount::counter::{Region, RegionHistory, RegionLayout};

fn replay(label: &str, layout: &RegionLayout, ys: &[f64]) {
    let regions: Vec<Region> = ys.iter().map(|&y| layout.classify(y)).collect();
    let mut history = RegionHistory::seeded(regions[0]);
    let events: Vec<_> = regions[1..]
        .iter()
        .filter_map(|&r| history.push(r))
        .collect();
    println!("{label:>12}: {regions:?} -> {events:?}");
}

fn main() {
    let layout = RegionLayout::default();
    replay("walk in", &layout, &[0.1, 0.3, 0.5, 0.7, 0.9]);
    replay("walk out", &layout, &[0.9, 0.5, 0.1]);
    replay("hesitate", &layout, &[0.1, 0.5, 0.2, 0.5, 0.3]);
    replay("loiter", &layout, &[0.45, 0.55, 0.45, 0.55]);
    replay("round trip", &layout, &[0.1, 0.5, 0.9, 0.5, 0.1]);
}
