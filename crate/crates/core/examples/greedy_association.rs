//! Matching detections to tracked objects with the thresholded greedy rule.
//!
//! Greedy picks the globally smallest feature distance first, so it can end
//! up with a worse total than the optimal assignment.

use headcount::tracker::{associate, DistanceMatrices, Matrix, TrackerConfig};

fn main() {
    let config = TrackerConfig::default();
    println!(
        "T = {}, D = {}",
        config.feature_threshold, config.spatial_threshold
    );

    let feature = Matrix::from_rows(&[vec![0.10, 0.20], vec![0.15, 0.90]]);
    let spatial = Matrix::from_rows(&[vec![0.05, 0.05], vec![0.05, 0.05]]);
    let result = associate(DistanceMatrices::new(feature, spatial), &config);
    println!("greedy matches: {:?}", result.matches);
    println!(
        "unmatched tracks {:?}, unmatched detections {:?}",
        result.unmatched_registered, result.unmatched_detections
    );

    // Close in appearance but too far apart on screen: the pair is rejected.
    let feature = Matrix::from_rows(&[vec![0.05]]);
    let spatial = Matrix::from_rows(&[vec![0.40]]);
    let result = associate(DistanceMatrices::new(feature, spatial), &config);
    println!("spatially gated: {:?}", result.matches);
}
