use serde::{Deserialize, Serialize};

use super::TrackerError;
use crate::ingest::{Embedding, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureMetric {
    /// 1 − cos(a, b), in [0, 2].
    #[default]
    Cosine,
    Euclidean,
}

pub fn feature_distance(
    a: &Embedding,
    b: &Embedding,
    metric: FeatureMetric,
) -> Result<f64, TrackerError> {
    let (a, b) = (a.as_slice(), b.as_slice());
    if a.len() != b.len() {
        return Err(TrackerError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    match metric {
        FeatureMetric::Cosine => {
            let (mut dot, mut na, mut nb) = (0.0f64, 0.0f64, 0.0f64);
            for (&x, &y) in a.iter().zip(b) {
                let (x, y) = (x as f64, y as f64);
                dot += x * y;
                na += x * x;
                nb += y * y;
            }
            if na == 0.0 || nb == 0.0 {
                return Err(TrackerError::ZeroEmbedding);
            }
            // Rounding can push |cos| a hair past 1.
            let cos = (dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0);
            Ok(1.0 - cos)
        }
        FeatureMetric::Euclidean => Ok(a
            .iter()
            .zip(b)
            .map(|(&x, &y)| {
                let d = x as f64 - y as f64;
                d * d
            })
            .sum::<f64>()
            .sqrt()),
    }
}

/// Euclidean distance between two box centers.
pub fn spatial_distance(p: Point, q: Point) -> f64 {
    (p.x - q.x).hypot(p.y - q.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn emb(v: &[f32]) -> Embedding {
        Embedding::new(v.to_vec()).unwrap()
    }

    #[test]
    fn cosine_examples() {
        let a = emb(&[0.3, -1.2, 4.0]);
        assert!(
            feature_distance(&a, &a, FeatureMetric::Cosine)
                .unwrap()
                .abs()
                < 1e-12
        );
        let mut e1 = vec![0.0; 8];
        let mut e2 = vec![0.0; 8];
        e1[0] = 1.0;
        e2[1] = 1.0;
        assert_eq!(
            feature_distance(&emb(&e1), &emb(&e2), FeatureMetric::Cosine).unwrap(),
            1.0
        );
        let neg: Vec<f32> = e1.iter().map(|v| -v).collect();
        assert_eq!(
            feature_distance(&emb(&e1), &emb(&neg), FeatureMetric::Cosine).unwrap(),
            2.0
        );
    }

    #[test]
    fn euclidean_example() {
        // sqrt((3-3)^2 + (4-0)^2)
        let d = feature_distance(
            &emb(&[3.0, 4.0]),
            &emb(&[3.0, 0.0]),
            FeatureMetric::Euclidean,
        )
        .unwrap();
        assert_eq!(d, 4.0);
    }

    #[test]
    fn errors() {
        assert_eq!(
            feature_distance(&emb(&[1.0]), &emb(&[1.0, 2.0]), FeatureMetric::Euclidean),
            Err(TrackerError::DimensionMismatch { left: 1, right: 2 })
        );
        assert_eq!(
            feature_distance(&emb(&[0.0, 0.0]), &emb(&[1.0, 2.0]), FeatureMetric::Cosine),
            Err(TrackerError::ZeroEmbedding)
        );
        assert_eq!(
            feature_distance(
                &emb(&[0.0, 0.0]),
                &emb(&[0.0, 0.0]),
                FeatureMetric::Euclidean
            ),
            Ok(0.0)
        );
    }

    #[test]
    fn spatial_examples() {
        let p = Point::new(0.3, 0.7);
        assert_eq!(spatial_distance(p, p), 0.0);
        assert!(
            (spatial_distance(Point::new(0.0, 0.0), Point::new(1.0, 1.0)) - 2f64.sqrt()).abs()
                < 1e-12
        );
        // legs 0.3 and 0.4
        assert!((spatial_distance(Point::new(0.2, 0.5), Point::new(0.5, 0.1)) - 0.5).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn metrics_are_symmetric_and_bounded(
            pair in (1usize..16).prop_flat_map(|n| (
                prop::collection::vec(-5.0f32..5.0, n),
                prop::collection::vec(-5.0f32..5.0, n),
            ))
        ) {
            let (a, b) = (emb(&pair.0), emb(&pair.1));
            let e_ab = feature_distance(&a, &b, FeatureMetric::Euclidean).unwrap();
            let e_ba = feature_distance(&b, &a, FeatureMetric::Euclidean).unwrap();
            prop_assert_eq!(e_ab, e_ba);
            prop_assert!(e_ab >= 0.0);
            if let (Ok(c_ab), Ok(c_ba)) = (
                feature_distance(&a, &b, FeatureMetric::Cosine),
                feature_distance(&b, &a, FeatureMetric::Cosine),
            ) {
                prop_assert_eq!(c_ab, c_ba);
                prop_assert!((0.0..=2.0).contains(&c_ab));
            }
        }
    }
}
