mod common;

use std::collections::BTreeSet;

use headcount::tracker::{associate, DistanceMatrices, Matrix, TrackerConfig};
use proptest::prelude::*;

use common::{random_instance, retrace_greedy};

fn config(t: f64, d: f64) -> TrackerConfig {
    TrackerConfig {
        feature_threshold: t,
        spatial_threshold: d,
        ..TrackerConfig::default()
    }
}

#[test]
fn matches_literal_retrace_on_seeded_instances() {
    for seed in 0..2000 {
        let inst = random_instance(seed);
        let expected = retrace_greedy(&inst.m, &inst.n, inst.t, inst.d);
        let got = associate(inst.matrices(), &config(inst.t, inst.d));
        assert_eq!(got.matches, expected, "seed {seed}");
    }
}

fn arb_matrices() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    (0usize..=6, 0usize..=6).prop_flat_map(|(r, c)| {
        (
            prop::collection::vec(prop::collection::vec(0.0f64..1.0, c), r),
            prop::collection::vec(prop::collection::vec(0.0f64..0.6, c), r),
        )
    })
}

fn mats(m: &[Vec<f64>], n: &[Vec<f64>]) -> DistanceMatrices {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    DistanceMatrices::new(
        Matrix::from_fn(rows, cols, |i, j| m[i][j]),
        Matrix::from_fn(rows, cols, |i, j| n[i][j]),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn result_respects_gates_and_partitions((m, n) in arb_matrices(), t in 0.05f64..1.0, d in 0.01f64..0.6) {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let r = associate(mats(&m, &n), &config(t, d));

        prop_assert!(r.matches.len() <= rows.min(cols));
        for &(i, j) in &r.matches {
            prop_assert!(m[i][j] < t);
            prop_assert!(n[i][j] <= d);
        }
        let used_rows: BTreeSet<_> = r.matches.iter().map(|p| p.0).collect();
        let used_cols: BTreeSet<_> = r.matches.iter().map(|p| p.1).collect();
        prop_assert_eq!(used_rows.len(), r.matches.len());
        prop_assert_eq!(used_cols.len(), r.matches.len());

        let mut all_rows: Vec<_> = used_rows.iter().copied().chain(r.unmatched_registered.iter().copied()).collect();
        all_rows.sort_unstable();
        prop_assert_eq!(all_rows, (0..rows).collect::<Vec<_>>());
        let mut all_cols: Vec<_> = used_cols.iter().copied().chain(r.unmatched_detections.iter().copied()).collect();
        all_cols.sort_unstable();
        prop_assert_eq!(all_cols, (0..cols).collect::<Vec<_>>());
    }

    #[test]
    fn deterministic_including_ties(
        (r, c) in (1usize..=6, 1usize..=6),
        seed in any::<u64>(),
    ) {
        // Coarse values so ties are common.
        let vals = |k: usize| ((seed.rotate_left(k as u32 * 7) % 5) as f64) / 10.0;
        let m: Vec<Vec<f64>> = (0..r).map(|i| (0..c).map(|j| vals(i * c + j)).collect()).collect();
        let n = vec![vec![0.0; c]; r];
        let a = associate(mats(&m, &n), &config(0.35, 0.25));
        let b = associate(mats(&m, &n), &config(0.35, 0.25));
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.matches, retrace_greedy(&m, &n, 0.35, 0.25));
    }

    #[test]
    fn scaling_distances_and_threshold_keeps_matches(
        (m, n) in arb_matrices(),
        t in 0.05f64..1.0,
        d in 0.01f64..0.6,
        scale in 0.01f64..100.0,
    ) {
        let base = associate(mats(&m, &n), &config(t, d));
        let mut sm = mats(&m, &n);
        sm.feature.scale(scale);
        let other = associate(sm, &config(t * scale, d));
        prop_assert_eq!(base.matches, other.matches);
    }
}
