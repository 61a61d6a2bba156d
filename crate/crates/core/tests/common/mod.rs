//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use headcount::counter::{CrossingKind, Region};
use headcount::tracker::{DistanceMatrices, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Straight re-trace of the greedy tracking loop over nested vectors:
/// full scan for the minimum every iteration, knocked-out cells set to `t`.
pub fn retrace_greedy(m: &[Vec<f64>], n: &[Vec<f64>], t: f64, d: f64) -> Vec<(usize, usize)> {
    let mut m: Vec<Vec<f64>> = m.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let big_a = rows.min(cols);
    let mut a = 0;
    let mut old_assigned = HashSet::new();
    let mut new_assigned = HashSet::new();
    let mut matches = Vec::new();
    loop {
        if a >= big_a {
            break;
        }
        let mut best = (usize::MAX, usize::MAX, f64::INFINITY);
        for (i, row) in m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v < best.2 {
                    best = (i, j, v);
                }
            }
        }
        if !(best.2 < t) {
            break;
        }
        let (i, j, _) = best;
        if old_assigned.contains(&i) || new_assigned.contains(&j) || n[i][j] > d {
            m[i][j] = t;
            continue;
        }
        old_assigned.insert(i);
        new_assigned.insert(j);
        matches.push((i, j));
        m[i][j] = t;
        a += 1;
    }
    matches
}

pub struct Instance {
    pub m: Vec<Vec<f64>>,
    pub n: Vec<Vec<f64>>,
    pub t: f64,
    pub d: f64,
}

impl Instance {
    pub fn matrices(&self) -> DistanceMatrices {
        let rows = self.m.len();
        let cols = self.m.first().map_or(0, |r| r.len());
        DistanceMatrices::new(
            Matrix::from_fn(rows, cols, |i, j| self.m[i][j]),
            Matrix::from_fn(rows, cols, |i, j| self.n[i][j]),
        )
    }
}

/// Random instance with m, n ≤ 6 and pairwise-distinct feature distances.
pub fn random_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = rng.gen_range(0..=6);
    let cols = rng.gen_range(0..=6);
    loop {
        let m: Vec<Vec<f64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(0.0..1.0)).collect())
            .collect();
        let mut flat: Vec<f64> = m.iter().flatten().copied().collect();
        flat.sort_by(f64::total_cmp);
        if flat.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let n = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(0.0..0.6)).collect())
            .collect();
        return Instance {
            m,
            n,
            t: rng.gen_range(0.15..0.95),
            d: rng.gen_range(0.05..0.5),
        };
    }
}

/// Crossings in a region sequence: remember the last anchor (A or C) seen;
/// arriving at the opposite anchor is a crossing.
pub fn anchor_scan(regions: &[Region]) -> Vec<CrossingKind> {
    let mut anchor = None;
    let mut out = Vec::new();
    for &r in regions {
        match r {
            Region::C => {
                if anchor == Some(Region::A) {
                    out.push(CrossingKind::Entry);
                }
                anchor = Some(Region::C);
            }
            Region::A => {
                if anchor == Some(Region::C) {
                    out.push(CrossingKind::Exit);
                }
                anchor = Some(Region::A);
            }
            Region::B => {}
        }
    }
    out
}

/// Every string over {A, B, C} of length 1..=max_len.
pub fn all_region_strings(max_len: usize) -> Vec<Vec<Region>> {
    let alphabet = [Region::A, Region::B, Region::C];
    let mut all = Vec::new();
    let mut layer: Vec<Vec<Region>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|s| {
                alphabet.iter().map(move |&r| {
                    let mut next = s.clone();
                    next.push(r);
                    next
                })
            })
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}
