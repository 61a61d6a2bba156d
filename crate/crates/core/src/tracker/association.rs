use super::{feature_distance, spatial_distance, TrackedObject, TrackerConfig, TrackerError};
use crate::ingest::DetectionRecord;

/// Row-major `rows x cols` matrix of non-negative distances.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn scale(&mut self, factor: f64) {
        self.data.iter_mut().for_each(|v| *v *= factor);
    }

    /// Smallest entry and its position; ties go to the lowest row, then lowest column.
    pub fn argmin(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (k, &v) in self.data.iter().enumerate() {
            if best.map_or(true, |(_, b)| v < b) {
                best = Some((k, v));
            }
        }
        best.map(|(k, v)| (k / self.cols, k % self.cols, v))
    }
}

/// Feature (`feature`, M) and spatial (`spatial`, N) distances between
/// registered objects (rows) and new detections (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrices {
    pub feature: Matrix,
    pub spatial: Matrix,
}

impl DistanceMatrices {
    pub fn new(feature: Matrix, spatial: Matrix) -> Self {
        assert_eq!(
            (feature.rows(), feature.cols()),
            (spatial.rows(), spatial.cols()),
            "feature and spatial matrices differ in shape"
        );
        Self { feature, spatial }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.feature.rows(), self.feature.cols())
    }
}

pub fn build_matrices(
    registered: &[TrackedObject],
    detections: &[DetectionRecord],
    config: &TrackerConfig,
) -> Result<DistanceMatrices, TrackerError> {
    let det_embeddings = detections
        .iter()
        .map(|d| d.embedding.as_ref().ok_or(TrackerError::MissingEmbedding))
        .collect::<Result<Vec<_>, _>>()?;
    let mut feature = Vec::with_capacity(registered.len() * detections.len());
    for obj in registered {
        for emb in &det_embeddings {
            feature.push(feature_distance(
                &obj.embedding,
                emb,
                config.feature_metric,
            )?);
        }
    }
    let feature = Matrix {
        rows: registered.len(),
        cols: detections.len(),
        data: feature,
    };
    let spatial = Matrix::from_fn(registered.len(), detections.len(), |i, j| {
        spatial_distance(registered[i].center, detections[j].center())
    });
    Ok(DistanceMatrices { feature, spatial })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AssignmentResult {
    /// (registered index, detection index) in the order they were accepted.
    pub matches: Vec<(usize, usize)>,
    pub unmatched_registered: Vec<usize>,
    pub unmatched_detections: Vec<usize>,
}

/// Greedy feature-distance assignment with a spatial gate.
///
/// Repeatedly takes the smallest remaining feature distance. A pair whose row
/// or column is already used, or whose spatial distance exceeds the gate, is
/// knocked out by overwriting its entry with the feature threshold; because
/// the loop only continues while the minimum is strictly below the
/// threshold, a knocked-out pair can never be picked again. Stops once
/// min(rows, cols) pairs are matched or nothing below the threshold is left.
///
/// Takes the matrices by value: the feature matrix is scratch space.
pub fn associate(matrices: DistanceMatrices, config: &TrackerConfig) -> AssignmentResult {
    let DistanceMatrices {
        feature: mut scratch,
        spatial,
    } = matrices;
    let (m, n) = (scratch.rows(), scratch.cols());
    let threshold = config.feature_threshold;
    let max_assignments = m.min(n);

    let mut row_used = vec![false; m];
    let mut col_used = vec![false; n];
    let mut matches = Vec::with_capacity(max_assignments);

    while matches.len() < max_assignments {
        let Some((i, j, value)) = scratch.argmin() else {
            break;
        };
        if value >= threshold {
            break;
        }
        scratch.set(i, j, threshold);
        if row_used[i] || col_used[j] || spatial.get(i, j) > config.spatial_threshold {
            continue;
        }
        row_used[i] = true;
        col_used[j] = true;
        matches.push((i, j));
    }

    AssignmentResult {
        matches,
        unmatched_registered: (0..m).filter(|&i| !row_used[i]).collect(),
        unmatched_detections: (0..n).filter(|&j| !col_used[j]).collect(),
    }
}
