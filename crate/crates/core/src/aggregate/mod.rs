//! Ground-truth density grids from crowd annotations.
//!
//! Annotation labels (and optional precomputed sentence points) become a
//! weighted point cloud in VA space, which is smoothed with a Gaussian KDE
//! and discretized onto a grid.

mod annotations;
mod bandwidth;
mod kde;
mod rescale;

pub use annotations::{
    annotations_to_points, group_by_image, parse_annotations, AnchorChain, AnchorSource,
    AnnotationRecord,
};
pub use bandwidth::{
    scott_bandwidth, weighted_moments, Bandwidth, BandwidthConfig, BandwidthStrategy,
    FixedBandwidth, ScottRule, FALLBACK_SIGMA, NAMED_STRATEGIES,
};
pub use kde::kde_to_grid;
pub use rescale::linear_rescale;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{DensityGrid, GridGeometry};
use crate::point::VAPoint;

const WEIGHT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPointCloud {
    points: Vec<VAPoint>,
    weights: Vec<f64>,
}

impl WeightedPointCloud {
    /// Weights must be non-negative and already sum to one.
    pub fn new(points: Vec<VAPoint>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if points.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: points.len(),
                found: weights.len(),
            });
        }
        if let Some((index, &value)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
        {
            return Err(Error::NegativeWeight { index, value });
        }
        let total = weights.iter().sum::<f64>();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::Format(format!(
                "cloud weights sum to {total}, not 1"
            )));
        }
        Ok(Self { points, weights })
    }

    /// Normalizes arbitrary non-negative weights.
    pub fn from_weights(points: Vec<VAPoint>, weights: &[f64]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if points.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: points.len(),
                found: weights.len(),
            });
        }
        let weights = crate::categorical::normalize_weights(weights)?;
        Ok(Self { points, weights })
    }

    pub fn uniform(points: Vec<VAPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCloud);
        }
        let w = 1.0 / points.len() as f64;
        let weights = vec![w; points.len()];
        Ok(Self { points, weights })
    }

    pub fn points(&self) -> &[VAPoint] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Aggregation config file: `{"grid": {"height", "width"}, "bandwidth": ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct AggregationConfig {
    #[serde(default)]
    pub grid: GridGeometry,
    #[serde(default)]
    pub bandwidth: BandwidthConfig,
}

impl AggregationConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Debug, Clone)]
pub struct Aggregated {
    pub grid: DensityGrid,
    pub bandwidth: Bandwidth,
    pub points: usize,
}

/// Full pipeline for one image: records -> point cloud -> bandwidth -> grid.
pub fn aggregate_records(
    records: &[AnnotationRecord],
    anchors: &dyn AnchorSource,
    geometry: GridGeometry,
    strategy: &dyn BandwidthStrategy,
) -> Result<Aggregated> {
    let cloud = annotations_to_points(records, anchors)?;
    let bandwidth = strategy.select(&cloud)?;
    let grid = kde_to_grid(&cloud, geometry, &bandwidth)?;
    Ok(Aggregated {
        grid,
        bandwidth,
        points: cloud.len(),
    })
}
