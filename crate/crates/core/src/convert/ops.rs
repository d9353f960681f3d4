use std::sync::Arc;

use super::{ConversionParams, Sigma};
use crate::aggregate::{kde_to_grid, scott_bandwidth, WeightedPointCloud};
use crate::categorical::{CategoricalState, MASS_TOLERANCE};
use crate::emotion_set::EmotionSet;
use crate::error::Result;
use crate::grid::{DensityGrid, GridGeometry};
use crate::point::VAPoint;

/// Probability-weighted mean of the set's anchors.
pub fn ces_to_des(state: &CategoricalState) -> VAPoint {
    let (mut v, mut a) = (0.0, 0.0);
    for (p, c) in state.probs().iter().zip(state.set().anchors()) {
        v += p * c.valence();
        a += p * c.arousal();
    }
    VAPoint::clamped(v, a)
}

/// Resamples a categorical state onto another emotion set by inverse
/// (first-power) anchor distance: `q_i ∝ Σ_j p_j / (|d_i - c_j| + ε)`.
pub fn ces_to_ces(
    state: &CategoricalState,
    target: Arc<EmotionSet>,
    params: &ConversionParams,
) -> Result<CategoricalState> {
    params.validate()?;
    let eps = params.epsilon_dist;
    let source: Vec<VAPoint> = state.set().anchors().collect();
    let raw: Vec<f64> = target
        .anchors()
        .map(|d| {
            source
                .iter()
                .zip(state.probs())
                .map(|(c, p)| p / (d.distance(c) + eps))
                .sum()
        })
        .collect();
    CategoricalState::from_weights(target, &raw)
}

/// Gaussian mixture over the set's anchors, weighted by probability and
/// evaluated at cell centers.
pub fn ces_to_ddes(
    state: &CategoricalState,
    geometry: GridGeometry,
    params: &ConversionParams,
) -> Result<DensityGrid> {
    params.validate()?;
    let anchors: Vec<VAPoint> = state.set().anchors().collect();
    match params.sigma {
        Sigma::Fixed(sigma) => {
            let inv = 1.0 / (2.0 * sigma * sigma);
            let probs = state.probs();
            DensityGrid::evaluate(geometry, |v, a| {
                anchors
                    .iter()
                    .zip(probs)
                    .map(|(c, p)| {
                        let dv = v - c.valence();
                        let da = a - c.arousal();
                        p * (-(dv * dv + da * da) * inv).exp()
                    })
                    .sum()
            })
        }
        Sigma::Auto => {
            let cloud = WeightedPointCloud::from_weights(anchors, state.probs())?;
            let bw = scott_bandwidth(&cloud)?;
            kde_to_grid(&cloud, geometry, &bw)
        }
    }
}

/// Gaussian softmax over negative squared anchor distances, sharpness `k`.
pub fn des_to_ces(
    point: &VAPoint,
    target: Arc<EmotionSet>,
    params: &ConversionParams,
) -> Result<CategoricalState> {
    params.validate()?;
    let k = params.sharpness_k;
    let logits: Vec<f64> = target
        .anchors()
        .map(|c| -k * point.squared_distance(&c))
        .collect();
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    CategoricalState::from_weights(target, &weights)
}

/// Single isotropic Gaussian kernel centered on the point.
pub fn des_to_ddes(
    point: &VAPoint,
    geometry: GridGeometry,
    params: &ConversionParams,
) -> Result<DensityGrid> {
    params.validate()?;
    let sigma = match params.sigma {
        Sigma::Fixed(s) => s,
        Sigma::Auto => crate::aggregate::FALLBACK_SIGMA,
    };
    let inv = 1.0 / (2.0 * sigma * sigma);
    let (pv, pa) = (point.valence(), point.arousal());
    DensityGrid::evaluate(geometry, |v, a| {
        let dv = v - pv;
        let da = a - pa;
        (-(dv * dv + da * da) * inv).exp()
    })
}

/// Bilinear samples of the grid at each anchor, renormalized.
pub fn ddes_to_ces(grid: &DensityGrid, target: Arc<EmotionSet>) -> Result<CategoricalState> {
    let samples: Vec<f64> = target.anchors().map(|c| grid.bilinear_sample(&c)).collect();
    CategoricalState::from_weights(target, &samples)
}

/// Temperature sharpening `(z + ε)^(1/τ)`, renormalized, computed in log space.
pub fn sharpen_grid(grid: &DensityGrid, params: &ConversionParams) -> Result<DensityGrid> {
    params.validate()?;
    let values = sharpen_values(grid.values(), params.temperature_tau, params.epsilon_temp);
    DensityGrid::from_raw(grid.geometry(), values)
}

pub(crate) fn sharpen_values(values: &[f64], tau: f64, eps: f64) -> Vec<f64> {
    let logs: Vec<f64> = values.iter().map(|z| (z + eps).ln() / tau).collect();
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    let total = crate::grid::mass(&exps);
    exps.into_iter().map(|e| e / total).collect()
}

/// Center of mass of the sharpened grid.
pub fn ddes_to_des(grid: &DensityGrid, params: &ConversionParams) -> Result<VAPoint> {
    let sharp = sharpen_grid(grid, params)?;
    Ok(center_of_mass(&sharp))
}

pub(crate) fn center_of_mass(grid: &DensityGrid) -> VAPoint {
    let geo = grid.geometry();
    let (mut v, mut a) = (0.0, 0.0);
    for (i, row) in grid.rows().enumerate() {
        let ai = geo.arousal_of_row(i);
        for (j, z) in row.iter().enumerate() {
            v += z * geo.valence_of_col(j);
            a += z * ai;
        }
    }
    debug_assert!((grid.mass() - 1.0).abs() <= MASS_TOLERANCE);
    VAPoint::clamped(v, a)
}
