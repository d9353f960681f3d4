use super::{Bandwidth, WeightedPointCloud};
use crate::error::Result;
use crate::grid::{DensityGrid, GridGeometry};

/// Weighted Gaussian KDE evaluated at every cell center, normalized to unit mass.
///
/// Kernel normalization constants are dropped since the grid is renormalized.
pub fn kde_to_grid(
    cloud: &WeightedPointCloud,
    geometry: GridGeometry,
    bandwidth: &Bandwidth,
) -> Result<DensityGrid> {
    let [[p, q], [_, r]] = bandwidth.inverse()?;
    let points = cloud.points();
    let weights = cloud.weights();
    DensityGrid::evaluate(geometry, |v, a| {
        let mut acc = 0.0;
        for (x, &w) in points.iter().zip(weights) {
            let dv = v - x.valence();
            let da = a - x.arousal();
            let m = p * dv * dv + 2.0 * q * dv * da + r * da * da;
            acc += w * (-0.5 * m).exp();
        }
        acc
    })
}
