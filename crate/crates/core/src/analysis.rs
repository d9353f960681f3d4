//! Coarse summaries of density grids: quadrant and hemisphere mass, wheel
//! projection and top-k ranking.
//!
//! Cells are assigned to regions by the sign of their center coordinates.
//! With an odd dimension the middle row/column sits on an axis and its mass
//! is split evenly between the two neighbouring regions.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::categorical::CategoricalState;
use crate::convert::ddes_to_ces;
use crate::emotion_set::EmotionSet;
use crate::error::{Error, Result};
use crate::grid::DensityGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Valence,
    Arousal,
}

/// Share of an index on the positive side of its axis: 1, 0 or 1/2 on the axis.
fn positive_share(index: usize, len: usize, positive_high: bool) -> f64 {
    let twice = 2 * index + 1;
    let share = match twice.cmp(&len) {
        std::cmp::Ordering::Greater => 1.0,
        std::cmp::Ordering::Less => 0.0,
        std::cmp::Ordering::Equal => 0.5,
    };
    if positive_high {
        share
    } else {
        1.0 - share
    }
}

/// Mass in Q1 (v>0, a>0), Q2 (v<0, a>0), Q3 (v<0, a<0), Q4 (v>0, a<0).
pub fn quadrant_mass(grid: &DensityGrid) -> [f64; 4] {
    let geo = grid.geometry();
    let mut q = [0.0; 4];
    for (i, row) in grid.rows().enumerate() {
        // rows run top (high arousal) to bottom
        let up = positive_share(i, geo.height(), false);
        for (j, &z) in row.iter().enumerate() {
            let right = positive_share(j, geo.width(), true);
            q[0] += z * right * up;
            q[1] += z * (1.0 - right) * up;
            q[2] += z * (1.0 - right) * (1.0 - up);
            q[3] += z * right * (1.0 - up);
        }
    }
    q
}

/// `(positive, negative)` mass along the chosen axis.
pub fn hemisphere_mass(grid: &DensityGrid, axis: Axis) -> [f64; 2] {
    let geo = grid.geometry();
    let mut pos = 0.0;
    let mut neg = 0.0;
    for (i, row) in grid.rows().enumerate() {
        for (j, &z) in row.iter().enumerate() {
            let share = match axis {
                Axis::Valence => positive_share(j, geo.width(), true),
                Axis::Arousal => positive_share(i, geo.height(), false),
            };
            pos += z * share;
            neg += z * (1.0 - share);
        }
    }
    [pos, neg]
}

/// Samples the grid at every wheel anchor.
pub fn project_to_wheel(grid: &DensityGrid, wheel: Arc<EmotionSet>) -> Result<CategoricalState> {
    ddes_to_ces(grid, wheel)
}

/// The `k` most probable emotions, descending, ties by lowest index.
pub fn top_k(state: &CategoricalState, k: usize) -> Result<Vec<(String, f64)>> {
    let n = state.len();
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, len: n });
    }
    let probs = state.probs();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        probs[b]
            .partial_cmp(&probs[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let emotions = state.set().emotions();
    Ok(order
        .into_iter()
        .take(k)
        .map(|i| (emotions[i].label.clone(), probs[i]))
        .collect())
}
