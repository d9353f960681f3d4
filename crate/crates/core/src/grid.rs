//! Discretized densities over valence-arousal space.
//!
//! Row 0 is the top of the grid (arousal near +1) and column 0 is the left
//! edge (valence near -1). Cell `(i, j)` is centered at
//! `(-1 + (2j+1)/W, 1 - (2i+1)/H)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::categorical::MASS_TOLERANCE;
use crate::error::{Error, Result};
use crate::point::VAPoint;

pub const DEFAULT_SIZE: usize = 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGeometry")]
pub struct GridGeometry {
    height: usize,
    width: usize,
}

#[derive(Deserialize)]
struct RawGeometry {
    height: usize,
    width: usize,
}

impl TryFrom<RawGeometry> for GridGeometry {
    type Error = Error;

    fn try_from(raw: RawGeometry) -> Result<Self> {
        GridGeometry::new(raw.height, raw.width)
    }
}

impl Default for GridGeometry {
    fn default() -> Self {
        Self {
            height: DEFAULT_SIZE,
            width: DEFAULT_SIZE,
        }
    }
}

impl GridGeometry {
    pub fn new(height: usize, width: usize) -> Result<Self> {
        if height < 2 || width < 2 {
            return Err(Error::InvalidGeometry { height, width });
        }
        Ok(Self { height, width })
    }

    pub fn square(size: usize) -> Result<Self> {
        Self::new(size, size)
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn cell_count(&self) -> usize {
        self.height * self.width
    }

    #[inline]
    pub fn valence_of_col(&self, j: usize) -> f64 {
        -1.0 + (2 * j + 1) as f64 / self.width as f64
    }

    #[inline]
    pub fn arousal_of_row(&self, i: usize) -> f64 {
        1.0 - (2 * i + 1) as f64 / self.height as f64
    }

    pub fn cell_center(&self, i: usize, j: usize) -> Result<VAPoint> {
        if i >= self.height || j >= self.width {
            return Err(Error::IndexOutOfRange {
                row: i,
                col: j,
                height: self.height,
                width: self.width,
            });
        }
        Ok(VAPoint::clamped(
            self.valence_of_col(j),
            self.arousal_of_row(i),
        ))
    }

    /// Continuous `(column, row)` index of a point; cell centers map to integers.
    #[inline]
    pub fn continuous_index(&self, p: &VAPoint) -> (f64, f64) {
        let x = (p.valence() + 1.0) * self.width as f64 / 2.0 - 0.5;
        let y = (1.0 - p.arousal()) * self.height as f64 / 2.0 - 0.5;
        (x, y)
    }

    /// Width of one cell along the valence axis, in VA units.
    pub fn cell_width(&self) -> f64 {
        2.0 / self.width as f64
    }
}

/// A non-negative `H x W` grid with unit total mass, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    geometry: GridGeometry,
    values: Vec<f64>,
}

impl DensityGrid {
    /// Normalizes raw non-negative cell values into a grid.
    pub fn from_raw(geometry: GridGeometry, raw: Vec<f64>) -> Result<Self> {
        check_shape(&geometry, raw.len())?;
        check_cells(&geometry, &raw)?;
        let total = mass(&raw);
        if total <= 0.0 {
            return Err(Error::ZeroTotalMass);
        }
        let values = raw.into_iter().map(|x| x / total).collect();
        Ok(Self { geometry, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        let geometry = GridGeometry::new(height, width)?;
        if let Some(bad) = rows.iter().find(|r| r.len() != width) {
            return Err(Error::ShapeMismatch {
                expected: format!("rows of {width}"),
                found: format!("row of {}", bad.len()),
            });
        }
        Self::from_raw(geometry, rows.concat())
    }

    /// Accepts values that already sum to one within tolerance, keeping them bit-for-bit.
    pub fn from_normalized(geometry: GridGeometry, values: Vec<f64>) -> Result<Self> {
        check_shape(&geometry, values.len())?;
        check_cells(&geometry, &values)?;
        let total = mass(&values);
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::Format(format!(
                "grid mass {total} is not normalized"
            )));
        }
        Ok(Self { geometry, values })
    }

    pub fn uniform(geometry: GridGeometry) -> Self {
        let n = geometry.cell_count();
        Self {
            geometry,
            values: vec![1.0 / n as f64; n],
        }
    }

    /// Evaluates a non-negative function at every cell center and normalizes.
    ///
    /// Rows are evaluated in parallel; the normalizing sum is always taken
    /// sequentially in row-major order.
    pub fn evaluate<F>(geometry: GridGeometry, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        let w = geometry.width();
        let rows: Vec<Vec<f64>> = (0..geometry.height())
            .into_par_iter()
            .map(|i| {
                let a = geometry.arousal_of_row(i);
                (0..w).map(|j| f(geometry.valence_of_col(j), a)).collect()
            })
            .collect();
        Self::from_raw(geometry, rows.concat())
    }

    #[inline]
    pub fn geometry(&self) -> GridGeometry {
        self.geometry
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.geometry.width + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.geometry.width)
    }

    pub fn mass(&self) -> f64 {
        mass(&self.values)
    }

    /// `(row, col)` of the largest cell; ties go to the first in row-major order.
    pub fn argmax(&self) -> (usize, usize) {
        let k = crate::categorical::argmax(&self.values);
        (k / self.geometry.width, k % self.geometry.width)
    }

    /// Bilinear interpolation of cell values at `p`, clamped at the borders.
    pub fn bilinear_sample(&self, p: &VAPoint) -> f64 {
        let (h, w) = (self.geometry.height, self.geometry.width);
        let (x, y) = self.geometry.continuous_index(p);
        let x = x.clamp(0.0, (w - 1) as f64);
        let y = y.clamp(0.0, (h - 1) as f64);
        let x0 = (x.floor() as usize).min(w - 2);
        let y0 = (y.floor() as usize).min(h - 2);
        let fx = x - x0 as f64;
        let fy = y - y0 as f64;
        let top = (1.0 - fx) * self.get(y0, x0) + fx * self.get(y0, x0 + 1);
        let bottom = (1.0 - fx) * self.get(y0 + 1, x0) + fx * self.get(y0 + 1, x0 + 1);
        (1.0 - fy) * top + fy * bottom
    }

    /// Mirror image across the arousal axis (valence negated).
    pub fn flip_valence(&self) -> Self {
        let w = self.geometry.width;
        let values = self
            .rows()
            .flat_map(|row| (0..w).rev().map(move |j| row[j]))
            .collect();
        Self {
            geometry: self.geometry,
            values,
        }
    }

    /// Mirror image across the valence axis (arousal negated).
    pub fn flip_arousal(&self) -> Self {
        let values = self
            .values
            .chunks(self.geometry.width)
            .rev()
            .flatten()
            .copied()
            .collect();
        Self {
            geometry: self.geometry,
            values,
        }
    }
}

/// Free-function form of [`DensityGrid::from_raw`].
pub fn make_grid(geometry: GridGeometry, raw: Vec<f64>) -> Result<DensityGrid> {
    DensityGrid::from_raw(geometry, raw)
}

pub fn cell_center(geometry: &GridGeometry, i: usize, j: usize) -> Result<VAPoint> {
    geometry.cell_center(i, j)
}

pub fn bilinear_sample(grid: &DensityGrid, p: &VAPoint) -> f64 {
    grid.bilinear_sample(p)
}

/// Row-major sequential sum.
#[inline]
pub(crate) fn mass(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |acc, x| acc + x)
}

fn check_shape(geometry: &GridGeometry, len: usize) -> Result<()> {
    if len != geometry.cell_count() {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x{}", geometry.height, geometry.width),
            found: format!("{len} values"),
        });
    }
    Ok(())
}

fn check_cells(geometry: &GridGeometry, values: &[f64]) -> Result<()> {
    for (k, &value) in values.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite(value));
        }
        if value < 0.0 {
            return Err(Error::NegativeCell {
                row: k / geometry.width,
                col: k % geometry.width,
                value,
            });
        }
    }
    Ok(())
}
