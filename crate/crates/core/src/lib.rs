//! Emotion representations grounded in valence-arousal space.
//!
//! Three interchangeable forms are supported:
//!
//! * [`CategoricalState`]: a probability vector over a named [`EmotionSet`]
//!   whose members carry VA anchors,
//! * [`VAPoint`]: a single point in `[-1, 1]^2`,
//! * [`DensityGrid`]: a normalized `H x W` discretization of a density over
//!   the VA square.
//!
//! [`convert`] maps between them, [`aggregate`] builds density grids from
//! crowd annotations, [`metrics`] scores predictions and [`analysis`] reduces
//! grids to coarse summaries.

pub mod aggregate;
pub mod analysis;
pub mod categorical;
pub mod convert;
pub mod emotion_set;
pub mod error;
pub mod format;
pub mod grid;
pub mod io;
pub mod lexicon;
pub mod metrics;
pub mod point;
pub mod state;

pub use categorical::{make_categorical, CategoricalState};
pub use emotion_set::{Emotion, EmotionSet};
pub use error::{Error, Result};
pub use grid::{bilinear_sample, cell_center, make_grid, DensityGrid, GridGeometry};
pub use lexicon::Lexicon;
pub use point::VAPoint;
pub use state::{EmotionState, Kind};
