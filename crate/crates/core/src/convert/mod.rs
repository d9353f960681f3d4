//! Conversions between categorical, dimensional and density representations,
//! all routed through valence-arousal coordinates.

mod ops;
mod params;
mod registry;

pub use ops::{
    ces_to_ces, ces_to_ddes, ces_to_des, ddes_to_ces, ddes_to_des, des_to_ces, des_to_ddes,
    sharpen_grid,
};
pub use params::{ConversionParams, Sigma};
pub use registry::{ConversionTarget, Converter, ConverterRegistry};
