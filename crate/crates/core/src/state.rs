use std::fmt;
use std::str::FromStr;

use crate::categorical::CategoricalState;
use crate::error::{Error, Result};
use crate::grid::DensityGrid;
use crate::point::VAPoint;

/// The three representation families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    /// Categorical: distribution over a named emotion set.
    Ces,
    /// Dimensional: one valence-arousal point.
    Des,
    /// Dimensional distribution: density grid over VA space.
    Ddes,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::Ces, Kind::Des, Kind::Ddes];

    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Ces => "ces",
            Kind::Des => "des",
            Kind::Ddes => "ddes",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ces" => Ok(Kind::Ces),
            "des" => Ok(Kind::Des),
            "ddes" => Ok(Kind::Ddes),
            other => Err(Error::Format(format!(
                "unknown representation {other:?} (expected ces, des or ddes)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EmotionState {
    Categorical(CategoricalState),
    Dimensional(VAPoint),
    Density(DensityGrid),
}

impl EmotionState {
    pub fn kind(&self) -> Kind {
        match self {
            EmotionState::Categorical(_) => Kind::Ces,
            EmotionState::Dimensional(_) => Kind::Des,
            EmotionState::Density(_) => Kind::Ddes,
        }
    }

    pub fn as_categorical(&self) -> Option<&CategoricalState> {
        match self {
            EmotionState::Categorical(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_point(&self) -> Option<&VAPoint> {
        match self {
            EmotionState::Dimensional(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_grid(&self) -> Option<&DensityGrid> {
        match self {
            EmotionState::Density(g) => Some(g),
            _ => None,
        }
    }
}

impl From<CategoricalState> for EmotionState {
    fn from(c: CategoricalState) -> Self {
        EmotionState::Categorical(c)
    }
}

impl From<VAPoint> for EmotionState {
    fn from(p: VAPoint) -> Self {
        EmotionState::Dimensional(p)
    }
}

impl From<DensityGrid> for EmotionState {
    fn from(g: DensityGrid) -> Self {
        EmotionState::Density(g)
    }
}
