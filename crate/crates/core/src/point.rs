use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A location in valence-arousal space, both axes normalized to `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint")]
pub struct VAPoint {
    valence: f64,
    arousal: f64,
}

#[derive(Deserialize)]
struct RawPoint {
    valence: f64,
    arousal: f64,
}

impl TryFrom<RawPoint> for VAPoint {
    type Error = Error;

    fn try_from(raw: RawPoint) -> Result<Self> {
        VAPoint::new(raw.valence, raw.arousal)
    }
}

impl VAPoint {
    pub const ORIGIN: VAPoint = VAPoint {
        valence: 0.0,
        arousal: 0.0,
    };

    pub fn new(valence: f64, arousal: f64) -> Result<Self> {
        for x in [valence, arousal] {
            if !x.is_finite() {
                return Err(Error::NonFinite(x));
            }
        }
        if !(-1.0..=1.0).contains(&valence) || !(-1.0..=1.0).contains(&arousal) {
            return Err(Error::PointOutOfDomain { valence, arousal });
        }
        Ok(Self { valence, arousal })
    }

    /// Builds a point from coordinates that are in-domain up to rounding,
    /// clamping each axis into `[-1, 1]`.
    pub(crate) fn clamped(valence: f64, arousal: f64) -> Self {
        debug_assert!(valence.is_finite() && arousal.is_finite());
        Self {
            valence: valence.clamp(-1.0, 1.0),
            arousal: arousal.clamp(-1.0, 1.0),
        }
    }

    #[inline]
    pub fn valence(&self) -> f64 {
        self.valence
    }

    #[inline]
    pub fn arousal(&self) -> f64 {
        self.arousal
    }

    #[inline]
    pub fn squared_distance(&self, other: &VAPoint) -> f64 {
        let dv = self.valence - other.valence;
        let da = self.arousal - other.arousal;
        dv * dv + da * da
    }

    #[inline]
    pub fn distance(&self, other: &VAPoint) -> f64 {
        self.squared_distance(other).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_domain() {
        assert!(matches!(
            VAPoint::new(1.2, 0.0),
            Err(Error::PointOutOfDomain { .. })
        ));
        assert!(matches!(
            VAPoint::new(0.0, f64::NAN),
            Err(Error::NonFinite(_))
        ));
        assert!(VAPoint::new(-1.0, 1.0).is_ok());
    }

    #[test]
    fn deserialize_validates() {
        let p: VAPoint = serde_json::from_str(r#"{"valence":0.75,"arousal":0.22}"#).unwrap();
        assert_eq!(p, VAPoint::new(0.75, 0.22).unwrap());
        assert!(serde_json::from_str::<VAPoint>(r#"{"valence":2,"arousal":0}"#).is_err());
    }
}
