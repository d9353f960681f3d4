use std::sync::Arc;

use crate::emotion_set::EmotionSet;
use crate::error::{Error, Result};

pub(crate) const MASS_TOLERANCE: f64 = 1e-6;

/// A probability vector over an [`EmotionSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct CategoricalState {
    set: Arc<EmotionSet>,
    probs: Vec<f64>,
}

impl CategoricalState {
    /// Normalizes non-negative `weights` into a distribution over `set`.
    pub fn from_weights(set: Arc<EmotionSet>, weights: &[f64]) -> Result<Self> {
        if weights.len() != set.len() {
            return Err(Error::LengthMismatch {
                expected: set.len(),
                found: weights.len(),
            });
        }
        let probs = normalize_weights(weights)?;
        Ok(Self { set, probs })
    }

    /// One-hot distribution on emotion `index`.
    pub fn one_hot(set: Arc<EmotionSet>, index: usize) -> Result<Self> {
        let mut w = vec![0.0; set.len()];
        *w.get_mut(index).ok_or(Error::LengthMismatch {
            expected: set.len(),
            found: index + 1,
        })? = 1.0;
        Self::from_weights(set, &w)
    }

    pub fn uniform(set: Arc<EmotionSet>) -> Self {
        let n = set.len();
        Self {
            set,
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn set(&self) -> &Arc<EmotionSet> {
        &self.set
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Index of the largest probability; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        argmax(&self.probs)
    }

    pub(crate) fn ensure_same_set(&self, other: &CategoricalState) -> Result<()> {
        if Arc::ptr_eq(&self.set, &other.set) || *self.set == *other.set {
            Ok(())
        } else {
            Err(Error::SetMismatch {
                left: self.set.name().to_string(),
                right: other.set.name().to_string(),
            })
        }
    }
}

/// Free-function form of [`CategoricalState::from_weights`].
pub fn make_categorical(set: Arc<EmotionSet>, weights: &[f64]) -> Result<CategoricalState> {
    CategoricalState::from_weights(set, weights)
}

pub(crate) fn normalize_weights(weights: &[f64]) -> Result<Vec<f64>> {
    for (index, &value) in weights.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite(value));
        }
        if value < 0.0 {
            return Err(Error::NegativeWeight { index, value });
        }
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroTotalMass);
    }
    Ok(weights.iter().map(|w| w / total).collect())
}

/// First index of the maximum value.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize) -> Arc<EmotionSet> {
        let triples: Vec<(String, f64, f64)> = (0..n)
            .map(|i| (format!("e{i}"), -1.0 + 2.0 * i as f64 / n as f64, 0.0))
            .collect();
        Arc::new(EmotionSet::from_triples("t", &triples).unwrap())
    }

    #[test]
    fn normalizes_weights() {
        let c = make_categorical(set(2), &[2.0, 2.0]).unwrap();
        assert_eq!(c.probs(), &[0.5, 0.5]);
        let c = make_categorical(set(3), &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(c.probs(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(matches!(
            make_categorical(set(2), &[-1.0, 2.0]),
            Err(Error::NegativeWeight { index: 0, .. })
        ));
        assert!(matches!(
            make_categorical(set(2), &[0.0, 0.0]),
            Err(Error::ZeroTotalMass)
        ));
        assert!(matches!(
            make_categorical(set(2), &[1.0]),
            Err(Error::LengthMismatch {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn argmax_ties_lowest_index() {
        assert_eq!(argmax(&[0.3, 0.4, 0.4]), 1);
        assert_eq!(argmax(&[0.5, 0.5]), 0);
    }
}
