use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::VAPoint;

#[derive(Debug, Clone, PartialEq)]
pub struct Emotion {
    pub label: String,
    pub anchor: VAPoint,
}

/// A named, ordered list of emotion labels, each anchored in valence-arousal space.
#[derive(Debug, Clone)]
pub struct EmotionSet {
    name: String,
    emotions: Vec<Emotion>,
    index: HashMap<String, usize>,
}

impl PartialEq for EmotionSet {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.emotions == other.emotions
    }
}

impl EmotionSet {
    pub fn new(name: impl Into<String>, emotions: Vec<Emotion>) -> Result<Self> {
        if emotions.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut index = HashMap::with_capacity(emotions.len());
        for (i, e) in emotions.iter().enumerate() {
            if index.insert(e.label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(e.label.clone()));
            }
        }
        Ok(Self {
            name: name.into(),
            emotions,
            index,
        })
    }

    /// Convenience constructor from `(label, valence, arousal)` triples.
    pub fn from_triples<S: AsRef<str>>(name: &str, triples: &[(S, f64, f64)]) -> Result<Self> {
        let emotions = triples
            .iter()
            .map(|(label, v, a)| {
                Ok(Emotion {
                    label: label.as_ref().to_string(),
                    anchor: VAPoint::new(*v, *a)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(name, emotions)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.emotions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.emotions.is_empty()
    }

    pub fn emotions(&self) -> &[Emotion] {
        &self.emotions
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.emotions.iter().map(|e| e.label.as_str())
    }

    pub fn anchors(&self) -> impl Iterator<Item = VAPoint> + '_ {
        self.emotions.iter().map(|e| e.anchor)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn anchor_of(&self, label: &str) -> Option<VAPoint> {
        self.index_of(label).map(|i| self.emotions[i].anchor)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: SetFile = serde_json::from_str(s)?;
        file.try_into()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = crate::io::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string(&SetFile::from(self))?)
    }
}

#[derive(Serialize, Deserialize)]
struct SetFile {
    name: String,
    emotions: Vec<SetEntry>,
}

#[derive(Serialize, Deserialize)]
struct SetEntry {
    label: String,
    #[serde(serialize_with = "crate::format::sig9")]
    valence: f64,
    #[serde(serialize_with = "crate::format::sig9")]
    arousal: f64,
}

impl TryFrom<SetFile> for EmotionSet {
    type Error = Error;

    fn try_from(file: SetFile) -> Result<Self> {
        let emotions = file
            .emotions
            .into_iter()
            .map(|e| {
                Ok(Emotion {
                    label: e.label,
                    anchor: VAPoint::new(e.valence, e.arousal)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        EmotionSet::new(file.name, emotions)
    }
}

impl From<&EmotionSet> for SetFile {
    fn from(set: &EmotionSet) -> Self {
        SetFile {
            name: set.name.clone(),
            emotions: set
                .emotions
                .iter()
                .map(|e| SetEntry {
                    label: e.label.clone(),
                    valence: e.anchor.valence(),
                    arousal: e.anchor.arousal(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        let dup = EmotionSet::from_triples("x", &[("a", 0.0, 0.0), ("a", 0.5, 0.5)]);
        assert!(matches!(dup, Err(Error::DuplicateLabel(l)) if l == "a"));
        let empty: &[(&str, f64, f64)] = &[];
        assert!(matches!(
            EmotionSet::from_triples("x", empty),
            Err(Error::EmptySet)
        ));
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"name":"pair","emotions":[{"label":"contentment","valence":0.75,"arousal":0.22},{"label":"sadness","valence":-0.896,"arousal":-0.424}]}"#;
        let set = EmotionSet::from_json_str(text).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set.index_of("sadness"), Some(1));
        assert_eq!(set.to_json_string().unwrap(), text);
    }

    #[test]
    fn json_rejects_out_of_domain_anchor() {
        let text = r#"{"name":"bad","emotions":[{"label":"x","valence":1.5,"arousal":0}]}"#;
        assert!(EmotionSet::from_json_str(text).is_err());
    }
}
